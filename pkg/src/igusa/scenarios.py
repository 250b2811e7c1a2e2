"""Built-in scenario families and the JSON scenario loader.

A scenario bundles a semi-invariant polynomial f, the acting group with its
coordinate-scaling action, the measure |f|^c dx, a character chi, the orbits
contained in the zero set V(f) and their stratification.
"""

import json
from dataclasses import dataclass, field

from igusa.errors import BadCharacterString, ScenarioError, UnsupportedFamily
from igusa.lattice_orbits import (
    GroupElement,
    GroupSpec,
    OrbitDescriptor,
    PsiElement,
    SmoothCharacter,
    Stratification,
    Stratum,
)
from igusa.padic_counting import DEFAULT_BUDGET, IntPolynomial, LocalFieldParams
from igusa.zeta_engine import (
    DEFAULT_DEPTH,
    CoordinateAction,
    MeasureSpec,
    SchwartzFunction,
    zeta_schwartz,
)

FAMILIES = ("tate", "monomial", "matrix_det", "pairing_space", "custom")
DEFAULT_TWIST = {"tate": -1, "monomial": -1, "matrix_det": 0, "pairing_space": -1, "custom": 0}


@dataclass
class Scenario:
    family: str
    n: int
    params: LocalFieldParams
    f: IntPolynomial
    nu: PsiElement
    group: GroupSpec
    action: CoordinateAction
    measure: MeasureSpec
    chi: SmoothCharacter
    orbits: tuple
    stratification: Stratification
    declared_uniform_pole_bound: int
    pinned_ansatz: tuple = None
    open_orbits: tuple = ()
    depth: int = DEFAULT_DEPTH
    chi_spec: str = "auto"
    phi: SchwartzFunction = None
    extra: dict = field(default_factory=dict)

    def __post_init__(self):
        names = sorted(self.stratification.orbit_names())
        if names != sorted(o.name for o in self.orbits) or len(set(names)) != len(names):
            raise ScenarioError("stratification must cover each orbit of V(f) exactly once")
        if self.phi is None:
            self.phi = self.unit_function()

    # derived data ---------------------------------------------------------
    @property
    def p(self):
        return self.params.p

    def measure_character(self):
        """chi_Haar * nu^c: the character of |f|^c dx."""
        haar = self.action.haar_character()
        c = self.measure.twist
        return SmoothCharacter(tuple(h + c * v for h, v in zip(haar.exponents, self.nu.exponents)))

    def unit_function(self):
        return SchwartzFunction.indicator(self.f.nvars, self.p)

    def basis(self, M=1, N=1):
        return SchwartzFunction.basis(self.f.nvars, self.p, M, N)

    def element(self, spec):
        """A permitted group element from a Lambda vector, a string or an element."""
        if isinstance(spec, GroupElement):
            return spec
        if isinstance(spec, str):
            return GroupElement.parse(self.group, spec)
        return GroupElement.from_lambda(self.group, spec)

    def zeta(self, phi=None):
        phi = self.phi if phi is None else phi
        ansatz = "auto" if self.pinned_ansatz is None else self.pinned_ansatz
        return zeta_schwartz(self.f, phi, self.measure, self.params, ansatz, self.depth)

    def orbit(self, name):
        for o in tuple(self.orbits) + tuple(self.open_orbits):
            if o.name == name:
                return o
        raise KeyError(name)

    # serialization --------------------------------------------------------
    def to_json(self):
        data = {
            "family": self.family,
            "n": self.n,
            "p": self.p,
            "budget": self.params.enumeration_budget,
            "measure_twist": self.measure.twist,
            "chi": self.chi_spec,
            "phi": self.phi.to_json(),
            "ansatz": "auto" if self.pinned_ansatz is None else [list(a) for a in self.pinned_ansatz],
            "depth": self.depth,
        }
        if self.family == "monomial":
            data["a"] = self.extra["a"]
        if self.family == "custom":
            data.update(
                {
                    "f": self.f.to_json(),
                    "group": str(self.group),
                    "weights": self.action.to_json(),
                    "nu": list(self.nu.exponents),
                    "orbits": [o.to_json() for o in self.orbits],
                    "open_orbits": [o.to_json() for o in self.open_orbits],
                    "stratification": self.stratification.to_json(),
                    "uniform_pole_bound": self.declared_uniform_pole_bound,
                }
            )
        return data

    def __eq__(self, other):
        if not isinstance(other, Scenario):
            return NotImplemented
        return json.dumps(self.to_json(), sort_keys=True) == json.dumps(other.to_json(), sort_keys=True)


# ---------------------------------------------------------------------------
# orbit tables


def _cond(*pairs):
    return tuple((tuple(c), r) for c, r in pairs)


def _tate_orbits():
    zero = OrbitDescriptor("{0}", _cond(((1,), 0)), (), (), doc="origin; stabilizer is all of F^x")
    units = OrbitDescriptor("F^x", (), ((1,),), (0,), doc="open orbit; trivial stabilizer")
    return (zero,), (units,)


def _det_orbits(n):
    orbits = []
    for r in range(n):
        orbits.append(
            OrbitDescriptor(
                f"O_{r}",
                _cond(((1, 0), r), ((0, 1), -r)),
                (),
                () if r == 0 else None,
                doc=f"rank {r} matrices; admissible only for (|.|^{r}, |.|^-{r})",
            )
        )
    top = OrbitDescriptor(
        f"O_{n}", _cond(((1, 1), 0)), ((1, -1),), None, doc="invertible matrices; chi_1 chi_2 = 1"
    )
    return tuple(orbits), (top,)


def _pairing_orbits(n):
    xs, ys = tuple(range(n)), tuple(range(n, 2 * n))
    if n == 1:
        vf = OrbitDescriptor("V_f", _cond(((1, 1, 1), 0)), ((1, -1, 0), (0, 1, -1)), None,
                             doc="f != 0; chi_1 chi_2 chi_3 = 1")
        o10 = OrbitDescriptor("O_10", _cond(((1, 1, 0), 0), ((0, 0, 1), 0)), (), xs, -1,
                              doc="x != 0, y = 0; chi_1 chi_2 = 1, chi_3 = 1")
        o01 = OrbitDescriptor("O_01", _cond(((1, 0, 0), 0), ((0, 1, 1), 0)), (), ys, -1,
                              doc="x = 0, y != 0; chi_1 = 1, chi_2 chi_3 = 1")
        inner = ()
    else:
        vf = OrbitDescriptor("V_f", _cond(((1, 0, 1), 0), ((0, 1, 0), 0)), ((1, 0, -1),), None,
                             doc="f != 0; chi_1 chi_3 = 1, chi_2 = 1")
        o10 = OrbitDescriptor("O_10", _cond(((1, 0, 0), n), ((0, 1, 0), -1), ((0, 0, 1), 0)), (),
                              xs, 0, doc=f"x != 0, y = 0; chi = (|.|^{n}, |.|^-1, 1)")
        o01 = OrbitDescriptor("O_01", _cond(((1, 0, 0), 0), ((0, 1, 0), 1), ((0, 0, 1), -n)), (),
                              ys, 0, doc=f"x = 0, y != 0; chi = (1, |.|, |.|^-{n})")
        if n == 2:
            qx = OrbitDescriptor("Q^x", _cond(((1, 1, 0), 1), ((0, 1, 1), -1)), ((1, -1, 1),), None,
                                 doc="f = 0, x != 0, y != 0; chi_1 chi_2 = |.|, chi_2 chi_3 = |.|^-1")
        else:
            qx = OrbitDescriptor(
                "Q^x", _cond(((1, 0, 0), n - 1), ((0, 1, 0), 0), ((0, 0, 1), -(n - 1))), (), None,
                doc=f"f = 0, x != 0, y != 0; chi = (|.|^{n - 1}, 1, |.|^-{n - 1})",
            )
        inner = (qx,)
    zero = OrbitDescriptor("{0}", _cond(((1, 0, 0), 0), ((0, 1, 0), 0), ((0, 0, 1), 0)), (), (),
                           doc="origin; only the trivial character")
    return (zero, o10, o01) + inner, (vf,)


# ---------------------------------------------------------------------------
# constructors


def _resolve_chi(chi, measure_chi, rank):
    if chi is None or (isinstance(chi, str) and chi.strip().lower() == "auto"):
        return measure_chi, "auto"
    if isinstance(chi, SmoothCharacter):
        return chi, str(chi)
    parsed = SmoothCharacter.parse(chi, rank)
    return parsed, chi.strip()


def _finish(family, n, params, f, group, weights, orbits, open_orbits, strat, bound, ansatz,
            twist, chi, depth, phi, extra=None, nu=None):
    action = CoordinateAction(group, weights)
    derived = action.semi_invariance_character(f)
    if derived is None:
        raise ScenarioError("f is not semi-invariant under the declared action")
    if nu is not None and tuple(nu) != derived:
        raise ScenarioError(f"declared nu {tuple(nu)} differs from the action's {derived}")
    nu = PsiElement(derived)
    measure = MeasureSpec(twist)
    haar = action.haar_character()
    measure_chi = SmoothCharacter(tuple(h + twist * v for h, v in zip(haar.exponents, nu.exponents)))
    chi_obj, chi_spec = _resolve_chi(chi, measure_chi, group.rank)
    return Scenario(
        family=family, n=n, params=params, f=f, nu=nu, group=group, action=action,
        measure=measure, chi=chi_obj, orbits=tuple(orbits), stratification=strat,
        declared_uniform_pole_bound=bound,
        pinned_ansatz=None if ansatz is None else tuple(tuple(a) for a in ansatz),
        open_orbits=tuple(open_orbits), depth=depth, chi_spec=chi_spec, phi=phi,
        extra=dict(extra or {}),
    )


def build_scenario(family, n=1, p=2, twist=None, chi=None, depth=DEFAULT_DEPTH,
                   budget=DEFAULT_BUDGET, a=None, phi=None, ansatz=None):
    """Construct a built-in scenario.

    ``chi`` is a character string, a SmoothCharacter, or None/"auto" for the
    character of the measure itself.
    """
    if family not in FAMILIES or family == "custom":
        raise UnsupportedFamily(f"unknown built-in family {family!r}")
    if isinstance(chi, str) and "*r:" in chi:
        raise BadCharacterString(
            "ramified characters cannot be evaluated exactly; only unramified twists are supported"
        )
    if n < 1:
        raise ScenarioError("n must be at least 1")
    twist = DEFAULT_TWIST[family] if twist is None else twist
    params = LocalFieldParams(p, budget)
    pin = None if ansatz in (None, "auto") else ansatz

    if family in ("tate", "monomial"):
        a = 1 if family == "tate" else (2 if a is None else int(a))
        if a < 1:
            raise ScenarioError("monomial exponent must be positive")
        f = IntPolynomial(1, ((1, (a,)),))
        orbits, open_orbits = _tate_orbits()
        strat = Stratification((Stratum(orbits, True),))
        return _finish(family, 1, params, f, GroupSpec.parse("Gm"),
                       ((1,),), orbits, open_orbits, strat, 1, pin, twist, chi, depth, phi,
                       {"a": a} if family == "monomial" else None)

    if family == "matrix_det":
        f = determinant(n)
        group = GroupSpec.parse(f"GL{n},GL{n}")
        weights = []
        for i in range(n):
            for j in range(n):
                weights.append(tuple(int(k == i) for k in range(n)) + tuple(-int(k == j) for k in range(n)))
        orbits, open_orbits = _det_orbits(n)
        strat = Stratification(tuple(Stratum((o,), True) for o in orbits))
        pin = pin if pin is not None else tuple((i, 1) for i in range(1, n + 1))
        return _finish(family, n, params, f, group, tuple(weights), orbits, open_orbits, strat, 1,
                       pin, twist, chi, depth, phi)

    # pairing_space
    terms = tuple((1, tuple(int(k in (i, n + i)) for k in range(2 * n))) for i in range(n))
    f = IntPolynomial(2 * n, terms, 2)
    group = GroupSpec.parse(f"Gm,GL{n},Gm")
    weights = []
    for j in range(n):
        weights.append((1,) + tuple(-int(k == j) for k in range(n)) + (0,))
    for j in range(n):
        weights.append((0,) + tuple(int(k == j) for k in range(n)) + (-1,))
    orbits, open_orbits = _pairing_orbits(n)
    by_name = {o.name: o for o in orbits}
    strata = [Stratum((by_name["{0}"],), True), Stratum((by_name["O_10"], by_name["O_01"]), True)]
    if n >= 2:
        strata.append(Stratum((by_name["Q^x"],), True))
    pin = pin if pin is not None else ((1, 1), (n, 1))
    bound = 2 if n == 1 else 1
    return _finish(family, n, params, f, group, tuple(weights), orbits, open_orbits,
                   Stratification(tuple(strata)), bound, pin, twist, chi, depth, phi)


def determinant(n):
    """det of the n x n matrix with row-major coordinates x_(i,j)."""
    from itertools import permutations

    terms = []
    for perm in permutations(range(n)):
        sign = 1
        for i in range(n):
            for j in range(i + 1, n):
                if perm[i] > perm[j]:
                    sign = -sign
        exps = [0] * (n * n)
        for i, j in enumerate(perm):
            exps[i * n + j] = 1
        terms.append((sign, tuple(exps)))
    return IntPolynomial(n * n, tuple(terms), n)


def custom_scenario(data):
    """Scenario from a JSON object carrying f, group, weights, orbits and strata."""
    try:
        p = int(data["p"])
        params = LocalFieldParams(p, int(data.get("budget", DEFAULT_BUDGET)))
        f = IntPolynomial.from_json(data["f"])
        group = GroupSpec.parse(data["group"])
        orbits = tuple(OrbitDescriptor.from_json(o) for o in data.get("orbits", []))
        open_orbits = tuple(OrbitDescriptor.from_json(o) for o in data.get("open_orbits", []))
        strat = Stratification.from_json(data.get("stratification", []), orbits)
        weights = tuple(tuple(r) for r in data["weights"])
    except (KeyError, TypeError, ValueError) as exc:
        raise ScenarioError(f"malformed custom scenario: {exc}") from exc
    ansatz = data.get("ansatz", "auto")
    pin = None if ansatz == "auto" else tuple(tuple(a) for a in ansatz)
    phi = _phi_from(data, f.nvars, p)
    return _finish("custom", int(data.get("n", 1)), params, f, group, weights, orbits,
                   open_orbits, strat, int(data.get("uniform_pole_bound", 1)), pin,
                   int(data.get("measure_twist", 0)), data.get("chi", "auto"),
                   int(data.get("depth", DEFAULT_DEPTH)), phi, nu=data.get("nu"))


def _phi_from(data, nvars, p):
    if data.get("phi") is None:
        return None
    return SchwartzFunction.from_json(data["phi"], nvars, p)


def scenario_from_json(data):
    """Rebuild a scenario from its JSON echo or a hand-written scenario file."""
    family = data.get("family")
    if family == "custom":
        return custom_scenario(data)
    if family not in FAMILIES:
        raise UnsupportedFamily(f"unknown family {family!r}")
    n = 1 if family in ("tate", "monomial") else int(data.get("n", 1))
    p = int(data.get("p", 2))
    nvars = {"tate": 1, "monomial": 1, "matrix_det": n * n, "pairing_space": 2 * n}[family]
    ansatz = data.get("ansatz", "auto")
    return build_scenario(
        family, n=n, p=p, twist=data.get("measure_twist"), chi=data.get("chi", "auto"),
        depth=int(data.get("depth", DEFAULT_DEPTH)), budget=int(data.get("budget", DEFAULT_BUDGET)),
        a=data.get("a"), phi=_phi_from(data, nvars, p),
        ansatz=None if ansatz == "auto" else [tuple(x) for x in ansatz],
    )


def load_scenario(path):
    with open(path) as fh:
        return scenario_from_json(json.load(fh))


__all__ = [
    "FAMILIES",
    "Scenario",
    "build_scenario",
    "custom_scenario",
    "determinant",
    "load_scenario",
    "scenario_from_json",
]
