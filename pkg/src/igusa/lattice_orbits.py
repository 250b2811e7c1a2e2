"""Character lattices, orbit admissibility data, the pole bound and separating elements.

Groups are finite products of G_m and GL_n.  Both the character lattice Psi_G
and the quotient Lambda_G are identified with Z^(#factors): a character is
``prod factor_i^{e_i}`` (det on GL_n factors) and the class of g records
``val`` of each factor (``val det`` on GL_n factors), so the pairing matrix is
the identity.
"""

import re
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations, product

from igusa.errors import (
    BadCharacterString,
    DimensionMismatch,
    NoSeparator,
    RamifiedCharacter,
    ShapeMismatch,
    UnsupportedElement,
)
from igusa.symbolic import field_rank

# ---------------------------------------------------------------------------
# groups and lattice elements


@dataclass(frozen=True)
class GroupSpec:
    """Ordered factors, each ``("Gm", 1)`` or ``("GL", n)``."""

    factors: tuple

    @classmethod
    def parse(cls, text):
        factors = []
        for token in text.replace(" ", "").split(","):
            if token in ("Gm", "GL1"):
                factors.append(("Gm", 1))
                continue
            m = re.fullmatch(r"GL(\d+)", token)
            if not m or int(m.group(1)) < 1:
                raise ValueError(f"unsupported group factor {token!r}")
            factors.append(("GL", int(m.group(1))))
        if not factors:
            raise ValueError("empty group spec")
        return cls(tuple(factors))

    @property
    def rank(self):
        return len(self.factors)

    lambda_rank = psi_rank = rank

    @property
    def torus_rank(self):
        """Number of diagonal p-power exponents describing a permitted element."""
        return sum(n for _, n in self.factors)

    def __str__(self):
        return ",".join("Gm" if kind == "Gm" else f"GL{n}" for kind, n in self.factors)

    def pairing_matrix(self):
        return [[1 if i == j else 0 for j in range(self.rank)] for i in range(self.rank)]


@dataclass(frozen=True)
class PsiElement:
    exponents: tuple

    def __post_init__(self):
        object.__setattr__(self, "exponents", tuple(int(e) for e in self.exponents))

    def __len__(self):
        return len(self.exponents)


@dataclass(frozen=True)
class LambdaElement:
    valuations: tuple

    def __post_init__(self):
        object.__setattr__(self, "valuations", tuple(int(v) for v in self.valuations))

    def __len__(self):
        return len(self.valuations)

    def __add__(self, other):
        if len(self) != len(other):
            raise DimensionMismatch("Lambda elements of different rank")
        return LambdaElement(tuple(a + b for a, b in zip(self.valuations, other.valuations)))


def _vec(x):
    if isinstance(x, PsiElement):
        return x.exponents
    if isinstance(x, LambdaElement):
        return x.valuations
    return tuple(int(v) for v in x)


def pairing(g, nu):
    """<g, nu> = val(nu(g)) = sum g_i nu_i."""
    a, b = _vec(g), _vec(nu)
    if len(a) != len(b):
        raise DimensionMismatch(f"rank {len(a)} element paired with rank {len(b)} character")
    return sum(x * y for x, y in zip(a, b))


def pairing_rank_check(group, matrix=None):
    """The pairing matrix between the standard bases has full rank."""
    mat = group.pairing_matrix() if matrix is None else matrix
    rows = [[Fraction(x) for x in row] for row in mat]
    return field_rank(rows) == group.psi_rank


@dataclass(frozen=True)
class GroupElement:
    """A permitted element: p-power scalars on G_m factors, p-power diagonals on GL_n.

    ``parts[i]`` is an int for a G_m factor and a tuple of n ints for GL_n.
    """

    group: GroupSpec
    parts: tuple

    def __post_init__(self):
        if len(self.parts) != self.group.rank:
            raise UnsupportedElement("element does not match the group's factors")
        fixed = []
        for (kind, n), part in zip(self.group.factors, self.parts):
            if kind == "Gm":
                if isinstance(part, (tuple, list)):
                    if len(part) != 1:
                        raise UnsupportedElement("G_m component must be a single exponent")
                    part = part[0]
                fixed.append(int(part))
            else:
                if not isinstance(part, (tuple, list)) or len(part) != n:
                    raise UnsupportedElement(f"GL{n} component must be {n} diagonal exponents")
                fixed.append(tuple(int(e) for e in part))
        object.__setattr__(self, "parts", tuple(fixed))

    @classmethod
    def identity(cls, group):
        return cls.from_lambda(group, [0] * group.rank)

    @classmethod
    def from_lambda(cls, group, lam):
        """Canonical lift: p^k on G_m, diag(p^k, 1, ..., 1) on GL_n."""
        lam = _vec(lam)
        if len(lam) != group.rank:
            raise DimensionMismatch("Lambda vector does not match the group")
        parts = []
        for (kind, n), k in zip(group.factors, lam):
            parts.append(k if kind == "Gm" else (k,) + (0,) * (n - 1))
        return cls(group, tuple(parts))

    @classmethod
    def parse(cls, group, text):
        """Parse an element.

        Plain integers such as ``"1,0,-1"`` are a Lambda vector and are lifted
        canonically.  Otherwise components are powers of p: ``"(p,1,p^-1)"``,
        ``"(pI,I)"`` or ``"(p,diag(p;1),1)"``.
        """
        body = text.strip()
        if body.startswith("(") and body.endswith(")"):
            body = body[1:-1]
        tokens = [t.strip().replace(" ", "") for t in _split_top(body)]
        if len(tokens) != group.rank:
            raise UnsupportedElement(f"expected {group.rank} components in {text!r}")
        if all(re.fullmatch(r"-?\d+", t) for t in tokens):
            return cls.from_lambda(group, [int(t) for t in tokens])
        parts = []
        for (kind, n), tok in zip(group.factors, tokens):
            parts.append(_parse_component(tok, kind, n))
        return cls(group, tuple(parts))

    def flat(self):
        """Diagonal exponents, factor by factor."""
        out = []
        for part in self.parts:
            out.extend(part if isinstance(part, tuple) else (part,))
        return tuple(out)

    def lam(self):
        return LambdaElement(tuple(p if isinstance(p, int) else sum(p) for p in self.parts))

    def __mul__(self, other):
        parts = []
        for a, b in zip(self.parts, other.parts):
            parts.append(a + b if isinstance(a, int) else tuple(x + y for x, y in zip(a, b)))
        return GroupElement(self.group, tuple(parts))

    def inverse(self):
        parts = [(-a if isinstance(a, int) else tuple(-x for x in a)) for a in self.parts]
        return GroupElement(self.group, tuple(parts))

    def is_identity(self):
        return all(e == 0 for e in self.flat())

    def __str__(self):
        def fmt(e):
            return "1" if e == 0 else "p" if e == 1 else f"p^{e}"

        comps = []
        for part in self.parts:
            if isinstance(part, int):
                comps.append(fmt(part))
            else:
                comps.append("diag(" + ";".join(fmt(e) for e in part) + ")")
        return "(" + ",".join(comps) + ")"

    def to_json(self):
        return [list(p) if isinstance(p, tuple) else p for p in self.parts]


def _split_top(text):
    out, depth, cur = [], 0, []
    for ch in text:
        if ch in "([":
            depth += 1
        elif ch in ")]":
            depth -= 1
        if ch == "," and depth == 0:
            out.append("".join(cur))
            cur = []
        else:
            cur.append(ch)
    out.append("".join(cur))
    return out


def _parse_power(tok):
    if tok in ("1", "I"):
        return 0
    if tok == "p":
        return 1
    m = re.fullmatch(r"p\^\(?(-?\d+)\)?", tok)
    if m:
        return int(m.group(1))
    raise UnsupportedElement(f"cannot read {tok!r} as a power of p")


def _parse_component(tok, kind, n):
    if kind == "Gm":
        return _parse_power(tok)
    m = re.fullmatch(r"diag\((.*)\)", tok)
    if m:
        exps = tuple(_parse_power(t) for t in m.group(1).split(";"))
        if len(exps) != n:
            raise UnsupportedElement(f"GL{n} diagonal needs {n} entries")
        return exps
    m = re.fullmatch(r"(.*)I", tok)
    if m and m.group(1):
        return (_parse_power(m.group(1)),) * n
    # a scalar power of p on a GL_n factor is read as its determinant class
    return (_parse_power(tok),) + (0,) * (n - 1)


# ---------------------------------------------------------------------------
# smooth characters


def _freeze_tags(counter):
    return tuple(sorted((k, v) for k, v in counter.items() if v != 0))


@dataclass(frozen=True)
class SmoothCharacter:
    """Per factor ``|.|^c`` times an optional ramified part.

    Ramified parts are elements of the free abelian group on opaque labels,
    stored as sorted ``(label, multiplicity)`` pairs.
    """

    exponents: tuple
    tags: tuple = None

    def __post_init__(self):
        exps = tuple(Fraction(c) for c in self.exponents)
        tags = self.tags if self.tags is not None else tuple(() for _ in exps)
        if len(tags) != len(exps):
            raise ShapeMismatch("tag list does not match the factor count")
        tags = tuple(_freeze_tags(Counter(dict(t))) for t in tags)
        object.__setattr__(self, "exponents", exps)
        object.__setattr__(self, "tags", tags)

    @classmethod
    def trivial(cls, rank):
        return cls((0,) * rank)

    @classmethod
    def unramified(cls, exponents):
        return cls(tuple(exponents))

    @classmethod
    def parse(cls, text, rank=None):
        body = text.strip()
        if body.lower() in ("trivial", "1"):
            if rank is None:
                raise BadCharacterString("'trivial' needs the group rank")
            return cls.trivial(rank)
        if body.startswith("(") and body.endswith(")"):
            body = body[1:-1]
        exps, tags = [], []
        for factor in _split_top(body):
            c, t = _parse_char_factor(factor.strip())
            exps.append(c)
            tags.append(t)
        if rank is not None and len(exps) != rank:
            raise BadCharacterString(f"{text!r} has {len(exps)} factors, group has {rank}")
        return cls(tuple(exps), tuple(tags))

    @property
    def rank(self):
        return len(self.exponents)

    def is_unramified(self):
        return all(not t for t in self.tags)

    def is_trivial(self):
        return self.is_unramified() and all(c == 0 for c in self.exponents)

    def __mul__(self, other):
        if self.rank != other.rank:
            raise ShapeMismatch("characters of different rank")
        tags = []
        for a, b in zip(self.tags, other.tags):
            tags.append(_freeze_tags(_add_tags(a, b)))
        return SmoothCharacter(
            tuple(x + y for x, y in zip(self.exponents, other.exponents)), tuple(tags)
        )

    def __pow__(self, k):
        return SmoothCharacter(
            tuple(c * k for c in self.exponents),
            tuple(tuple((lab, m * k) for lab, m in t) for t in self.tags),
        )

    def inverse(self):
        return self ** -1

    def monomial(self, coeffs):
        """prod chi_i^{a_i} as (|.|-exponent, ramified tags)."""
        if len(coeffs) != self.rank:
            raise ShapeMismatch("monomial does not match the factor count")
        exponent = sum((a * c for a, c in zip(coeffs, self.exponents)), Fraction(0))
        tags = Counter()
        for a, t in zip(coeffs, self.tags):
            for lab, m in t:
                tags[lab] += a * m
        return exponent, _freeze_tags(tags)

    def q_exponent(self, g):
        """chi(g) = q^e for a permitted g; returns the exact rational e."""
        if not self.is_unramified():
            raise RamifiedCharacter("ramified characters have no exact value on p-powers")
        lam = _vec(g.lam() if isinstance(g, GroupElement) else g)
        if len(lam) != self.rank:
            raise ShapeMismatch("element and character ranks differ")
        return -sum((c * k for c, k in zip(self.exponents, lam)), Fraction(0))

    def value(self, g, p):
        """chi(g) as an exact rational; requires an integral q-exponent."""
        e = self.q_exponent(g)
        if e.denominator != 1:
            raise ValueError(f"chi(g) = q^{e} is not rational")
        return Fraction(p) ** int(e)

    def __str__(self):
        parts = []
        for c, t in zip(self.exponents, self.tags):
            s = f"u:{c.numerator}" if c.denominator == 1 else f"u:{c.numerator}/{c.denominator}"
            for lab, m in t:
                s += f"*r:{lab}" + ("" if m == 1 else f"^{m}")
            parts.append(s)
        return "(" + ",".join(parts) + ")"


def _add_tags(a, b):
    c = Counter(dict(a))
    for lab, m in b:
        c[lab] += m
    return c


_FACTOR_RE = re.compile(r"u:(-?\d+)(?:/(\d+))?((?:\*r:[A-Za-z0-9_]+(?:\^-?\d+)?)*)")


def _parse_char_factor(text):
    text = text.replace(" ", "")
    if text == "1":
        return Fraction(0), ()
    m = _FACTOR_RE.fullmatch(text)
    if not m:
        raise BadCharacterString(f"cannot parse character factor {text!r}")
    num, den = int(m.group(1)), int(m.group(2) or 1)
    if den == 0:
        raise BadCharacterString("zero denominator in character exponent")
    tags = Counter()
    for lab, mult in re.findall(r"\*r:([A-Za-z0-9_]+)(?:\^(-?\d+))?", m.group(3)):
        tags[lab] += int(mult) if mult else 1
    return Fraction(num, den), _freeze_tags(tags)


# ---------------------------------------------------------------------------
# orbits, strata, distributions


@dataclass(frozen=True)
class OrbitDescriptor:
    """An orbit with its admissibility equations and admissible-character lattice.

    ``conditions`` is a tuple of ``(coeffs, rhs)`` meaning
    ``prod chi_i^{coeffs_i} = |.|^rhs``; the empty tuple means "always".
    ``support`` lists the coordinates that are nonzero on the orbit when the
    orbit is a punctured coordinate subspace (``()`` is the origin), and is
    ``None`` otherwise.  Such an orbit carries the measure
    ``|prod y_i|^support_twist dy`` in its coordinates y.
    """

    name: str
    conditions: tuple
    psi_generators: tuple = ()
    support: tuple = None
    support_twist: int = -1
    doc: str = ""

    def __post_init__(self):
        conds = tuple((tuple(int(a) for a in coeffs), Fraction(rhs)) for coeffs, rhs in self.conditions)
        gens = tuple(tuple(int(x) for x in g) for g in self.psi_generators)
        object.__setattr__(self, "conditions", conds)
        object.__setattr__(self, "psi_generators", gens)
        if self.support is not None:
            object.__setattr__(self, "support", tuple(int(i) for i in self.support))

    def to_json(self):
        return {
            "name": self.name,
            "conditions": [[list(c), str(r)] for c, r in self.conditions] or "always",
            "psi_generators": [list(g) for g in self.psi_generators],
            "support": None if self.support is None else list(self.support),
            "support_twist": self.support_twist,
            "doc": self.doc,
        }

    @classmethod
    def from_json(cls, data):
        conds = data.get("conditions", "always")
        conds = () if conds == "always" else tuple((tuple(c), Fraction(r)) for c, r in conds)
        return cls(
            data["name"],
            conds,
            tuple(tuple(g) for g in data.get("psi_generators", [])),
            None if data.get("support") is None else tuple(data["support"]),
            int(data.get("support_twist", -1)),
            data.get("doc", ""),
        )


@dataclass(frozen=True)
class Stratum:
    orbits: tuple
    fiberizable: bool = True


@dataclass(frozen=True)
class Stratification:
    """Strata V_i minus V_(i-1) in closure order, each a set of orbits."""

    strata: tuple

    def orbit_names(self):
        return [o.name for s in self.strata for o in s.orbits]

    def to_json(self):
        return [
            {"orbits": [o.name for o in s.orbits], "fiberizable": s.fiberizable}
            for s in self.strata
        ]

    @classmethod
    def from_json(cls, data, orbits):
        by_name = {o.name: o for o in orbits}
        strata = []
        for entry in data:
            try:
                members = tuple(by_name[n] for n in entry["orbits"])
            except KeyError as exc:
                raise ValueError(f"stratum names unknown orbit {exc}") from None
            strata.append(Stratum(members, bool(entry.get("fiberizable", True))))
        return cls(tuple(strata))


@dataclass(frozen=True)
class GeneralizedDistribution:
    """P(val o alpha_1, ..., val o alpha_r) times the orbit's invariant measure.

    ``polynomial`` maps exponent tuples (length r) to rationals.
    """

    orbit: OrbitDescriptor
    polynomial: tuple
    alphas: tuple = ()

    def __post_init__(self):
        poly = tuple(sorted((tuple(e), Fraction(c)) for e, c in dict(self.polynomial).items() if c))
        object.__setattr__(self, "polynomial", poly)
        object.__setattr__(self, "alphas", tuple(PsiElement(_vec(a)) for a in self.alphas))
        for e, _ in poly:
            if len(e) != len(self.alphas):
                raise ShapeMismatch("polynomial arity differs from the character list")
        gens = self.orbit.psi_generators
        for a in self.alphas:
            if any(a.exponents) and not rational_span_member(a, gens):
                raise ValueError(f"{a.exponents} is not admissible on {self.orbit.name}")

    @classmethod
    def invariant(cls, orbit, scale=1):
        return cls(orbit, {(): Fraction(scale)}, ())

    def degree(self):
        return max((sum(e) for e, _ in self.polynomial), default=0)

    def constant(self):
        return dict(self.polynomial).get(tuple(0 for _ in self.alphas), Fraction(0))


@dataclass
class Verdict:
    ell_chi: int
    observed_pole_order: int
    conclusion: str
    reason: str = ""
    audit: list = field(default_factory=list)

    def to_json(self):
        return {
            "ell_chi": self.ell_chi,
            "observed_pole_order": self.observed_pole_order,
            "conclusion": self.conclusion,
            "reason": self.reason,
            "audit": self.audit,
        }


WITHIN_BOUND = "WithinBound"
UNEXTENDABLE = "Unextendable"
ANALYTIC = "NoAdmissibleOrbit_Analytic"
CONDITIONS_NOT_MET = "ConditionsNotMet"


# ---------------------------------------------------------------------------
# lattice operations


def rational_span_member(nu, generators):
    """nu lies in the Q-span of the generator rows (exact rank test)."""
    v = [Fraction(x) for x in _vec(nu)]
    gens = [[Fraction(x) for x in _vec(g)] for g in generators]
    if not any(v):
        return True
    if not gens:
        return False
    for g in gens:
        if len(g) != len(v):
            raise DimensionMismatch("generator and nu have different ranks")
    return field_rank(gens) == field_rank(gens + [v])


def integer_kernel(rows, ncols):
    """Z-basis of {g in Z^ncols : row . g = 0 for every row}, by unimodular column reduction."""
    a = [list(map(int, r)) for r in rows]
    basis = [[1 if i == j else 0 for j in range(ncols)] for i in range(ncols)]  # columns of U
    pivot_col = 0
    for r in range(len(a)):
        if pivot_col >= ncols:
            break
        # gcd-reduce row r over the columns pivot_col.. with column operations
        while True:
            nz = [c for c in range(pivot_col, ncols) if a[r][c] != 0]
            if len(nz) <= 1:
                break
            c0 = min(nz, key=lambda c: abs(a[r][c]))
            for c in nz:
                if c != c0:
                    k = a[r][c] // a[r][c0]
                    for row in a:
                        row[c] -= k * row[c0]
                    basis[c] = [x - k * y for x, y in zip(basis[c], basis[c0])]
        nz = [c for c in range(pivot_col, ncols) if a[r][c] != 0]
        if not nz:
            continue
        c0 = nz[0]
        for row in a:
            row[pivot_col], row[c0] = row[c0], row[pivot_col]
        basis[pivot_col], basis[c0] = basis[c0], basis[pivot_col]
        pivot_col += 1
    return [basis[c] for c in range(pivot_col, ncols)]


def _kernel_vectors(kernel, rank, radius):
    """Every kernel vector of max-norm <= radius.

    A set of coordinates on which the kernel basis is invertible determines the
    vector, so only those coordinates are enumerated; the rest are solved for.
    """
    d = len(kernel)
    for cols in combinations(range(rank), d):
        sub = [[Fraction(kernel[i][c]) for i in range(d)] for c in cols]
        inv = _invert(sub)
        if inv is not None:
            break
    for free in product(range(-radius, radius + 1), repeat=d):
        coeffs = [sum(inv[i][j] * free[j] for j in range(d)) for i in range(d)]
        if any(c.denominator != 1 for c in coeffs):
            continue
        v = tuple(int(sum(coeffs[i] * kernel[i][k] for i in range(d))) for k in range(rank))
        if max((abs(x) for x in v), default=0) <= radius:
            yield v


def _invert(m):
    """Inverse of a square Fraction matrix, or None when singular."""
    n = len(m)
    a = [row[:] + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(m)]
    for c in range(n):
        piv = next((r for r in range(c, n) if a[r][c] != 0), None)
        if piv is None:
            return None
        a[c], a[piv] = a[piv], a[c]
        pv = a[c][c]
        a[c] = [x / pv for x in a[c]]
        for r in range(n):
            if r != c and a[r][c] != 0:
                f = a[r][c]
                a[r] = [x - f * y for x, y in zip(a[r], a[c])]
    return [row[n:] for row in a]


def find_separating_element(nu, generators, rank=None):
    """g orthogonal to every generator with <g, nu> != 0.

    Among all such g the one of smallest max-norm is returned, ties broken
    by the lexicographically greatest vector.
    """
    v = _vec(nu)
    rank = len(v) if rank is None else rank
    gens = [_vec(g) for g in generators]
    if rational_span_member(v, gens):
        raise NoSeparator(f"{v} lies in the rational span of the sublattice")
    kernel = integer_kernel(gens, rank) if gens else [
        [1 if i == j else 0 for j in range(rank)] for i in range(rank)
    ]
    radius = 1
    while True:
        hits = [g for g in _kernel_vectors(kernel, rank, radius) if pairing(g, v) != 0]
        if hits:
            norm = min(max(abs(x) for x in g) for g in hits)
            best = LambdaElement(max(g for g in hits if max(abs(x) for x in g) == norm))
            break
        radius *= 2
    assert pairing(best, v) != 0 and all(pairing(best, h) == 0 for h in gens)
    return best


def admissible(orbit, chi):
    """Evaluate the orbit's character equations exactly on chi."""
    for coeffs, rhs in orbit.conditions:
        if len(coeffs) != chi.rank:
            raise ShapeMismatch(f"orbit {orbit.name} expects {len(coeffs)} factors, chi has {chi.rank}")
        exponent, tags = chi.monomial(coeffs)
        if exponent != rhs or tags:
            return False
    return True


def admissible_orbits(stratum, chi):
    return [o for o in stratum.orbits if admissible(o, chi)]


def ell_chi(strat, chi):
    """Number of strata containing at least one chi-admissible orbit."""
    return sum(1 for s in strat.strata if admissible_orbits(s, chi))


def scalar_action_check(orbit, chi, g):
    """g pairs to zero with every generator of the orbit's admissible lattice."""
    return all(pairing(g, psi) == 0 for psi in orbit.psi_generators)


def stratum_lattice(stratum, chi):
    """Generators of the span of Psi_O over the chi-admissible orbits of a stratum."""
    gens = []
    for o in admissible_orbits(stratum, chi):
        gens.extend(o.psi_generators)
    return gens


def pole_bound_verdict(strat, chi, nu, observed_pole_order, measure_character=None):
    """Check the hypotheses of the pole bound and classify the observed pole order."""
    audit = []
    ell = ell_chi(strat, chi)
    failures = []
    if measure_character is not None:
        ok = measure_character == chi
        audit.append({"check": "measure_invariance", "measure_character": str(measure_character),
                      "chi": str(chi), "holds": ok})
        if not ok:
            failures.append(f"measure is {measure_character}-invariant, not {chi}-invariant")
    for i, stratum in enumerate(strat.strata):
        adm = admissible_orbits(stratum, chi)
        if not adm:
            audit.append({"check": "stratum", "index": i, "admissible_orbits": []})
            continue
        gens = stratum_lattice(stratum, chi)
        outside = not rational_span_member(nu, gens)
        entry = {
            "check": "stratum",
            "index": i,
            "admissible_orbits": [o.name for o in adm],
            "fiberizable": stratum.fiberizable,
            "psi_generators": [list(g) for g in gens],
            "nu_outside_span": outside,
        }
        if outside:
            entry["separating_element"] = list(find_separating_element(nu, gens, len(_vec(nu))).valuations)
        audit.append(entry)
        if not stratum.fiberizable:
            failures.append(f"stratum {i} is not declared fiberizable")
        if not outside:
            failures.append(f"nu lies in the admissible lattice span of stratum {i}")
    if failures:
        return Verdict(ell, observed_pole_order, CONDITIONS_NOT_MET, "; ".join(failures), audit)
    if ell == 0:
        if observed_pole_order > 0:
            return Verdict(ell, observed_pole_order, CONDITIONS_NOT_MET,
                           "pole observed although no stratum carries an admissible orbit", audit)
        return Verdict(ell, observed_pole_order, ANALYTIC, "", audit)
    if observed_pole_order == ell:
        return Verdict(ell, observed_pole_order, UNEXTENDABLE, "", audit)
    if observed_pole_order < ell:
        return Verdict(ell, observed_pole_order, WITHIN_BOUND, "", audit)
    return Verdict(ell, observed_pole_order, CONDITIONS_NOT_MET,
                   f"observed pole order {observed_pole_order} exceeds the bound {ell}", audit)
