"""The residue 1-cocycle of the zeta family at s = 0.

The normalized action pi(g) phi = chi(g)^(-1) (g . phi) makes the zeta family
equivariant for the holomorphic character varpi(g, s) = |nu(g)|^s
= exp(-<g,nu> L s):  Z(pi(g) phi) = varpi(g, s) Z(phi).  The residue cocycle is

    psi(g, phi) = Res_{s=0} (varpi(g, s) - 1) / s * Z(phi)(s),

and its coboundaries are g -> xi(pi(g) .) - xi for functionals xi supported on V(f).
"""

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import permutations
from math import factorial

from igusa.errors import UnsupportedElement, WrongArity
from igusa.lattice_orbits import (
    GeneralizedDistribution,
    admissible,
    admissible_orbits,
    pairing,
    scalar_action_check,
)
from igusa.laurent_identities import CoefficientTable
from igusa.padic_counting import IntPolynomial
from igusa.symbolic import LPolynomial, field_solve, laurent_at, log_abs_power, pole_order_at
from igusa.zeta_engine import MeasureSpec, act, zeta_schwartz

DELTA_NONZERO = "delta_nonzero"
INCONCLUSIVE = "inconclusive"


@dataclass
class CocycleReport:
    criterion: str
    result: object
    audit: list = field(default_factory=list)

    def to_json(self):
        return {"criterion": self.criterion, "result": self.result, "audit": self.audit}


def normalized_action(scenario, g, phi):
    """pi(g) phi = chi(g)^(-1) (g . phi)."""
    g = scenario.element(g)
    return act(g, phi, scenario.action) * (1 / scenario.chi.value(g, scenario.p))


# ---------------------------------------------------------------------------
# cocycle values


def residue_cocycle_value(scenario, g, phi, route="sum", table=None):
    """psi(g, phi) in Q[L].

    ``route`` selects the computation: "sum" uses sum_i varpi_i(g, 0) Z_{-i}(phi);
    "series" multiplies the Laurent series by the expansion of (varpi - 1)/s;
    "action" takes the u^0 coefficient of Z(pi(g) phi) - Z(phi).
    """
    table = table or CoefficientTable(scenario)
    g = scenario.element(g)
    pg = pairing(g.lam(), scenario.nu)
    if route == "sum":
        k0 = table.pole_order(phi)
        total = LPolynomial()
        for i in range(1, k0 + 1):
            total = total + log_abs_power(pg, i) * table.coefficient(-i, phi)
        return total
    if route == "series":
        Z = scenario.zeta(phi).Z
        if Z.is_zero():
            return LPolynomial()
        k0 = pole_order_at(Z, 0)
        series = laurent_at(Z, 0, k0 + 1)
        # (exp(c u) - 1)/u = sum_j c^(j+1) u^j / (j+1)!,  c = -<g,nu> L
        c = LPolynomial({1: -pg})
        total = LPolynomial()
        for j in range(0, k0 + 1):
            weight = c ** (j + 1) * Fraction(1, factorial(j + 1))
            total = total + weight * series.coefficient(-1 - j)
        return total
    if route == "action":
        moved = normalized_action(scenario, g, phi)
        return table.coefficient(0, moved) - table.coefficient(0, phi)
    raise ValueError(f"unknown route {route!r}")


def cocycle_identity_check(scenario, g1, g2, basis, corrupt=False, table=None):
    """psi(g1 g2, u) = psi(g2, pi(g1) u) + psi(g1, u) on every basis function.

    The scalar codomain carries the trivial action once chi is normalized
    away, so the g1-translate of psi(g2, .) is psi(g2, pi(g1) .).  ``corrupt``
    drops the psi(g1, u) term (falsification control).
    """
    table = table or CoefficientTable(scenario)
    g1, g2 = scenario.element(g1), scenario.element(g2)
    g12 = g1 * g2
    for phi in basis:
        lhs = residue_cocycle_value(scenario, g12, phi, table=table)
        rhs = residue_cocycle_value(scenario, g2, normalized_action(scenario, g1, phi), table=table)
        if not corrupt:
            rhs = rhs + residue_cocycle_value(scenario, g1, phi, table=table)
        if lhs != rhs:
            return CocycleReport("cocycle", False, [
                {"g1": str(g1), "g2": str(g2), "phi": phi.to_json(),
                 "lhs": lhs.to_json(), "rhs": rhs.to_json()}])
    return CocycleReport("cocycle", True, [{"g1": str(g1), "g2": str(g2), "basis_size": len(basis)}])


# ---------------------------------------------------------------------------
# candidate functionals on V(f)


def evaluate_distribution(dist, phi, params):
    """Evaluate a generalized distribution on a coordinate-subspace orbit.

    The origin gives c * phi(0).  A punctured coordinate subspace with
    coordinates y and measure |prod y|^a dy gives the finite part at s = 0 of
    the integral of phi(y) |prod y|^(s + a) dy.
    """
    orbit = dist.orbit
    if orbit.support is None:
        raise UnsupportedElement(f"orbit {orbit.name} is not a coordinate subspace")
    if dist.degree() > 0:
        raise UnsupportedElement("only invariant (degree 0) distributions are evaluable")
    c = dist.constant()
    if not orbit.support:
        return LPolynomial({0: c * phi((0,) * phi.nvars)})
    restricted = phi.restrict(orbit.support)
    k = len(orbit.support)
    mono = IntPolynomial(k, ((1, (1,) * k),))
    Z = zeta_schwartz(mono, restricted, MeasureSpec(orbit.support_twist), params).Z
    if Z.is_zero():
        return LPolynomial()
    return laurent_at(Z, 0, pole_order_at(Z, 0) + 1).coefficient(0) * c


def default_candidate_space(scenario):
    """Invariant functionals on the chi-admissible coordinate orbits inside V(f)."""
    out = []
    for stratum in scenario.stratification.strata:
        for orbit in admissible_orbits(stratum, scenario.chi):
            if orbit.support is not None:
                out.append(GeneralizedDistribution.invariant(orbit))
    return out


@dataclass
class CoboundaryWitness:
    candidates: list
    coefficients: list

    def is_zero(self):
        return all(c.is_zero() for c in self.coefficients)

    def to_json(self):
        return {
            "candidates": [d.orbit.name for d in self.candidates],
            "coefficients": [c.to_json() for c in self.coefficients],
        }


def coboundary_witness_search(scenario, candidates, g_samples, basis, table=None):
    """Solve sum_j c_j (xi_j(pi(g) phi) - xi_j(phi)) = psi(g, phi) over Q(L).

    Returns a witness, or None when no combination of the candidates works.
    None means only that the declared space holds no witness.
    """
    from igusa.symbolic import RationalFunction

    table = table or CoefficientTable(scenario)
    rows, rhs = [], []
    for g in g_samples:
        g = scenario.element(g)
        for phi in basis:
            target = residue_cocycle_value(scenario, g, phi, table=table)
            moved = normalized_action(scenario, g, phi)
            row = [
                (evaluate_distribution(d, moved, scenario.params)
                 - evaluate_distribution(d, phi, scenario.params)).to_ratfunc()
                for d in candidates
            ]
            rows.append(row)
            rhs.append(target.to_ratfunc())
    zero = RationalFunction(0)
    if all(r.is_zero() for r in rhs):
        return CoboundaryWitness(list(candidates), [zero] * len(candidates))
    if not candidates:
        return None
    solution = field_solve(rows, rhs)
    if solution is None:
        return None
    return CoboundaryWitness(list(candidates), solution)


# ---------------------------------------------------------------------------
# non-vanishing criterion


def nonvanishing_criterion(scenario, chi, g_list, k0=None):
    """delta_nonzero when k0 elements with <g,nu> != 0 can be matched to the
    admissible strata so that each acts by a scalar on every admissible orbit
    of its stratum; otherwise inconclusive."""
    if k0 is None:
        k0 = pole_order_at(scenario.zeta().Z, 0)
    gs = [scenario.element(g) for g in g_list]
    if len(gs) != k0:
        raise WrongArity(f"{len(gs)} elements given for a pole of order {k0}")
    audit = []
    ok = k0 >= 1
    for g in gs:
        pg = pairing(g.lam(), scenario.nu)
        audit.append({"check": "derivative_nonzero", "g": str(g), "pairing": pg, "holds": pg != 0})
        ok = ok and pg != 0
    strata = [s for s in scenario.stratification.strata if admissible_orbits(s, chi)]
    assignment = None
    if len(strata) <= len(gs):
        for perm in permutations(range(len(gs)), len(strata)):
            if all(
                scalar_action_check(o, chi, gs[j].lam())
                for s, j in zip(strata, perm)
                for o in s.orbits
                if admissible(o, chi)
            ):
                assignment = perm
                break
    audit.append({
        "check": "scalar_action",
        "strata": [[o.name for o in admissible_orbits(s, chi)] for s in strata],
        "assignment": None if assignment is None else [str(gs[j]) for j in assignment],
        "holds": assignment is not None,
    })
    ok = ok and assignment is not None
    return CocycleReport("nonvanishing", DELTA_NONZERO if ok else INCONCLUSIVE, audit)
