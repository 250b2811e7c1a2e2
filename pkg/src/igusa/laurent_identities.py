"""Laurent coefficients of zeta integrals at s = 0 as functionals, and the
identities forced on them by equivariance.

With u = s and log|nu(g)| = -<g, nu> L, equivariance of Z gives

    Z_i(g . phi) - chi(g) Z_i(phi) = chi(g) sum_{k >= 1} (-<g,nu> L)^k / k! Z_{i-k}(phi),

so Z_i is annihilated by any product of i + i0 + 1 operators (g - chi(g)).
"""

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations

from igusa.lattice_orbits import (
    admissible_orbits,
    ell_chi,
    find_separating_element,
    pairing,
    stratum_lattice,
)
from igusa.symbolic import LPolynomial, field_rank, laurent_at, log_abs_power, pole_order_at
from igusa.zeta_engine import act


@dataclass
class CheckReport:
    identity: str
    holds: bool
    details: dict = field(default_factory=dict)
    witness: dict = None

    def __bool__(self):
        return self.holds

    def to_json(self, scenario=None):
        out = {"identity": self.identity, "holds": self.holds, "params": self.details}
        if scenario is not None:
            out["scenario"] = scenario.to_json()
        out["witness"] = self.witness
        return out


def _lp_json(x):
    return x.to_json()


class CoefficientTable:
    """Memoized Laurent coefficients Z_i(phi) at s = 0 for one scenario."""

    def __init__(self, scenario):
        self.scenario = scenario
        self._cache = {}

    def pole_order(self, phi):
        return self._series(phi, 0)[0]

    def _series(self, phi, top):
        key = (phi.M, phi.N, phi.values)
        hit = self._cache.get(key)
        if hit is not None and hit[1].top >= top:
            return hit[0], hit[1]
        Z = self.scenario.zeta(phi).Z
        k = pole_order_at(Z, 0)
        lead = -k + (0 if Z.is_zero() else Z.num.root_multiplicity(Fraction(1)))
        T = max(top - lead, 0) + 1
        series = laurent_at(Z, 0, T)
        self._cache[key] = (k, series)
        return k, series

    def coefficient(self, i, phi):
        _, series = self._series(phi, i)
        return series.coefficient(i)


def coefficient_functional(scenario, i, phi, table=None):
    """Z_{f,mu,i}(phi): the u^i coefficient of the Laurent expansion at s = 0."""
    table = table or CoefficientTable(scenario)
    return table.coefficient(i, phi)


def _chi_value(scenario, g, chi=None):
    chi = scenario.chi if chi is None else chi
    return chi.value(g, scenario.p)


def laurent_recursion_check(scenario, g, i, basis, chi_scale=1, table=None):
    """Check the coefficient recursion for one g and index i on every basis function.

    ``chi_scale`` multiplies chi(g); any value other than 1 is a falsification
    control.
    """
    table = table or CoefficientTable(scenario)
    g = scenario.element(g)
    chi_g = _chi_value(scenario, g) * Fraction(chi_scale)
    pg = pairing(g.lam(), scenario.nu)
    for phi in basis:
        moved = act(g, phi, scenario.action)
        lhs = table.coefficient(i, moved) - table.coefficient(i, phi) * chi_g
        k0 = table.pole_order(phi)
        rhs = LPolynomial()
        for k in range(1, i + k0 + 1):
            rhs = rhs + log_abs_power(pg, k) * table.coefficient(i - k, phi)
        rhs = rhs * chi_g
        if lhs != rhs:
            return CheckReport(
                "laurent_recursion", False,
                {"g": str(g), "i": i, "chi_scale": str(chi_scale)},
                {"phi": phi.to_json(), "lhs": _lp_json(lhs), "rhs": _lp_json(rhs)},
            )
    return CheckReport("laurent_recursion", True,
                       {"g": str(g), "i": i, "chi_scale": str(chi_scale), "basis_size": len(basis)})


def apply_operator_product(scenario, gs, functional, phi):
    """((g_1 - chi(g_1)) ... (g_k - chi(g_k)) Lambda)(phi), where (g Lambda)(phi) = Lambda(g . phi)."""
    gs = [scenario.element(g) for g in gs]
    chis = [_chi_value(scenario, g) for g in gs]
    total = LPolynomial()
    idx = range(len(gs))
    for r in range(len(gs) + 1):
        for subset in combinations(idx, r):
            coef = Fraction(1)
            for j in idx:
                if j not in subset:
                    coef *= -chis[j]
            moved = phi
            for j in subset:
                moved = act(gs[j], moved, scenario.action)
            total = total + functional(moved) * coef
    return total


def generalized_order_check(scenario, i, g_samples, basis, table=None):
    """Each sampled tuple of g's, as an operator product, annihilates Z_i on the basis."""
    table = table or CoefficientTable(scenario)
    for gs in g_samples:
        for phi in basis:
            value = apply_operator_product(scenario, gs, lambda f: table.coefficient(i, f), phi)
            if value:
                return CheckReport(
                    "generalized_order", False,
                    {"i": i, "factors": len(gs)},
                    {"g": [str(scenario.element(g)) for g in gs], "phi": phi.to_json(),
                     "value": _lp_json(value)},
                )
    return CheckReport("generalized_order", True,
                       {"i": i, "samples": len(g_samples), "basis_size": len(basis)})


def linear_independence_witness(scenario, basis, i0=None, table=None):
    """Coefficients Z_{-i0}, ..., Z_0 evaluated on the basis have full row rank over Q(L).

    A full-rank matrix certifies independence; a rank deficit proves nothing.
    """
    table = table or CoefficientTable(scenario)
    if i0 is None:
        i0 = max(table.pole_order(phi) for phi in basis)
    rows = [[table.coefficient(i, phi).to_ratfunc() for phi in basis] for i in range(-i0, 1)]
    rank = field_rank(rows)
    return CheckReport("linear_independence", rank == i0 + 1,
                       {"i0": i0, "rank": rank, "basis_size": len(basis)})


def bound_replay(scenario, basis, table=None):
    """Replay the pole bound: separating elements kill Z_{-1}, and Z_{-(ell+1)} vanishes."""
    table = table or CoefficientTable(scenario)
    chi, nu = scenario.chi, scenario.nu
    ell = ell_chi(scenario.stratification, chi)
    seps = []
    for stratum in scenario.stratification.strata:
        if admissible_orbits(stratum, chi):
            seps.append(find_separating_element(nu, stratum_lattice(stratum, chi), len(nu)))
    gs = [scenario.element(g) for g in seps]
    for phi in basis:
        if table.coefficient(-(ell + 1), phi):
            return CheckReport("bound_replay", False, {"ell_chi": ell},
                               {"phi": phi.to_json(), "nonzero_index": -(ell + 1)})
        if gs:
            value = apply_operator_product(scenario, gs, lambda f: table.coefficient(-1, f), phi)
            if value:
                return CheckReport("bound_replay", False, {"ell_chi": ell},
                                   {"phi": phi.to_json(), "operator_value": _lp_json(value)})
    return CheckReport("bound_replay", True,
                       {"ell_chi": ell, "separating_elements": [list(g.valuations) for g in seps]})

