"""Exact zeta integrals Z_{f,mu}(phi)(s) as rational functions in t = q^(-s).

A Schwartz function at level (M, N) is a finite table of values on the cosets
``a + p^N Z_p^n`` inside ``p^(-M) Z_p^n``.  Each coset contributes a cell
integral; monomial cells are integrated in closed form, all others are reduced
to a unit-cube integral of an integral polynomial and fitted from point counts.
"""

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import product

from igusa.errors import Inconsistent, InvalidCoset, NonIntegerTwist, ShapeMismatch
from igusa.padic_counting import (
    IntPolynomial,
    cell_polynomial,
    point_count_series,
    val,
)
from igusa.symbolic import (
    Poly,
    RationalFunction,
    default_candidates,
    fit_auto,
    fit_rational,
    igusa_relation_check,
)
from igusa.lattice_orbits import GroupElement, SmoothCharacter, pairing

DEFAULT_DEPTH = 4

# ---------------------------------------------------------------------------
# Schwartz functions


def _canonical(x, p, M, N):
    """Representative of x + p^N Z_p with denominator dividing p^M."""
    k = Fraction(x) * p**M
    if k.denominator != 1:
        raise InvalidCoset(f"{x} is not in p^-{M} Z_p")
    modulus = p ** (M + N)
    return Fraction(int(k) % modulus, p**M)


@dataclass(frozen=True)
class SchwartzFunction:
    """Finite-level locally constant function supported in p^(-M) Z_p^n."""

    nvars: int
    p: int
    M: int
    N: int
    values: tuple = ()

    def __post_init__(self):
        if self.M < 0 or self.N < -self.M:
            raise ValueError(f"invalid levels (M, N) = ({self.M}, {self.N})")
        table = {}
        for rep, v in dict(self.values).items():
            rep = tuple(rep)
            if len(rep) != self.nvars:
                raise ShapeMismatch("coset representative has the wrong dimension")
            key = tuple(_canonical(x, self.p, self.M, self.N) for x in rep)
            table[key] = table.get(key, Fraction(0)) + Fraction(v)
        object.__setattr__(self, "values", tuple(sorted((k, v) for k, v in table.items() if v)))

    # constructors ---------------------------------------------------------
    @classmethod
    def zero(cls, nvars, p, M=0, N=0):
        return cls(nvars, p, M, N, ())

    @classmethod
    def indicator(cls, nvars, p, base=None, level=0, M=None):
        """1 on ``base + p^level Z_p^n``."""
        base = tuple(Fraction(b) for b in (base or (0,) * nvars))
        need = max([0, -level] + [_den_exp(b, p) for b in base])
        M = need if M is None else M
        if M < need:
            raise InvalidCoset(f"outer level {M} is too small for the coset")
        return cls(nvars, p, M, level, ((base, Fraction(1)),))

    @classmethod
    def basis(cls, nvars, p, M, N):
        """Indicators of all p^((M+N) n) cosets at level (M, N), in sorted order."""
        size = p ** (M + N)
        reps = [Fraction(k, p**M) for k in range(size)]
        return [cls(nvars, p, M, N, ((rep, 1),)) for rep in product(reps, repeat=nvars)]

    # structure ------------------------------------------------------------
    def table(self):
        return dict(self.values)

    def is_zero(self):
        return not self.values

    def refine(self, M2, N2):
        if M2 < self.M or N2 < self.N:
            raise ValueError("refinement must not lower the levels")
        offsets = [Fraction(self.p) ** self.N * j for j in range(self.p ** (N2 - self.N))]
        out = {}
        for rep, v in self.values:
            for shift in product(offsets, repeat=self.nvars):
                out[tuple(a + s for a, s in zip(rep, shift))] = v
        return SchwartzFunction(self.nvars, self.p, M2, N2, tuple(out.items()))

    def _common(self, other):
        if self.nvars != other.nvars or self.p != other.p:
            raise ShapeMismatch("Schwartz functions on different spaces")
        M, N = max(self.M, other.M), max(self.N, other.N)
        return self.refine(M, N), other.refine(M, N)

    def __add__(self, other):
        a, b = self._common(other)
        table = a.table()
        for k, v in b.values:
            table[k] = table.get(k, Fraction(0)) + v
        return SchwartzFunction(a.nvars, a.p, a.M, a.N, tuple(table.items()))

    def __mul__(self, c):
        c = Fraction(c)
        return SchwartzFunction(self.nvars, self.p, self.M, self.N,
                                tuple((k, v * c) for k, v in self.values))

    __rmul__ = __mul__

    def __neg__(self):
        return self * -1

    def __sub__(self, other):
        return self + (-other)

    def __eq__(self, other):
        if not isinstance(other, SchwartzFunction):
            return NotImplemented
        if self.nvars != other.nvars or self.p != other.p:
            return False
        a, b = self._common(other)
        return a.values == b.values

    def __hash__(self):
        return hash((self.nvars, self.p))

    def __call__(self, x):
        x = tuple(Fraction(v) for v in x)
        for v in x:
            if (v * self.p**self.M).denominator != 1:
                return Fraction(0)
        key = tuple(_canonical(v, self.p, self.M, self.N) for v in x)
        return self.table().get(key, Fraction(0))

    def restrict(self, coords):
        """The function y -> phi(y embedded in the coordinates ``coords``, zero elsewhere)."""
        coords = tuple(coords)
        zero = Fraction(0)
        out = {}
        for rep, v in self.values:
            if all(rep[i] == zero for i in range(self.nvars) if i not in coords):
                out[tuple(rep[i] for i in coords)] = v
        return SchwartzFunction(len(coords), self.p, self.M, self.N, tuple(out.items()))

    def to_json(self):
        return {
            "M": self.M,
            "N": self.N,
            "values": [[[_frac_str(a) for a in rep], _frac_str(v)] for rep, v in self.values],
        }

    @classmethod
    def from_json(cls, data, nvars, p):
        values = tuple(
            (tuple(Fraction(a) for a in rep), Fraction(v)) for rep, v in data.get("values", [])
        )
        return cls(nvars, p, int(data["M"]), int(data["N"]), values)


def _frac_str(x):
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


def _den_exp(x, p):
    den, e = Fraction(x).denominator, 0
    while den % p == 0:
        den //= p
        e += 1
    if den != 1:
        raise InvalidCoset(f"{x} has a denominator prime to p")
    return e


# ---------------------------------------------------------------------------
# measures and results


@dataclass(frozen=True)
class MeasureSpec:
    """The measure |f|^c dx on F^n (Haar normalized to give Z_p^n volume 1)."""

    twist: int = 0
    label: str = ""

    def __post_init__(self):
        if isinstance(self.twist, bool) or Fraction(self.twist).denominator != 1:
            raise NonIntegerTwist(f"twist exponent {self.twist} is not an integer")
        object.__setattr__(self, "twist", int(self.twist))
        if not self.label:
            object.__setattr__(self, "label", "dx" if self.twist == 0 else f"|f|^{self.twist} dx")


CLOSED_FORM = "closed_form"
FITTED = "fitted"


@dataclass
class ZetaResult:
    Z: RationalFunction
    provenance: str
    fit_metadata: dict = field(default_factory=dict)

    def to_json(self):
        return {"Z": self.Z.to_json(), "provenance": self.provenance, "fit": self.fit_metadata}


def apply_twist(Z, c, p):
    """Z_{f, |f|^c dx}(s) = Z_{f, dx}(s + c): substitute t -> q^(-c) t."""
    if Fraction(c).denominator != 1:
        raise NonIntegerTwist(f"twist exponent {c} is not an integer")
    return Z.scale_variable(Fraction(p) ** (-int(c)))


# ---------------------------------------------------------------------------
# unit cube


def _ansatz_key(ansatz):
    if ansatz is None or ansatz == "auto":
        return "auto"
    return tuple((int(a), int(b)) for a, b in ansatz)


@lru_cache(maxsize=4096)
def _unit_cube_cached(f, p, budget, ansatz, depth, max_factors):
    from igusa.padic_counting import LocalFieldParams

    params = LocalFieldParams(p, budget)
    series = point_count_series(f, params, depth)
    tail = series.normalized()
    shells = [tail[k] - tail[k + 1] for k in range(depth)]
    d = len(shells) - 3
    if ansatz == "auto":
        cands = default_candidates(p, f.nvars, f.total_degree)
        Z, used = fit_auto(shells, p, cands, max_factors=max_factors)
    else:
        Z = fit_rational(shells, ansatz, d, p)
        used = list(ansatz)
    ok = igusa_relation_check(tail, Z)
    if not ok:  # pragma: no cover - guaranteed by construction of the shells
        raise Inconsistent("fitted zeta fails the Igusa relation", failing_order=depth)
    meta = {
        "depth": depth,
        "counts": [str(c) for c in series.counts],
        "ansatz": [[a, b] for a, b in used],
        "numerator_degree": max(d, 0),
        "held_out": 2,
        "igusa_relation": ok,
    }
    return Z, meta


def zeta_unit_cube(f, params, ansatz="auto", depth=DEFAULT_DEPTH, max_factors=4):
    """Z(t) = sum_k mu(val f = k) t^k over Z_p^n, fitted from point counts."""
    if f.is_zero:
        raise ValueError("the zero polynomial has no zeta integral")
    Z, meta = _unit_cube_cached(f, params.p, params.enumeration_budget, _ansatz_key(ansatz),
                                depth, max_factors)
    return ZetaResult(Z, FITTED, dict(meta))


# ---------------------------------------------------------------------------
# cell integrals


def _tate_cell(a, level, e, p):
    """Closed form of the integral of |x|^(e s) over a + p^level Z_p."""
    q = Fraction(p)
    vol = q ** (-level)
    if e == 0:
        return RationalFunction.constant(vol, p)
    if a == 0 or val(a, p) >= level:
        den = RationalFunction(Poly([1] + [0] * (e - 1) + [-1 / q]), None, p)
        return RationalFunction.t_power(e * level, vol * (1 - 1 / q), p) / den
    return RationalFunction.t_power(e * val(a, p), vol, p)


def _monomial_cell(f, base, level, p):
    (coef, exps), = f.terms
    Z = RationalFunction.t_power(val(coef, p), 1, p)
    for a, e in zip(base, exps):
        Z = Z * _tate_cell(Fraction(a), level, e, p)
    return Z


def cell_zeta(f, base, level, params, ansatz="auto", depth=DEFAULT_DEPTH):
    """Integral of |f|^s dx over base + p^level Z_p^n; returns (Z, provenance, meta)."""
    p = params.p
    n = f.nvars
    if f.is_monomial():
        return _monomial_cell(f, base, level, p), CLOSED_FORM, None
    vol = Fraction(p) ** (-level * n)
    d = f.homogeneous_degree()
    if d is not None and all(Fraction(a) == 0 or val(a, p) >= level for a in base):
        unit = zeta_unit_cube(f, params, ansatz, depth)
        return unit.Z * RationalFunction.t_power(level * d, vol, p), FITTED, unit.fit_metadata
    cell = cell_polynomial(f, p, base, level)
    h = cell.h
    if cell.content:
        h = IntPolynomial(n, tuple((c // p**cell.content, e) for c, e in h.terms))
    try:
        unit = zeta_unit_cube(h, params, ansatz, depth)
    except Inconsistent:
        if _ansatz_key(ansatz) == "auto":
            raise
        unit = zeta_unit_cube(h, params, "auto", depth)
    Z = unit.Z * RationalFunction.t_power(cell.content - cell.shift, vol, p)
    return Z, FITTED, unit.fit_metadata


def zeta_schwartz(f, phi, measure, params, ansatz="auto", depth=DEFAULT_DEPTH):
    """Z_{f, |f|^c dx}(phi) as an exact rational function in t."""
    if phi.nvars != f.nvars or phi.p != params.p:
        raise ShapeMismatch("Schwartz function does not live on the polynomial's space")
    total = RationalFunction.constant(0, params.p)
    provenance = CLOSED_FORM
    fits = {}
    for rep, v in phi.values:  # sorted, so the sum is schedule independent
        Z, prov, meta = cell_zeta(f, rep, phi.N, params, ansatz, depth)
        total = total + Z * v
        if prov == FITTED:
            provenance = FITTED
            fits[repr(meta["counts"])] = meta
    total = apply_twist(total, measure.twist, params.p)
    meta = {"cells": len(phi.values), "unit_fits": [fits[k] for k in sorted(fits)]}
    if provenance == FITTED:
        meta["igusa_relation"] = all(m["igusa_relation"] for m in meta["unit_fits"])
    return ZetaResult(total, provenance, meta)


# ---------------------------------------------------------------------------
# the torus action


@dataclass(frozen=True)
class CoordinateAction:
    """Permitted elements act by x_i -> p^(w_i(g)) x_i with w = W . (diagonal exponents)."""

    group: object
    weights: tuple

    def __post_init__(self):
        w = tuple(tuple(int(x) for x in row) for row in self.weights)
        for row in w:
            if len(row) != self.group.torus_rank:
                raise ShapeMismatch("weight row does not match the group's torus rank")
        object.__setattr__(self, "weights", w)

    @property
    def nvars(self):
        return len(self.weights)

    def _columns(self):
        cols, start = [], 0
        for _, n in self.group.factors:
            cols.append(range(start, start + n))
            start += n
        return cols

    def coordinate_weights(self, g):
        flat = g.flat()
        return tuple(sum(a * b for a, b in zip(row, flat)) for row in self.weights)

    def haar_character(self):
        """chi_Haar with d(g x) = chi_Haar(g) dx."""
        exps = []
        for cols in self._columns():
            sums = {sum(row[j] for row in self.weights) for j in cols}
            if len(sums) != 1:
                raise ValueError("the Haar modulus is not a character of the group")
            exps.append(sums.pop())
        return SmoothCharacter(tuple(exps))

    def semi_invariance_character(self, f):
        """The nu with f(g x) = nu(g) f(x) on every permitted g, or None."""
        nu = None
        for _, exps in f.terms:
            col_vals = [sum(e * row[j] for e, row in zip(exps, self.weights))
                        for j in range(self.group.torus_rank)]
            per_factor = []
            for cols in self._columns():
                vals = {col_vals[j] for j in cols}
                if len(vals) != 1:
                    return None
                per_factor.append(vals.pop())
            if nu is None:
                nu = tuple(per_factor)
            elif nu != tuple(per_factor):
                return None
        return nu

    def to_json(self):
        return [list(r) for r in self.weights]


def act(g, phi, action):
    """(g . phi)(x) = phi(g^(-1) x): each coset a + p^N R maps to g a + g p^N R."""
    if phi.nvars != action.nvars:
        raise ShapeMismatch("action and Schwartz function dimensions differ")
    if g.group != action.group:
        raise ShapeMismatch("element belongs to a different group")
    w = action.coordinate_weights(g)
    if not any(w) or phi.is_zero():
        return phi
    p = phi.p
    N2 = phi.N + max(w)
    M2 = max(phi.M - min(w), 0)
    out = {}
    for rep, v in phi.values:
        pieces = []
        for a, wi in zip(rep, w):
            image = a * Fraction(p) ** wi
            step = Fraction(p) ** (phi.N + wi)
            pieces.append([image + j * step for j in range(p ** (N2 - phi.N - wi))])
        for point in product(*pieces):
            out[point] = v
    return SchwartzFunction(phi.nvars, p, M2, N2, tuple(out.items()))


def equivariance_check(scenario, g, phi, nu=None, chi=None):
    """Z(g . phi) = t^<g,nu> chi(g) Z(phi) as canonical rational functions."""
    nu = scenario.nu if nu is None else nu
    chi = scenario.chi if chi is None else chi
    if not isinstance(g, GroupElement):
        g = GroupElement.from_lambda(scenario.group, g)
    p = scenario.params.p
    lhs = scenario.zeta(act(g, phi, scenario.action)).Z
    base = scenario.zeta(phi).Z
    rhs = base * RationalFunction.t_power(pairing(g.lam(), nu), chi.value(g, p), p)
    return lhs == rhs
