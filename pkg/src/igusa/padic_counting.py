"""Valuations, Haar-measure shells and zero counting modulo prime powers over Z_p."""

from dataclasses import dataclass, field
from fractions import Fraction
from math import comb

from igusa import kernels
from igusa.errors import BudgetExceeded, InvalidCoset

DEFAULT_BUDGET = 10**7


def is_prime(n):
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


def val(x, p):
    """p-adic valuation of a nonzero integer or Fraction."""
    x = Fraction(x)
    if x == 0:
        raise ValueError("valuation of zero is +infinity")
    v = 0
    num, den = x.numerator, x.denominator
    while num % p == 0:
        num //= p
        v += 1
    while den % p == 0:
        den //= p
        v -= 1
    return v


@dataclass(frozen=True)
class LocalFieldParams:
    """The base field Q_p; the residue cardinality q equals p."""

    p: int
    enumeration_budget: int = DEFAULT_BUDGET

    def __post_init__(self):
        if not is_prime(self.p):
            raise ValueError(f"p={self.p} is not prime")
        if self.enumeration_budget <= 0:
            raise ValueError("enumeration_budget must be positive")

    @property
    def q(self):
        return self.p


@dataclass(frozen=True)
class IntPolynomial:
    """Polynomial with integer coefficients, stored as sorted (coef, exponent) terms."""

    nvars: int
    terms: tuple
    declared_degree: int | None = None

    def __post_init__(self):
        if self.nvars < 1:
            raise ValueError("nvars must be positive")
        merged = {}
        for coef, exps in self.terms:
            exps = tuple(int(e) for e in exps)
            if len(exps) != self.nvars or any(e < 0 for e in exps):
                raise ValueError(f"bad exponent vector {exps}")
            if int(coef) != coef:
                raise ValueError("coefficients must be integers")
            merged[exps] = merged.get(exps, 0) + int(coef)
        terms = tuple(sorted((c, e) for e, c in merged.items() if c != 0))
        terms = tuple(sorted(terms, key=lambda ce: ce[1]))
        object.__setattr__(self, "terms", terms)
        if self.declared_degree is not None:
            for _, e in terms:
                if sum(e) != self.declared_degree:
                    raise ValueError(
                        f"term {e} has degree {sum(e)}, declared {self.declared_degree}"
                    )

    @classmethod
    def from_dict(cls, nvars, mapping, degree=None):
        return cls(nvars, tuple((c, e) for e, c in mapping.items()), degree)

    @property
    def is_zero(self):
        return not self.terms

    @property
    def total_degree(self):
        return max((sum(e) for _, e in self.terms), default=0)

    def homogeneous_degree(self):
        """The common total degree of all terms, or None if f is not homogeneous."""
        degrees = {sum(e) for _, e in self.terms}
        return degrees.pop() if len(degrees) == 1 else None

    def is_monomial(self):
        return len(self.terms) == 1

    def __call__(self, point):
        total = 0
        for c, e in self.terms:
            mono = c
            for xi, ei in zip(point, e):
                if ei:
                    mono *= xi**ei
            total += mono
        return total

    def substitute_affine(self, base, scale):
        """Coefficients of ``y -> f(base + scale*y)`` as a dict exponent -> Fraction."""
        result = {}
        for c, e in self.terms:
            # expand prod_i (b_i + s*y_i)^{e_i}
            partial = {(): Fraction(c)}
            for b, ei in zip(base, e):
                nxt = {}
                for key, val_ in partial.items():
                    for k in range(ei + 1):
                        coef = val_ * comb(ei, k) * Fraction(b) ** (ei - k) * Fraction(scale) ** k
                        if coef:
                            nk = key + (k,)
                            nxt[nk] = nxt.get(nk, 0) + coef
                partial = nxt
            for key, v in partial.items():
                result[key] = result.get(key, 0) + v
        return {k: v for k, v in result.items() if v}

    def to_json(self):
        return {
            "nvars": self.nvars,
            "terms": [[c, list(e)] for c, e in self.terms],
            "degree": self.declared_degree,
        }

    @classmethod
    def from_json(cls, data):
        return cls(
            int(data["nvars"]),
            tuple((int(c), tuple(e)) for c, e in data["terms"]),
            data.get("degree"),
        )

    def __str__(self):
        names = _var_names(self.nvars)
        parts = []
        for c, e in self.terms:
            mono = "*".join(
                n if k == 1 else f"{n}^{k}" for n, k in zip(names, e) if k
            )
            if not mono:
                parts.append(str(c))
            elif c == 1:
                parts.append(mono)
            elif c == -1:
                parts.append("-" + mono)
            else:
                parts.append(f"{c}*{mono}")
        return " + ".join(parts).replace("+ -", "- ") or "0"


def _var_names(n):
    return ["x"] if n == 1 else [f"x{i + 1}" for i in range(n)]


@dataclass
class PointCountSeries:
    f: IntPolynomial
    p: int
    counts: list = field(default_factory=list)

    def normalized(self):
        """mu(val f >= m) = N_m p^(-m*nvars) for each stored m."""
        n = self.f.nvars
        return [Fraction(c, self.p ** (m * n)) for m, c in enumerate(self.counts)]

    def poincare_series(self):
        """Coefficients of P(t) = sum N_m q^(-m*nvars) t^m."""
        return self.normalized()


def _kernel_args(f):
    return [c for c, _ in f.terms], [e for _, e in f.terms]


def point_count_series(f, params, M, backend=None):
    """Counts N_0..N_M computed in a single residue-tree traversal."""
    if M < 0:
        raise ValueError("M must be non-negative")
    coefs, exps = _kernel_args(f)
    counts = kernels.count_tree(
        coefs, exps, f.nvars, params.p, M, params.enumeration_budget, backend=backend
    )
    return PointCountSeries(f, params.p, counts)


def count_zeros_mod(f, params, m, backend=None):
    """Number of x in (Z/p^m)^nvars with f(x) = 0 mod p^m."""
    return point_count_series(f, params, m, backend=backend).counts[m]


def shell_measures(f, params, M, backend=None):
    """Haar measures mu_k of {x in Z_p^n : val f(x) = k} for k = 0..M-1."""
    if M < 1:
        raise ValueError("M must be positive")
    tail = point_count_series(f, params, M, backend=backend).normalized()
    return [tail[k] - tail[k + 1] for k in range(M)]


def _denominator_exponent(x, p):
    x = Fraction(x)
    den, e = x.denominator, 0
    while den % p == 0:
        den //= p
        e += 1
    if den != 1:
        raise InvalidCoset(f"{x} has a denominator prime to p")
    return e


@dataclass(frozen=True)
class CellPolynomial:
    """``f(base + p^level * y) = p^(-shift) * h(y)`` with ``h`` integral.

    ``shift`` clears every denominator; ``content`` is the p-adic valuation of
    the content of ``h``.
    """

    h: IntPolynomial
    shift: int
    content: int


def cell_polynomial(f, p, base, level):
    coeffs = f.substitute_affine(base, Fraction(p) ** level)
    if not coeffs:
        raise ValueError("polynomial vanishes identically on the cell")
    shift = max(max(_denominator_exponent(c, p) for c in coeffs.values()), 0)
    scaled = {e: c * p**shift for e, c in coeffs.items()}
    h = IntPolynomial.from_dict(f.nvars, {e: int(c) for e, c in scaled.items()})
    content = min(val(c, p) for c, _ in h.terms)
    return CellPolynomial(h, shift, content)


def count_zeros_mod_on_coset(f, params, m, coset, max_denominator_exponent=None, backend=None):
    """Count points of the coset ``base + p^level Z_p^n`` with val f(x) >= m.

    For integral data the residue system is x mod p^(level+m). When the base
    point has denominators, f(base + p^level y) = p^(-D) h(y) with h integral
    and the residue system is x mod p^(level+m+D), i.e. y mod p^(m+D).
    """
    base, level = coset
    p = params.p
    if len(base) != f.nvars:
        raise InvalidCoset("base point has the wrong dimension")
    exps = [_denominator_exponent(b, p) for b in base]
    if max_denominator_exponent is not None and max(exps, default=0) > max_denominator_exponent:
        raise InvalidCoset(
            f"base point denominators exceed p^{max_denominator_exponent}"
        )
    cell = cell_polynomial(f, p, base, level)
    r = max(m + cell.shift, 0)
    if r == 0:
        return 1
    coefs, kexps = _kernel_args(cell.h)
    counts = kernels.count_tree(coefs, kexps, f.nvars, p, r, params.enumeration_budget, backend=backend)
    return counts[r]


def coset_tail_measure(f, params, m, coset, backend=None):
    """Haar measure of {x in coset : val f(x) >= m}."""
    base, level = coset
    cell = cell_polynomial(f, params.p, base, level)
    r = max(m + cell.shift, 0)
    count = count_zeros_mod_on_coset(f, params, m, coset, backend=backend)
    return count / Fraction(params.p) ** ((level + r) * f.nvars)


__all__ = [
    "BudgetExceeded",
    "CellPolynomial",
    "IntPolynomial",
    "LocalFieldParams",
    "PointCountSeries",
    "cell_polynomial",
    "count_zeros_mod",
    "count_zeros_mod_on_coset",
    "coset_tail_measure",
    "is_prime",
    "point_count_series",
    "shell_measures",
    "val",
]
