"""Exact rational functions in t = q^(-s) and Laurent expansions at integer s0.

Laurent coefficients live in Q[L, 1/L], where ``L`` is a formal symbol standing
for ln q.  Nothing here is ever evaluated in floating point.
"""

from fractions import Fraction
from itertools import combinations_with_replacement
from math import factorial

from igusa.errors import (
    DivisionByZero,
    Inconsistent,
    NonIntegerPoint,
    Underdetermined,
)

# ---------------------------------------------------------------------------
# univariate polynomials over Q


class Poly:
    """Dense polynomial with Fraction coefficients in ascending order."""

    __slots__ = ("c",)

    def __init__(self, coeffs=()):
        c = [Fraction(x) for x in coeffs]
        while c and c[-1] == 0:
            c.pop()
        self.c = tuple(c)

    @classmethod
    def monomial(cls, k, coef=1):
        return cls([0] * k + [coef])

    @property
    def degree(self):
        return len(self.c) - 1  # -1 for the zero polynomial

    def __bool__(self):
        return bool(self.c)

    def __eq__(self, other):
        if not isinstance(other, Poly):
            other = Poly([other])
        return self.c == other.c

    def __hash__(self):
        return hash(self.c)

    def __repr__(self):
        return f"Poly({[str(x) for x in self.c]})"

    def __getitem__(self, k):
        return self.c[k] if 0 <= k < len(self.c) else Fraction(0)

    def __add__(self, other):
        n = max(len(self.c), len(other.c))
        return Poly([self[k] + other[k] for k in range(n)])

    def __neg__(self):
        return Poly([-x for x in self.c])

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if not isinstance(other, Poly):
            return Poly([x * other for x in self.c])
        if not self.c or not other.c:
            return Poly()
        out = [Fraction(0)] * (len(self.c) + len(other.c) - 1)
        for i, a in enumerate(self.c):
            if a:
                for j, b in enumerate(other.c):
                    out[i + j] += a * b
        return Poly(out)

    __rmul__ = __mul__

    def __pow__(self, n):
        out = Poly([1])
        for _ in range(n):
            out = out * self
        return out

    def divmod(self, other):
        if not other:
            raise DivisionByZero("polynomial division by zero")
        rem = list(self.c)
        dq = other.degree
        lead = other.c[-1]
        quot = [Fraction(0)] * max(len(rem) - dq, 0)
        for k in range(len(rem) - dq - 1, -1, -1):
            coef = rem[k + dq] / lead
            quot[k] = coef
            if coef:
                for j, b in enumerate(other.c):
                    rem[k + j] -= coef * b
        return Poly(quot), Poly(rem[:dq] if dq > 0 else [])

    def monic(self):
        if not self.c:
            return self
        lead = self.c[-1]
        return Poly([x / lead for x in self.c])

    def __call__(self, x):
        total = Fraction(0)
        for coef in reversed(self.c):
            total = total * x + coef
        return total

    def scale_variable(self, a):
        """p(t) -> p(a*t)."""
        a = Fraction(a)
        return Poly([coef * a**k for k, coef in enumerate(self.c)])

    def root_multiplicity(self, r):
        if not self.c:
            raise ValueError("zero polynomial")
        lin = Poly([-Fraction(r), 1])
        k, cur = 0, self
        while True:
            quot, rem = cur.divmod(lin)
            if rem:
                return k
            k += 1
            cur = quot


def poly_gcd(a, b):
    while b:
        a, b = b, a.divmod(b)[1]
    return a.monic()


# ---------------------------------------------------------------------------
# rational functions


class RationalFunction:
    """Reduced quotient num/den with a monic denominator.

    ``p`` records the prime when the variable is t = q^(-s); it is ``None``
    for rational functions in the formal symbol L.
    """

    __slots__ = ("num", "den", "p")

    def __init__(self, num, den=None, p=None):
        num = num if isinstance(num, Poly) else Poly(num if isinstance(num, (list, tuple)) else [num])
        if den is None:
            den = Poly([1])
        elif not isinstance(den, Poly):
            den = Poly(den if isinstance(den, (list, tuple)) else [den])
        if not den:
            raise DivisionByZero("zero denominator")
        if not num:
            den = Poly([1])
        else:
            g = poly_gcd(num, den)
            if g.degree > 0:
                num = num.divmod(g)[0]
                den = den.divmod(g)[0]
        lead = den.c[-1]
        self.num = Poly([x / lead for x in num.c])
        self.den = den.monic()
        self.p = p

    # construction helpers -------------------------------------------------
    @classmethod
    def constant(cls, c, p=None):
        return cls(Poly([c]), None, p)

    @classmethod
    def t_power(cls, k, coef=1, p=None):
        """coef * t^k for any integer k."""
        if k >= 0:
            return cls(Poly.monomial(k, coef), None, p)
        return cls(Poly([coef]), Poly.monomial(-k), p)

    def _p(self, other):
        if self.p is not None and other.p is not None and self.p != other.p:
            raise ValueError(f"mixing rational functions over p={self.p} and p={other.p}")
        return self.p if self.p is not None else other.p

    def _lift(self, other):
        if isinstance(other, RationalFunction):
            return other
        return RationalFunction(Poly([other]), None, self.p)

    def __add__(self, other):
        other = self._lift(other)
        return RationalFunction(
            self.num * other.den + other.num * self.den, self.den * other.den, self._p(other)
        )

    __radd__ = __add__

    def __neg__(self):
        return RationalFunction(-self.num, self.den, self.p)

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        other = self._lift(other)
        return RationalFunction(self.num * other.num, self.den * other.den, self._p(other))

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = self._lift(other)
        if not other.num:
            raise DivisionByZero("division by the zero rational function")
        return RationalFunction(self.num * other.den, self.den * other.num, self._p(other))

    def __rtruediv__(self, other):
        return self._lift(other) / self

    def __pow__(self, n):
        if n < 0:
            return RationalFunction.constant(1, self.p) / (self ** (-n))
        return RationalFunction(self.num**n, self.den**n, self.p)

    def __eq__(self, other):
        if not isinstance(other, RationalFunction):
            try:
                other = self._lift(other)
            except (TypeError, ValueError):
                return NotImplemented
        return self.num == other.num and self.den == other.den

    def __hash__(self):
        return hash((self.num, self.den))

    def __bool__(self):
        return bool(self.num)

    def is_zero(self):
        return not self.num

    def __repr__(self):
        return f"RationalFunction(num={[str(x) for x in self.num.c]}, den={[str(x) for x in self.den.c]}, p={self.p})"

    def __call__(self, x):
        d = self.den(x)
        if d == 0:
            raise DivisionByZero(f"pole at {x}")
        return self.num(x) / d

    def scale_variable(self, a):
        """Z(t) -> Z(a*t)."""
        return RationalFunction(self.num.scale_variable(a), self.den.scale_variable(a), self.p)

    def shift(self, k):
        """Multiply by t^k."""
        return self * RationalFunction.t_power(k, 1, self.p)

    def taylor(self, n):
        """First n Taylor coefficients at t = 0."""
        d0 = self.den[0]
        if d0 == 0:
            raise ValueError("rational function has a pole at t = 0")
        out = []
        for k in range(n):
            acc = self.num[k]
            for j in range(1, min(k, self.den.degree) + 1):
                acc -= self.den[j] * out[k - j]
            out.append(acc / d0)
        return out

    def to_json(self):
        return {
            "num": [[str(x.numerator), str(x.denominator)] for x in self.num.c],
            "den": [[str(x.numerator), str(x.denominator)] for x in self.den.c],
        }

    @classmethod
    def from_json(cls, data, p=None):
        num = Poly([Fraction(int(a), int(b)) for a, b in data["num"]])
        den = Poly([Fraction(int(a), int(b)) for a, b in data["den"]])
        return cls(num, den, p)

    def pretty(self, var="t"):
        return format_ratfunc(self, var)


RationalFunctionT = RationalFunction


def ratfunc_arith(a, b, op):
    """Exact a (op) b for op in {add, sub, mul, div}."""
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "div":
        return a / b
    raise ValueError(f"unknown operation {op!r}")


def ansatz_factor(a, b, p):
    """The denominator candidate 1 - q^(-a) t^b as a Poly."""
    return Poly([1] + [0] * (b - 1) + [-Fraction(1, p**a) if a >= 0 else -Fraction(p ** (-a))])


def ansatz_product(ansatz, p):
    out = Poly([1])
    for a, b in ansatz:
        out = out * ansatz_factor(a, b, p)
    return out


# ---------------------------------------------------------------------------
# fitting rational functions to truncated Taylor series

HELD_OUT = 2


def fit_rational(series, ansatz, max_numerator_degree, p):
    """Fit num/Q to ``series`` where Q is the product of the ansatz factors.

    The numerator (degree <= max_numerator_degree) is solved from the leading
    terms; every remaining term, and at least two of them, is held out and
    must be reproduced exactly.
    """
    series = [Fraction(x) for x in series]
    d = max_numerator_degree
    if d < 0:
        raise ValueError("max_numerator_degree must be non-negative")
    if len(series) < d + 1 + HELD_OUT:
        raise Underdetermined(
            f"{len(series)} terms cannot fix a degree-{d} numerator with {HELD_OUT} held-out terms"
        )
    q_poly = ansatz_product(ansatz, p)
    product = (q_poly * Poly(series)).c
    prod = [product[k] if k < len(product) else Fraction(0) for k in range(len(series))]
    numerator = Poly(prod[: d + 1])
    for k in range(d + 1, len(series)):
        if prod[k] != 0:
            raise Inconsistent(
                f"ansatz {list(ansatz)} fails at order {k}", failing_order=k
            )
    return RationalFunction(numerator, q_poly, p)


def default_candidates(p, nvars, degree):
    """(a, b) pairs for 1 - q^(-a) t^b with 1 <= a <= nvars + degree, 1 <= b <= degree."""
    degree = max(degree, 1)
    return [(a, b) for b in range(1, degree + 1) for a in range(1, nvars + degree + 1)]


def fit_auto(series, p, candidates, max_factors=4, max_numerator_degree=None):
    """Search ansatz multisets smallest-first; return (Z, ansatz).

    The numerator degree defaults to the largest value that still leaves two
    held-out terms.
    """
    series = [Fraction(x) for x in series]
    if all(x == 0 for x in series):
        raise Underdetermined("series vanishes identically to the computed depth")
    d = len(series) - 1 - HELD_OUT if max_numerator_degree is None else max_numerator_degree
    if d < 0:
        raise Underdetermined(f"{len(series)} terms leave no room for held-out verification")
    last_error = None
    for size in range(0, max_factors + 1):
        for ansatz in combinations_with_replacement(candidates, size):
            try:
                return fit_rational(series, ansatz, d, p), list(ansatz)
            except Inconsistent as exc:
                last_error = exc
    raise Inconsistent(
        f"no ansatz of at most {max_factors} factors fits {len(series)} terms",
        failing_order=getattr(last_error, "failing_order", None),
    )


def igusa_relation_check(poincare, Z):
    """(1 - t) P(t) + t Z(t) = 1 through the order of the truncated P."""
    poincare = [Fraction(x) for x in poincare]
    order = len(poincare) - 1
    if order < 0:
        return True
    z = Z.taylor(order + 1)
    for k in range(order + 1):
        lhs = poincare[k] - (poincare[k - 1] if k >= 1 else 0) + (z[k - 1] if k >= 1 else 0)
        if lhs != (1 if k == 0 else 0):
            return False
    return True


# ---------------------------------------------------------------------------
# Laurent polynomials in L


class LPolynomial:
    """Finite sum of c_k L^k, k in Z; L stands for ln q and is never evaluated."""

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        if terms is None:
            terms = {}
        elif not isinstance(terms, dict):
            terms = {0: terms}
        self.terms = {int(k): Fraction(v) for k, v in terms.items() if v != 0}

    @classmethod
    def monomial(cls, k, coef=1):
        return cls({k: coef})

    def __bool__(self):
        return bool(self.terms)

    def is_zero(self):
        return not self.terms

    def _lift(self, other):
        return other if isinstance(other, LPolynomial) else LPolynomial({0: other})

    def __add__(self, other):
        other = self._lift(other)
        out = dict(self.terms)
        for k, v in other.terms.items():
            out[k] = out.get(k, 0) + v
        return LPolynomial(out)

    __radd__ = __add__

    def __neg__(self):
        return LPolynomial({k: -v for k, v in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        other = self._lift(other)
        out = {}
        for i, a in self.terms.items():
            for j, b in other.terms.items():
                out[i + j] = out.get(i + j, 0) + a * b
        return LPolynomial(out)

    __rmul__ = __mul__

    def __pow__(self, n):
        out = LPolynomial({0: 1})
        for _ in range(n):
            out = out * self
        return out

    def __truediv__(self, other):
        """Division by a rational scalar or a single monomial c L^k."""
        other = self._lift(other)
        if len(other.terms) != 1:
            raise ValueError("LPolynomial division only by a monomial")
        (k, c), = other.terms.items()
        return LPolynomial({i - k: v / c for i, v in self.terms.items()})

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = LPolynomial({0: other})
        if not isinstance(other, LPolynomial):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        return hash(tuple(sorted(self.terms.items())))

    def __repr__(self):
        return f"LPolynomial({self})"

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for k in sorted(self.terms):
            v = self.terms[k]
            mono = "" if k == 0 else ("L" if k == 1 else f"L^{k}")
            if not mono:
                parts.append(str(v))
            elif v == 1:
                parts.append(mono)
            elif v == -1:
                parts.append("-" + mono)
            else:
                parts.append(f"{v}*{mono}")
        return " + ".join(parts).replace("+ -", "- ")

    def to_ratfunc(self):
        """Element of the fraction field Q(L)."""
        if not self.terms:
            return RationalFunction(Poly())
        low = min(self.terms)
        shifted = Poly([self.terms.get(low + i, 0) for i in range(max(self.terms) - low + 1)])
        if low >= 0:
            return RationalFunction(shifted * Poly.monomial(low))
        return RationalFunction(shifted, Poly.monomial(-low))

    def to_json(self):
        if not self.terms:
            return {"low": 0, "coeffs": []}
        low, high = min(self.terms), max(self.terms)
        return {
            "low": low,
            "coeffs": [
                [str(self.terms.get(k, Fraction(0)).numerator), str(self.terms.get(k, Fraction(0)).denominator)]
                for k in range(low, high + 1)
            ],
        }

    @classmethod
    def from_json(cls, data):
        low = int(data["low"])
        return cls({low + i: Fraction(int(a), int(b)) for i, (a, b) in enumerate(data["coeffs"])})


def log_abs_power(pairing_value, k):
    """(log|nu(g)|)^k / k! with log|nu(g)| = -<g,nu> L."""
    return LPolynomial({k: Fraction((-pairing_value) ** k, factorial(k))})


# ---------------------------------------------------------------------------
# Laurent series at an integer point


class LaurentSeriesS:
    """Truncated expansion sum_i c_i u^i, u = s - s0, c_i in Q[L, 1/L].

    ``coeffs[j]`` is the coefficient of ``u^(leading_order + j)``.  The zero
    series has ``is_zero`` set, ``leading_order`` 0 and all-zero coefficients.
    """

    __slots__ = ("s0", "leading_order", "coeffs", "truncation", "is_zero")

    def __init__(self, s0, leading_order, coeffs, truncation, is_zero=False):
        self.s0 = s0
        self.leading_order = leading_order
        self.coeffs = list(coeffs)
        self.truncation = truncation
        self.is_zero = is_zero
        if not is_zero and not self.coeffs[0]:
            raise ValueError("leading Laurent coefficient must be nonzero")

    @property
    def pole_order(self):
        return 0 if self.is_zero else max(0, -self.leading_order)

    @property
    def top(self):
        return self.leading_order + len(self.coeffs) - 1

    def coefficient(self, i):
        if self.is_zero or i < self.leading_order:
            return LPolynomial()
        if i > self.top:
            raise IndexError(f"u^{i} lies beyond the truncation u^{self.top}")
        return self.coeffs[i - self.leading_order]

    def to_json(self):
        return {
            "s0": self.s0,
            "leading": self.leading_order,
            "coeffs": [c.to_json() for c in self.coeffs],
        }

    def __repr__(self):
        body = ", ".join(f"u^{self.leading_order + j}: {c}" for j, c in enumerate(self.coeffs))
        return f"LaurentSeriesS(s0={self.s0}, {body})"


def _exp_expansion(poly, t0, n):
    """Coefficients r_0..r_{n-1} of poly(t0 * e^(-v)) as a power series in v."""
    powers = [Fraction(t0) ** k for k in range(len(poly.c))]
    return [
        sum((a * powers[k] * Fraction((-k) ** j) for k, a in enumerate(poly.c) if a), Fraction(0))
        / factorial(j)
        for j in range(n)
    ]


def _series_div(num, den, n):
    out = []
    for k in range(n):
        acc = num[k] if k < len(num) else Fraction(0)
        for j in range(1, min(k, len(den) - 1) + 1):
            acc -= den[j] * out[k - j]
        out.append(acc / den[0])
    return out


def _require_integer(s0):
    if isinstance(s0, bool) or int(s0) != s0:
        raise NonIntegerPoint(f"expansion point {s0} is not an integer")
    return int(s0)


def laurent_at(Z, s0, T, p=None):
    """Expand Z(q^(-s0) e^(-L u)) in u through u^(leading_order + T)."""
    s0 = _require_integer(s0)
    p = p or Z.p
    if p is None:
        raise ValueError("the prime p is needed to expand in s")
    if T < 0:
        raise ValueError("truncation must be non-negative")
    if Z.is_zero():
        return LaurentSeriesS(s0, 0, [LPolynomial()] * (T + 1), T, is_zero=True)
    t0 = Fraction(p) ** (-s0)
    m = Z.den.root_multiplicity(t0)
    r = Z.num.root_multiplicity(t0)
    nums = _exp_expansion(Z.num, t0, r + T + 1)
    dens = _exp_expansion(Z.den, t0, m + T + 1)
    h = _series_div(nums[r:], dens[m:], T + 1)
    lead = r - m
    coeffs = [LPolynomial({lead + j: h[j]}) for j in range(T + 1)]
    series = LaurentSeriesS(s0, lead, coeffs, T)
    if not laurent_roundtrip(Z, series, p):
        raise ArithmeticError("Laurent expansion failed its round-trip check")
    return series


def laurent_roundtrip(Z, series, p=None):
    """Multiplying the series by the expanded denominator reproduces the numerator."""
    p = p or Z.p
    if series.is_zero:
        return Z.is_zero()
    t0 = Fraction(p) ** (-series.s0)
    lead, T = series.leading_order, len(series.coeffs) - 1
    m = Z.den.root_multiplicity(t0)
    dens = _exp_expansion(Z.den, t0, m + T + 1)
    nums = _exp_expansion(Z.num, t0, lead + m + T + 1) if lead + m + T + 1 > 0 else []
    # coefficient of v^(lead + m + j) in den * series, compared for j = 0..T
    for j in range(T + 1):
        acc = Fraction(0)
        for k in range(j + 1):
            c = series.coeffs[k].terms.get(lead + k, Fraction(0))
            acc += dens[m + j - k] * c
        idx = lead + m + j
        if acc != (nums[idx] if 0 <= idx < len(nums) else Fraction(0)):
            return False
    return True


def pole_order_at(Z, s0, p=None):
    """Multiplicity of t0 = q^(-s0) as a root of the reduced denominator."""
    s0 = _require_integer(s0)
    p = p or Z.p
    if Z.is_zero():
        return 0
    return Z.den.root_multiplicity(Fraction(p) ** (-s0))


def laurent_coefficient(Z, s0, i, p=None):
    """The u^i coefficient of the Laurent expansion of Z at s0."""
    p = p or Z.p
    if Z.is_zero():
        return LPolynomial()
    lead = -pole_order_at(Z, s0, p) + Z.num.root_multiplicity(Fraction(p) ** (-_require_integer(s0)))
    if i < lead:
        return LPolynomial()
    return laurent_at(Z, s0, i - lead, p).coefficient(i)


# ---------------------------------------------------------------------------
# Gaussian elimination over an exact field (Fraction or RationalFunction)


def _is_zero(x):
    return x == 0 if not isinstance(x, RationalFunction) else x.is_zero()


def field_rank(rows):
    rows = [list(r) for r in rows]
    rank, ncols = 0, len(rows[0]) if rows else 0
    for col in range(ncols):
        pivot = next((i for i in range(rank, len(rows)) if not _is_zero(rows[i][col])), None)
        if pivot is None:
            continue
        rows[rank], rows[pivot] = rows[pivot], rows[rank]
        pv = rows[rank][col]
        for i in range(len(rows)):
            if i != rank and not _is_zero(rows[i][col]):
                factor = rows[i][col] / pv
                rows[i] = [a - factor * b for a, b in zip(rows[i], rows[rank])]
        rank += 1
    return rank


def field_solve(matrix, rhs):
    """One solution x of matrix @ x = rhs, or None when the system is inconsistent.

    Free variables are set to zero.
    """
    nrows = len(matrix)
    ncols = len(matrix[0]) if nrows else 0
    aug = [list(matrix[i]) + [rhs[i]] for i in range(nrows)]
    pivots, rank = [], 0
    for col in range(ncols):
        pivot = next((i for i in range(rank, nrows) if not _is_zero(aug[i][col])), None)
        if pivot is None:
            continue
        aug[rank], aug[pivot] = aug[pivot], aug[rank]
        pv = aug[rank][col]
        aug[rank] = [a / pv for a in aug[rank]]
        for i in range(nrows):
            if i != rank and not _is_zero(aug[i][col]):
                factor = aug[i][col]
                aug[i] = [a - factor * b for a, b in zip(aug[i], aug[rank])]
        pivots.append(col)
        rank += 1
    for i in range(rank, nrows):
        if not _is_zero(aug[i][ncols]):
            return None
    zero = rhs[0] * 0 if rhs else 0
    x = [zero] * ncols
    for i, col in enumerate(pivots):
        x[col] = aug[i][ncols]
    return x


# ---------------------------------------------------------------------------
# human-readable rendering


def _q_power(k):
    return "1" if k == 0 else f"q^{k}" if k != 1 else "q"


def _factor_constant(c, p, max_factors=6, max_index=12):
    """Write c as r * prod (1 - q^-i) with the fewest factors and r a power of q."""
    best = None

    def search(rest, start, chosen):
        nonlocal best
        if rest > 0:
            v = 0
            num, den = rest.numerator, rest.denominator
            while num % p == 0:
                num //= p
                v += 1
            while den % p == 0:
                den //= p
                v -= 1
            key = (v != 0, len(chosen))
            if num == 1 and den == 1 and (best is None or key < best[0]):
                best = (key, v, list(chosen))
        if len(chosen) >= max_factors:
            return
        for i in range(start, max_index + 1):
            search(rest / (1 - Fraction(1, p**i)), i, chosen + [i])

    search(Fraction(c), 1, [])
    return None if best is None else best[1:]


def _factor_den(den, p, max_index=12, max_b=6):
    factors, rest = [], den
    changed = True
    while changed and rest.degree > 0:
        changed = False
        for b in range(max_b, 0, -1):  # t^b factors first: (1 - x^2) must not split
            for a in range(-max_index, max_index + 1):
                cand = ansatz_factor(a, b, p) if a >= 0 else Poly([1] + [0] * (b - 1) + [-Fraction(p ** (-a))])
                quot, rem = rest.divmod(cand)
                if not rem:
                    factors.append((a, b))
                    rest = quot
                    changed = True
                    break
            if changed:
                break
    return factors, rest


def _factor_text(a, b, var):
    coef = "" if a == 0 else f"q^-{a} " if a > 0 else f"q^{-a} "
    tv = var if b == 1 else f"{var}^{b}"
    return f"(1 - {coef}{tv})"


def format_ratfunc(Z, var="t"):
    """Render Z in the (1 - q^-a t^b) product style when it factors that way."""
    if Z.is_zero():
        return "0"
    p = Z.p
    if p is None:
        return _plain(Z, var)
    den = Z.den * (1 / Z.den[0]) if Z.den[0] != 0 else Z.den
    scale = Z.den[0] if Z.den[0] != 0 else Fraction(1)
    # Z = num / den_monic = (num / scale) / (den / den(0))
    tpow = Z.den.root_multiplicity(0) if Z.den[0] == 0 else 0
    if tpow:
        den = Z.den.divmod(Poly.monomial(tpow))[0]
        scale = den[0]
        den = den * (1 / scale)
    factors, rest = _factor_den(den, p)
    if rest.degree > 0:
        return _plain(Z, var)
    num = Z.num * (1 / scale)
    num_text = None
    if num.degree == 0:
        fc = _factor_constant(num[0], p) if num[0] > 0 else None
        if fc is not None:
            v, idx = fc
            pieces = _powers([f"(1 - q^-{i})" for i in idx])
            if v:
                pieces.insert(0, _q_power(v) if v > 0 else f"q^{v}")
            num_text = "".join(pieces) or "1"
        else:
            num_text = str(num[0])
    else:
        num_text = "(" + _poly_text(num, var) + ")"
    den_pieces = _powers([_factor_text(a, b, var) for a, b in factors])
    den_text = "".join(den_pieces)
    if tpow:
        den_text = (f"{var}^{tpow}" if tpow > 1 else var) + den_text
    if not den_text:
        return num_text
    if len(den_pieces) + (1 if tpow else 0) > 1:
        den_text = f"({den_text})"
    return f"{num_text} / {den_text}"


def _powers(pieces):
    """Collapse runs of equal factors into powers: (1 - t)(1 - t) -> (1 - t)^2."""
    out = []
    for piece in pieces:
        if out and out[-1][0] == piece:
            out[-1][1] += 1
        else:
            out.append([piece, 1])
    return [x if k == 1 else f"{x}^{k}" for x, k in out]


def _poly_text(poly, var):
    parts = []
    for k, c in enumerate(poly.c):
        if not c:
            continue
        mono = "" if k == 0 else var if k == 1 else f"{var}^{k}"
        if not mono:
            parts.append(str(c))
        elif c == 1:
            parts.append(mono)
        elif c == -1:
            parts.append("-" + mono)
        else:
            parts.append(f"{c}*{mono}")
    return " + ".join(parts).replace("+ -", "- ") or "0"


def _plain(Z, var):
    if Z.den.degree == 0:
        return _poly_text(Z.num, var)
    return f"({_poly_text(Z.num, var)}) / ({_poly_text(Z.den, var)})"
