from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import brute_count
from igusa.errors import BudgetExceeded, InvalidCoset
from igusa.kernels import available_backends
from igusa.padic_counting import (
    IntPolynomial,
    LocalFieldParams,
    cell_polynomial,
    count_zeros_mod,
    count_zeros_mod_on_coset,
    is_prime,
    point_count_series,
    shell_measures,
    val,
)
from igusa.scenarios import determinant

X = IntPolynomial(1, ((1, (1,)),))
DET2 = determinant(2)
PAIR2 = IntPolynomial(4, ((1, (1, 0, 1, 0)), (1, (0, 1, 0, 1))), 2)
P2 = LocalFieldParams(2)
P3 = LocalFieldParams(3)


def test_primes_and_valuation():
    assert [n for n in range(20) if is_prime(n)] == [2, 3, 5, 7, 11, 13, 17, 19]
    assert val(24, 2) == 3
    assert val(Fraction(5, 9), 3) == -2
    with pytest.raises(ValueError):
        LocalFieldParams(4)


def test_count_examples():
    assert count_zeros_mod(X, P2, 3) == 1
    assert count_zeros_mod(DET2, P2, 1) == 10
    assert count_zeros_mod(PAIR2, P2, 1) == 10


def test_shell_examples():
    assert shell_measures(X, P2, 2) == [Fraction(1, 2), Fraction(1, 4)]
    assert shell_measures(PAIR2, P2, 1)[0] == Fraction(3, 8)
    assert len(shell_measures(X, P2, 3)) == 3


def test_shells_sum_to_one():
    for f, p, M in ((DET2, 2, 4), (PAIR2, 3, 3)):
        params = LocalFieldParams(p)
        mu = shell_measures(f, params, M)
        tail = point_count_series(f, params, M).normalized()[M]
        assert sum(mu) + tail == 1
        assert all(m >= 0 for m in mu)


@pytest.mark.parametrize("f,p,M", [(DET2, 2, 3), (DET2, 3, 2), (PAIR2, 2, 3), (X, 5, 3)])
def test_against_flat_enumeration(f, p, M):
    counts = point_count_series(f, LocalFieldParams(p), M).counts
    assert counts == [brute_count(f, p, m) for m in range(M + 1)]


@pytest.mark.parametrize("backend", available_backends())
def test_backend_parity(backend):
    for f, p, M in ((DET2, 2, 5), (DET2, 3, 3), (PAIR2, 2, 4)):
        params = LocalFieldParams(p)
        assert point_count_series(f, params, M, backend=backend).counts == \
            point_count_series(f, params, M, backend="python").counts


@pytest.mark.parametrize("backend", available_backends())
def test_budget(backend):
    with pytest.raises(BudgetExceeded):
        point_count_series(DET2, LocalFieldParams(2, 100), 3, backend=backend)


def test_homogeneous_scaling():
    # x = p y: val f(x) >= m + d iff val f(y) >= m; the coset count runs over
    # y mod p^(m+d), i.e. p^(d n) lifts of each solution mod p^m
    p, d, n = 2, 2, 4
    for m in range(3):
        inner = count_zeros_mod_on_coset(DET2, P2, m + d, ((0,) * n, 1))
        assert inner == count_zeros_mod(DET2, P2, m) * p ** (d * n)


def test_coset_examples():
    assert count_zeros_mod_on_coset(X, P2, 1, ((1,), 1)) == 0
    # residues of 2Z_2 mod 4: both qualify
    assert count_zeros_mod_on_coset(X, P2, 1, ((0,), 1)) == 2
    # on (1,0,0,0) + 2Z_2^4 both y coordinates are even, so 2 | f everywhere
    brute = 0
    for a in range(2):
        for b in range(2):
            for c in range(2):
                for e in range(2):
                    x = (1 + 2 * a, 2 * b, 2 * c, 2 * e)
                    brute += PAIR2(x) % 2 == 0
    assert count_zeros_mod_on_coset(PAIR2, P2, 1, ((1, 0, 0, 0), 1)) == brute == 16


def test_coset_with_denominators():
    # x on 1/2 + Z_2: |x| = 2 everywhere, so val x >= 0 never holds
    assert count_zeros_mod_on_coset(X, P2, 0, ((Fraction(1, 2),), 0)) == 0
    with pytest.raises(InvalidCoset):
        count_zeros_mod_on_coset(X, P2, 1, ((Fraction(1, 8),), 0), max_denominator_exponent=2)


def test_cell_polynomial():
    cell = cell_polynomial(DET2, 2, (0, 0, 0, 0), 1)
    assert (cell.shift, cell.content) == (0, 2)


def test_json_roundtrip():
    assert IntPolynomial.from_json(DET2.to_json()) == DET2
    assert IntPolynomial.from_json(PAIR2.to_json()).declared_degree == 2


def test_invalid_polynomials():
    with pytest.raises(ValueError):
        IntPolynomial(2, ((1, (1,)),))
    with pytest.raises(ValueError):
        IntPolynomial(1, ((1, (2,)),), declared_degree=1)


terms = st.lists(
    st.tuples(st.integers(-3, 3), st.tuples(*(st.integers(0, 3),) * 3)).filter(lambda t: sum(t[1]) <= 3),
    min_size=1, max_size=4,
)


@settings(max_examples=40, deadline=None)
@given(terms, st.sampled_from([2, 3]), st.integers(1, 3))
def test_monotone_counts_random(tl, p, m):
    f = IntPolynomial(3, tuple(tl))
    if f.is_zero:
        return
    counts = point_count_series(f, LocalFieldParams(p), m).counts
    assert counts[0] == 1
    mus = [Fraction(c, p ** (k * 3)) for k, c in enumerate(counts)]
    for k in range(m):
        assert counts[k + 1] <= p**3 * counts[k]
        assert mus[k + 1] <= mus[k]
    assert all(x >= 0 for x in shell_measures(f, LocalFieldParams(p), m))
