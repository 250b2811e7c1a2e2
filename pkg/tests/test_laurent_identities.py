import random
from fractions import Fraction

from igusa.laurent_identities import (
    CoefficientTable,
    apply_operator_product,
    bound_replay,
    coefficient_functional,
    generalized_order_check,
    laurent_recursion_check,
    linear_independence_witness,
)
from igusa.symbolic import LPolynomial, RationalFunction
from igusa.zeta_engine import SchwartzFunction

F = Fraction


def test_coefficient_examples(tate, pairing1):
    one = tate.unit_function()
    assert coefficient_functional(tate, -1, one) == LPolynomial({-1: F(1, 2)})
    # under dx/|x| the cell pR contributes t Z(1_R), so 1_R - 1_pR is analytic
    inner = SchwartzFunction.indicator(1, 2, level=1)
    analytic = one - inner
    assert tate.zeta(analytic).Z == RationalFunction.constant(F(1, 2), 2)
    assert coefficient_functional(tate, -1, analytic) == LPolynomial()
    assert coefficient_functional(tate, 0, analytic) == LPolynomial({0: F(1, 2)})
    # while 1_R - q 1_pR keeps the pole: Z = (1 - q^-1)(1 - q t)/(1 - t)
    assert coefficient_functional(tate, -1, one - inner * 2) == LPolynomial({-1: F(-1, 2)})
    zero = SchwartzFunction.zero(2, 2)
    assert all(coefficient_functional(pairing1, i, zero) == LPolynomial() for i in range(-2, 2))


def test_coefficient_linearity(pairing1):
    rng = random.Random(5)
    basis = pairing1.basis()
    table = CoefficientTable(pairing1)
    for _ in range(4):
        a = sum((b * rng.randint(-2, 2) for b in rng.sample(basis, 3)), SchwartzFunction.zero(2, 2))
        b = sum((b * rng.randint(-2, 2) for b in rng.sample(basis, 3)), SchwartzFunction.zero(2, 2))
        for i in (-2, -1, 0):
            assert table.coefficient(i, a + b) == table.coefficient(i, a) + table.coefficient(i, b)


def test_recursion(tate, pairing1):
    assert laurent_recursion_check(tate, [1], 0, tate.basis())
    for i in (-1, 0):
        assert laurent_recursion_check(pairing1, [1, 0, 0], i, pairing1.basis())


def test_recursion_control(tate, pairing1):
    report = laurent_recursion_check(tate, [1], 0, tate.basis(), chi_scale=2)
    assert not report
    assert report.witness["phi"] is not None
    assert not laurent_recursion_check(pairing1, [1, 0, 0], 0, pairing1.basis(), chi_scale=2)


def test_generalized_order(tate, pairing1):
    assert generalized_order_check(tate, -1, [[[1]], [[2]]], tate.basis())
    assert generalized_order_check(tate, 0, [[[1], [1]], [[1], [2]]], tate.basis())
    assert not generalized_order_check(tate, 0, [[[1]]], tate.basis())
    gs = [[1, 0, 0], [0, 0, 1]]
    assert generalized_order_check(pairing1, 0, [gs + [[1, 0, 0]]], pairing1.basis())
    assert not generalized_order_check(pairing1, 0, [gs], pairing1.basis())


def test_operator_product_on_identity(tate):
    # (e - chi(e)) kills everything
    value = apply_operator_product(tate, [[0]], lambda f: coefficient_functional(tate, 0, f),
                                   tate.unit_function())
    assert value == LPolynomial()


def test_independence(tate, pairing1):
    r = linear_independence_witness(pairing1, pairing1.basis())
    assert r.holds and r.details["rank"] == 3
    assert linear_independence_witness(tate, tate.basis()).details["rank"] == 2


def test_bound_replay(tate, pairing1):
    assert bound_replay(tate, tate.basis())
    assert bound_replay(pairing1, pairing1.basis())
