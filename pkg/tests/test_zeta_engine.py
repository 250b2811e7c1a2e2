import random
from fractions import Fraction

import pytest

from conftest import brute_cell_shells
from igusa.errors import NonIntegerTwist, ShapeMismatch
from igusa.lattice_orbits import GroupElement, PsiElement
from igusa.padic_counting import IntPolynomial, LocalFieldParams
from igusa.scenarios import build_scenario, determinant
from igusa.symbolic import Poly, RationalFunction, ansatz_factor
from igusa.zeta_engine import (
    CLOSED_FORM,
    FITTED,
    MeasureSpec,
    SchwartzFunction,
    act,
    apply_twist,
    cell_zeta,
    equivariance_check,
    zeta_schwartz,
    zeta_unit_cube,
)

F = Fraction
P2 = LocalFieldParams(2)
X = IntPolynomial(1, ((1, (1,)),))
XY = IntPolynomial(2, ((1, (1, 1)),))
DET2 = determinant(2)


def pairing_poly(n):
    return IntPolynomial(2 * n, tuple((1, tuple(int(k in (i, n + i)) for k in range(2 * n))) for i in range(n)), 2)


def product_form(p, indices):
    Z = RationalFunction.constant(1, p)
    for i in indices:
        Z = Z * RationalFunction(Poly([1 - F(1, p**i)]), ansatz_factor(i, 1, p), p)
    return Z


def test_unit_cube_det_and_pairing():
    Z = zeta_unit_cube(DET2, P2)
    assert Z.Z == product_form(2, [1, 2])
    assert Z.provenance == FITTED and Z.fit_metadata["igusa_relation"]
    assert zeta_unit_cube(pairing_poly(2), P2).Z == product_form(2, [1, 2])


@pytest.mark.parametrize("a", [1, 2, 3])
def test_unit_cube_power(a):
    f = IntPolynomial(1, ((1, (a,)),))
    expected = RationalFunction(Poly([F(1, 2)]), ansatz_factor(1, a, 2), 2)
    assert zeta_unit_cube(f, P2, depth=3 * a + 2).Z == expected


def test_depth_stability():
    for depth in (4, 5):
        assert zeta_unit_cube(DET2, P2, depth=depth).Z == product_form(2, [1, 2])


def test_pinned_ansatz():
    assert zeta_unit_cube(DET2, P2, ansatz=[(1, 1), (2, 1)]).Z == product_form(2, [1, 2])


def test_schwartz_examples():
    tate = zeta_schwartz(X, SchwartzFunction.indicator(1, 2), MeasureSpec(-1), P2)
    assert tate.Z == RationalFunction(Poly([F(1, 2)]), Poly([1, -1]), 2)
    assert tate.provenance == CLOSED_FORM
    xy = zeta_schwartz(XY, SchwartzFunction.indicator(2, 2), MeasureSpec(-1), P2)
    assert xy.Z == tate.Z * tate.Z
    zero = zeta_schwartz(DET2, SchwartzFunction.zero(4, 2), MeasureSpec(0), P2)
    assert zero.Z.is_zero()


def test_twist():
    Z = product_form(2, [1])
    assert apply_twist(Z, -1, 2) == RationalFunction(Poly([F(1, 2)]), Poly([1, -1]), 2)
    with pytest.raises(NonIntegerTwist):
        MeasureSpec(F(1, 2))


@pytest.mark.parametrize("f,base,level", [
    (DET2, (1, 0, 0, 1), 1),
    (DET2, (0, 0, 0, 0), 1),
    (IntPolynomial(2, ((1, (2, 0)), (1, (0, 1)))), (1, 1), 1),
    (IntPolynomial(2, ((1, (2, 0)), (2, (0, 1)))), (0, 0), 1),
    (pairing_poly(1), (1, 0), 1),
])
def test_cells_against_enumeration(f, base, level):
    Z, _, _ = cell_zeta(f, base, level, P2)
    K = 3
    assert Z.taylor(K) == brute_cell_shells(f, 2, base, level, K)


def test_scaling_law():
    unit = zeta_unit_cube(DET2, P2).Z
    inner = zeta_schwartz(DET2, SchwartzFunction.indicator(4, 2, level=1), MeasureSpec(0), P2).Z
    assert inner == unit * RationalFunction.t_power(2, F(1, 16), 2)
    assert inner.taylor(4) == brute_cell_shells(DET2, 2, (0, 0, 0, 0), 1, 4)


def test_fractional_cell():
    f = IntPolynomial(2, ((1, (1, 0)), (1, (0, 2))))
    Z, _, _ = cell_zeta(f, (F(1, 2), 0), 0, P2)
    assert Z == RationalFunction.t_power(-1, 1, 2)


def test_additivity_and_refinement():
    rng = random.Random(7)
    basis = SchwartzFunction.basis(1, 2, 1, 1)
    for _ in range(5):
        a = sum((b * rng.randint(-3, 3) for b in basis), SchwartzFunction.zero(1, 2, 1, 1))
        b = sum((b * rng.randint(-3, 3) for b in basis), SchwartzFunction.zero(1, 2, 1, 1))
        za = zeta_schwartz(X, a, MeasureSpec(-1), P2).Z
        zb = zeta_schwartz(X, b, MeasureSpec(-1), P2).Z
        assert zeta_schwartz(X, a + b, MeasureSpec(-1), P2).Z == za + zb
        assert zeta_schwartz(X, a.refine(2, 3), MeasureSpec(-1), P2).Z == za


def test_schwartz_structure():
    phi = SchwartzFunction.indicator(2, 2, base=(F(1, 2), 1), level=1)
    assert phi.M == 1
    assert phi((F(1, 2), 3)) == 1 and phi((F(1, 2), 2)) == 0
    assert phi == phi.refine(2, 2)
    assert SchwartzFunction.from_json(phi.to_json(), 2, 2) == phi
    assert (phi - phi).is_zero()
    with pytest.raises(ShapeMismatch):
        phi + SchwartzFunction.indicator(1, 2)


def test_act_examples(tate):
    phi = SchwartzFunction.indicator(1, 2)
    g = tate.element([1])
    assert act(GroupElement.identity(tate.group), phi, tate.action) == phi
    assert act(g, phi, tate.action) == SchwartzFunction.indicator(1, 2, level=1)


def test_act_composition(pairing1):
    g1, g2 = pairing1.element([1, 0, 0]), pairing1.element([0, -1, 1])
    for phi in pairing1.basis():
        lhs = act(g1, act(g2, phi, pairing1.action), pairing1.action)
        assert lhs == act(g1 * g2, phi, pairing1.action)
        assert act(g1.inverse(), act(g1, phi, pairing1.action), pairing1.action) == phi


def test_equivariance(tate, det2):
    phi = SchwartzFunction.indicator(1, 2)
    assert equivariance_check(tate, [1], phi)
    assert not equivariance_check(tate, [1], phi, nu=PsiElement((2,)))
    g = det2.element("(pI,I)")
    assert equivariance_check(det2, g, det2.unit_function())
    assert not equivariance_check(det2, g, det2.unit_function(), nu=PsiElement((0, 0)))


def test_equivariance_trivial_twist():
    s = build_scenario("matrix_det", n=2, p=2, twist=0)
    assert equivariance_check(s, s.element("(pI,I)"), s.unit_function())
