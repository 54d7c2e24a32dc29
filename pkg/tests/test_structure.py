import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from fdhopf import dual, group_likes, is_semisimple, trace_formula, verify_radford_s4
from fdhopf.linalg import FieldMatrix
from fdhopf.structure import check_integral_pack, random_endomorphism, trace_expressions

from helpers import group, integrals, small_bundle, taft_alg, taft_double


@pytest.mark.parametrize("factors", [(2,), (5,), (3, 3)])
def test_group_algebra_integrals(factors):
    H = group(*factors)
    pack = integrals(H)
    order = H.dim
    assert pack.left_integral == H.element([Fraction(1, order)] * order)
    assert pack.right_integral == H.dual_basis(0).scale(order)
    assert pack.g == H.one and pack.alpha == H.epsilon
    assert pack.unimodular and pack.dual_unimodular


@pytest.mark.parametrize("n,e", [(2, 1), (3, 1), (3, 2), (5, 3)])
def test_taft_integrals_by_hand(n, e):
    H = taft_alg(n, e)
    pack = integrals(H)
    xi = H.field.zeta(2 * e)
    # Lambda is proportional to (sum_j a^j) x^(n-1) = sum_j xi^(j(n-1)) x^(n-1) a^j
    expect = H.element({(n - 1) * n + j: xi ** (j * (n - 1)) for j in range(n)})
    lam = pack.left_integral
    c = lam.coeffs[(n - 1) * n]
    assert c and lam == expect.scale(c)
    # with the convolution (beta gamma)(h) = sum beta(h_1) gamma(h_2), the right
    # integral is supported on x^(n-1) a
    supp = [k for k, v in enumerate(pack.right_integral.coeffs) if v]
    assert supp == [(n - 1) * n + 1]
    assert pack.g == H.basis(1)
    assert pack.alpha == H.functional({j: xi ** j for j in range(n)})
    assert not pack.unimodular and not pack.dual_unimodular
    assert pack.right_integral(pack.left_integral) == 1
    assert check_integral_pack(pack) is None


@pytest.mark.parametrize("H", small_bundle(), ids=lambda H: H.name)
def test_semisimplicity_criteria_agree(H):
    v = is_semisimple(H, integrals(H))
    assert v.semisimple == ("taft" not in H.name)
    if v.semisimple:
        assert v.trace_s2 == H.dim
    else:
        assert v.trace_s2 == 0 and v.counit_of_integral == 0


@pytest.mark.parametrize("H", small_bundle(), ids=lambda H: H.name)
def test_radford_formula_on_bundle(H):
    assert verify_radford_s4(H, integrals(H)).ok


@pytest.mark.parametrize("H", small_bundle(), ids=lambda H: H.name)
def test_trace_formula_on_bundle(H):
    pack = integrals(H)
    rng = random.Random(H.dim)
    for _ in range(5):
        f = random_endomorphism(H, rng)
        assert trace_formula(H, pack, f) == f.trace()


def test_trace_expressions_for_identity_give_dimension():
    for H in (taft_alg(3), group(4)):
        pack = integrals(H)
        I = FieldMatrix.identity(H.field, H.dim)
        assert trace_expressions(H, pack, I) == (H.field.convert(H.dim),) * 3


T5 = taft_alg(5, 2)


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 2 ** 32), st.floats(0.05, 0.6))
def test_trace_formula_random_sparse(seed, density):
    pack = integrals(T5)
    f = random_endomorphism(T5, random.Random(seed), density=density)
    assert set(trace_expressions(T5, pack, f)) == {f.trace()}


@pytest.mark.parametrize("n", [2, 3, 6])
def test_group_likes_of_cyclic_group_and_dual(n):
    H = group(n)
    G = group_likes(H)
    assert sorted(G, key=lambda g: g.coeffs.index(H.field.one)) == [H.basis(i) for i in range(n)]
    assert len(group_likes(dual(H))) == n


def test_group_likes_of_taft_and_double():
    H = taft_alg(3)
    assert set(group_likes(H)) == {H.basis(j) for j in range(3)}
    assert len(group_likes(dual(H))) == 3
    D = taft_double()
    assert len(group_likes(D)) == 9
    assert len(group_likes(dual(D))) == 3


def test_group_likes_need_roots_in_field():
    # characters of Z3 x Z3 need a primitive cube root of unity, which Q(zeta_3) has
    H = group(3, 3)
    assert len(group_likes(dual(H))) == 9


@pytest.mark.parametrize("n", [3, 5])
def test_functional_on_top_power_with_trivial_group_part_is_a_left_integral(n):
    # lambda(x^i a^j) = delta_{i,n-1} delta_{j,0} satisfies sum h_1 lambda(h_2) = lambda(h) 1,
    # the left-sided identity, and fails the right-sided one
    from fdhopf import harpoon_left, harpoon_right
    H = taft_alg(n)
    lam = H.dual_basis((n - 1) * n)
    assert all(harpoon_left(lam, H.basis(k)) == H.one.scale(lam.coeffs[k]) for k in range(H.dim))
    assert any(harpoon_right(H.basis(k), lam) != H.one.scale(lam.coeffs[k]) for k in range(H.dim))
