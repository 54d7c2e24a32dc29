import random

import pytest
from hypothesis import given, settings, strategies as st

from fdhopf import (
    FinHopfAlgebra,
    dual,
    harpoon_left,
    harpoon_right,
    op_cop,
    solve_antipode,
    verify_axioms,
)
from fdhopf.hopf import NoAntipode, ParentMismatch, check_hopf_map
from fdhopf.linalg import FieldMatrix, SparseTensor3

from helpers import group, small_bundle, taft_alg


@pytest.mark.parametrize("H", small_bundle(), ids=lambda H: H.name)
def test_bundled_algebras_satisfy_axioms(H):
    rep = verify_axioms(H)
    assert rep.ok, rep.failures
    assert len(rep.entries) == 8


def test_solve_antipode_recovers_builtin():
    for H in (group(6), group(3, 3), taft_alg(3), taft_alg(5, 2)):
        assert solve_antipode(H.with_antipode(None)) == H.S


def test_taft_antipode_on_generators():
    H = taft_alg(3)
    x, a = H.basis(3), H.basis(1)
    a_inv = H.basis(2)
    assert a.antipode() == a_inv
    assert x.antipode() == -(x * a_inv)


def test_bialgebra_without_antipode():
    # the monoid {1, 0} under multiplication: group-like basis, not a group
    H0 = group(2)
    fld = H0.field
    one = fld.one
    mult = SparseTensor3(fld, (2, 2, 2), {(0, 0, 0): one, (0, 1, 1): one, (1, 0, 1): one, (1, 1, 1): one})
    B = FinHopfAlgebra("monoid", mult, [one, 0], H0.comult, [one, one])
    rep = verify_axioms(B)
    assert rep.ok
    assert rep.status("antipode-left") == "skipped"
    with pytest.raises(NoAntipode):
        solve_antipode(B)


def test_single_entry_corruption_is_reported_with_witness():
    H = taft_alg(3)
    key = (3, 1, 4)  # x * a = x a
    bad = FinHopfAlgebra(H.name, H.mult.replace(key, H.field.convert(2)), H.unit, H.comult,
                         H.counit, H.antipode)
    rep = verify_axioms(bad)
    assert not rep.ok
    w = rep.failures[0].witness
    assert w is not None and w["residual"] not in ("", "0")


def test_dual_of_group_algebra_is_commutative_and_cocommutative_swap():
    H = group(3)
    D = dual(H)
    assert verify_axioms(D).ok
    # k[G]* is commutative
    for i in range(3):
        for j in range(3):
            assert D.basis(i) * D.basis(j) == D.basis(j) * D.basis(i)
    assert dual(D).same_structure(H)


def test_dual_of_taft_is_a_hopf_algebra():
    H = taft_alg(3)
    assert verify_axioms(dual(H)).ok


@pytest.mark.parametrize("flips", [(True, False), (False, True), (True, True)])
def test_op_cop_variants(flips):
    H = taft_alg(3)
    V = op_cop(H, *flips)
    assert verify_axioms(V).ok
    if flips[0] != flips[1]:
        assert V.S == H.S_inverse


def test_antipode_is_an_isomorphism_to_op_cop():
    H = taft_alg(3)
    assert check_hopf_map(H.S, H, op_cop(H, True, True)) is None
    assert check_hopf_map(FieldMatrix.identity(H.field, 9), H, op_cop(H, True, False)) is not None


def test_parent_mismatch():
    with pytest.raises(ParentMismatch):
        group(2).basis(0) + group(3).basis(0)
    with pytest.raises(ParentMismatch):
        harpoon_left(group(2).dual_basis(0), group(3).basis(0))


def test_functional_convolution_unit():
    H = taft_alg(3)
    eps = H.epsilon
    f = H.functional([H.field.convert(k) for k in range(9)])
    assert eps * f == f and f * eps == f


@st.composite
def vectors(draw, H, functional=False):
    coeffs = [draw(st.integers(-2, 2)) for _ in range(H.dim)]
    return H.functional(coeffs) if functional else H.element(coeffs)


T3 = taft_alg(3)


@settings(max_examples=25, deadline=None)
@given(vectors(T3, True), vectors(T3, True), vectors(T3))
def test_harpoons_are_module_actions(b, c, a):
    # beta -> (gamma -> a) = (beta gamma) -> a  and  (a <- beta) <- gamma = a <- (beta gamma)
    assert harpoon_left(b, harpoon_left(c, a)) == harpoon_left(b * c, a)
    assert harpoon_right(harpoon_right(a, b), c) == harpoon_right(a, b * c)
    assert harpoon_left(T3.epsilon, a) == a


@settings(max_examples=25, deadline=None)
@given(vectors(T3), vectors(T3))
def test_antipode_is_anti_multiplicative(a, b):
    assert (a * b).antipode() == b.antipode() * a.antipode()
    assert (a * b).counit() == a.counit() * b.counit()


@settings(max_examples=25, deadline=None)
@given(vectors(T3), vectors(T3), vectors(T3))
def test_element_ring_axioms(a, b, c):
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert T3.one * a == a == a * T3.one


@pytest.mark.parametrize("H", [group(3), taft_alg(3)], ids=lambda H: H.name)
def test_random_mutations_break_some_axiom(H):
    rng = random.Random(1)
    d = H.dim
    for _ in range(20):
        key = (rng.randrange(d), rng.randrange(d), rng.randrange(d))
        if rng.random() < 0.5:
            cur = H.mult.entries.get(key, H.field.zero)
            bad = FinHopfAlgebra("bad", H.mult.replace(key, cur + 1), H.unit, H.comult, H.counit, H.antipode)
        else:
            cur = H.comult.entries.get(key, H.field.zero)
            bad = FinHopfAlgebra("bad", H.mult, H.unit, H.comult.replace(key, cur + 1), H.counit, H.antipode)
        assert not verify_axioms(bad).ok, key
