from math import gcd

import pytest

from fdhopf import drinfeld_double, group_algebra, op_cop, dual, taft, taft_projection, verify_axioms
from fdhopf.constructions import NotPrimitive
from fdhopf.hopf import check_hopf_map
from fdhopf.linalg import FieldMatrix
from fdhopf.spectral import coinvariants

from helpers import group, taft_alg, taft_double, taft_params


def q_binomial(i, k, q, one):
    """Gaussian binomial [i choose k]_q by the Pascal recursion."""
    rows = [[one]]
    for m in range(1, i + 1):
        prev = rows[-1]
        row = []
        for t in range(m + 1):
            left = prev[t - 1] if t >= 1 else 0 * one
            right = prev[t] if t < m else 0 * one
            row.append(left + q ** t * right)
        rows.append(row)
    return rows[i][k]


@pytest.mark.parametrize("n,e", [(2, 1), (3, 1), (3, 2), (5, 2), (7, 3)])
def test_taft_relations(n, e):
    H = taft_alg(n, e)
    xi = H.field.zeta(2 * e)
    a, x = H.basis(1), H.basis(n)
    one = H.one
    p = one
    for _ in range(n):
        p = p * a
    assert p == one
    p = one
    for _ in range(n):
        p = p * x
    assert p.is_zero()
    assert a * x == (x * a).scale(xi)
    assert a.comult() == {(1, 1): H.field.one}


@pytest.mark.parametrize("n,e", [(3, 1), (3, 2), (5, 3)])
def test_taft_comultiplication_matches_q_binomial_formula(n, e):
    # Delta(x^i a^j) = sum_k [i,k]_{xi^-1} xi^{k(i-k)} x^k a^j (x) x^{i-k} a^{k+j}
    H = taft_alg(n, e)
    fld = H.field
    xi = fld.zeta(2 * e)
    q = xi.inverse()
    for i in range(n):
        for j in range(n):
            expect = {}
            for k in range(i + 1):
                c = q_binomial(i, k, q, fld.one) * xi ** (k * (i - k))
                if c:
                    expect[(k * n + j, (i - k) * n + (k + j) % n)] = c
            assert H.basis(i * n + j).comult() == expect


def test_non_primitive_parameter_rejected():
    with pytest.raises(NotPrimitive):
        taft(4, 2)
    with pytest.raises(ValueError):
        taft(1)


def test_group_algebra_basis_order_and_field():
    H = group_algebra([3, 3])
    assert H.name == "k[Z3xZ3]" and H.dim == 9 and H.cyc_order == 3
    # (0,1) * (1,0) = (1,1): mixed radix with the first factor most significant
    assert H.basis(1) * H.basis(3) == H.basis(4)
    assert group_algebra([9]).cyc_order == 9
    assert group_algebra([2, 3]).cyc_order == 6
    with pytest.raises(ValueError):
        group_algebra([])


@pytest.mark.parametrize("n,e", taft_params(), ids=str)
def test_every_taft_algebra_dimension(n, e):
    H = taft_alg(n, e)
    assert H.dim == n * n and H.cyc_order == 2 * n


def _double_inclusions(H):
    D = taft_double() if H is taft_alg(3) else drinfeld_double(H)
    d = H.dim
    inc_h = FieldMatrix.from_dict(H.field, d * d, d,
                                  {(k * d + l, l): H.counit[k] for k in range(d) for l in range(d) if H.counit[k]})
    inc_f = FieldMatrix.from_dict(H.field, d * d, d,
                                  {(k * d + l, k): H.unit[l] for k in range(d) for l in range(d) if H.unit[l]})
    return D, inc_h, inc_f


@pytest.mark.parametrize("H", [group(2), group(3), taft_alg(2)], ids=lambda H: H.name)
def test_double_contains_both_factors(H):
    D, inc_h, inc_f = _double_inclusions(H)
    assert D.dim == H.dim ** 2
    assert verify_axioms(D).ok
    assert check_hopf_map(inc_h, H, D) is None
    assert check_hopf_map(inc_f, op_cop(dual(H), False, True), D) is None


def test_double_of_taft():
    H = taft_alg(3)
    D, inc_h, inc_f = _double_inclusions(H)
    assert D.name == "double(taft(3,1))" and D.dim == 81
    assert verify_axioms(D).ok
    assert check_hopf_map(inc_h, H, D) is None
    assert check_hopf_map(inc_f, op_cop(dual(H), False, True), D) is None


@pytest.mark.parametrize("n,e", [(3, 1), (5, 2)])
def test_taft_projection(n, e):
    H = taft_alg(n, e)
    proj = taft_projection(n, e)
    pi, gamma = proj
    B = proj.target
    assert check_hopf_map(pi, H, B) is None
    assert check_hopf_map(gamma, B, H) is None
    assert (pi @ gamma).is_identity()
    assert len(coinvariants(H, pi, B)) == n
