"""Builders for group algebras, Taft algebras and the Drinfeld double.

Basis orderings are fixed so that structure files are reproducible:

* group algebra of Z_{n_1} x ... x Z_{n_r}: mixed radix, first factor most
  significant;
* Taft algebra T(n, e): index i*n + j for x^i a^j;
* Drinfeld double D(H): index k*d + l for e^k ⋈ e_l (dual index major).
"""

from __future__ import annotations

import math
from itertools import product as _cartesian

from .cyclotomic import field
from .hopf import FinHopfAlgebra, _acc, _prune
from .linalg import FieldMatrix, SparseTensor3

__all__ = ["NotPrimitive", "HopfProjection", "group_algebra", "taft", "drinfeld_double", "taft_projection"]


class NotPrimitive(ValueError):
    pass


def group_algebra(factors) -> FinHopfAlgebra:
    """k[Z_{n_1} x ... x Z_{n_r}] over Q(zeta_N), N = lcm of the factors."""
    factors = [int(f) for f in factors]
    if not factors or any(f < 1 for f in factors):
        raise ValueError("invariant factors must be a nonempty list of positive integers")
    order = math.lcm(*factors)
    fld = field(order)
    elems = list(_cartesian(*(range(f) for f in factors)))
    index = {g: t for t, g in enumerate(elems)}
    d = len(elems)
    one = fld.one
    mult = {}
    for s, g in enumerate(elems):
        for t, h in enumerate(elems):
            gh = tuple((a + b) % f for a, b, f in zip(g, h, factors))
            mult[(s, t, index[gh])] = one
    comult = {(s, s, s): one for s in range(d)}
    inv = {(index[tuple((-a) % f for a, f in zip(g, factors))], s): one for s, g in enumerate(elems)}
    unit = [one if t == 0 else fld.zero for t in range(d)]
    name = "k[" + "x".join(f"Z{f}" for f in factors) + "]"
    return FinHopfAlgebra(name, SparseTensor3(fld, (d, d, d), mult), unit,
                          SparseTensor3(fld, (d, d, d), comult), [one] * d,
                          FieldMatrix.from_dict(fld, d, d, inv))


def taft(n: int, xi_exponent: int = 1) -> FinHopfAlgebra:
    """T(xi) with xi = zeta_n^e: a^n = 1, x^n = 0, ax = xi xa.

    Delta(a) = a (x) a, Delta(x) = x (x) a + 1 (x) x, S(a) = a^-1,
    S(x) = -x a^-1.  Defined over Q(zeta_{2n}).
    """
    n = int(n)
    if n < 2:
        raise ValueError("Taft algebras need n >= 2")
    if math.gcd(xi_exponent, n) != 1:
        raise NotPrimitive(f"zeta_{n}^{xi_exponent} is not a primitive {n}-th root of unity")
    N = 2 * n
    fld = field(N)
    xi_pows = [fld.zeta(2 * xi_exponent * k) for k in range(n)]
    d = n * n

    def idx(i, j):
        return i * n + j % n

    mult = {}
    rows = [[() for _ in range(d)] for _ in range(d)]
    for i, j, k, l in _cartesian(range(n), repeat=4):
        if i + k < n:
            c = xi_pows[(j * k) % n]
            mult[(idx(i, j), idx(k, l), idx(i + k, j + l))] = c
            rows[idx(i, j)][idx(k, l)] = ((idx(i + k, j + l), c),)

    def mul(u: dict, v: dict) -> dict:
        out: dict = {}
        for p, a in u.items():
            for q, b in v.items():
                for r, c in rows[p][q]:
                    _acc(out, r, a * b * c)
        return _prune(out)

    def tmul(X: dict, Y: dict) -> dict:
        out: dict = {}
        for (a, b), s in X.items():
            for (c, e), t in Y.items():
                for p, u in rows[a][c]:
                    for q, w in rows[b][e]:
                        _acc(out, (p, q), s * t * u * w)
        return _prune(out)

    one = fld.one
    a_el, x_el = idx(0, 1), idx(1, 0)
    delta_x = {(x_el, a_el): one, (0, x_el): one}
    delta = {}
    for j in range(n):
        delta[(0, j)] = {(idx(0, j), idx(0, j)): one}
        for i in range(1, n):
            delta[(i, j)] = tmul(delta_x, delta[(i - 1, j)])
    comult = {(idx(i, j), p, q): v for (i, j), D in delta.items() for (p, q), v in D.items()}

    # S(x^i a^j) = a^-j (-x a^-1)^i
    s_x = mul({x_el: -one}, {idx(0, n - 1): one})
    S = {}
    for i in range(n):
        for j in range(n):
            v = {idx(0, -j): one}
            for _ in range(i):
                v = mul(v, s_x)
            for r, c in v.items():
                S[(r, idx(i, j))] = c
    unit = [one if t == 0 else fld.zero for t in range(d)]
    counit = [one if t < n else fld.zero for t in range(d)]
    return FinHopfAlgebra(f"taft({n},{xi_exponent})", SparseTensor3(fld, (d, d, d), mult), unit,
                          SparseTensor3(fld, (d, d, d), comult), counit,
                          FieldMatrix.from_dict(fld, d, d, S))


def drinfeld_double(H: FinHopfAlgebra) -> FinHopfAlgebra:
    """D(H) = H*^cop ⋈ H.

    (f ⋈ h)(f' ⋈ h') = sum f (h_1 -> f' <- S^-1(h_3)) ⋈ h_2 h', where
    (h_1 -> f' <- S^-1(h_3))(y) = f'(S^-1(h_3) y h_1).
    """
    d = H.dim
    fld = H.field
    Sinv_cols = H.S_inverse.columns_sparse()
    mrows = H.mrows
    cterms = H.cterms

    def mul(u: dict, v: dict) -> dict:
        return H.mul_vec(u, v)

    # conj[(r, p)][k'] = {t: coefficient of e_k' in S^-1(e_r) e_t e_p}
    conj: dict = {}

    def conj_table(r, p):
        tab = conj.get((r, p))
        if tab is None:
            left = Sinv_cols[r]
            tab = {}
            for t in range(d):
                for kk, c in mul(mul(left, {t: fld.one}), {p: fld.one}).items():
                    tab.setdefault(kk, {})[t] = c
            conj[(r, p)] = tab
        return tab

    # convolution e^k * F: (e^k F)_s = sum_{b} c_s^{k b} F_b
    by_left = [[] for _ in range(d)]
    for s in range(d):
        for a, b, c in cterms[s]:
            by_left[a].append((s, b, c))

    # Delta^2(e_l) as a list of (p, q, r, coeff)
    delta2 = []
    for l in range(d):
        acc: dict = {}
        for p, m, c in cterms[l]:
            for q, r, c2 in cterms[m]:
                _acc(acc, (p, q, r), c * c2)
        delta2.append([(p, q, r, v) for (p, q, r), v in sorted(_prune(acc).items())])

    D = d * d
    mult: dict = {}
    for k, l, k2, l2 in _cartesian(range(d), repeat=4):
        out: dict = {}
        for p, q, r, c in delta2[l]:
            F = conj_table(r, p).get(k2)
            if not F:
                continue
            hh = mrows[q][l2]
            if not hh:
                continue
            fF: dict = {}
            for s, b, cc in by_left[k]:
                fb = F.get(b)
                if fb:
                    _acc(fF, s, cc * fb)
            for s, x in fF.items():
                if not x:
                    continue
                cx = c * x
                for v, y in hh:
                    _acc(out, s * d + v, cx * y)
        for t, val in out.items():
            if val:
                mult[(k * d + l, k2 * d + l2, t)] = val

    # Delta_D(e^k ⋈ e_l) = sum m_ij^k c_l^ab (e^j ⋈ e_a) (x) (e^i ⋈ e_b)
    comult: dict = {}
    for (i, j), terms in H.mp.items():
        for k, m in terms:
            for l in range(d):
                for a, b, c in cterms[l]:
                    _acc(comult, (k * d + l, j * d + a, i * d + b), m * c)
    comult = _prune(comult)

    unit = [H.counit[k] * H.unit[l] for k in range(d) for l in range(d)]
    counit = [H.unit[k] * H.counit[l] for k in range(d) for l in range(d)]
    bare = FinHopfAlgebra(f"double({H.name})", SparseTensor3(fld, (D, D, D), mult), unit,
                          SparseTensor3(fld, (D, D, D), comult), counit)

    # S_D(f ⋈ h) = (eps ⋈ S(h)) (f o S^-1 ⋈ 1)
    S_cols = H.S_columns
    Sinv = H.S_inverse
    eps = {k: e for k, e in enumerate(H.counit) if e}
    one_vec = H.unit_vec
    S_items = {}
    for k in range(d):
        right = {}
        for t in range(d):
            coef = Sinv[k, t]
            if coef:
                for l2, u in one_vec.items():
                    _acc(right, t * d + l2, coef * u)
        for l in range(d):
            left = {}
            for k2, e in eps.items():
                for m, s in S_cols[l].items():
                    _acc(left, k2 * d + m, e * s)
            for t, v in bare.mul_vec(_prune(left), _prune(right)).items():
                S_items[(t, k * d + l)] = v
    return bare.with_antipode(FieldMatrix.from_dict(fld, D, D, S_items))


class HopfProjection:
    """A Hopf projection pi: H -> B with section gamma: B -> H.

    Iterates as (pi, gamma); ``target`` is B.
    """

    def __init__(self, pi: FieldMatrix, gamma: FieldMatrix, target: FinHopfAlgebra):
        self.pi = pi
        self.gamma = gamma
        self.target = target

    def __iter__(self):
        yield self.pi
        yield self.gamma

    def replace_pi(self, pi: FieldMatrix) -> "HopfProjection":
        return HopfProjection(pi, self.gamma, self.target)


def taft_projection(n: int, xi_exponent: int = 1) -> HopfProjection:
    """pi(x^i a^j) = delta_{i,0} a^j onto B = k[a], with gamma the inclusion."""
    H = taft(n, xi_exponent)
    B = group_algebra([n]).coerce(H.cyc_order)
    fld = H.field
    pi = FieldMatrix.from_dict(fld, n, n * n, {(j, j): 1 for j in range(n)})
    gamma = FieldMatrix.from_dict(fld, n * n, n, {(j, j): 1 for j in range(n)})
    return HopfProjection(pi, gamma, B)
