"""Integrals, distinguished group-likes, group-like enumeration and trace identities."""

from __future__ import annotations

import random
from dataclasses import dataclass

from .cyclotomic import CycNumber, locate_exact_root, poly_divmod, poly_eval, roots_of_unity
from .hopf import FinHopfAlgebra, HopfElement, HopfFunctional, _acc, _prune, harpoon_left, harpoon_right
from .linalg import FieldMatrix, _Echelon, inverse, sparse_kernel
from .report import VerificationReport

__all__ = [
    "IntegralSpaceNotOneDimensional",
    "NormalizationImpossible",
    "EquivalenceViolation",
    "ExpressionMismatch",
    "IntegralPack",
    "SemisimplicityVerdict",
    "compute_integrals",
    "group_likes",
    "is_semisimple",
    "verify_radford_s4",
    "trace_formula",
    "trace_expressions",
    "random_endomorphism",
]


class IntegralSpaceNotOneDimensional(ValueError):
    pass


class NormalizationImpossible(ValueError):
    pass


class EquivalenceViolation(AssertionError):
    pass


class ExpressionMismatch(AssertionError):
    pass


@dataclass(frozen=True)
class IntegralPack:
    left_integral: HopfElement
    right_integral: HopfFunctional
    g: HopfElement
    alpha: HopfFunctional
    unimodular: bool
    dual_unimodular: bool

    @property
    def H(self) -> FinHopfAlgebra:
        return self.left_integral.parent


def _one_dim_kernel(rows, d, fld, what):
    ker = sparse_kernel(rows, d, fld)
    if len(ker) != 1:
        raise IntegralSpaceNotOneDimensional(f"space of {what} has dimension {len(ker)}")
    return ker[0]


def _left_integral_system(H: FinHopfAlgebra) -> list:
    # e_i Lambda - eps(e_i) Lambda = 0, one equation per (i, output component)
    rows = []
    for i in range(H.dim):
        eq = [dict() for _ in range(H.dim)]
        for j in range(H.dim):
            for k, m in H.mrows[i][j]:
                _acc(eq[k], j, m)
        e = H.counit[i]
        if e:
            for k in range(H.dim):
                _acc(eq[k], k, -e)
        rows.extend(_prune(r) for r in eq)
    return rows


def _right_integral_system(H: FinHopfAlgebra) -> list:
    # sum_ij c_k^ij lambda_i e_j - lambda_k 1 = 0 for every k
    rows = []
    unit = H.unit_vec
    for k in range(H.dim):
        eq: dict = {}
        for i, j, c in H.cterms[k]:
            _acc(eq, (j, i), c)
        for r, u in unit.items():
            _acc(eq, (r, k), -u)
        per: dict = {}
        for (r, i), c in eq.items():
            per.setdefault(r, {})[i] = c
        rows.extend(_prune(v) for v in per.values())
    return [r for r in rows if r]


def compute_integrals(H: FinHopfAlgebra) -> IntegralPack:
    """Left integral Lambda in H, right integral lambda in H*, with lambda(Lambda) = 1.

    Scaling: if eps(Lambda) != 0 then eps(Lambda) = 1; otherwise the first
    nonzero coordinate of lambda is 1.  The remaining factor goes on the
    other integral.
    """
    fld = H.field
    d = H.dim
    Lam = _one_dim_kernel(_left_integral_system(H), d, fld, "left integrals")
    lam = _one_dim_kernel(_right_integral_system(H), d, fld, "right integrals")
    eL = H.counit_vec(Lam)
    if eL:
        inv = eL.inverse()
        Lam = {k: v * inv for k, v in Lam.items()}
    else:
        first = lam[min(lam)]
        inv = first.inverse()
        lam = {k: v * inv for k, v in lam.items()}
    pairing = fld.zero
    for k, v in Lam.items():
        if k in lam:
            pairing = pairing + v * lam[k]
    if not pairing:
        raise NormalizationImpossible("lambda(Lambda) = 0")
    if eL:
        inv = pairing.inverse()
        lam = {k: v * inv for k, v in lam.items()}
    else:
        inv = pairing.inverse()
        Lam = {k: v * inv for k, v in Lam.items()}
    Lam_el = H.element(Lam)
    lam_fn = H.functional(lam)

    # g: lambda -> h = lambda(h) g
    t = min(lam)
    g = harpoon_left(lam_fn, H.basis(t)).scale(lam[t].inverse())
    # alpha: Lambda a = alpha(a) Lambda
    s = min(Lam)
    sinv = Lam[s].inverse()
    alpha = []
    for i in range(d):
        prod = H.mul_vec(Lam, {i: fld.one})
        alpha.append(prod.get(s, fld.zero) * sinv)
    alpha_fn = H.functional(alpha)

    pack = IntegralPack(Lam_el, lam_fn, g, alpha_fn, alpha_fn == H.epsilon, g == H.one)
    bad = check_integral_pack(pack)
    if bad:
        raise IntegralSpaceNotOneDimensional(f"integral invariants fail: {bad}")
    return pack


def check_integral_pack(pack: IntegralPack) -> str | None:
    """Exact re-verification of the defining identities; returns the first violation."""
    H = pack.H
    Lam, lam, g, alpha = pack.left_integral, pack.right_integral, pack.g, pack.alpha
    fld = H.field
    for i in range(H.dim):
        e = H.basis(i)
        if e * Lam != Lam.scale(H.counit[i]):
            return f"h Lambda != eps(h) Lambda at basis {i}"
        if Lam * e != Lam.scale(alpha.coeffs[i]):
            return f"Lambda a != alpha(a) Lambda at basis {i}"
        if harpoon_right(e, lam) != H.one.scale(lam.coeffs[i]):
            return f"lambda is not a right integral at basis {i}"
        if harpoon_left(lam, e) != g.scale(lam.coeffs[i]):
            return f"beta lambda != beta(g) lambda at basis {i}"
    if lam(Lam) != fld.one:
        return "lambda(Lambda) != 1"
    return None


# -- group-like elements ------------------------------------------------------

def _dual_product(H: FinHopfAlgebra, u: dict, v: dict) -> dict:
    # (beta gamma)_k = sum c_k^ij beta_i gamma_j
    out: dict = {}
    for k in range(H.dim):
        acc = None
        for i, j, c in H.cterms[k]:
            a = u.get(i)
            if a is None:
                continue
            b = v.get(j)
            if b is None:
                continue
            term = c * a * b
            acc = term if acc is None else acc + term
        if acc:
            out[k] = acc
    return out


def _commutator_ideal(H: FinHopfAlgebra) -> list[dict]:
    """Basis of the two-sided ideal of H* generated by commutators."""
    d = H.dim
    fld = H.field
    ech = _Echelon(d, fld)
    basis: list[dict] = []
    one = fld.one
    duals = [{i: one} for i in range(d)]
    queue = []
    for i in range(d):
        for j in range(i + 1, d):
            v = _prune({k: x for k, x in _dual_product(H, duals[i], duals[j]).items()})
            w = _dual_product(H, duals[j], duals[i])
            for k, x in w.items():
                _acc(v, k, -x)
            v = _prune(v)
            if v:
                queue.append(v)
    while queue:
        v = queue.pop()
        r = ech.reduce(v)
        if not r:
            continue
        ech.add(r)
        basis.append(v)
        for e in duals:
            for w in (_dual_product(H, e, v), _dual_product(H, v, e)):
                if w:
                    queue.append(w)
    return basis


def _restrict(op_cols, V: list[dict], fld) -> list[list[CycNumber]] | None:
    """Matrix of an invariant subspace restriction: op(V) = V M.  V is column list."""
    b = len(V)
    ech = _Echelon(b + 1, fld)
    # choose pivot coordinates where V is invertible
    coords = sorted({k for v in V for k in v})
    pivots = []
    for k in coords:
        row = ech.reduce({t: v[k] for t, v in enumerate(V) if k in v})
        if row:
            ech.add(row)
            pivots.append(k)
        if len(pivots) == b:
            break
    sub = FieldMatrix.from_dense(fld, [[V[t].get(k, fld.zero) for t in range(b)] for k in pivots])
    inv = inverse(sub)
    images = [op_cols(v) for v in V]
    img = FieldMatrix.from_dense(fld, [[images[t].get(k, fld.zero) for t in range(b)] for k in pivots])
    return (inv @ img).to_dense()


def _charpoly(M: list[list[CycNumber]], fld) -> list[CycNumber]:
    """Faddeev-LeVerrier; coefficients lowest degree first, monic."""
    n = len(M)
    A = FieldMatrix.from_dense(fld, M)
    I = FieldMatrix.identity(fld, n)
    coeffs = [fld.zero] * (n + 1)
    coeffs[n] = fld.one
    Mk = FieldMatrix.zeros(fld, n, n)
    for k in range(1, n + 1):
        Mk = A @ Mk + I.scale(coeffs[n - k + 1])
        coeffs[n - k] = -(A @ Mk).trace() / k
    return coeffs


def _roots_with_multiplicity(p: list[CycNumber], fld) -> list[tuple[CycNumber, int]]:
    found = []
    rest = list(p)
    candidates = [fld.zero] + roots_of_unity(fld.order, fld.order)
    for mu in candidates:
        m = 0
        while len(rest) > 1 and not poly_eval(rest, mu):
            rest = poly_divmod(rest, [-mu, fld.one])[0]
            m += 1
        if m:
            found.append((mu, m))
    if len(rest) > 1:
        for mu in locate_exact_root(rest, order=fld.order):
            m = 0
            while len(rest) > 1 and not poly_eval(rest, mu):
                rest = poly_divmod(rest, [-mu, fld.one])[0]
                m += 1
            if m:
                found.append((mu, m))
    return found


def _split_block(op_cols, V: list[dict], fld):
    """Generalized eigenspaces of op on span(V), for the roots found in the field."""
    b = len(V)
    M = _restrict(op_cols, V, fld)
    out = []
    A = FieldMatrix.from_dense(fld, M)
    for mu, m in _roots_with_multiplicity(_charpoly(M, fld), fld):
        N = A - FieldMatrix.identity(fld, b).scale(mu)
        P = N ** m
        ker = sparse_kernel((dict(P.row_items(i)) for i in range(b)), b, fld)
        block = []
        for kv in ker:
            vec: dict = {}
            for t, c in kv.items():
                for k, x in V[t].items():
                    _acc(vec, k, c * x)
            block.append(_prune(vec))
        out.append((mu, block))
    return out


def group_likes(H: FinHopfAlgebra) -> list[HopfElement]:
    """All group-like elements of H with coordinates in Q(zeta_N).

    Group-likes are the characters of H*; they lie in the annihilator C of
    the commutator ideal of H*, on which the operators a -> a <- e^i commute.
    C is split into joint generalized eigenspaces; each block yields the
    candidate sum_i lambda_i e_i, which is kept only if it is verified
    exactly.  Eigenvalues outside the field are not searched.
    """
    d = H.dim
    fld = H.field
    ideal = _commutator_ideal(H)
    C = sparse_kernel([dict(v) for v in ideal], d, fld)
    blocks = [([], C)] if C else []
    for i in range(d):
        terms = [[] for _ in range(d)]
        for k in range(d):
            for a, b, c in H.cterms[k]:
                if a == i:
                    terms[k].append((b, c))

        def op(v, terms=terms):
            out: dict = {}
            for k, x in v.items():
                for b, c in terms[k]:
                    _acc(out, b, x * c)
            return _prune(out)

        nxt = []
        for labels, V in blocks:
            if len(V) == 1:
                nxt.append((labels, V))
                continue
            for mu, sub in _split_block(op, V, fld):
                nxt.append((labels + [(i, mu)], sub))
        blocks = nxt
    found: list[HopfElement] = []
    for labels, V in blocks:
        if len(V) == 1:
            v = V[0]
            e = H.counit_vec(v)
            if not e:
                continue
            cand = H.element(v).scale(e.inverse())
        else:
            cand = H.element({i: mu for i, mu in labels if mu})
        if _is_group_like(cand) and cand not in found:
            found.append(cand)
    found.sort(key=lambda a: tuple(str(c) for c in a.coeffs) if a != a.parent.one else ())
    _check_group(found)
    return found


def _is_group_like(a: HopfElement) -> bool:
    H = a.parent
    if a.counit() != H.field.one:
        return False
    u = a.sparse
    target = {(i, j): x * y for i, x in u.items() for j, y in u.items()}
    return H.comult_vec(u) == _prune(target)


def _check_group(elems: list[HopfElement]) -> None:
    if not elems:
        return
    H = elems[0].parent
    if H.one not in elems:
        raise AssertionError("group-like set does not contain 1")
    s = set(elems)
    for a in elems:
        for b in elems:
            if a * b not in s:
                raise AssertionError("group-like set not closed under multiplication")
    vecs = [dict(a.sparse) for a in elems]
    ech = _Echelon(H.dim, H.field)
    for v in vecs:
        r = ech.reduce(v)
        if not r:
            raise AssertionError("group-like elements are linearly dependent")
        ech.add(r)


# -- semisimplicity --------------------------------------------------------------

@dataclass(frozen=True)
class SemisimplicityVerdict:
    semisimple: bool
    trace_s2: CycNumber
    counit_of_integral: CycNumber
    s2_is_identity: bool

    def __bool__(self) -> bool:
        return self.semisimple


def is_semisimple(H: FinHopfAlgebra, pack: IntegralPack | None = None) -> SemisimplicityVerdict:
    """Tr(S^2) != 0, cross-checked against eps(Lambda) != 0 and S^2 = id."""
    if pack is None:
        pack = compute_integrals(H)
    S2 = H.S @ H.S
    tr = S2.trace()
    eL = pack.left_integral.counit()
    ident = S2.is_identity()
    verdicts = (bool(tr), bool(eL), ident)
    if len(set(verdicts)) != 1:
        raise EquivalenceViolation(
            f"{H.name}: Tr(S^2)={tr}, eps(Lambda)={eL}, S^2=id is {ident}")
    return SemisimplicityVerdict(verdicts[0], tr, eL, ident)


# -- Radford's formula --------------------------------------------------------------

def verify_radford_s4(H: FinHopfAlgebra, pack: IntegralPack) -> VerificationReport:
    """S^4(h) = g (alpha -> h <- alpha^-1) g^-1 on every basis element."""
    report = VerificationReport()
    S = H.S
    S4 = (S @ S) @ (S @ S)
    g = pack.g
    g_inv = g.antipode()
    alpha = pack.alpha
    alpha_inv = H.functional(S.T.apply(list(alpha.coeffs)))
    if alpha * alpha_inv != H.epsilon:
        report.add("radford-s4", False, "alpha o S is not the inverse of alpha",
                   {"basis": [], "residual": str(alpha * alpha_inv - H.epsilon)})
        return report
    cols = S4.columns_sparse()
    for i in range(H.dim):
        h = H.basis(i)
        rhs = g * harpoon_right(harpoon_left(alpha, h), alpha_inv) * g_inv
        lhs = H.element(cols[i])
        if lhs != rhs:
            diff = (lhs - rhs).sparse
            k = min(diff)
            report.add("radford-s4", False, "S^4 differs from the conjugated harpoon action",
                       {"basis": [i], "component": k, "residual": str(diff[k])})
            return report
    report.add("radford-s4", True)
    return report


# -- trace formula ----------------------------------------------------------------------

def _trace_kernels(H: FinHopfAlgebra, pack: IntegralPack):
    key = ("trace_kernels", id(pack))
    cached = H._cache.get(key)
    if cached is not None:
        return cached
    fld = H.field
    d = H.dim
    T = FieldMatrix.from_dict(fld, d, d, pack.left_integral.comult())
    lam = pack.right_integral.coeffs
    Bitems = {}
    for (u, v), terms in H.mp.items():
        acc = fld.zero
        for k, m in terms:
            if lam[k]:
                acc = acc + m * lam[k]
        if acc:
            Bitems[(u, v)] = acc
    B = FieldMatrix.from_dict(fld, d, d, Bitems)
    St = H.S.T
    K1 = ((T @ St) @ B).T
    K2 = (St @ B) @ T
    K3 = (B @ T) @ St
    H._cache[key] = (K1, K2, K3)
    return K1, K2, K3


def _pair(K: FieldMatrix, F: FieldMatrix) -> CycNumber:
    acc = K.field.zero
    for i, j, v in K.items():
        w = F[i, j]
        if w:
            acc = acc + v * w
    return acc


def trace_expressions(H: FinHopfAlgebra, pack: IntegralPack, f: FieldMatrix) -> tuple:
    """The three contraction formulas for Tr(f), using Delta(Lambda) and lambda:

    sum lambda(S(L_2) f(L_1)), sum lambda(S f(L_2) L_1), sum lambda(f S(L_2) L_1).
    """
    return tuple(_pair(K, f) for K in _trace_kernels(H, pack))


def trace_formula(H: FinHopfAlgebra, pack: IntegralPack, f: FieldMatrix) -> CycNumber:
    """Tr(f) via the integrals; raises ExpressionMismatch unless all agree with the direct trace."""
    if pack.right_integral(pack.left_integral) != H.field.one:
        raise ValueError("integrals are not normalized")
    values = trace_expressions(H, pack, f)
    direct = f.trace()
    if any(v != direct for v in values):
        raise ExpressionMismatch(
            f"trace expressions {[str(v) for v in values]} vs direct trace {direct}")
    return direct


def random_endomorphism(H: FinHopfAlgebra, rng: random.Random, density: float = 0.3,
                        bound: int = 5) -> FieldMatrix:
    """A sparse random matrix with small integer combinations of powers of z."""
    fld = H.field
    items = {}
    for i in range(H.dim):
        for j in range(H.dim):
            if rng.random() < density:
                v = fld.convert(rng.randint(-bound, bound)) + fld.zeta(rng.randrange(fld.order)) * rng.randint(-bound, bound)
                if v:
                    items[(i, j)] = v
    return FieldMatrix.from_dict(fld, H.dim, H.dim, items)
