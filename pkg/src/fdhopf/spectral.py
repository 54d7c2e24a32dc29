"""Index, the Z_2 x Z_n x Z_n eigenspace grading, the normal form of Delta(Lambda),
and the dimension and trace identities that follow from it.

Grading labels (a, i, j) mean S^2 u = (-1)^a w^i u and u g = w^j u, where
w = zeta_N^(e N / n) for the chosen exponent e (1 by default).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field as dc_field

from .cyclotomic import CycNumber, roots_of_unity
from .hopf import FinHopfAlgebra, HopfElement, check_hopf_map, _acc, _prune
from .linalg import (
    FieldMatrix,
    ProjectionFamily,
    finite_order_eigenprojections,
    inverse,
    joint_refine,
    operator_order,
    rank,
    solve_sparse,
    sparse_kernel,
)
from .report import VerificationReport
from .structure import IntegralPack, group_likes, is_semisimple

__all__ = [
    "EvenIndexUnsupported",
    "NotAHopfProjection",
    "GradingContext",
    "GradingTable",
    "NormalForm",
    "coerce_pack",
    "element_order",
    "functional_order",
    "compute_index",
    "compute_grading",
    "grading_consistency",
    "normal_form",
    "verify_lemma_identities",
    "verify_pq_theorems",
    "verify_biproduct",
    "coinvariants",
]


class EvenIndexUnsupported(ValueError):
    pass


class NotAHopfProjection(ValueError):
    pass


def _is_prime(n: int) -> bool:
    return n >= 2 and all(n % p for p in range(2, math.isqrt(n) + 1))


def _fmt(values) -> str:
    return "[" + ", ".join(str(v) for v in values) + "]"


def element_order(a: HopfElement, cap: int) -> int:
    one = a.parent.one
    p = a
    for m in range(1, cap + 1):
        if p == one:
            return m
        p = p * a
    raise ArithmeticError(f"element order exceeds {cap}")


def functional_order(beta, cap: int) -> int:
    eps = beta.parent.epsilon
    p = beta
    for m in range(1, cap + 1):
        if p == eps:
            return m
        p = p * beta
    raise ArithmeticError(f"functional order exceeds {cap}")


def coerce_pack(pack: IntegralPack, H2: FinHopfAlgebra) -> IntegralPack:
    """The same integrals viewed inside H2, a coercion of pack's algebra."""
    from .cyclotomic import coerce as _c
    N = H2.cyc_order

    def el(v):
        return H2.element([_c(c, N) for c in v.coeffs])

    def fn(v):
        return H2.functional([_c(c, N) for c in v.coeffs])

    return IntegralPack(el(pack.left_integral), fn(pack.right_integral), el(pack.g), fn(pack.alpha),
                        pack.unimodular, pack.dual_unimodular)


@dataclass(frozen=True)
class GradingContext:
    n: int
    omega: CycNumber
    x: int
    order_s4: int
    order_g: int
    order_alpha: int
    omega_exponent: int
    algebra: FinHopfAlgebra = dc_field(repr=False, compare=False)
    pack: IntegralPack = dc_field(repr=False, compare=False)

    def invariant_violations(self) -> list[str]:
        bad = []
        if self.n % self.order_g:
            bad.append("o(g) does not divide n")
        if self.n % self.order_s4:
            bad.append("o(S^4) does not divide n")
        if math.lcm(self.order_g, self.order_alpha) % self.n:
            bad.append("n does not divide lcm(o(g), o(alpha))")
        if self.n != math.lcm(self.order_s4, self.order_g):
            bad.append("n != lcm(o(S^4), o(g))")
        if self.omega ** self.x != self.pack.alpha(self.pack.g):
            bad.append("alpha(g) != omega^x")
        return bad

    def to_dict(self) -> dict:
        return {"n": self.n, "omega_exponent": self.omega_exponent, "x": self.x,
                "order_s4": self.order_s4, "order_g": self.order_g, "order_alpha": self.order_alpha,
                "cyclotomic_order": self.algebra.cyc_order}


def compute_index(H: FinHopfAlgebra, pack: IntegralPack, omega_exponent: int = 1) -> GradingContext:
    """Index n = lcm(o(S^4), o(g)), with o(S^4) searched up to lcm(o(g), o(alpha)).

    The algebra is coerced so that its field contains the 2n-th roots of
    unity (n-th roots when n is even).
    """
    d = H.dim
    og = element_order(pack.g, d)
    oa = functional_order(pack.alpha, d)
    S2 = H.S @ H.S
    os4 = operator_order(S2 @ S2, math.lcm(og, oa))
    n = math.lcm(os4, og)
    if math.gcd(omega_exponent, n) != 1:
        raise ValueError(f"exponent {omega_exponent} does not give a primitive {n}-th root")
    need = 2 * n if n % 2 else n
    if H.cyc_order % need:
        H2 = H.coerce(math.lcm(H.cyc_order, need))
        pack = coerce_pack(pack, H2)
        H = H2
    N = H.cyc_order
    omega = H.field.zeta((N // n) * omega_exponent)
    ag = pack.alpha(pack.g)
    x = next((t for t in range(n) if omega ** t == ag), None)
    if x is None:
        raise ArithmeticError("alpha(g) is not an n-th root of unity")
    return GradingContext(n, omega, x, os4, og, oa, omega_exponent, H, pack)


@dataclass(frozen=True)
class GradingTable:
    n: int
    omega_exponent: int
    x: int
    dims: dict
    projections: dict = dc_field(repr=False, compare=False, default_factory=dict)

    @property
    def total(self) -> int:
        return sum(self.dims.values())

    def __getitem__(self, key) -> int:
        a, i, j = key
        return self.dims[(a % 2, i % self.n, j % self.n)]

    def to_dict(self) -> dict:
        return {"n": self.n, "omega_exponent": self.omega_exponent, "x": self.x,
                "cells": [[a, i, j, v] for (a, i, j), v in sorted(self.dims.items())]}

    def render(self) -> str:
        return render_grid(self.to_dict())


def render_grid(table: dict) -> str:
    n = table["n"]
    dims = {(a, i, j): v for a, i, j, v in table["cells"]}
    width = max(len(str(v)) for v in dims.values()) if dims else 1
    lines = []
    for a in (0, 1):
        lines.append(f"a={a}  (rows i, columns j)")
        for i in range(n):
            lines.append("  " + " ".join(str(dims.get((a, i, j), 0)).rjust(width) for j in range(n)))
    return "\n".join(lines)


def compute_grading(H: FinHopfAlgebra, ctx: GradingContext) -> GradingTable:
    """Joint eigenspace dimensions of S^2 and r(g): u -> u g."""
    n = ctx.n
    if n % 2 == 0:
        raise EvenIndexUnsupported(f"index {n} is even")
    A = ctx.algebra
    fld = A.field
    S2 = A.S @ A.S
    if not ((S2 ** (2 * n))).is_identity():
        raise ArithmeticError("S^(4n) != id")
    Rg = A.right_mult_matrix(ctx.pack.g)
    fam_s = finite_order_eigenprojections(S2, 2 * n)
    fam_g = finite_order_eigenprojections(Rg, n)
    joint = joint_refine(fam_s, fam_g)
    minus_one = fld.convert(-1)
    s_lab = {}
    for a in (0, 1):
        for i in range(n):
            s_lab[(minus_one ** a) * ctx.omega ** i] = (a, i)
    g_lab = {ctx.omega ** j: j for j in range(n)}
    dims, projs = {}, {}
    for (lam, mu), E, r in zip(joint.labels, joint.operators, joint.ranks()):
        a, i = s_lab[lam]
        key = (a, i, g_lab[mu])
        dims[key] = r
        projs[key] = E
    return GradingTable(n, ctx.omega_exponent, ctx.x, dims, projs)


def grading_consistency(ctx: GradingContext, table: GradingTable) -> VerificationReport:
    """Total dimension, and Tr(S^2), Tr(S^(2n)) recomputed from the table."""
    report = VerificationReport()
    A = ctx.algebra
    fld = A.field
    n = ctx.n
    report.add("grading-dimension", table.total == A.dim, f"sum of dims = {table.total}",
               {"residual": str(table.total - A.dim)})
    S2 = A.S @ A.S
    minus_one = fld.convert(-1)
    from_table = fld.zero
    from_table_n = fld.zero
    for (a, i, j), v in table.dims.items():
        if v:
            from_table = from_table + (minus_one ** a) * ctx.omega ** i * v
            from_table_n = from_table_n + (minus_one ** (a * n)) * v
    direct = S2.trace()
    report.add("grading-trace-s2", from_table == direct, f"Tr(S^2) = {direct}",
               {"residual": str(from_table - direct)})
    direct_n = (S2 ** n).trace()
    report.add("grading-trace-s2n", from_table_n == direct_n, f"Tr(S^{2 * n}) = {direct_n}",
               {"residual": str(from_table_n - direct_n)})
    return report


def _shift(label, ctx: GradingContext):
    a, i, j = label
    n = ctx.n
    return (a % 2, (-i - ctx.x) % n, (-j + ctx.x) % n)


@dataclass
class NormalForm:
    pieces: dict
    lemma_values: dict
    report: VerificationReport


def normal_form(H: FinHopfAlgebra, pack: IntegralPack, ctx: GradingContext,
                table: GradingTable | None = None) -> NormalForm:
    """Pieces (E_a (x) E_{-a+x}) Delta(Lambda), with off-pattern vanishing and the
    dimension values lambda(S(v) u) per piece."""
    A, P = ctx.algebra, ctx.pack
    if table is None:
        table = compute_grading(A, ctx)
    fld = A.field
    d = A.dim
    T = FieldMatrix.from_dict(fld, d, d, P.left_integral.comult())
    lam = P.right_integral.coeffs
    Bitems = {}
    for (u, v), terms in A.mp.items():
        acc = fld.zero
        for k, m in terms:
            if lam[k]:
                acc = acc + m * lam[k]
        if acc:
            Bitems[(u, v)] = acc
    B = FieldMatrix.from_dict(fld, d, d, Bitems)
    Q = B.T @ A.S  # Q[p][q] = lambda(S(e_q) e_p)
    report = VerificationReport()
    pieces, values = {}, {}
    off_bad = None
    total = FieldMatrix.zeros(fld, d, d)
    for label in sorted(table.projections):
        E = table.projections[label]
        partner = table.projections[_shift(label, ctx)]
        if E.is_zero():
            piece = FieldMatrix.zeros(fld, d, d)
            row = piece
        else:
            row = E @ T
            piece = row @ partner.T
        pieces[label] = piece
        total = total + piece
        if off_bad is None and row != piece:
            diff = row - piece
            i, j, v = next(diff.items())
            off_bad = {"basis": [i, j], "label": list(label), "residual": str(v)}
        val = fld.zero
        for i, j, v in piece.items():
            q = Q[i, j]
            if q:
                val = val + v * q
        values[label] = val
    if off_bad is None and total != T:
        i, j, v = next((total - T).items())
        off_bad = {"basis": [i, j], "residual": str(v)}
    report.add("lemma-4.1", off_bad is None,
               "" if off_bad is None else "component outside the pattern a (x) (-a+x)", off_bad)
    bad = None
    for label, val in values.items():
        if val != table.dims[label]:
            bad = {"label": list(label), "residual": str(val - table.dims[label])}
            break
    report.add("lemma-4.2", bad is None,
               "lambda(S(v) u) equals every cell dimension" if bad is None else "piece value differs from cell dimension",
               bad)
    report.data["lemma-4.2"] = values
    return NormalForm(pieces, values, report)


def _semisimple_flag(ctx: GradingContext) -> bool:
    return is_semisimple(ctx.algebra, ctx.pack).semisimple


def verify_lemma_identities(H: FinHopfAlgebra, pack: IntegralPack, ctx: GradingContext,
                            table: GradingTable) -> VerificationReport:
    """Weighted dimension sums, the constants d_j, column sums and Tr(S^2p) = p^2 d,
    each reported as skipped when its hypotheses fail."""
    report = VerificationReport()
    A = ctx.algebra
    fld = A.field
    n = ctx.n
    w = ctx.omega
    w_inv = w.inverse()
    minus_one = fld.convert(-1)
    ids = ["lemma-4.3", "lemma-4.4", "lemma-5.1", "lemma-5.2", "lemma-5.3"]
    if _semisimple_flag(ctx):
        for cid in ids:
            report.skip(cid, "H is semisimple")
        return report
    dims = table.dims

    def weighted(cells) -> CycNumber:
        acc = fld.zero
        for a, i, j in cells:
            v = dims[(a, i % n, j % n)]
            if v:
                acc = acc + (minus_one ** a) * (w_inv ** (i % n)) * v
        return acc

    sums = [weighted((a, i, j) for a in (0, 1) for i in range(n)) for j in range(n)]
    bad = next(({"j": j, "residual": str(s)} for j, s in enumerate(sums) if s), None)
    report.add("lemma-4.3", bad is None, f"sums over (a, i) for each j: {_fmt(sums)}", bad)

    if ctx.pack.unimodular:
        sums = [weighted((a, i, l - 2 * i) for a in (0, 1) for i in range(n)) for l in range(n)]
        bad = next(({"l": l, "residual": str(s)} for l, s in enumerate(sums) if s), None)
        report.add("lemma-4.4", bad is None, f"sums over (a, i) for each l: {_fmt(sums)}", bad)
    else:
        report.skip("lemma-4.4", "H is not unimodular")

    if not _is_prime(n) or n == 2:
        for cid in ids[2:]:
            report.skip(cid, f"index {n} is not an odd prime")
        return report
    p = n
    d_j = []
    bad = None
    for j in range(p):
        diffs = [dims[(0, i, j)] - dims[(1, i, j)] for i in range(p)]
        d_j.append(diffs[0])
        if bad is None and len(set(diffs)) != 1:
            bad = {"j": j, "differences": diffs, "residual": str(max(diffs) - min(diffs))}
    report.add("lemma-5.1", bad is None, f"d_j = {d_j}", bad)
    report.data["d_j"] = d_j

    if ctx.pack.dual_unimodular:
        report.skip("lemma-5.2", "H* is unimodular")
    else:
        cols = [sum(dims[(a, i, j)] for a in (0, 1) for i in range(p)) for j in range(p)]
        ok = A.dim % p == 0 and all(c * p == A.dim for c in cols)
        bad = None if ok else {"column_sums": cols, "residual": str(cols[0] * p - A.dim)}
        report.add("lemma-5.2", ok, f"column sums = {cols}, dim H / p = {A.dim // p if A.dim % p == 0 else A.dim / p}", bad)
        report.data["column_sums"] = cols

    if not ctx.pack.unimodular or ctx.pack.dual_unimodular:
        report.skip("lemma-5.3", "needs H unimodular and H* not unimodular")
    else:
        diffs = {dims[(0, i, j)] - dims[(1, i, j)] for i in range(p) for j in range(p)}
        S2 = A.S @ A.S
        tr = (S2 ** p).trace()
        if len(diffs) != 1:
            report.add("lemma-5.3", False, "differences are not constant",
                       {"differences": sorted(diffs), "residual": str(max(diffs) - min(diffs))})
        else:
            d = diffs.pop()
            res = tr - p * p * d
            report.add("lemma-5.3", not res, f"d = {d}, Tr(S^{2 * p}) = {tr}", {"residual": str(res)})
            report.data["d"] = d
        report.data["trace_s2p"] = tr
    return report


def _pq_factor(dim: int):
    for p in range(2, math.isqrt(dim) + 1):
        if dim % p == 0:
            q = dim // p
            return (p, q) if _is_prime(p) and _is_prime(q) else None
    return None


def verify_pq_theorems(H: FinHopfAlgebra, pack: IntegralPack, ctx: GradingContext) -> VerificationReport:
    """Antipode-order, index and trace consequences for dimensions pq and p^2."""
    report = VerificationReport()
    A = ctx.algebra
    ids = ("prop-6.2", "thm-6.4", "thm-6.5", "lemma-6.1")
    pq = _pq_factor(A.dim)
    if pq is None:
        for cid in ids:
            report.skip(cid, f"dim {A.dim} is not a product of two primes")
        return report
    p, q = pq
    if p == 2:
        for cid in ids:
            report.skip(cid, "p not odd")
        return report
    semisimple = _semisimple_flag(ctx)
    S2 = A.S @ A.S
    S4 = S2 @ S2
    if semisimple:
        report.skip("prop-6.2", "H is semisimple")
        report.skip("thm-6.4", "H is semisimple")
    else:
        o4 = operator_order(S4, A.dim)
        ok = o4 == p and ctx.n == p and (S4 ** p).is_identity()
        report.add("prop-6.2", ok, f"o(S^4) = {o4}, index = {ctx.n}",
                   {"order_s4": o4, "index": ctx.n, "residual": str(o4 - p)})
        tr = (S2 ** p).trace()
        ok = tr.is_rational() and tr.to_fraction().denominator == 1 and tr.to_int() % (p * p) == 0 \
            and (tr.to_int() // (p * p)) % 2 == 1
        d = tr.to_fraction() / (p * p) if tr.is_rational() else None
        report.add("thm-6.4", ok, f"Tr(S^{2 * p}) = {tr}, d = {d}", {"residual": str(tr)})
        report.data["trace_s2p"] = tr
    if p == q:
        if semisimple:
            ok = ctx.n == 1 and S2.is_identity()
            report.add("thm-6.5", ok, f"semisimple, index {ctx.n}, S^2 = id", {"index": ctx.n, "residual": "S^2 != id"})
        else:
            o2 = operator_order(S2, A.dim)
            ok = (S2 ** p).is_identity() and o2 == p
            report.add("thm-6.5", ok, f"non-semisimple, S^{2 * p} = id, o(S^2) = {o2}",
                       {"order_s2": o2, "residual": str(o2 - p)})
        report.skip("lemma-6.1", "p = q")
    else:
        report.skip("thm-6.5", "dim is not a prime square")
        from .hopf import dual
        G = len(group_likes(A))
        Gd = len(group_likes(dual(A)))
        ok = (G, Gd) != (p, q)
        report.add("lemma-6.1", ok, f"|G(H)| = {G}, |G(H*)| = {Gd}", {"pattern": [G, Gd], "residual": "forbidden pattern"})
    return report


# -- Hopf projections ----------------------------------------------------------

def coinvariants(H: FinHopfAlgebra, pi: FieldMatrix, B: FinHopfAlgebra) -> list[dict]:
    """Basis of {h : (id (x) pi) Delta(h) = h (x) 1}."""
    d = H.dim
    pcols = pi.columns_sparse()
    rows: dict = {}
    for k in range(d):
        for i, j, c in H.cterms[k]:
            for r, v in pcols[j].items():
                rows.setdefault((i, r), {})
                _acc(rows[(i, r)], k, c * v)
        for r, u in B.unit_vec.items():
            rows.setdefault((k, r), {})
            _acc(rows[(k, r)], k, -u)
    return sparse_kernel([_prune(r) for r in rows.values()], d, H.field)


def verify_biproduct(H: FinHopfAlgebra, projection, pack: IntegralPack) -> VerificationReport:
    """Coinvariant factorization H = R B with S^2 = T (x) id and the trace identities for T."""
    pi, gamma = projection
    B = projection.target
    report = VerificationReport()
    for phi, src, dst, nm in ((pi, H, B, "pi"), (gamma, B, H, "gamma")):
        bad = check_hopf_map(phi, src, dst)
        if bad:
            raise NotAHopfProjection(f"{nm} is not a Hopf map: {bad}")
    if not (pi @ gamma).is_identity():
        raise NotAHopfProjection("pi o gamma != id")
    fld = H.field
    d = H.dim
    og = element_order(pack.g, d)
    oa = functional_order(pack.alpha, d)
    ids = ("lemma-6.3-coinvariants", "lemma-6.3-factorization", "lemma-6.3-s2-invariant",
           "lemma-6.3-s2-tensor", "lemma-6.3-trace", "lemma-2.4")
    if not (og == oa and _is_prime(og) and og != 2):
        for cid in ids:
            report.skip(cid, f"o(g) = {og}, o(alpha) = {oa}: need a common odd prime order")
        return report
    p = og
    R = coinvariants(H, pi, B)
    r, b = len(R), B.dim
    report.data["dim_R"] = r
    report.add(ids[0], r * b == d, f"dim R = {r}, dim B = {b}", {"residual": str(r * b - d)})
    gcols = gamma.columns_sparse()
    cols = [H.mul_vec(rv, gcols[t]) for rv in R for t in range(b)]
    M = FieldMatrix.from_columns(fld, cols, d)
    rk = rank(M)
    bij = rk == d and M.cols == d
    report.add(ids[1], bij, f"rank of R (x) B -> H is {rk}", {"residual": str(d - rk)})
    if not bij:
        for cid in ids[2:]:
            report.skip(cid, "multiplication map is not bijective")
        return report
    S2 = H.S @ H.S
    # coordinates of S^2(R) in the basis R
    Tcols = []
    inv_ok = True
    for rv in R:
        img = S2.apply_sparse(rv)
        eqs = [dict() for _ in range(d)]
        for t, v in enumerate(R):
            for k, x in v.items():
                eqs[k][t] = x
        try:
            sol, free = solve_sparse(eqs, [img.get(k, fld.zero) for k in range(d)], r, fld)
        except ValueError:
            inv_ok = False
            break
        Tcols.append(sol)
    report.add(ids[2], inv_ok, "S^2(R) lies in R" if inv_ok else "S^2 moves R", {"residual": "no solution"})
    if not inv_ok:
        for cid in ids[3:]:
            report.skip(cid, "R is not S^2-invariant")
        return report
    T = FieldMatrix.from_columns(fld, Tcols, r)
    report.data["T"] = T
    lhs = S2 @ M
    rhs = M @ T.kron(FieldMatrix.identity(fld, b))
    diff = lhs - rhs
    w = None
    if not diff.is_zero():
        i, j, v = next(diff.items())
        w = {"basis": [i, j], "residual": str(v)}
    report.add(ids[3], w is None, "S^2 = T (x) id under multiplication", w)
    trT = T.trace()
    Tp = T ** p
    trTp = Tp.trace()
    tr_s2p = (S2 ** p).trace()
    dval = trTp / p
    ok = (not trT) and dval.is_rational() and dval.to_fraction().denominator == 1 and tr_s2p == trTp * b
    report.data.update({"trace_T": trT, "trace_Tp": trTp, "d": dval, "trace_s2p": tr_s2p})
    report.add(ids[4], ok, f"Tr(T) = {trT}, Tr(T^{p}) = {trTp}, Tr(S^{2 * p}) = {tr_s2p}",
               {"residual": str(trT) if trT else str(tr_s2p - trTp * b)})
    if trT or not Tp.is_identity():
        report.skip(ids[5], "needs Tr(T) = 0 and T^p = id")
    else:
        fam = finite_order_eigenprojections(T, p)
        ranks = fam.ranks()
        report.data["eigenspace_dims"] = ranks
        report.add(ids[5], len(set(ranks)) == 1, f"eigenspace dimensions of T: {ranks}",
                   {"ranks": ranks, "residual": str(max(ranks) - min(ranks))})
    return report
