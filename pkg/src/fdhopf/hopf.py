"""Finite-dimensional Hopf algebras given by structure constants.

Conventions, with basis e_0, ..., e_{d-1}:

* ``mult[i, j, k]``: e_i e_j = sum_k mult[i, j, k] e_k
* ``comult[k, i, j]``: Delta(e_k) = sum_{i,j} comult[k, i, j] e_i (x) e_j
* ``antipode`` is a matrix acting on columns: S(e_j) = sum_i S[i, j] e_i

Functionals on H are covectors in the dual basis; their product is the
convolution (beta gamma)(h) = sum beta(h_1) gamma(h_2).
"""

from __future__ import annotations

from typing import Iterable, Sequence

from .cyclotomic import CyclotomicField, CycNumber, field as _field, coerce as _coerce
from .linalg import (
    FieldMatrix,
    InconsistentSystem,
    SparseTensor3,
    inverse as _matrix_inverse,
    solve_sparse,
)
from .report import VerificationReport

__all__ = [
    "FinHopfAlgebra",
    "HopfElement",
    "HopfFunctional",
    "ParentMismatch",
    "NoAntipode",
    "AntipodeNotInvertible",
    "verify_axioms",
    "solve_antipode",
    "dual",
    "op_cop",
    "harpoon_left",
    "harpoon_right",
    "check_hopf_map",
]


class ParentMismatch(ValueError):
    pass


class NoAntipode(ValueError):
    pass


class AntipodeNotInvertible(ValueError):
    pass


def _acc(d: dict, key, value) -> None:
    cur = d.get(key)
    d[key] = value if cur is None else cur + value


def _prune(d: dict) -> dict:
    return {k: v for k, v in d.items() if v}


class FinHopfAlgebra:
    """Structure constants of a finite-dimensional Hopf algebra (or bialgebra).

    Instances are treated as immutable; derived lookup tables are cached.
    ``antipode`` may be ``None`` until :func:`solve_antipode` supplies it.
    """

    def __init__(self, name: str, mult: SparseTensor3, unit: Sequence, comult: SparseTensor3,
                 counit: Sequence, antipode: FieldMatrix | None = None):
        d = mult.dims[0]
        if d < 1:
            raise ValueError("a Hopf algebra must have positive dimension")
        if mult.dims != (d, d, d) or comult.dims != (d, d, d):
            raise ValueError("structure tensors must be d x d x d")
        if mult.field is not comult.field:
            raise ValueError("structure tensors live over different fields")
        fld = mult.field
        if len(unit) != d or len(counit) != d:
            raise ValueError("unit and counit must have length d")
        if antipode is not None and (antipode.shape != (d, d) or antipode.field is not fld):
            raise ValueError("antipode must be a d x d matrix over the same field")
        self.name = name
        self.dim = d
        self.field: CyclotomicField = fld
        self.mult = mult
        self.comult = comult
        self.unit = tuple(fld.convert(v) for v in unit)
        self.counit = tuple(fld.convert(v) for v in counit)
        self.antipode = antipode
        self._cache: dict = {}

    def __repr__(self) -> str:
        return f"FinHopfAlgebra({self.name!r}, dim={self.dim}, order={self.cyc_order})"

    @property
    def cyc_order(self) -> int:
        return self.field.order

    def same_structure(self, other: "FinHopfAlgebra") -> bool:
        return (self.dim == other.dim and self.field is other.field and self.mult == other.mult
                and self.comult == other.comult and self.unit == other.unit
                and self.counit == other.counit and self.antipode == other.antipode)

    # -- cached lookup tables ---------------------------------------------

    @property
    def mp(self) -> dict:
        """{(i, j): [(k, m_ij^k), ...]}"""
        return self.mult.by_pair()

    @property
    def mrows(self) -> list:
        """mrows[i][j] = [(k, m_ij^k), ...] (empty tuple when e_i e_j = 0)."""
        t = self._cache.get("mrows")
        if t is None:
            mp = self.mp
            t = [[mp.get((i, j), ()) for j in range(self.dim)] for i in range(self.dim)]
            self._cache["mrows"] = t
        return t

    @property
    def cterms(self) -> list:
        """cterms[k] = [(i, j, c_k^ij), ...]"""
        return self.comult.by_first()

    @property
    def unit_vec(self) -> dict:
        return {i: v for i, v in enumerate(self.unit) if v}

    @property
    def S(self) -> FieldMatrix:
        if self.antipode is None:
            raise NoAntipode(f"{self.name} has no antipode yet")
        return self.antipode

    @property
    def S_inverse(self) -> FieldMatrix:
        t = self._cache.get("S_inv")
        if t is None:
            try:
                t = _matrix_inverse(self.S)
            except ZeroDivisionError as exc:
                raise AntipodeNotInvertible(str(exc)) from None
            self._cache["S_inv"] = t
        return t

    @property
    def S_columns(self) -> list:
        t = self._cache.get("S_cols")
        if t is None:
            t = self.S.columns_sparse()
            self._cache["S_cols"] = t
        return t

    # -- sparse-vector primitives -------------------------------------------

    def mul_vec(self, u: dict, v: dict) -> dict:
        rows = self.mrows
        out: dict = {}
        for i, a in u.items():
            ri = rows[i]
            for j, b in v.items():
                terms = ri[j]
                if terms:
                    ab = a * b
                    for k, m in terms:
                        _acc(out, k, ab * m)
        return _prune(out)

    def comult_vec(self, u: dict) -> dict:
        terms = self.cterms
        out: dict = {}
        for k, a in u.items():
            for i, j, c in terms[k]:
                _acc(out, (i, j), a * c)
        return _prune(out)

    def counit_vec(self, u: dict) -> CycNumber:
        acc = self.field.zero
        for k, a in u.items():
            e = self.counit[k]
            if e:
                acc = acc + a * e
        return acc

    def antipode_vec(self, u: dict) -> dict:
        cols = self.S_columns
        out: dict = {}
        for k, a in u.items():
            for i, s in cols[k].items():
                _acc(out, i, a * s)
        return _prune(out)

    def tensor_mul(self, X: dict, Y: dict) -> dict:
        """Product in H (x) H of two-leg tensors {(a, b): coeff}."""
        rows = self.mrows
        out: dict = {}
        for (a, b), x in X.items():
            ra, rb = rows[a], rows[b]
            for (a2, b2), y in Y.items():
                left = ra[a2]
                if not left:
                    continue
                right = rb[b2]
                if not right:
                    continue
                xy = x * y
                for p, u in left:
                    xyu = xy * u
                    for q, w in right:
                        _acc(out, (p, q), xyu * w)
        return _prune(out)

    def left_mult_matrix(self, u) -> FieldMatrix:
        """Matrix of h -> u h."""
        u = _sparse(u)
        cols = [self.mul_vec(u, {j: self.field.one}) for j in range(self.dim)]
        return FieldMatrix.from_columns(self.field, cols, self.dim)

    def right_mult_matrix(self, u) -> FieldMatrix:
        """Matrix of h -> h u."""
        u = _sparse(u)
        cols = [self.mul_vec({j: self.field.one}, u) for j in range(self.dim)]
        return FieldMatrix.from_columns(self.field, cols, self.dim)

    # -- elements ----------------------------------------------------------

    def element(self, coeffs) -> "HopfElement":
        return HopfElement(self, coeffs)

    def functional(self, coeffs) -> "HopfFunctional":
        return HopfFunctional(self, coeffs)

    def basis(self, i: int) -> "HopfElement":
        return HopfElement(self, {i: self.field.one})

    def dual_basis(self, i: int) -> "HopfFunctional":
        return HopfFunctional(self, {i: self.field.one})

    @property
    def one(self) -> "HopfElement":
        return HopfElement(self, self.unit)

    @property
    def epsilon(self) -> "HopfFunctional":
        return HopfFunctional(self, self.counit)

    # -- derived algebras ----------------------------------------------------

    def with_antipode(self, S: FieldMatrix | None, name: str | None = None) -> "FinHopfAlgebra":
        return FinHopfAlgebra(name or self.name, self.mult, self.unit, self.comult, self.counit, S)

    def coerce(self, new_order: int) -> "FinHopfAlgebra":
        """Same structure constants viewed over Q(zeta_new_order)."""
        if new_order == self.cyc_order:
            return self
        S = None if self.antipode is None else self.antipode.coerce(new_order)
        return FinHopfAlgebra(self.name, self.mult.coerce(new_order),
                              [_coerce(v, new_order) for v in self.unit],
                              self.comult.coerce(new_order),
                              [_coerce(v, new_order) for v in self.counit], S)


def _sparse(u) -> dict:
    if isinstance(u, HopfElement) or isinstance(u, HopfFunctional):
        return u.sparse
    if isinstance(u, dict):
        return _prune(u)
    return {i: v for i, v in enumerate(u) if v}


class _Vector:
    __slots__ = ("parent", "coeffs")

    def __init__(self, parent: FinHopfAlgebra, coeffs):
        fld = parent.field
        d = parent.dim
        if isinstance(coeffs, dict):
            dense = [fld.zero] * d
            for i, v in coeffs.items():
                dense[i] = fld.convert(v)
        else:
            dense = [fld.convert(v) for v in coeffs]
            if len(dense) != d:
                raise ValueError(f"expected {d} coefficients, got {len(dense)}")
        self.parent = parent
        self.coeffs = tuple(dense)

    @property
    def sparse(self) -> dict:
        return {i: v for i, v in enumerate(self.coeffs) if v}

    def _same(self, other) -> None:
        if other.parent is not self.parent:
            raise ParentMismatch("operands belong to different algebras")

    def __eq__(self, other) -> bool:
        if type(other) is not type(self):
            return NotImplemented
        return other.parent is self.parent and other.coeffs == self.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __add__(self, other):
        self._same(other)
        return type(self)(self.parent, [a + b for a, b in zip(self.coeffs, other.coeffs)])

    def __sub__(self, other):
        self._same(other)
        return type(self)(self.parent, [a - b for a, b in zip(self.coeffs, other.coeffs)])

    def __neg__(self):
        return type(self)(self.parent, [-a for a in self.coeffs])

    def scale(self, c):
        c = self.parent.field.convert(c)
        return type(self)(self.parent, [a * c for a in self.coeffs])

    def __rmul__(self, c):
        return self.scale(c)

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def __str__(self) -> str:
        s = self.sparse
        if not s:
            return "0"
        sym = "e" if isinstance(self, HopfElement) else "e*"
        return " + ".join(f"({v})*{sym}{i}" for i, v in s.items())


class HopfElement(_Vector):
    """An element of H as a coefficient vector in the structure basis."""

    __slots__ = ()

    def __mul__(self, other):
        if isinstance(other, HopfElement):
            self._same(other)
            return HopfElement(self.parent, self.parent.mul_vec(self.sparse, other.sparse))
        return self.scale(other)

    def comult(self) -> dict:
        return self.parent.comult_vec(self.sparse)

    def counit(self) -> CycNumber:
        return self.parent.counit_vec(self.sparse)

    def antipode(self) -> "HopfElement":
        return HopfElement(self.parent, self.parent.antipode_vec(self.sparse))

    def __repr__(self) -> str:
        return f"HopfElement({self})"


class HopfFunctional(_Vector):
    """A linear functional on H in the dual basis."""

    __slots__ = ()

    def __call__(self, a: HopfElement) -> CycNumber:
        self._same(a)
        acc = self.parent.field.zero
        for x, y in zip(self.coeffs, a.coeffs):
            if x and y:
                acc = acc + x * y
        return acc

    def __mul__(self, other):
        if isinstance(other, HopfFunctional):
            self._same(other)
            H = self.parent
            b, g = self.coeffs, other.coeffs
            out = []
            for k in range(H.dim):
                acc = H.field.zero
                for i, j, c in H.cterms[k]:
                    if b[i] and g[j]:
                        acc = acc + c * b[i] * g[j]
                out.append(acc)
            return HopfFunctional(H, out)
        return self.scale(other)

    def __repr__(self) -> str:
        return f"HopfFunctional({self})"


def harpoon_left(beta: HopfFunctional, a: HopfElement) -> HopfElement:
    """beta -> a = sum a_1 beta(a_2)."""
    if beta.parent is not a.parent:
        raise ParentMismatch("functional and element belong to different algebras")
    H = a.parent
    out: dict = {}
    b = beta.coeffs
    for k, x in a.sparse.items():
        for i, j, c in H.cterms[k]:
            if b[j]:
                _acc(out, i, x * c * b[j])
    return HopfElement(H, _prune(out))


def harpoon_right(a: HopfElement, beta: HopfFunctional) -> HopfElement:
    """a <- beta = sum beta(a_1) a_2."""
    if beta.parent is not a.parent:
        raise ParentMismatch("functional and element belong to different algebras")
    H = a.parent
    out: dict = {}
    b = beta.coeffs
    for k, x in a.sparse.items():
        for i, j, c in H.cterms[k]:
            if b[i]:
                _acc(out, j, x * c * b[i])
    return HopfElement(H, _prune(out))


# -- axiom verification -----------------------------------------------------

def _diff(left: dict, right: dict):
    """First key where two sparse vectors differ, with the residual."""
    if left == right:
        return None
    for key in sorted(set(left) | set(right), key=repr):
        z = left.get(key)
        w = right.get(key)
        if z != w:
            if z is None:
                return key, -w
            if w is None:
                return key, z
            return key, z - w
    return None


def _witness(basis, key, residual) -> dict:
    return {"basis": list(basis), "component": list(key) if isinstance(key, tuple) else key,
            "residual": str(residual)}


def _check_associativity(H: FinHopfAlgebra):
    rows = H.mrows
    d = H.dim
    for i in range(d):
        ri = rows[i]
        for j in range(d):
            pij = ri[j]
            rj = rows[j]
            for k in range(d):
                rjk = rj[k]
                if not pij and not rjk:
                    continue
                if len(pij) == 1 and len(rjk) == 1:
                    # monomial fast path
                    (s, v), (s2, v2) = pij[0], rjk[0]
                    lt, rt = rows[s][k], ri[s2]
                    if not lt and not rt:
                        continue
                    if len(lt) == 1 and len(rt) == 1 and lt[0][0] == rt[0][0] \
                            and v * lt[0][1] == v2 * rt[0][1]:
                        continue
                left: dict = {}
                for s, v in pij:
                    for t, w in rows[s][k]:
                        _acc(left, t, v * w)
                right: dict = {}
                for s, v in rjk:
                    for t, w in ri[s]:
                        _acc(right, t, v * w)
                bad = _diff(_prune(left), _prune(right))
                if bad:
                    return _witness((i, j, k), *bad)
    return None


def _check_unit(H: FinHopfAlgebra):
    u = H.unit_vec
    one = H.field.one
    for j in range(H.dim):
        e = {j: one}
        for side, val in (("left", H.mul_vec(u, e)), ("right", H.mul_vec(e, u))):
            bad = _diff(val, e)
            if bad:
                w = _witness((j,), *bad)
                w["side"] = side
                return w
    return None


def _check_coassociativity(H: FinHopfAlgebra):
    terms = H.cterms
    for k in range(H.dim):
        left: dict = {}
        right: dict = {}
        for s, l, c in terms[k]:
            for p, q, c2 in terms[s]:
                _acc(left, (p, q, l), c * c2)
            for p, q, c2 in terms[l]:
                _acc(right, (s, p, q), c * c2)
        bad = _diff(_prune(left), _prune(right))
        if bad:
            return _witness((k,), *bad)
    return None


def _check_counit(H: FinHopfAlgebra):
    eps = H.counit
    for k in range(H.dim):
        left: dict = {}
        right: dict = {}
        for i, j, c in H.cterms[k]:
            if eps[i]:
                _acc(left, j, c * eps[i])
            if eps[j]:
                _acc(right, i, c * eps[j])
        target = {k: H.field.one}
        for side, val in (("left", left), ("right", right)):
            bad = _diff(_prune(val), target)
            if bad:
                w = _witness((k,), *bad)
                w["side"] = side
                return w
    return None


def _check_comult_multiplicative(H: FinHopfAlgebra):
    d = H.dim
    one = H.field.one
    deltas = [H.comult_vec({k: one}) for k in range(d)]
    rows = H.mrows
    for i in range(d):
        for j in range(d):
            lhs: dict = {}
            for s, v in rows[i][j]:
                for key, c in deltas[s].items():
                    _acc(lhs, key, v * c)
            rhs = H.tensor_mul(deltas[i], deltas[j])
            bad = _diff(_prune(lhs), rhs)
            if bad:
                return _witness((i, j), *bad)
    u = H.unit_vec
    lhs = H.comult_vec(u)
    rhs = {}
    for a, x in u.items():
        for b, y in u.items():
            rhs[(a, b)] = x * y
    bad = _diff(lhs, _prune(rhs))
    if bad:
        w = _witness((), *bad)
        w["unit"] = True
        return w
    return None


def _check_counit_multiplicative(H: FinHopfAlgebra):
    eps = H.counit
    d = H.dim
    rows = H.mrows
    for i in range(d):
        for j in range(d):
            acc = H.field.zero
            for k, v in rows[i][j]:
                if eps[k]:
                    acc = acc + v * eps[k]
            res = acc - eps[i] * eps[j]
            if res:
                return _witness((i, j), (), res)
    res = H.counit_vec(H.unit_vec) - 1
    if res:
        return {"basis": [], "component": "unit", "residual": str(res)}
    return None


def _check_antipode(H: FinHopfAlgebra, side: str):
    cols = H.S_columns
    rows = H.mrows
    u = H.unit_vec
    for k in range(H.dim):
        acc: dict = {}
        for i, l, c in H.cterms[k]:
            if side == "left":
                # S(e_i) e_l
                for p, s in cols[i].items():
                    cs = c * s
                    for t, m in rows[p][l]:
                        _acc(acc, t, cs * m)
            else:
                # e_i S(e_l)
                for p, s in cols[l].items():
                    cs = c * s
                    for t, m in rows[i][p]:
                        _acc(acc, t, cs * m)
        eps = H.counit[k]
        target = {t: v * eps for t, v in u.items()} if eps else {}
        bad = _diff(_prune(acc), _prune(target))
        if bad:
            return _witness((k,), *bad)
    return None


AXIOM_CHECKS = (
    ("associativity", _check_associativity),
    ("unit", _check_unit),
    ("coassociativity", _check_coassociativity),
    ("counit", _check_counit),
    ("comult-algebra-map", _check_comult_multiplicative),
    ("counit-algebra-map", _check_counit_multiplicative),
)


def verify_axioms(H: FinHopfAlgebra) -> VerificationReport:
    """Exact bialgebra and antipode axioms on basis elements, one entry per axiom."""
    report = VerificationReport()
    for check_id, fn in AXIOM_CHECKS:
        w = fn(H)
        report.add(check_id, w is None, "" if w is None else "residual on basis witness", w)
    if H.antipode is None:
        report.skip("antipode-left", "no antipode present")
        report.skip("antipode-right", "no antipode present")
    else:
        for side in ("left", "right"):
            w = _check_antipode(H, side)
            report.add(f"antipode-{side}", w is None, "" if w is None else "convolution identity fails", w)
    return report


def solve_antipode(H: FinHopfAlgebra) -> FieldMatrix:
    """The convolution inverse of id_H.

    Solves sum S(a_1) a_2 = eps(a) 1 over all basis a (d^2 unknowns), then
    checks sum a_1 S(a_2) = eps(a) 1.  Raises :class:`NoAntipode` if either
    fails.
    """
    d = H.dim
    fld = H.field
    rows = H.mrows
    eqs = [dict() for _ in range(d * d)]
    for k in range(d):
        for i, l, c in H.cterms[k]:
            for p in range(d):
                for r, m in rows[p][l]:
                    _acc(eqs[k * d + r], i * d + p, c * m)
    eqs = [_prune(e) for e in eqs]
    rhs = [H.counit[k] * H.unit[r] for k in range(d) for r in range(d)]
    try:
        sol, free = solve_sparse(eqs, rhs, d * d, fld)
    except InconsistentSystem:
        raise NoAntipode(f"{H.name}: left antipode equations are inconsistent") from None
    if free:
        raise NoAntipode(f"{H.name}: left antipode equations are underdetermined")
    items = {(var % d, var // d): v for var, v in sol.items()}
    S = FieldMatrix.from_dict(fld, d, d, items)
    if _check_antipode(H.with_antipode(S), "right") is not None:
        raise NoAntipode(f"{H.name}: left convolution inverse is not a right inverse")
    return S


# -- derived Hopf algebras --------------------------------------------------

def dual(H: FinHopfAlgebra, name: str | None = None) -> FinHopfAlgebra:
    """H* in the dual basis: multiplication and comultiplication transposed."""
    mult = SparseTensor3(H.field, (H.dim,) * 3, {(i, j, k): v for (k, i, j), v in H.comult.entries.items()})
    comult = SparseTensor3(H.field, (H.dim,) * 3, {(k, i, j): v for (i, j, k), v in H.mult.entries.items()})
    S = None if H.antipode is None else H.antipode.T
    return FinHopfAlgebra(name or f"dual({H.name})", mult, H.counit, comult, H.unit, S)


def op_cop(H: FinHopfAlgebra, flip_mult: bool, flip_comult: bool, name: str | None = None) -> FinHopfAlgebra:
    """Opposite multiplication and/or co-opposite comultiplication.

    When exactly one structure is flipped the antipode becomes S^-1.
    """
    mult = H.mult.permuted((1, 0, 2)) if flip_mult else H.mult
    comult = H.comult.permuted((0, 2, 1)) if flip_comult else H.comult
    S = H.antipode
    if S is not None and flip_mult != flip_comult:
        S = H.S_inverse
    tag = ("op" if flip_mult else "") + ("cop" if flip_comult else "")
    return FinHopfAlgebra(name or (f"{H.name}^{tag}" if tag else H.name), mult, H.unit, comult, H.counit, S)


def check_hopf_map(phi: FieldMatrix, A: FinHopfAlgebra, B: FinHopfAlgebra) -> str | None:
    """First failing Hopf-map identity for phi: A -> B (a B.dim x A.dim matrix), or None."""
    if phi.shape != (B.dim, A.dim):
        return f"shape {phi.shape} does not match {B.dim} x {A.dim}"
    cols = phi.columns_sparse()
    if phi.apply_sparse(A.unit_vec) != B.unit_vec:
        return "phi(1) != 1"
    for k in range(A.dim):
        if B.counit_vec(cols[k]) != A.counit[k]:
            return f"eps(phi(e_{k})) != eps(e_{k})"
    for i in range(A.dim):
        for j in range(A.dim):
            lhs = phi.apply_sparse(dict(A.mrows[i][j]))
            if lhs != B.mul_vec(cols[i], cols[j]):
                return f"phi(e_{i} e_{j}) != phi(e_{i}) phi(e_{j})"
    for k in range(A.dim):
        lhs: dict = {}
        for i, j, c in A.cterms[k]:
            for p, x in cols[i].items():
                for q, y in cols[j].items():
                    _acc(lhs, (p, q), c * x * y)
        if _prune(lhs) != B.comult_vec(cols[k]):
            return f"(phi (x) phi) Delta(e_{k}) != Delta(phi(e_{k}))"
    return None
