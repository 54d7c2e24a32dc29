"""Exact matrices over Q(zeta_N), sparse 3-tensors, solving, kernels,
operator orders and eigenprojections of finite-order operators.

Matrices act on column vectors: ``M[i, j]`` is the e_i-coordinate of
``M(e_j)``.  Storage is one dict per row holding only nonzero entries, so
products scale with the number of nonzeros; the dense row-major view is
available through :attr:`FieldMatrix.entries`.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

from .cyclotomic import CyclotomicField, CycNumber, field as _field, roots_of_unity, coerce as _coerce

__all__ = [
    "FieldMatrix",
    "SparseTensor3",
    "ProjectionFamily",
    "DimensionMismatch",
    "InconsistentSystem",
    "OrderExceedsCap",
    "MissingRootsOfUnity",
    "NonCommuting",
    "solve_linear",
    "solve_sparse",
    "kernel_basis",
    "sparse_kernel",
    "rank",
    "operator_order",
    "finite_order_eigenprojections",
    "joint_refine",
]


class DimensionMismatch(ValueError):
    pass


class InconsistentSystem(ValueError):
    """Raised by the solvers; ``certificate`` is y with y^T A = 0 and y^T b != 0 (dense solver only)."""

    def __init__(self, message: str, certificate=None):
        super().__init__(message)
        self.certificate = certificate


class OrderExceedsCap(ArithmeticError):
    pass


class MissingRootsOfUnity(ValueError):
    pass


class NonCommuting(ValueError):
    pass


def _add_into(acc: dict, key, value) -> None:
    cur = acc.get(key)
    acc[key] = value if cur is None else cur + value


def _prune(d: dict) -> dict:
    return {k: v for k, v in d.items() if v}


class FieldMatrix:
    """Immutable rows x cols matrix with entries in one cyclotomic field."""

    __slots__ = ("field", "rows", "cols", "_data")

    def __init__(self, fld: CyclotomicField, rows: int, cols: int, data: Sequence[dict] | None = None):
        self.field = fld
        self.rows = rows
        self.cols = cols
        if data is None:
            data = [{} for _ in range(rows)]
        if len(data) != rows:
            raise DimensionMismatch("row count mismatch")
        self._data = tuple(data)

    # -- constructors ------------------------------------------------------

    @classmethod
    def from_dense(cls, fld: CyclotomicField, dense: Sequence[Sequence]) -> "FieldMatrix":
        rows = len(dense)
        cols = len(dense[0]) if rows else 0
        data = []
        for r in dense:
            if len(r) != cols:
                raise DimensionMismatch("ragged matrix")
            row = {}
            for j, v in enumerate(r):
                v = fld.convert(v)
                if v:
                    row[j] = v
            data.append(row)
        return cls(fld, rows, cols, data)

    @classmethod
    def from_entries(cls, fld: CyclotomicField, rows: int, cols: int, entries: Sequence) -> "FieldMatrix":
        if len(entries) != rows * cols:
            raise DimensionMismatch("entry count must be rows*cols")
        return cls.from_dense(fld, [entries[i * cols:(i + 1) * cols] for i in range(rows)])

    @classmethod
    def from_dict(cls, fld: CyclotomicField, rows: int, cols: int, items: dict) -> "FieldMatrix":
        data = [{} for _ in range(rows)]
        for (i, j), v in items.items():
            v = fld.convert(v)
            if v:
                data[i][j] = v
        return cls(fld, rows, cols, data)

    @classmethod
    def from_columns(cls, fld: CyclotomicField, columns: Sequence[Sequence], rows: int | None = None) -> "FieldMatrix":
        if rows is None:
            rows = len(columns[0])
        data = [{} for _ in range(rows)]
        for j, col in enumerate(columns):
            items = col.items() if isinstance(col, dict) else enumerate(col)
            for i, v in items:
                if v:
                    data[i][j] = fld.convert(v)
        return cls(fld, rows, len(columns), data)

    @classmethod
    def identity(cls, fld: CyclotomicField, n: int) -> "FieldMatrix":
        return cls(fld, n, n, [{i: fld.one} for i in range(n)])

    @classmethod
    def zeros(cls, fld: CyclotomicField, rows: int, cols: int) -> "FieldMatrix":
        return cls(fld, rows, cols)

    @classmethod
    def diagonal(cls, fld: CyclotomicField, values: Sequence) -> "FieldMatrix":
        vals = [fld.convert(v) for v in values]
        return cls(fld, len(vals), len(vals), [{i: v} if v else {} for i, v in enumerate(vals)])

    # -- access ------------------------------------------------------------

    @property
    def shape(self) -> tuple[int, int]:
        return (self.rows, self.cols)

    def __getitem__(self, idx) -> CycNumber:
        i, j = idx
        return self._data[i].get(j, self.field.zero)

    def row_items(self, i: int) -> dict:
        return self._data[i]

    def items(self) -> Iterator[tuple[int, int, CycNumber]]:
        for i, row in enumerate(self._data):
            for j, v in row.items():
                yield i, j, v

    @property
    def entries(self) -> tuple[CycNumber, ...]:
        """Dense row-major entry sequence."""
        z = self.field.zero
        return tuple(row.get(j, z) for row in self._data for j in range(self.cols))

    def to_dense(self) -> list[list[CycNumber]]:
        z = self.field.zero
        return [[row.get(j, z) for j in range(self.cols)] for row in self._data]

    def column(self, j: int) -> list[CycNumber]:
        z = self.field.zero
        return [row.get(j, z) for row in self._data]

    def columns_sparse(self) -> list[dict]:
        out = [{} for _ in range(self.cols)]
        for i, row in enumerate(self._data):
            for j, v in row.items():
                out[j][i] = v
        return out

    def nnz(self) -> int:
        return sum(len(r) for r in self._data)

    # -- algebra -----------------------------------------------------------

    def _check_same(self, other: "FieldMatrix") -> None:
        if self.shape != other.shape:
            raise DimensionMismatch(f"{self.shape} vs {other.shape}")

    def __add__(self, other: "FieldMatrix") -> "FieldMatrix":
        self._check_same(other)
        data = []
        for a, b in zip(self._data, other._data):
            row = dict(a)
            for j, v in b.items():
                _add_into(row, j, v)
            data.append(_prune(row))
        return FieldMatrix(self.field, self.rows, self.cols, data)

    def __neg__(self) -> "FieldMatrix":
        return FieldMatrix(self.field, self.rows, self.cols, [{j: -v for j, v in r.items()} for r in self._data])

    def __sub__(self, other: "FieldMatrix") -> "FieldMatrix":
        return self + (-other)

    def scale(self, c) -> "FieldMatrix":
        c = self.field.convert(c)
        if not c:
            return FieldMatrix.zeros(self.field, self.rows, self.cols)
        return FieldMatrix(self.field, self.rows, self.cols, [{j: v * c for j, v in r.items()} for r in self._data])

    def __mul__(self, c) -> "FieldMatrix":
        if isinstance(c, FieldMatrix):
            return NotImplemented
        return self.scale(c)

    __rmul__ = __mul__

    def __matmul__(self, other):
        if isinstance(other, FieldMatrix):
            if self.cols != other.rows:
                raise DimensionMismatch(f"{self.shape} @ {other.shape}")
            od = other._data
            data = []
            for row in self._data:
                acc: dict = {}
                for k, a in row.items():
                    for j, b in od[k].items():
                        p = a * b
                        cur = acc.get(j)
                        acc[j] = p if cur is None else cur + p
                data.append(_prune(acc))
            return FieldMatrix(self.field, self.rows, other.cols, data)
        return self.apply(other)

    def apply(self, vec: Sequence[CycNumber]) -> list[CycNumber]:
        if len(vec) != self.cols:
            raise DimensionMismatch("vector length")
        z = self.field.zero
        out = []
        for row in self._data:
            acc = z
            for k, a in row.items():
                v = vec[k]
                if v:
                    acc = acc + a * v
            out.append(acc)
        return out

    def apply_sparse(self, vec: dict) -> dict:
        """Image of a sparse vector {index: value} (uses a column index)."""
        cols = self._column_index()
        acc: dict = {}
        for k, v in vec.items():
            for i, a in cols[k]:
                _add_into(acc, i, a * v)
        return _prune(acc)

    def _column_index(self):
        cols = [[] for _ in range(self.cols)]
        for i, row in enumerate(self._data):
            for j, v in row.items():
                cols[j].append((i, v))
        return cols

    @property
    def T(self) -> "FieldMatrix":
        data = [{} for _ in range(self.cols)]
        for i, row in enumerate(self._data):
            for j, v in row.items():
                data[j][i] = v
        return FieldMatrix(self.field, self.cols, self.rows, data)

    def trace(self) -> CycNumber:
        if self.rows != self.cols:
            raise DimensionMismatch("trace of a non-square matrix")
        acc = self.field.zero
        for i, row in enumerate(self._data):
            v = row.get(i)
            if v is not None:
                acc = acc + v
        return acc

    def __pow__(self, k: int) -> "FieldMatrix":
        if self.rows != self.cols:
            raise DimensionMismatch("power of a non-square matrix")
        if k < 0:
            return inverse(self) ** (-k)
        result = FieldMatrix.identity(self.field, self.rows)
        base = self
        while k:
            if k & 1:
                result = result @ base
            k >>= 1
            if k:
                base = base @ base
        return result

    def is_identity(self) -> bool:
        if self.rows != self.cols:
            return False
        one = self.field.one
        for i, row in enumerate(self._data):
            if len(row) != 1 or row.get(i) != one:
                return False
        return True

    def is_zero(self) -> bool:
        return not any(self._data)

    def __eq__(self, other) -> bool:
        if not isinstance(other, FieldMatrix):
            return NotImplemented
        return self.field is other.field and self.shape == other.shape and self._data == other._data

    def __hash__(self):
        return hash((self.shape, tuple(tuple(sorted(r.items())) for r in self._data)))

    def kron(self, other: "FieldMatrix") -> "FieldMatrix":
        """Kronecker product; row index i*other.rows + k."""
        data = []
        for row_a in self._data:
            for row_b in other._data:
                acc = {}
                for j, a in row_a.items():
                    for l, b in row_b.items():
                        acc[j * other.cols + l] = a * b
                data.append(acc)
        return FieldMatrix(self.field, self.rows * other.rows, self.cols * other.cols, data)

    def coerce(self, new_order: int) -> "FieldMatrix":
        g = _field(new_order)
        return FieldMatrix(g, self.rows, self.cols, [{j: _coerce(v, new_order) for j, v in r.items()} for r in self._data])

    def __str__(self) -> str:
        dense = self.to_dense()
        cells = [[str(v) for v in r] for r in dense]
        width = max((len(c) for r in cells for c in r), default=1)
        return "\n".join("[" + ", ".join(c.rjust(width) for c in r) + "]" for r in cells)

    def __repr__(self) -> str:
        return f"FieldMatrix(order={self.field.order}, shape={self.shape}, nnz={self.nnz()})"


class SparseTensor3:
    """Order-3 tensor with only nonzero entries stored, keyed by (i, j, k)."""

    __slots__ = ("field", "dims", "_entries", "_by_pair", "_by_first")

    def __init__(self, fld: CyclotomicField, dims: tuple[int, int, int], entries: dict):
        self.field = fld
        self.dims = tuple(dims)
        clean = {}
        for key, v in entries.items():
            i, j, k = key
            if not (0 <= i < dims[0] and 0 <= j < dims[1] and 0 <= k < dims[2]):
                raise IndexError(f"index {key} outside {dims}")
            v = fld.convert(v)
            if v:
                clean[(i, j, k)] = v
        self._entries = clean
        self._by_pair = None
        self._by_first = None

    @property
    def entries(self) -> dict:
        return self._entries

    def __len__(self) -> int:
        return len(self._entries)

    def __getitem__(self, key) -> CycNumber:
        return self._entries.get(tuple(key), self.field.zero)

    def __eq__(self, other) -> bool:
        if not isinstance(other, SparseTensor3):
            return NotImplemented
        return self.dims == other.dims and self.field is other.field and self._entries == other._entries

    def by_pair(self) -> dict:
        """{(i, j): [(k, value), ...]}"""
        if self._by_pair is None:
            idx: dict = {}
            for (i, j, k), v in sorted(self._entries.items()):
                idx.setdefault((i, j), []).append((k, v))
            self._by_pair = idx
        return self._by_pair

    def by_first(self) -> list:
        """[i] -> [(j, k, value), ...]"""
        if self._by_first is None:
            idx = [[] for _ in range(self.dims[0])]
            for (i, j, k), v in sorted(self._entries.items()):
                idx[i].append((j, k, v))
            self._by_first = idx
        return self._by_first

    def permuted(self, perm: tuple[int, int, int]) -> "SparseTensor3":
        """Tensor T' with T'[key[perm[0]], key[perm[1]], key[perm[2]]] = T[key]."""
        dims = tuple(self.dims[p] for p in perm)
        ents = {tuple(key[p] for p in perm): v for key, v in self._entries.items()}
        return SparseTensor3(self.field, dims, ents)

    def replace(self, key, value) -> "SparseTensor3":
        ents = dict(self._entries)
        ents[tuple(key)] = value
        return SparseTensor3(self.field, self.dims, ents)

    def coerce(self, new_order: int) -> "SparseTensor3":
        g = _field(new_order)
        return SparseTensor3(g, self.dims, {k: _coerce(v, new_order) for k, v in self._entries.items()})


# -- elimination ------------------------------------------------------------

def _bareiss(m: list[list[CycNumber]], ncols_elim: int, fld: CyclotomicField):
    """Fraction-free forward elimination in place; returns pivot (row, col) list.

    Only the first ``ncols_elim`` columns are searched for pivots; trailing
    columns are carried along.
    """
    nrows = len(m)
    width = len(m[0]) if nrows else 0
    prev_inv = fld.one
    pivots = []
    r = 0
    for c in range(ncols_elim):
        if r >= nrows:
            break
        piv = next((i for i in range(r, nrows) if m[i][c]), None)
        if piv is None:
            continue
        if piv != r:
            m[r], m[piv] = m[piv], m[r]
        p = m[r][c]
        prow = m[r]
        for i in range(r + 1, nrows):
            row = m[i]
            q = row[c]
            if q:
                for j in range(c + 1, width):
                    v = p * row[j] - q * prow[j]
                    row[j] = v * prev_inv if v else v
            else:
                for j in range(c + 1, width):
                    if row[j]:
                        row[j] = p * row[j] * prev_inv
            row[c] = fld.zero
        # rows above r are untouched; Bareiss divides by the previous pivot
        prev_inv = p.inverse()
        pivots.append((r, c))
        r += 1
    return pivots


def _as_dense(A: FieldMatrix) -> list[list[CycNumber]]:
    return A.to_dense()


def rank(A: FieldMatrix) -> int:
    m = _as_dense(A)
    if not m or not m[0]:
        return 0
    return len(_bareiss(m, A.cols, A.field))


def solve_linear(A: FieldMatrix, b: Sequence, *, self_check: bool = True) -> list[CycNumber]:
    """Exact solution of A x = b by fraction-free elimination.

    Free variables are set to zero.  Raises :class:`InconsistentSystem` with
    a certificate y (y^T A = 0, y^T b != 0) when there is no solution.
    """
    fld = A.field
    if len(b) != A.rows:
        raise DimensionMismatch(f"rhs length {len(b)} != {A.rows}")
    b = [fld.convert(v) for v in b]
    n, k = A.rows, A.cols
    dense = A.to_dense()
    m = []
    for i in range(n):
        eye = [fld.zero] * n
        eye[i] = fld.one
        m.append(dense[i] + [b[i]] + eye)
    pivots = _bareiss(m, k, fld)
    rk = len(pivots)
    for i in range(rk, n):
        if m[i][k]:
            cert = m[i][k + 1:]
            raise InconsistentSystem("linear system is inconsistent", certificate=cert)
    x = [fld.zero] * k
    for r, c in reversed(pivots):
        row = m[r]
        acc = row[k]
        for j in range(c + 1, k):
            if row[j] and x[j]:
                acc = acc - row[j] * x[j]
        x[c] = acc / row[c]
    if self_check and A.apply(x) != b:
        raise AssertionError("solve_linear self-check failed")
    return x


def inverse(A: FieldMatrix) -> FieldMatrix:
    """Exact inverse via Gauss-Jordan on [A | I]; raises ZeroDivisionError if singular."""
    if A.rows != A.cols:
        raise DimensionMismatch("inverse of a non-square matrix")
    fld = A.field
    n = A.rows
    ech = _Echelon(2 * n, fld, pivot_limit=n)
    for i in range(n):
        row = dict(A.row_items(i))
        row[n + i] = fld.one
        ech.add(row)
    if len(ech.pivots) != n or any(c >= n for c in ech.pivots):
        raise ZeroDivisionError("matrix is singular")
    data = [None] * n
    for c, row in ech.pivots.items():
        data[c] = {j - n: v for j, v in row.items() if j >= n}
    return FieldMatrix(fld, n, n, data)


class _Echelon:
    """Incremental reduced row echelon form over sparse rows."""

    def __init__(self, ncols: int, fld: CyclotomicField, pivot_limit: int | None = None):
        self.ncols = ncols
        self.field = fld
        self.pivot_limit = ncols if pivot_limit is None else pivot_limit
        self.pivots: dict[int, dict] = {}
        self._users: dict[int, set] = {}

    def reduce(self, row: dict) -> dict:
        row = _prune(row)
        for c in [c for c in row if c in self.pivots]:
            coef = row.get(c)
            if not coef:
                continue
            for j, v in self.pivots[c].items():
                nv = row.get(j)
                nv = -(coef * v) if nv is None else nv - coef * v
                if nv:
                    row[j] = nv
                else:
                    row.pop(j, None)
        return row

    def add(self, row: dict) -> dict | None:
        """Insert a row; returns the nonzero residual if it had no admissible pivot."""
        row = self.reduce(row)
        if not row:
            return None
        candidates = [c for c in row if c < self.pivot_limit]
        if not candidates:
            return row
        c = min(candidates)
        inv = row[c].inverse()
        row = {j: v * inv for j, v in row.items()}
        for pc, prow in self.pivots.items():
            coef = prow.get(c)
            if coef:
                for j, v in row.items():
                    nv = prow.get(j)
                    nv = -(coef * v) if nv is None else nv - coef * v
                    if nv:
                        prow[j] = nv
                    else:
                        prow.pop(j, None)
        self.pivots[c] = row
        return None

    def kernel(self) -> list[dict]:
        fld = self.field
        out = []
        for f in range(self.ncols):
            if f in self.pivots:
                continue
            vec = {f: fld.one}
            for c, prow in self.pivots.items():
                v = prow.get(f)
                if v:
                    vec[c] = -v
            out.append(vec)
        return out


def sparse_kernel(rows: Iterable[dict], ncols: int, fld: CyclotomicField) -> list[dict]:
    """Kernel of the matrix with the given sparse rows, as sparse vectors.

    Basis vectors are indexed by free columns in increasing order; each has
    coordinate 1 at its own free column and 0 at the other free columns.
    """
    ech = _Echelon(ncols, fld)
    for r in rows:
        ech.add(r)
    return ech.kernel()


def kernel_basis(A: FieldMatrix) -> list[list[CycNumber]]:
    """Exact basis of the null space of A (empty for injective A)."""
    vecs = sparse_kernel((dict(A.row_items(i)) for i in range(A.rows)), A.cols, A.field)
    z = A.field.zero
    return [[v.get(j, z) for j in range(A.cols)] for v in vecs]


def solve_sparse(rows: Sequence[dict], rhs: Sequence[CycNumber], nvars: int, fld: CyclotomicField):
    """Solve a sparse system; returns (solution dict, number of free variables).

    The system is split into independent blocks (connected components of
    the variable/equation incidence graph) before elimination.  Raises
    :class:`InconsistentSystem` if there is no solution.
    """
    parent = list(range(nvars))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for row in rows:
        keys = list(row)
        for a in keys[1:]:
            ra, rb = find(keys[0]), find(a)
            if ra != rb:
                parent[ra] = rb
    blocks: dict[int, list[int]] = {}
    for idx, row in enumerate(rows):
        if not row:
            if rhs[idx]:
                raise InconsistentSystem("empty equation with nonzero right-hand side")
            continue
        blocks.setdefault(find(next(iter(row))), []).append(idx)
    solution: dict[int, CycNumber] = {}
    free = 0
    covered = set()
    for comp, idxs in blocks.items():
        var_ids = sorted({v for i in idxs for v in rows[i]})
        covered.update(var_ids)
        local = {v: t for t, v in enumerate(var_ids)}
        n = len(var_ids)
        ech = _Echelon(n + 1, fld, pivot_limit=n)
        for i in idxs:
            row = {local[v]: c for v, c in rows[i].items()}
            if rhs[i]:
                row[n] = fld.convert(rhs[i])
            bad = ech.add(row)
            if bad is not None:
                raise InconsistentSystem("sparse system is inconsistent")
        free += n - len(ech.pivots)
        for c, prow in ech.pivots.items():
            v = prow.get(n)
            if v:
                solution[var_ids[c]] = v
    free += nvars - len(covered)
    return solution, free


def operator_order(A: FieldMatrix, cap: int) -> int:
    """Least m >= 1 with A^m = identity, searching m <= cap."""
    if A.rows != A.cols:
        raise DimensionMismatch("operator_order of a non-square matrix")
    P = A
    for m in range(1, cap + 1):
        if P.is_identity():
            return m
        P = P @ A
    raise OrderExceedsCap(f"operator order exceeds {cap}")


@dataclass(frozen=True)
class ProjectionFamily:
    """Idempotents E_i with E_i E_j = 0 (i != j) and sum E_i = id, labelled by eigenvalue tuples."""

    operators: tuple
    labels: tuple

    def __len__(self) -> int:
        return len(self.operators)

    def ranks(self) -> list[int]:
        # trace equals rank for idempotents in characteristic 0
        return [E.trace().to_int() for E in self.operators]

    def by_label(self) -> dict:
        return dict(zip(self.labels, self.operators))

    def check(self) -> bool:
        ops = self.operators
        if not ops:
            return False
        n = ops[0].rows
        total = FieldMatrix.zeros(ops[0].field, n, n)
        for i, E in enumerate(ops):
            total = total + E
            if E.is_zero():
                continue
            for j, F in enumerate(ops):
                prod = E @ F
                if i == j and prod != E:
                    return False
                if i != j and not F.is_zero() and not prod.is_zero():
                    return False
        return total.is_identity() and sum(self.ranks()) == n


def _lagrange_basis(roots: list[CycNumber], idx: int) -> list[CycNumber]:
    fld = roots[0].field
    lam = roots[idx]
    poly = [fld.one]
    denom = fld.one
    for t, mu in enumerate(roots):
        if t == idx:
            continue
        # multiply by (t - mu)
        new = [fld.zero] * (len(poly) + 1)
        for k, c in enumerate(poly):
            new[k + 1] = new[k + 1] + c
            new[k] = new[k] - c * mu
        poly = new
        denom = denom * (lam - mu)
    inv = denom.inverse()
    return [c * inv for c in poly]


def finite_order_eigenprojections(A: FieldMatrix, m: int) -> ProjectionFamily:
    """Projections onto the eigenspaces of A for every m-th root of unity.

    Requires A^m = identity.  E_lambda is the Lagrange polynomial
    prod_{mu != lambda} (A - mu)/(lambda - mu) over the m-th roots of unity,
    evaluated on the powers of A.  Labels are 1-tuples, roots ordered by
    increasing exponent; zero projections are kept.
    """
    fld = A.field
    if fld.order % m:
        raise MissingRootsOfUnity(f"Q(zeta_{fld.order}) lacks primitive {m}-th roots of unity")
    powers = [FieldMatrix.identity(fld, A.rows)]
    for _ in range(m):
        powers.append(powers[-1] @ A)
    if not powers[m].is_identity():
        raise ValueError(f"operator does not satisfy A^{m} = id")
    roots = roots_of_unity(fld.order, m)
    ops = []
    for idx in range(m):
        coeffs = _lagrange_basis(roots, idx)
        E = FieldMatrix.zeros(fld, A.rows, A.cols)
        for k, c in enumerate(coeffs):
            if c:
                E = E + powers[k].scale(c)
        ops.append(E)
    return ProjectionFamily(tuple(ops), tuple((r,) for r in roots))


def joint_refine(P: ProjectionFamily, Q: ProjectionFamily) -> ProjectionFamily:
    """Products P_i Q_j with concatenated labels; all operators must commute."""
    for E in P.operators:
        if E.is_zero():
            continue
        for F in Q.operators:
            if F.is_zero():
                continue
            if E @ F != F @ E:
                raise NonCommuting("projection families do not commute")
    ops = []
    labels = []
    for E, la in zip(P.operators, P.labels):
        for F, lb in zip(Q.operators, Q.labels):
            if E.is_zero() or F.is_zero():
                ops.append(FieldMatrix.zeros(E.field, E.rows, E.cols))
            else:
                ops.append(E @ F)
            labels.append(tuple(la) + tuple(lb))
    return ProjectionFamily(tuple(ops), tuple(labels))
