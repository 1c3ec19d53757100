"""Exact sparse linear algebra over the rationals.

Every cohomology computation in this package reduces to the three
operations here: rank, kernel bases, and quotient bases, all carried out
with `fractions.Fraction` coefficients so that dimensions are exact.

Pivoting is deterministic: columns are processed in increasing order and
the pivot row is the remaining row with the smallest original index, so
bases and quotient representatives are reproducible bit for bit.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import SubspaceNotContained

Rational = Fraction

Vector = list[Fraction]

ZERO = Fraction(0)
ONE = Fraction(1)


def rational(value) -> Fraction:
    """Coerce ints, Fractions, or strings like '3/7' or '-2' to Fraction."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value.strip())
    raise TypeError(f"cannot interpret {value!r} as a rational number")


@dataclass(frozen=True)
class SparseMatrix:
    """Immutable sparse matrix; only nonzero entries are stored."""

    rows: int
    cols: int
    entries: dict  # (row, col) -> Fraction, no zero values

    def __post_init__(self):
        for (r, c), v in self.entries.items():
            if not (0 <= r < self.rows and 0 <= c < self.cols):
                raise ValueError(f"entry ({r},{c}) outside {self.rows}x{self.cols}")
            if v == 0:
                raise ValueError(f"stored zero entry at ({r},{c})")

    @classmethod
    def from_entries(cls, rows: int, cols: int, entries) -> "SparseMatrix":
        clean = {}
        for (r, c), v in dict(entries).items():
            v = rational(v)
            if v:
                clean[(r, c)] = v
        return cls(rows, cols, clean)

    @classmethod
    def from_dense(cls, dense) -> "SparseMatrix":
        rows = len(dense)
        cols = len(dense[0]) if rows else 0
        entries = {}
        for i, row in enumerate(dense):
            for j, v in enumerate(row):
                v = rational(v)
                if v:
                    entries[(i, j)] = v
        return cls(rows, cols, entries)

    @classmethod
    def zero(cls, rows: int, cols: int) -> "SparseMatrix":
        return cls(rows, cols, {})

    @classmethod
    def identity(cls, n: int) -> "SparseMatrix":
        return cls(n, n, {(i, i): ONE for i in range(n)})

    def entry(self, r: int, c: int) -> Fraction:
        return self.entries.get((r, c), ZERO)

    def is_zero(self) -> bool:
        return not self.entries

    def row_dicts(self) -> list:
        """Rows as column->value dicts (fresh copies)."""
        rows = [dict() for _ in range(self.rows)]
        for (r, c), v in self.entries.items():
            rows[r][c] = v
        return rows

    def apply(self, vec: Vector) -> Vector:
        """Matrix-vector product, exact."""
        if len(vec) != self.cols:
            raise ValueError(f"vector length {len(vec)} != cols {self.cols}")
        out = [ZERO] * self.rows
        for (r, c), v in self.entries.items():
            x = vec[c]
            if x:
                out[r] += v * x
        return out

    def compose(self, other: "SparseMatrix") -> "SparseMatrix":
        """self @ other."""
        if self.cols != other.rows:
            raise ValueError("shape mismatch in compose")
        by_row = {}
        for (r, c), v in other.entries.items():
            by_row.setdefault(r, []).append((c, v))
        acc = {}
        for (r, k), v in self.entries.items():
            for c, w in by_row.get(k, ()):
                key = (r, c)
                acc[key] = acc.get(key, ZERO) + v * w
        return SparseMatrix(self.rows, other.cols, {k: v for k, v in acc.items() if v})

    def column(self, c: int) -> Vector:
        out = [ZERO] * self.rows
        for (r, cc), v in self.entries.items():
            if cc == c:
                out[r] = v
        return out

    def columns(self) -> list:
        """All columns as dense vectors, in column order."""
        cols = [[ZERO] * self.rows for _ in range(self.cols)]
        for (r, c), v in self.entries.items():
            cols[c][r] = v
        return cols


def _forward_eliminate(rows: list, cols: int):
    """Row echelon form of dict-rows; returns (pivot_cols, pivot_rows).

    Columns are scanned in increasing order; among remaining rows the one
    with the smallest original index supplies the pivot.
    """
    work = [{c: v for c, v in r.items() if v} for r in rows]
    work = [r for r in work if r]
    pivot_cols = []
    pivot_rows = []
    for col in range(cols):
        pick = None
        for i, r in enumerate(work):
            if r.get(col):
                pick = i
                break
        if pick is None:
            continue
        prow = work.pop(pick)
        inv = ONE / prow[col]
        prow = {c: v * inv for c, v in prow.items()}
        for r in work:
            f = r.get(col)
            if f:
                for c, v in prow.items():
                    nv = r.get(c, ZERO) - f * v
                    if nv:
                        r[c] = nv
                    else:
                        r.pop(c, None)
        work = [r for r in work if r]
        pivot_cols.append(col)
        pivot_rows.append(prow)
    return pivot_cols, pivot_rows


def _back_eliminate(pivot_cols: list, pivot_rows: list):
    """Turn echelon rows into reduced echelon rows (in place)."""
    for i in range(len(pivot_rows) - 1, -1, -1):
        pc = pivot_cols[i]
        prow = pivot_rows[i]
        for j in range(i):
            f = pivot_rows[j].get(pc)
            if f:
                tgt = pivot_rows[j]
                for c, v in prow.items():
                    nv = tgt.get(c, ZERO) - f * v
                    if nv:
                        tgt[c] = nv
                    else:
                        tgt.pop(c, None)


def rank(matrix: SparseMatrix) -> int:
    """Rank over Q by exact elimination."""
    pivot_cols, _ = _forward_eliminate(matrix.row_dicts(), matrix.cols)
    return len(pivot_cols)


def kernel_basis(matrix: SparseMatrix) -> list:
    """Exact basis of the null space, one vector per free column.

    Vectors come out in increasing free-column order; for the zero matrix
    this is the standard basis.
    """
    pivot_cols, pivot_rows = _forward_eliminate(matrix.row_dicts(), matrix.cols)
    _back_eliminate(pivot_cols, pivot_rows)
    pivot_set = set(pivot_cols)
    basis = []
    for free in range(matrix.cols):
        if free in pivot_set:
            continue
        vec = [ZERO] * matrix.cols
        vec[free] = ONE
        for pc, prow in zip(pivot_cols, pivot_rows):
            coeff = prow.get(free)
            if coeff:
                vec[pc] = -coeff
        basis.append(vec)
    return basis


class _TrackedEchelon:
    """Reduced echelon accumulator remembering tagged-row contributions.

    Stored rows satisfy: row == (tagged combination recorded in `tracking`)
    modulo the span of untagged rows. Used to express cocycles in terms of
    chosen quotient representatives modulo a subspace.
    """

    def __init__(self):
        self._rows = []  # (pivot_col, row_dict, tracking_dict) sorted by pivot_col

    def reduce(self, vec: Vector):
        rem = {i: v for i, v in enumerate(vec) if v}
        track = {}
        for pc, row, tr in self._rows:
            f = rem.get(pc)
            if not f:
                continue
            for c, v in row.items():
                nv = rem.get(c, ZERO) - f * v
                if nv:
                    rem[c] = nv
                else:
                    rem.pop(c, None)
            for k, v in tr.items():
                nv = track.get(k, ZERO) + f * v
                if nv:
                    track[k] = nv
                else:
                    track.pop(k, None)
        return rem, track

    def insert(self, vec: Vector, tag) -> bool:
        """Insert a vector; tag is None for subspace rows, else a rep index.

        Returns True when the vector enlarged the span.
        """
        rem, track = self.reduce(vec)
        new_track = {}
        if tag is not None:
            new_track[tag] = ONE
        for k, v in track.items():
            nv = new_track.get(k, ZERO) - v
            if nv:
                new_track[k] = nv
            else:
                new_track.pop(k, None)
        if not rem:
            return False
        pc = min(rem)
        inv = ONE / rem[pc]
        row = {c: v * inv for c, v in rem.items()}
        new_track = {k: v * inv for k, v in new_track.items()}
        for _, other_row, other_tr in self._rows:
            f = other_row.get(pc)
            if not f:
                continue
            for c, v in row.items():
                nv = other_row.get(c, ZERO) - f * v
                if nv:
                    other_row[c] = nv
                else:
                    other_row.pop(c, None)
            for k, v in new_track.items():
                nv = other_tr.get(k, ZERO) - f * v
                if nv:
                    other_tr[k] = nv
                else:
                    other_tr.pop(k, None)
        self._rows.append((pc, row, new_track))
        self._rows.sort(key=lambda item: item[0])
        return True


def linear_expander(vectors: list):
    """Return expand(vec) -> coefficients of vec in the given basis.

    The vectors must be linearly independent; expand raises ValueError on
    vectors outside their span.
    """
    ech = _TrackedEchelon()
    for i, v in enumerate(vectors):
        if not ech.insert(v, i):
            raise ValueError(f"vector {i} is dependent on its predecessors")

    def expand(vec: Vector) -> list:
        rem, track = ech.reduce(vec)
        if rem:
            raise ValueError("vector lies outside the basis span")
        return [track.get(i, ZERO) for i in range(len(vectors))]

    return expand


def solve(matrix: SparseMatrix, rhs: Vector):
    """One exact solution of matrix @ x = rhs, or None when inconsistent.

    Deterministic: free variables are set to zero, so repeated runs give
    the same particular solution.
    """
    if len(rhs) != matrix.rows:
        raise ValueError("rhs length does not match row count")
    rows = matrix.row_dicts()
    aug_col = matrix.cols
    for i, r in enumerate(rows):
        if rhs[i]:
            r[aug_col] = rhs[i]
    pivot_cols, pivot_rows = _forward_eliminate(rows, matrix.cols + 1)
    _back_eliminate(pivot_cols, pivot_rows)
    sol = [ZERO] * matrix.cols
    for pc, prow in zip(pivot_cols, pivot_rows):
        if pc == aug_col:
            return None
        sol[pc] = prow.get(aug_col, ZERO)
    return sol


def quotient_basis(ambient_dim: int, subspace: list, cocycles: list):
    """Representatives of a basis of span(cocycles)/span(subspace).

    Returns (representatives, coordinates) where `representatives` is a
    deterministic subset of the given cocycle vectors and
    `coordinates(vec)` expands any vector of span(cocycles) in that basis
    modulo the subspace.

    Raises SubspaceNotContained when span(subspace) is not inside
    span(cocycles).
    """
    for vec in list(subspace) + list(cocycles):
        if len(vec) != ambient_dim:
            raise ValueError("vector length does not match ambient dimension")
    if subspace:
        big = SparseMatrix.from_dense(list(cocycles) + list(subspace)) if cocycles else SparseMatrix.from_dense(list(subspace))
        small = SparseMatrix.from_dense(list(cocycles)) if cocycles else SparseMatrix.zero(0, ambient_dim)
        if rank(big) != rank(small):
            raise SubspaceNotContained("subspace is not contained in the cocycle span")
    ech = _TrackedEchelon()
    for vec in subspace:
        ech.insert(vec, None)
    representatives = []
    for vec in cocycles:
        if ech.insert(vec, len(representatives)):
            representatives.append(list(vec))

    def coordinates(vec: Vector) -> list:
        rem, track = ech.reduce(vec)
        if rem:
            raise ValueError("vector lies outside span(subspace + representatives)")
        return [track.get(i, ZERO) for i in range(len(representatives))]

    return representatives, coordinates
