"""Exact integer matrices and lattice computations.

Everything in this module works over Python's arbitrary-precision integers:
Smith normal form with unimodular transforms, integral kernel bases, exact
linear solving over Z, Kronecker products, and the text/JSON matrix formats
used by the command line tools.

The Smith normal form routine is deterministic: at each elimination step the
pivot is a nonzero entry of minimal absolute value in the remaining
submatrix, ties broken by lowest row index then lowest column index. The
same input always yields the same decomposition.
"""

from __future__ import annotations

import json
from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field

from .errors import MatrixParseError
from .vectors import Vector, as_vector


@dataclass(frozen=True)
class IntMatrix:
    """An immutable integer matrix stored as a tuple of row tuples."""

    rows: int
    cols: int
    entries: tuple[Vector, ...]

    def __post_init__(self) -> None:
        if self.rows < 1 or self.cols < 1:
            raise ValueError("matrix must have at least one row and one column")
        if len(self.entries) != self.rows:
            raise ValueError(f"expected {self.rows} rows, got {len(self.entries)}")
        for i, row in enumerate(self.entries):
            if len(row) != self.cols:
                raise ValueError(f"row {i} has length {len(row)}, expected {self.cols}")

    @classmethod
    def from_rows(cls, rows: Iterable[Iterable[int]]) -> "IntMatrix":
        data = tuple(as_vector(r) for r in rows)
        if not data:
            raise ValueError("matrix must have at least one row")
        return cls(len(data), len(data[0]), data)

    @classmethod
    def identity(cls, n: int) -> "IntMatrix":
        return cls.from_rows([[1 if i == j else 0 for j in range(n)] for i in range(n)])

    @classmethod
    def ones(cls, rows: int, cols: int) -> "IntMatrix":
        return cls.from_rows([[1] * cols for _ in range(rows)])

    def entry(self, i: int, j: int) -> int:
        return self.entries[i][j]

    def row(self, i: int) -> Vector:
        return self.entries[i]

    def col(self, j: int) -> Vector:
        return tuple(row[j] for row in self.entries)

    def transpose(self) -> "IntMatrix":
        return IntMatrix.from_rows(zip(*self.entries))

    def mat_vec(self, v: Sequence[int]) -> Vector:
        if len(v) != self.cols:
            raise ValueError(f"vector length {len(v)} does not match {self.cols} columns")
        return tuple(sum(a * x for a, x in zip(row, v)) for row in self.entries)

    def mat_mul(self, other: "IntMatrix") -> "IntMatrix":
        if self.cols != other.rows:
            raise ValueError("inner dimensions do not match")
        cols = other.transpose().entries
        return IntMatrix.from_rows(
            [[sum(a * b for a, b in zip(row, col)) for col in cols] for row in self.entries]
        )

    def row_sums(self) -> Vector:
        """Sum of all rows, as a length-``cols`` vector."""
        return tuple(sum(col) for col in zip(*self.entries))

    # --- serialization ----------------------------------------------------

    def to_text(self) -> str:
        """Render in the plain text format: header line "ROWS COLS", then rows."""
        lines = [f"{self.rows} {self.cols}"]
        lines.extend(" ".join(str(x) for x in row) for row in self.entries)
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "IntMatrix":
        lines = text.split("\n")
        idx = 0
        while idx < len(lines) and not lines[idx].strip():
            idx += 1
        if idx >= len(lines):
            raise MatrixParseError("empty input", line=1)
        header = lines[idx].split()
        if len(header) != 2:
            raise MatrixParseError("header must be 'ROWS COLS'", line=idx + 1)
        try:
            rows, cols = int(header[0]), int(header[1])
        except ValueError:
            raise MatrixParseError("header must contain two integers", line=idx + 1) from None
        if rows < 1 or cols < 1:
            raise MatrixParseError("dimensions must be positive", line=idx + 1)
        data = []
        lineno = idx + 1
        for r in range(rows):
            lineno += 1
            if lineno - 1 >= len(lines):
                raise MatrixParseError(f"missing row {r + 1} of {rows}", line=lineno)
            parts = lines[lineno - 1].split()
            if len(parts) != cols:
                raise MatrixParseError(
                    f"expected {cols} entries, found {len(parts)}", line=lineno
                )
            try:
                data.append([int(p) for p in parts])
            except ValueError:
                raise MatrixParseError("entries must be decimal integers", line=lineno) from None
        for extra in range(lineno, len(lines)):
            if lines[extra].strip():
                raise MatrixParseError("unexpected trailing content", line=extra + 1)
        return cls.from_rows(data)

    def to_json_dict(self) -> dict:
        """JSON form with entries as decimal strings (safe beyond 64 bits)."""
        return {
            "rows": self.rows,
            "cols": self.cols,
            "entries": [[str(x) for x in row] for row in self.entries],
        }

    @classmethod
    def from_json_dict(cls, obj: dict) -> "IntMatrix":
        try:
            rows = int(obj["rows"])
            cols = int(obj["cols"])
            entries = [[int(x) for x in row] for row in obj["entries"]]
        except (KeyError, TypeError, ValueError) as exc:
            raise MatrixParseError(f"bad matrix JSON: {exc}") from None
        m = cls.from_rows(entries)
        if m.rows != rows or m.cols != cols:
            raise MatrixParseError("declared dimensions do not match entries")
        return m

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict(), sort_keys=True)


@dataclass(frozen=True)
class MoveBasis:
    """A finite set of integer move vectors in Z^length.

    ``beta`` is the maximum absolute entry over all vectors (0 when empty).
    A trivial kernel is represented by an empty basis; operations that need
    at least one move check for themselves.
    """

    length: int
    vectors: tuple[Vector, ...]
    beta: int = field(init=False)

    def __post_init__(self) -> None:
        if self.length < 1:
            raise ValueError("ambient dimension must be at least 1")
        for v in self.vectors:
            if len(v) != self.length:
                raise ValueError(f"vector {v} does not have length {self.length}")
        object.__setattr__(
            self, "beta", max((abs(x) for v in self.vectors for x in v), default=0)
        )

    @classmethod
    def from_vectors(cls, vectors: Iterable[Iterable[int]], length: int | None = None) -> "MoveBasis":
        vecs = tuple(as_vector(v) for v in vectors)
        if length is None:
            if not vecs:
                raise ValueError("cannot infer ambient dimension from an empty set")
            length = len(vecs[0])
        return cls(length, vecs)

    def __len__(self) -> int:
        return len(self.vectors)

    def __iter__(self):
        return iter(self.vectors)

    def to_matrix(self) -> IntMatrix:
        """Rows are the move vectors. Requires a nonempty basis."""
        if not self.vectors:
            raise ValueError("empty basis has no matrix form")
        return IntMatrix.from_rows(self.vectors)

    def column_matrix(self) -> IntMatrix:
        """Columns are the move vectors. Requires a nonempty basis."""
        return self.to_matrix().transpose()

    @classmethod
    def from_matrix(cls, m: IntMatrix) -> "MoveBasis":
        return cls(m.cols, m.entries)


@dataclass(frozen=True)
class SmithDecomposition:
    """Unimodular S, T with S * A * T = D, D diagonal with divisibility chain.

    ``left`` is S (k x k), ``right`` is T (r x r), ``diag`` is D (k x r).
    Diagonal entries are nonnegative, each divides the next, and zeros come
    last. ``rank`` counts the nonzero diagonal entries.
    """

    left: IntMatrix
    right: IntMatrix
    diag: IntMatrix

    @property
    def rank(self) -> int:
        m = min(self.diag.rows, self.diag.cols)
        return sum(1 for i in range(m) if self.diag.entry(i, i) != 0)

    @property
    def diagonal(self) -> Vector:
        m = min(self.diag.rows, self.diag.cols)
        return tuple(self.diag.entry(i, i) for i in range(m))


def smith_normal_form(matrix: IntMatrix) -> SmithDecomposition:
    """Compute the Smith normal form with its unimodular transforms.

    Elimination uses only row/column swaps, sign flips, and adding integer
    multiples of one row/column to another, so the transforms have
    determinant +-1. Pivot selection (minimal absolute value, lowest row
    then column index) makes the output deterministic and keeps intermediate
    entries small.
    """
    k, r = matrix.rows, matrix.cols
    d = [list(row) for row in matrix.entries]
    s = [[1 if i == j else 0 for j in range(k)] for i in range(k)]
    t = [[1 if i == j else 0 for j in range(r)] for i in range(r)]

    def swap_rows(i: int, j: int) -> None:
        d[i], d[j] = d[j], d[i]
        s[i], s[j] = s[j], s[i]

    def swap_cols(i: int, j: int) -> None:
        for row in d:
            row[i], row[j] = row[j], row[i]
        for row in t:
            row[i], row[j] = row[j], row[i]

    def add_row(src: int, dst: int, c: int) -> None:
        drow, srow = d[dst], s[dst]
        dsrc, ssrc = d[src], s[src]
        for j in range(r):
            drow[j] += c * dsrc[j]
        for j in range(k):
            srow[j] += c * ssrc[j]

    def add_col(src: int, dst: int, c: int) -> None:
        for row in d:
            row[dst] += c * row[src]
        for row in t:
            row[dst] += c * row[src]

    def negate_row(i: int) -> None:
        d[i] = [-x for x in d[i]]
        s[i] = [-x for x in s[i]]

    def find_pivot(p: int) -> tuple[int, int] | None:
        best = None
        best_abs = None
        for i in range(p, k):
            drow = d[i]
            for j in range(p, r):
                v = drow[j]
                if v != 0:
                    a = abs(v)
                    if best_abs is None or a < best_abs:
                        best_abs = a
                        best = (i, j)
                        if a == 1:
                            return best
        return best

    m = min(k, r)
    p = 0
    while p < m:
        loc = find_pivot(p)
        if loc is None:
            break
        pi, pj = loc
        if pi != p:
            swap_rows(p, pi)
        if pj != p:
            swap_cols(p, pj)
        if d[p][p] < 0:
            negate_row(p)
        piv = d[p][p]

        cleared = True
        for i in range(p + 1, k):
            if d[i][p] != 0:
                add_row(p, i, -(d[i][p] // piv))
                if d[i][p] != 0:
                    cleared = False
        for j in range(p + 1, r):
            if d[p][j] != 0:
                add_col(p, j, -(d[p][j] // piv))
                if d[p][j] != 0:
                    cleared = False
        if not cleared:
            continue

        # Divisibility fix-up: pull a non-divisible entry into row p and
        # keep reducing until the pivot divides the whole lower-right block.
        bad = None
        for i in range(p + 1, k):
            drow = d[i]
            for j in range(p + 1, r):
                if drow[j] % piv != 0:
                    bad = i
                    break
            if bad is not None:
                break
        if bad is not None:
            add_row(bad, p, 1)
            continue
        p += 1

    left = IntMatrix.from_rows(s)
    right = IntMatrix.from_rows(t)
    diag = IntMatrix.from_rows(d)
    return SmithDecomposition(left, right, diag)


def determinant(matrix: IntMatrix) -> int:
    """Exact determinant via fraction-free (Bareiss) elimination."""
    if matrix.rows != matrix.cols:
        raise ValueError("determinant requires a square matrix")
    n = matrix.rows
    m = [list(row) for row in matrix.entries]
    sign = 1
    prev = 1
    for p in range(n):
        if m[p][p] == 0:
            for i in range(p + 1, n):
                if m[i][p] != 0:
                    m[p], m[i] = m[i], m[p]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(p + 1, n):
            for j in range(p + 1, n):
                m[i][j] = (m[i][j] * m[p][p] - m[i][p] * m[p][j]) // prev
            m[i][p] = 0
        prev = m[p][p]
    return sign * m[n - 1][n - 1]


def kernel_basis(matrix: IntMatrix) -> MoveBasis:
    """Integral basis of {v in Z^cols : A v = 0}.

    The basis vectors are the last columns of the right Smith transform,
    one per zero diagonal entry. A trivial kernel yields an empty basis.
    """
    dec = smith_normal_form(matrix)
    rank = dec.rank
    vectors = tuple(dec.right.col(j) for j in range(rank, matrix.cols))
    return MoveBasis(matrix.cols, vectors)


class LatticeSolver:
    """Reusable exact solver for A x = y over the integers.

    Factors the matrix once (Smith normal form), then each solve costs a
    couple of small matrix-vector products. When the system is solvable the
    returned solution sets all free coordinates to zero; it is the unique
    solution whenever the columns are independent.
    """

    def __init__(self, matrix: IntMatrix):
        self.matrix = matrix
        self._dec = smith_normal_form(matrix)
        self.rank = self._dec.rank
        self._diag = self._dec.diagonal

    def solve(self, target: Sequence[int]) -> Vector | None:
        if len(target) != self.matrix.rows:
            raise ValueError(
                f"target length {len(target)} does not match {self.matrix.rows} rows"
            )
        c = self._dec.left.mat_vec(target)
        r = self.matrix.cols
        z = [0] * r
        for i in range(self.rank):
            q, rem = divmod(c[i], self._diag[i])
            if rem != 0:
                return None
            z[i] = q
        for i in range(self.rank, self.matrix.rows):
            if c[i] != 0:
                return None
        return self._dec.right.mat_vec(z)


def solve_integer(matrix: IntMatrix, target: Sequence[int]) -> Vector | None:
    """One-shot integer solve of A x = y; None when no solution exists."""
    return LatticeSolver(matrix).solve(target)


def kronecker(a: IntMatrix, b: IntMatrix) -> IntMatrix:
    """Kronecker product with the usual row-major block layout."""
    rows = []
    for i in range(a.rows):
        arow = a.entries[i]
        for p in range(b.rows):
            brow = b.entries[p]
            rows.append([x * y for x in arow for y in brow])
    return IntMatrix.from_rows(rows)
