"""Exact integer matrix arithmetic.

Everything in this package ultimately rests on the routines here: exact
determinants (Bareiss fraction-free elimination), Smith normal form with
unimodular transform witnesses, congruence transforms S^T A S, positive
definiteness via leading principal minors, and the sum of squared maximal
minors of a tall matrix.

All matrices are immutable (tuples of tuples of Python ints), so values can
be shared freely between threads; every operation is a pure function.  No
floating point is used anywhere.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations


class DimensionError(ValueError):
    """Operands have incompatible or unsupported dimensions."""


class DegenerateInputError(ValueError):
    """Input is structurally unusable (e.g. fewer rows than columns)."""


class MatrixFormatError(ValueError):
    """Malformed matrix text."""


Row = tuple[int, ...]


def _freeze(rows) -> tuple[Row, ...]:
    return tuple(tuple(int(x) for x in row) for row in rows)


@dataclass(frozen=True)
class IntMatrix:
    """Dense integer matrix with arbitrary-precision entries, row major."""

    data: tuple[Row, ...]

    def __post_init__(self):
        if self.data:
            w = len(self.data[0])
            if any(len(r) != w for r in self.data):
                raise DimensionError("ragged rows")

    @staticmethod
    def from_rows(rows) -> "IntMatrix":
        return IntMatrix(_freeze(rows))

    @staticmethod
    def identity(n: int) -> "IntMatrix":
        return IntMatrix(tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n)))

    @property
    def rows(self) -> int:
        return len(self.data)

    @property
    def cols(self) -> int:
        return len(self.data[0]) if self.data else 0

    @property
    def is_square(self) -> bool:
        return self.rows == self.cols

    def transpose(self) -> "IntMatrix":
        return IntMatrix(tuple(zip(*self.data)) if self.data else ())

    def mul(self, other: "IntMatrix") -> "IntMatrix":
        if self.cols != other.rows:
            raise DimensionError(f"cannot multiply {self.rows}x{self.cols} by {other.rows}x{other.cols}")
        bt = other.transpose().data
        return IntMatrix(
            tuple(tuple(sum(a * b for a, b in zip(row, col)) for col in bt) for row in self.data)
        )

    def __getitem__(self, ij: tuple[int, int]) -> int:
        return self.data[ij[0]][ij[1]]

    def to_lists(self) -> list[list[int]]:
        return [list(r) for r in self.data]


@dataclass(frozen=True)
class SymIntMatrix:
    """Symmetric integer matrix; entry (i,j) always equals (j,i)."""

    data: tuple[Row, ...]

    def __post_init__(self):
        n = len(self.data)
        if any(len(r) != n for r in self.data):
            raise DimensionError("symmetric matrix must be square")
        for i in range(n):
            for j in range(i):
                if self.data[i][j] != self.data[j][i]:
                    raise DimensionError(f"asymmetric entries at ({i},{j})")

    @staticmethod
    def from_rows(rows) -> "SymIntMatrix":
        return SymIntMatrix(_freeze(rows))

    @staticmethod
    def identity(n: int) -> "SymIntMatrix":
        return SymIntMatrix(IntMatrix.identity(n).data)

    @staticmethod
    def diagonal(entries) -> "SymIntMatrix":
        n = len(entries)
        return SymIntMatrix(tuple(tuple(entries[i] if i == j else 0 for j in range(n)) for i in range(n)))

    @property
    def dim(self) -> int:
        return len(self.data)

    def __getitem__(self, ij: tuple[int, int]) -> int:
        return self.data[ij[0]][ij[1]]

    def as_int_matrix(self) -> IntMatrix:
        return IntMatrix(self.data)

    def to_lists(self) -> list[list[int]]:
        return [list(r) for r in self.data]


@dataclass(frozen=True)
class SmithForm:
    """Diagonalization left*A*right = diag(divisors) with unimodular transforms.

    The divisors are nonnegative, each divides the next, and zeros trail.
    """

    diagonal: tuple[int, ...]
    left: IntMatrix
    right: IntMatrix


def determinant(a: IntMatrix) -> int:
    """Exact determinant by Bareiss fraction-free elimination."""
    if not a.is_square:
        raise DimensionError("determinant of a non-square matrix")
    n = a.rows
    if n == 0:
        return 1
    m = a.to_lists()
    sign = 1
    prev = 1
    for k in range(n - 1):
        if m[k][k] == 0:
            for i in range(k + 1, n):
                if m[i][k] != 0:
                    m[k], m[i] = m[i], m[k]
                    sign = -sign
                    break
            else:
                return 0
        pivot = m[k][k]
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * pivot - m[i][k] * m[k][j]) // prev
            m[i][k] = 0
        prev = pivot
    return sign * m[n - 1][n - 1]


def leading_principal_minors(a: SymIntMatrix) -> list[int]:
    """Determinants of the leading k x k blocks, k = 1..dim."""
    return [determinant(IntMatrix.from_rows([row[: k + 1] for row in a.data[: k + 1]]))
            for k in range(a.dim)]


def is_positive_definite(a: SymIntMatrix) -> bool:
    """Sylvester criterion with exact integer minors."""
    n = a.dim
    # Bareiss pivots are exactly the leading principal minors, so a single
    # elimination pass decides the sign of all of them.
    m = a.to_lists()
    prev = 1
    for k in range(n):
        if m[k][k] <= 0:
            return False
        pivot = m[k][k]
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * pivot - m[i][k] * m[k][j]) // prev
            m[i][k] = 0
        prev = pivot
    return True


def congruence(a: SymIntMatrix, s: IntMatrix) -> SymIntMatrix:
    """Return S^T A S."""
    if not s.is_square or s.rows != a.dim:
        raise DimensionError("transform dimension does not match matrix")
    st = s.transpose()
    prod = st.mul(a.as_int_matrix()).mul(s)
    return SymIntMatrix(prod.data)


def minor_sum(q: IntMatrix, m: int) -> int:
    """Sum of det(Q_V)^2 over all m-row subsets V of Q (Q has m columns).

    Computed literally from the definition, by enumerating row subsets; this
    equals det(Q^T Q) and the equality is exercised by tests against the
    Bareiss determinant.
    """
    if q.cols != m:
        raise DimensionError(f"expected exactly {m} columns, found {q.cols}")
    if q.rows < m:
        raise DegenerateInputError("fewer rows than columns")
    total = 0
    for subset in combinations(range(q.rows), m):
        d = determinant(IntMatrix.from_rows([q.data[i] for i in subset]))
        total += d * d
    return total


def _smith_reduce(m: list[list[int]], left: list[list[int]], right: list[list[int]]) -> None:
    """In-place Smith reduction of m, accumulating row ops in left, col ops in right."""
    rows, cols = len(m), len(m[0]) if m else 0
    t = 0
    while t < min(rows, cols):
        # Pick the nonzero entry of minimal magnitude in the remaining block.
        best = None
        for i in range(t, rows):
            for j in range(t, cols):
                if m[i][j] != 0 and (best is None or abs(m[i][j]) < abs(m[best[0]][best[1]])):
                    best = (i, j)
        if best is None:
            break
        bi, bj = best
        if bi != t:
            m[t], m[bi] = m[bi], m[t]
            left[t], left[bi] = left[bi], left[t]
        if bj != t:
            for row in m:
                row[t], row[bj] = row[bj], row[t]
            for row in right:
                row[t], row[bj] = row[bj], row[t]
        pivot = m[t][t]
        dirty = False
        for i in range(t + 1, rows):
            qv = m[i][t] // pivot
            if qv:
                for j in range(t, cols):
                    m[i][j] -= qv * m[t][j]
                for j in range(rows):
                    left[i][j] -= qv * left[t][j]
            if m[i][t]:
                dirty = True
        for j in range(t + 1, cols):
            qv = m[t][j] // pivot
            if qv:
                for i in range(rows):
                    m[i][j] -= qv * m[i][t]
                for i in range(cols):
                    right[i][j] -= qv * right[i][t]
            if m[t][j]:
                dirty = True
        if dirty:
            continue  # remainders left; rerun with a smaller pivot
        # Pivot must divide every entry of the rest of the block.
        offender = None
        for i in range(t + 1, rows):
            for j in range(t + 1, cols):
                if m[i][j] % pivot:
                    offender = i
                    break
            if offender is not None:
                break
        if offender is not None:
            # Fold the offending row into row t and restart the step.
            for j in range(t, cols):
                m[t][j] += m[offender][j]
            for j in range(rows):
                left[t][j] += left[offender][j]
            continue
        t += 1


def smith_normal_form(a: IntMatrix) -> SmithForm:
    """Smith normal form with unimodular left/right witnesses.

    left * A * right is diagonal, divisors are nonnegative, each divides the
    next and zeros trail.
    """
    rows, cols = a.rows, a.cols
    m = a.to_lists()
    left = IntMatrix.identity(rows).to_lists()
    right = IntMatrix.identity(cols).to_lists()
    _smith_reduce(m, left, right)
    # Sign-normalize the diagonal.
    for t in range(min(rows, cols)):
        if m[t][t] < 0:
            for j in range(cols):
                m[t][j] = -m[t][j]
            for j in range(rows):
                left[t][j] = -left[t][j]
    diag = tuple(m[t][t] for t in range(min(rows, cols)))
    return SmithForm(diagonal=diag, left=IntMatrix.from_rows(left), right=IntMatrix.from_rows(right))


def elementary_divisors(a: IntMatrix) -> tuple[int, ...]:
    """Nonzero Smith divisors of A."""
    return tuple(d for d in smith_normal_form(a).diagonal if d != 0)


# ---------------------------------------------------------------------------
# Matrix text format shared by the CLI: first line "ROWS COLS", then ROWS
# lines of COLS whitespace-separated integers.  '#' starts a comment, blank
# lines are skipped.
# ---------------------------------------------------------------------------

def _content_lines(text: str) -> list[str]:
    out = []
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if line:
            out.append(line)
    return out


def parse_matrix(text: str) -> IntMatrix:
    lines = _content_lines(text)
    if not lines:
        raise MatrixFormatError("empty matrix text")
    header = lines[0].split()
    if len(header) != 2:
        raise MatrixFormatError(f"expected 'ROWS COLS' header, found {lines[0]!r}")
    try:
        rows, cols = int(header[0]), int(header[1])
    except ValueError as exc:
        raise MatrixFormatError(f"non-integer header {lines[0]!r}") from exc
    if len(lines) - 1 != rows:
        raise MatrixFormatError(f"expected {rows} data lines, found {len(lines) - 1}")
    data = []
    for idx, line in enumerate(lines[1:]):
        parts = line.split()
        if len(parts) != cols:
            raise MatrixFormatError(f"row {idx + 1}: expected {cols} entries, found {len(parts)}")
        try:
            data.append([int(p) for p in parts])
        except ValueError as exc:
            raise MatrixFormatError(f"row {idx + 1}: non-integer entry in {line!r}") from exc
    return IntMatrix.from_rows(data)


def format_matrix(a: IntMatrix) -> str:
    lines = [f"{a.rows} {a.cols}"]
    widths = [max((len(str(a.data[i][j])) for i in range(a.rows)), default=1) for j in range(a.cols)]
    for row in a.data:
        lines.append(" ".join(str(x).rjust(w) for x, w in zip(row, widths)))
    return "\n".join(lines) + "\n"
