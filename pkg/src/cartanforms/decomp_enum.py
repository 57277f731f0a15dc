"""Enumeration of decomposition matrices against a target Cartan matrix.

Integer matrices Q with Q^T Q = C are generated column by column.  Rows are
kept in descending lexicographic order with the first nonzero entry of every
row positive, which breaks the signed-row-permutation symmetry exactly: each
orbit is produced once, already in canonical form.  Fixed starting columns
are supported (their stabilizer is respected), and the same walk powers both
full enumeration and the maximal-row-count search.

Columns with entries in the Eisenstein or Gaussian integers (root orders 3
and 4) are handled as pairs of integer part-vectors for inner products,
orthogonality checking and conjugate-pair splitting; the closed-form Galois
sum of a cyclotomic row against a positive definite form is evaluated for
arbitrary prime-power root orders.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import isqrt

from .exact_linalg import DimensionError, IntMatrix, SymIntMatrix
from .quadform import GramMatrix

SUPPORTED_COLUMN_ORDERS = (1, 3, 4)


class UnsupportedOrderError(ValueError):
    """Root-of-unity order outside the supported range."""


class NoSolutionError(ValueError):
    """The induced integer linear system has no solution."""


def _prime_power(order: int) -> tuple[int, int]:
    """Return (p, n) with order = p^n, or raise."""
    if order < 2:
        raise UnsupportedOrderError(f"{order} is not a prime power >= 2")
    for p in range(2, order + 1):
        if order % p == 0:
            n = 0
            q = order
            while q % p == 0:
                q //= p
                n += 1
            if q != 1:
                raise UnsupportedOrderError(f"{order} is not a prime power")
            return p, n
    raise UnsupportedOrderError(f"{order} is not a prime power")


def _euler_phi_prime_power(p: int, n: int) -> int:
    return p ** (n - 1) * (p - 1)


@dataclass(frozen=True)
class CyclotomicEntry:
    """Element of Z[zeta] for zeta of prime-power order, as coefficients.

    ``coeffs`` lists the coordinates over 1, zeta, ..., zeta^f with
    f = p^(n-1)(p-1) - 1; order 1 means a plain integer.
    """

    order: int
    coeffs: tuple[int, ...]

    def __post_init__(self):
        if self.order == 1:
            if len(self.coeffs) != 1:
                raise DimensionError("order 1 entries carry a single coefficient")
            return
        p, n = _prime_power(self.order)
        expected = _euler_phi_prime_power(p, n)
        if len(self.coeffs) != expected:
            raise DimensionError(
                f"order {self.order} entries need {expected} coefficients, got {len(self.coeffs)}")

    @staticmethod
    def integer(value: int) -> "CyclotomicEntry":
        return CyclotomicEntry(1, (value,))

    @property
    def is_zero(self) -> bool:
        return not any(self.coeffs)


def _as_pair(entry: CyclotomicEntry, order: int) -> tuple[int, int]:
    """Coefficients of an entry inside Z[zeta_order] for order in {3, 4}."""
    if entry.order == 1:
        return entry.coeffs[0], 0
    if entry.order != order:
        raise UnsupportedOrderError(
            f"cannot mix root orders {entry.order} and {order}")
    return entry.coeffs[0], entry.coeffs[1]


def conjugate_inner(u: list[CyclotomicEntry], v: list[CyclotomicEntry],
                    order: int) -> tuple[int, int]:
    """sum u_r * conj(v_r) as (rational part, zeta/i part)."""
    if len(u) != len(v):
        raise DimensionError("columns of different length")
    if order == 1:
        return sum(a.coeffs[0] * b.coeffs[0] for a, b in zip(u, v)), 0
    if order not in (3, 4):
        raise UnsupportedOrderError(f"inner products support orders 1, 3, 4, not {order}")
    rat = 0
    img = 0
    for x, y in zip(u, v):
        a, b = _as_pair(x, order)
        c, d = _as_pair(y, order)
        if order == 4:
            # (a+bi)(c-di) = ac+bd + (bc-ad) i
            rat += a * c + b * d
            img += b * c - a * d
        else:
            # (a+bw)(c+d conj(w)) = ac+bd-ad + (bc-ad) w  for w = zeta_3
            rat += a * c + b * d - a * d
            img += b * c - a * d
    return rat, img


# ---------------------------------------------------------------------------
# Column shapes
# ---------------------------------------------------------------------------

def column_shapes(norm: int, length: int | None = None) -> list[tuple[int, ...]]:
    """Multisets of positive entries with squared sum equal to ``norm``.

    Each shape is a nonincreasing tuple; shapes needing more than ``length``
    entries are dropped when a length is given.  Ordered largest entry first.
    """
    if norm < 1:
        raise ValueError("norm must be >= 1")
    out: list[tuple[int, ...]] = []

    def build(remaining: int, cap: int, acc: list[int]) -> None:
        if remaining == 0:
            out.append(tuple(acc))
            return
        if length is not None and len(acc) >= length:
            return
        for v in range(min(cap, isqrt(remaining)), 0, -1):
            acc.append(v)
            build(remaining - v * v, v, acc)
            acc.pop()

    build(norm, isqrt(norm), [])
    return sorted(out, key=lambda s: tuple(-x for x in s))


# ---------------------------------------------------------------------------
# Conjugate column pairs
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ConjugatePairSplit:
    """Norm bookkeeping for a column pair d = a + b*zeta, d' = a + b*conj(zeta)."""

    self_norm: int
    cross_norm: int
    aa: int
    bb: int
    ab: int | None

    @property
    def solution(self) -> tuple[int, int, int | None]:
        return (self.aa, self.bb, self.ab)


def split_conjugate_pair(self_norm: int, cross_inner: int,
                         root_order: int) -> ConjugatePairSplit:
    """Solve the orthogonality system induced by a conjugate column pair.

    Order 3: (a|a) + (b|b) - (a|b) = self_norm, and the zeta component of the
    cross product forces (b|b) = 2(a|b) with (a|a) - (b|b) = cross_inner.
    Order 4 (Gaussian): (q1|q2) = (a1|a2) + (b1|b2) and
    (q1|conj q2) = (a1|a2) - (b1|b2), inputs in that order.
    """
    if root_order == 3:
        diff = self_norm - cross_inner
        if diff % 3:
            raise NoSolutionError("system has no integer solution (mod 3)")
        ab = diff // 3
        bb = 2 * ab
        aa = cross_inner + bb
        if aa < 0 or bb < 0:
            raise NoSolutionError("system forces a negative norm")
        return ConjugatePairSplit(self_norm, cross_inner, aa, bb, ab)
    if root_order == 4:
        if (self_norm + cross_inner) % 2:
            raise NoSolutionError("system has no integer solution (mod 2)")
        aa = (self_norm + cross_inner) // 2
        bb = (self_norm - cross_inner) // 2
        return ConjugatePairSplit(self_norm, cross_inner, aa, bb, None)
    raise UnsupportedOrderError("conjugate pairs exist for root orders 3 and 4 only")


# ---------------------------------------------------------------------------
# Galois contribution sum
# ---------------------------------------------------------------------------

def galois_contribution_sum(column: list[CyclotomicEntry], q: SymIntMatrix) -> int:
    """Sum over the Galois group of gamma(d Q conj(d)^T), in closed form.

    ``column`` is one row of generalized decomposition numbers (length equals
    the dimension of Q), all entries sharing one root order p^n.  The value
    equals p^(n-1) * ((p-1) * sum_m a_m Q a_m^T
                      - 2 * sum_{j=1}^{p-2} sum_m a_m Q a_{m+j p^(n-1)}^T)
    where a_m collects the m-th coefficients across the column.
    """
    if not column:
        raise DimensionError("empty column")
    order = column[0].order
    if any(e.order != order for e in column):
        raise ValueError("mixed root orders in one column")
    if len(column) != q.dim:
        raise DimensionError("column length must match the form dimension")
    if order == 1:
        a0 = [e.coeffs[0] for e in column]
        return _sym_value(q, a0, a0)
    p, n = _prime_power(order)
    f = _euler_phi_prime_power(p, n) - 1
    vecs = [[e.coeffs[m] for e in column] for m in range(f + 1)]
    diag_part = sum(_sym_value(q, v, v) for v in vecs)
    cross = 0
    step = p ** (n - 1)
    for j in range(1, p - 1):
        for m in range(0, f - j * step + 1):
            cross += _sym_value(q, vecs[m], vecs[m + j * step])
    return step * ((p - 1) * diag_part - 2 * cross)


def _sym_value(q: SymIntMatrix, u: list[int], v: list[int]) -> int:
    n = q.dim
    return sum(u[i] * q.data[i][j] * v[j] for i in range(n) for j in range(n))


# ---------------------------------------------------------------------------
# Integer decomposition matrix enumeration
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class DecompositionCandidate:
    """Integer matrix Q with Q^T Q equal to the target Cartan matrix."""

    entries: tuple[tuple[int, ...], ...]
    target: GramMatrix

    def __post_init__(self):
        cols = self.target.dim
        if any(len(r) != cols for r in self.entries):
            raise DimensionError("candidate row width differs from target dimension")
        if any(not any(r) for r in self.entries):
            raise ValueError("candidate contains an all-zero row")
        gram = [[sum(r[i] * r[j] for r in self.entries) for j in range(cols)]
                for i in range(cols)]
        if gram != self.target.to_lists():
            raise ValueError("candidate Gram matrix differs from target")

    @property
    def row_count(self) -> int:
        return len(self.entries)

    def as_int_matrix(self) -> IntMatrix:
        return IntMatrix.from_rows([list(r) for r in self.entries])


def cartan_of(entries, order: int = 1) -> GramMatrix:
    """Conjugate Gram matrix of a complete set of columns.

    Raises if the result is not an exact integer positive definite matrix
    (dependent or non-real column systems are rejected).
    """
    if order == 1:
        cols = list(zip(*entries)) if entries else ()
        gram = [[sum(a * b for a, b in zip(u, v)) for v in cols] for u in cols]
        return GramMatrix.from_rows(gram)
    k = len(entries)
    width = len(entries[0]) if k else 0
    cols = [[entries[r][c] for r in range(k)] for c in range(width)]
    gram = []
    for u in cols:
        row = []
        for v in cols:
            rat, img = conjugate_inner(u, v, order)
            if img:
                raise ValueError("conjugate Gram matrix is not rational")
            row.append(rat)
        gram.append(row)
    return GramMatrix.from_rows(gram)


def canonical_rows(rows) -> tuple[tuple[int, ...], ...]:
    """Canonical representative under signed row permutations.

    Every row gets its first nonzero entry positive, then rows are sorted in
    descending lexicographic order.  Zero rows are dropped.
    """
    fixed = []
    for row in rows:
        r = tuple(row)
        if not any(r):
            continue
        for x in r:
            if x:
                if x < 0:
                    r = tuple(-y for y in r)
                break
        fixed.append(r)
    fixed.sort(reverse=True)
    return tuple(fixed)


class _ColumnWalk:
    """Column-by-column generation of integer matrices with prescribed Gram.

    Rows live in classes of identical prefixes; values per class are assigned
    as nonincreasing sequences and fresh rows take positive values, so output
    matrices are canonical under signed row permutations by construction.
    """

    def __init__(self, cartan: GramMatrix, max_rows: int,
                 fixed_columns: tuple[tuple[int, ...], ...] = ()):
        self.cartan = cartan
        self.dim = cartan.dim
        self.max_rows = max_rows
        self.fixed = [tuple(c) for c in fixed_columns]
        self.start_col = len(self.fixed)
        if self.start_col > self.dim:
            raise DimensionError("more fixed columns than the Cartan dimension")

    def _initial_rows(self) -> list[tuple[int, ...]] | None:
        if not self.fixed:
            return []
        width = len(self.fixed[0])
        if any(len(c) != width for c in self.fixed):
            raise DimensionError("fixed columns of unequal length")
        for i, ci in enumerate(self.fixed):
            for j in range(i, len(self.fixed)):
                inner = sum(a * b for a, b in zip(ci, self.fixed[j]))
                if inner != self.cartan[i, j]:
                    return None  # infeasible fixed block
        rows = [tuple(c[r] for c in self.fixed) for r in range(width)]
        rows = [r for r in rows if any(r)]
        if len(rows) > self.max_rows:
            return None
        rows.sort(reverse=True)
        return rows

    def run(self, collect: bool, count_only_max: bool = False):
        """Walk all completions.  Returns (candidates, best_row_count)."""
        rows = self._initial_rows()
        results: list[DecompositionCandidate] = []
        best = {"rows": -1}
        if rows is None:
            return results, 0
        cartan = self.cartan
        dim = self.dim
        max_rows = self.max_rows
        future_norm = [0] * (dim + 1)
        for j in range(dim - 1, -1, -1):
            future_norm[j] = future_norm[j + 1] + cartan[j, j]

        def column_done(j: int, rows_now: list[tuple[int, ...]]) -> None:
            if j + 1 == dim:
                if collect:
                    results.append(DecompositionCandidate(tuple(rows_now), cartan))
                if len(rows_now) > best["rows"]:
                    best["rows"] = len(rows_now)
                return
            next_column(j + 1, rows_now)

        def next_column(j: int, rows_now: list[tuple[int, ...]]) -> None:
            if count_only_max and len(rows_now) + future_norm[j] <= best["rows"]:
                return
            # Group identical rows into maximal runs (rows are sorted).
            classes: list[tuple[int, int]] = []
            i = 0
            while i < len(rows_now):
                k = i
                while k < len(rows_now) and rows_now[k] == rows_now[i]:
                    k += 1
                classes.append((i, k))
                i = k
            norm = cartan[j, j]
            inner_target = [cartan[i2, j] for i2 in range(j)]
            values = [0] * len(rows_now)

            def assign_class(ci: int, budget: int, inners: list[int]) -> None:
                if budget < 0:
                    return
                if ci == len(classes):
                    if inners != inner_target:
                        return
                    finish_new_rows(budget)
                    return
                # Feasibility: remaining classes must be able to close the
                # inner product gaps.
                s = isqrt(budget)
                for col in range(j):
                    gap = abs(inner_target[col] - inners[col])
                    if gap == 0:
                        continue
                    reach = 0
                    for lo, hi in classes[ci:]:
                        reach += abs(rows_now[lo][col]) * (hi - lo) * s
                        if reach >= gap:
                            break
                    if reach < gap:
                        return
                lo, hi = classes[ci]

                def assign_in_class(pos: int, cap: int, budget2: int,
                                    inners2: list[int]) -> None:
                    if budget2 < 0:
                        return
                    if pos == hi:
                        assign_class(ci + 1, budget2, inners2)
                        return
                    s2 = isqrt(budget2)
                    top = min(cap, s2)
                    for v in range(top, -s2 - 1, -1):
                        if v * v > budget2:
                            continue
                        values[pos] = v
                        if v:
                            upd = [inners2[c] + v * rows_now[pos][c] for c in range(j)]
                        else:
                            upd = inners2
                        assign_in_class(pos + 1, v, budget2 - v * v, upd)
                    values[pos] = 0

                assign_in_class(lo, norm, budget, inners)

            def finish_new_rows(budget: int) -> None:
                free = max_rows - len(rows_now)
                shapes = [s for s in column_shapes(budget, free)] if budget else [()]
                extended_base = [rows_now[r] + (values[r],) for r in range(len(rows_now))]
                for shape in shapes:
                    new_rows = [(0,) * j + (v,) for v in shape]
                    rows_next = sorted(extended_base + new_rows, reverse=True)
                    column_done(j, rows_next)

            assign_class(0, norm, [0] * j)

        if self.start_col == dim:
            # Everything fixed: nothing to enumerate, validate directly.
            if rows and all(any(r) for r in rows):
                column_done(dim - 1, rows)
        else:
            next_column(self.start_col, rows)
        return results, max(best["rows"], 0)


def enumerate_decompositions(cartan: GramMatrix, max_rows: int | None = None,
                             partial: tuple[tuple[int, ...], ...] = ()) -> list[DecompositionCandidate]:
    """All integer Q with Q^T Q = C, up to signed row permutations.

    Candidates have at most ``max_rows`` nonzero rows (default: trace of C, a
    bound no decomposition matrix can exceed), extend the fixed partial
    columns when given, and come back canonically sorted.  An infeasible
    partial block yields an empty list.
    """
    if max_rows is None:
        max_rows = sum(cartan[i, i] for i in range(cartan.dim))
    if max_rows < cartan.dim:
        raise ValueError("max_rows below the Cartan dimension")
    walk = _ColumnWalk(cartan, max_rows, tuple(tuple(c) for c in partial))
    results, _ = walk.run(collect=True)
    return sorted(results, key=lambda cand: (cand.row_count, cand.entries))


def max_row_count(cartan: GramMatrix, partial: tuple[tuple[int, ...], ...] = (),
                  max_rows: int | None = None) -> int:
    """Largest number of nonzero rows over all Q with Q^T Q = C."""
    if max_rows is None:
        max_rows = sum(cartan[i, i] for i in range(cartan.dim))
    walk = _ColumnWalk(cartan, max_rows, tuple(tuple(c) for c in partial))
    _, best = walk.run(collect=False, count_only_max=True)
    return best


# ---------------------------------------------------------------------------
# Cross-group orthogonality
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ColumnGroup:
    """Columns of one subsection: a shared root order and a declared Cartan."""

    order: int
    columns: tuple[tuple[CyclotomicEntry, ...], ...]
    declared_cartan: tuple[tuple[int, ...], ...]

    @staticmethod
    def from_integers(columns, declared) -> "ColumnGroup":
        cols = tuple(tuple(CyclotomicEntry.integer(x) for x in col) for col in columns)
        return ColumnGroup(1, cols, tuple(tuple(r) for r in declared))


def verify_orthogonality(sections: list[ColumnGroup], k: int) -> bool:
    """Cross-section orthogonality and per-section Gram checks.

    True iff every pair of columns from distinct groups has conjugate inner
    product zero and each group's Gram matrix equals its declared subsection
    Cartan matrix.  All groups must have k rows.
    """
    for sec in sections:
        for col in sec.columns:
            if len(col) != k:
                raise DimensionError("ragged column group")
    for sec in sections:
        cols = sec.columns
        declared = sec.declared_cartan
        if len(declared) != len(cols):
            return False
        for i, u in enumerate(cols):
            for j, v in enumerate(cols):
                rat, img = conjugate_inner(list(u), list(v), sec.order)
                if img != 0 or rat != declared[i][j]:
                    return False
    for a in range(len(sections)):
        for b in range(a + 1, len(sections)):
            sa, sb = sections[a], sections[b]
            if sa.order != 1 and sb.order != 1 and sa.order != sb.order:
                raise UnsupportedOrderError("cannot mix root orders 3 and 4 across groups")
            order = max(sa.order, sb.order)
            for u in sa.columns:
                for v in sb.columns:
                    rat, img = conjugate_inner(list(u), list(v), order)
                    if rat != 0 or img != 0:
                        return False
    return True
