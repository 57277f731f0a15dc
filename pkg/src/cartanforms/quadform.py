"""Positive definite integer quadratic form algorithms.

The toolbox a Cartan matrix is fed through: Minkowski-style reduction with a
unimodular witness, exact short vector enumeration, unimodular equivalence
testing by matching short vector systems, orthogonal decomposability of the
underlying lattice, Barnes feasibility tests for reduced diagonals, and
exhaustive enumeration of reduced forms with a prescribed determinant.

All arithmetic is exact: integers throughout, Fractions only inside the
short-vector recursion.  Matrices of dimension up to 8 are supported by the
reduction; the enumeration is limited to dimension 4.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import permutations, product
from math import isqrt

from .exact_linalg import (
    DimensionError,
    IntMatrix,
    SymIntMatrix,
    congruence,
    determinant,
    is_positive_definite,
    smith_normal_form,
)

MAX_REDUCE_DIM = 8
MAX_ENUM_DIM = 4


class NotPositiveDefiniteError(ValueError):
    """Matrix fails the positive definiteness requirement."""


@dataclass(frozen=True)
class GramMatrix:
    """Positive definite symmetric integer matrix (checked at construction)."""

    mat: SymIntMatrix

    def __post_init__(self):
        if not is_positive_definite(self.mat):
            raise NotPositiveDefiniteError(f"not positive definite: {self.mat.data}")

    @staticmethod
    def from_rows(rows) -> "GramMatrix":
        return GramMatrix(SymIntMatrix.from_rows(rows))

    @property
    def dim(self) -> int:
        return self.mat.dim

    @property
    def data(self):
        return self.mat.data

    def __getitem__(self, ij):
        return self.mat[ij]

    def to_lists(self):
        return self.mat.to_lists()


@dataclass(frozen=True)
class UnimodularTransform:
    """Integer matrix with determinant +1 or -1, witnessing a congruence."""

    matrix: IntMatrix

    def __post_init__(self):
        if not self.matrix.is_square:
            raise DimensionError("transform must be square")
        if determinant(self.matrix) not in (1, -1):
            raise ValueError("transform is not unimodular")


@dataclass(frozen=True)
class DecomposabilityVerdict:
    """Outcome of the orthogonal splitting test.

    When decomposable, ``witness`` transforms the input into exact block
    diagonal form with the given block sizes (at least two blocks).
    """

    decomposable: bool
    block_sizes: tuple[int, ...] = ()
    witness: UnimodularTransform | None = None


# ---------------------------------------------------------------------------
# Short vectors
# ---------------------------------------------------------------------------

def _ldl(a: SymIntMatrix) -> tuple[list[list[Fraction]], list[Fraction]]:
    """Rational LDL^T decomposition of a positive definite matrix."""
    n = a.dim
    lower = [[Fraction(0)] * n for _ in range(n)]
    diag = [Fraction(0)] * n
    for i in range(n):
        for j in range(i):
            s = Fraction(a[i, j])
            for k in range(j):
                s -= lower[i][k] * lower[j][k] * diag[k]
            lower[i][j] = s / diag[j]
        s = Fraction(a[i, i])
        for k in range(i):
            s -= lower[i][k] * lower[i][k] * diag[k]
        if s <= 0:
            raise NotPositiveDefiniteError("LDL pivot not positive")
        diag[i] = s
        lower[i][i] = Fraction(1)
    return lower, diag


def _range_for(center: Fraction, radius_sq: Fraction) -> tuple[int, int]:
    """Integers x with (x + center)^2 <= radius_sq, as an inclusive range."""
    if radius_sq < 0:
        return 1, 0
    p, q = center.numerator, center.denominator
    bound = (radius_sq.numerator * q * q) // radius_sq.denominator
    r = isqrt(bound)
    lo = -(-(-r - p) // q)  # ceil((-r - p) / q)
    hi = (r - p) // q
    return lo, hi


def short_vectors(a: GramMatrix, bound: int) -> list[tuple[tuple[int, ...], int]]:
    """All v != 0 with v A v^T <= bound, one representative per +-pair.

    Each vector is tagged with its exact value; the representative has its
    first nonzero coordinate positive, and results are sorted by
    (value, vector).  Enumeration is a Fincke-Pohst walk down an exact
    rational LDL decomposition, so no vector is ever missed.
    """
    if bound < 1:
        raise ValueError("bound must be at least 1")
    n = a.dim
    lower, diag = _ldl(a.mat)
    # u[i][j] (j > i) are the Gram-Schmidt mixing coefficients.
    u = [[lower[j][i] for j in range(n)] for i in range(n)]
    rows = a.data
    out = []
    vec = [0] * n

    def value_of(v: list[int]) -> int:
        return sum(v[i] * rows[i][j] * v[j] for i in range(n) for j in range(n))

    def walk(i: int, remaining: Fraction) -> None:
        if i < 0:
            if any(vec):
                v = tuple(vec)
                for x in v:
                    if x:
                        if x < 0:
                            v = tuple(-y for y in v)
                        break
                out.append((v, value_of(list(v))))
            return
        center = sum((u[i][j] * vec[j] for j in range(i + 1, n)), Fraction(0))
        lo, hi = _range_for(center, remaining / diag[i])
        for x in range(lo, hi + 1):
            vec[i] = x
            t = center + x
            walk(i - 1, remaining - diag[i] * t * t)
        vec[i] = 0

    walk(n - 1, Fraction(bound))
    dedup = {}
    for v, val in out:
        dedup[v] = val
    return sorted(dedup.items(), key=lambda item: (item[1], item[0]))


# ---------------------------------------------------------------------------
# Minkowski reduction
# ---------------------------------------------------------------------------

def _unimodular_inverse(m: IntMatrix) -> IntMatrix:
    """Exact inverse of a matrix with determinant +-1 (adjugate route)."""
    n = m.rows
    det = determinant(m)
    if det not in (1, -1):
        raise ValueError("matrix is not unimodular")
    cof = [[0] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            minor = [
                [m.data[r][c] for c in range(n) if c != j]
                for r in range(n) if r != i
            ]
            d = determinant(IntMatrix.from_rows(minor)) if n > 1 else 1
            cof[i][j] = (-1) ** (i + j) * d
    # adj = cof^T; inverse = adj / det with det = +-1.
    return IntMatrix.from_rows([[cof[j][i] * det for j in range(n)] for i in range(n)])


def _extends_to_basis(rows: list[list[int]]) -> bool:
    """True if the rows are a basis of a direct summand of Z^n."""
    snf = smith_normal_form(IntMatrix.from_rows(rows))
    return all(d == 1 for d in snf.diagonal)


def _completion_rows(rows: list[list[int]], n: int) -> list[list[int]]:
    """Rows completing the given primitive system to a basis of Z^n."""
    if not rows:
        return IntMatrix.identity(n).to_lists()
    snf = smith_normal_form(IntMatrix.from_rows(rows))
    rinv = _unimodular_inverse(snf.right)
    return [list(rinv.data[i]) for i in range(len(rows), n)]


def _gram_value(a: SymIntMatrix, v) -> int:
    n = a.dim
    return sum(v[i] * a.data[i][j] * v[j] for i in range(n) for j in range(n))


def _gram_inner(a: SymIntMatrix, v, w) -> int:
    n = a.dim
    return sum(v[i] * a.data[i][j] * w[j] for i in range(n) for j in range(n))


def minkowski_reduce(a: GramMatrix) -> tuple[GramMatrix, UnimodularTransform]:
    """Greedy successive-minima reduction with an exact witness.

    The output R = S^T A S satisfies r11 <= r22 <= ... <= rnn together with
    2|rij| <= min(rii, rjj) for i != j, and superdiagonal entries are made
    nonnegative by sign flips.  Basis vectors are chosen one at a time: the
    shortest vector extending the previously chosen ones to a basis of Z^n
    wins, ties broken by the sorted order of ``short_vectors``.
    """
    n = a.dim
    if n > MAX_REDUCE_DIM:
        raise DimensionError(f"reduction supports dimension <= {MAX_REDUCE_DIM}")
    chosen: list[list[int]] = []
    for _ in range(n):
        start_bound = min(_gram_value(a.mat, w) for w in _completion_rows(chosen, n))
        # Candidates are sorted by (norm, vector): the first extendable one is
        # the canonical minimum, and some completion row guarantees a hit.
        for v, _val in short_vectors(a, start_bound):
            if _extends_to_basis(chosen + [list(v)]):
                chosen.append(list(v))
                break
        else:
            raise AssertionError("no extendable short vector found")
    basis = chosen
    gram = [[_gram_inner(a.mat, basis[i], basis[j]) for j in range(n)] for i in range(n)]
    # Sign convention: sweep left to right making each superdiagonal entry >= 0.
    for k in range(1, n):
        if gram[k - 1][k] < 0:
            basis[k] = [-x for x in basis[k]]
            for j in range(n):
                gram[k][j] = -gram[k][j]
            for i in range(n):
                gram[i][k] = -gram[i][k]
    reduced = GramMatrix.from_rows(gram)
    s = IntMatrix.from_rows(basis).transpose()
    witness = UnimodularTransform(s)
    assert congruence(a.mat, s).data == reduced.data
    return reduced, witness


def _reduction_conditions_hold(rows) -> bool:
    n = len(rows)
    for i in range(n - 1):
        if rows[i][i] > rows[i + 1][i + 1]:
            return False
    for i in range(n):
        for j in range(i + 1, n):
            if 2 * abs(rows[i][j]) > min(rows[i][i], rows[j][j]):
                return False
    return True


# ---------------------------------------------------------------------------
# Equivalence
# ---------------------------------------------------------------------------

def are_equivalent(a: GramMatrix, b: GramMatrix) -> UnimodularTransform | None:
    """Search for S with S^T A S = B; None when no isometry exists.

    Both forms are reduced first; candidate images for the reduced basis of B
    are drawn from the short vectors of reduced A up to the common maximal
    diagonal entry, which is exhaustive because basis images must match norms.
    """
    if a.dim != b.dim:
        raise DimensionError("dimension mismatch")
    n = a.dim
    ra, sa = minkowski_reduce(a)
    rb, sb = minkowski_reduce(b)
    diag_a = [ra[i, i] for i in range(n)]
    diag_b = [rb[i, i] for i in range(n)]
    if diag_a != diag_b:
        return None
    if determinant(a.mat.as_int_matrix()) != determinant(b.mat.as_int_matrix()):
        return None
    bound = max(diag_b)
    cands = short_vectors(ra, bound)
    by_norm: dict[int, list[tuple[int, ...]]] = {}
    for v, val in cands:
        by_norm.setdefault(val, []).append(v)

    images: list[tuple[int, ...]] = []

    def fits(v: tuple[int, ...], j: int) -> bool:
        for i in range(j):
            if _gram_inner(ra.mat, images[i], v) != rb[i, j]:
                return False
        return True

    def search(j: int) -> bool:
        if j == n:
            return True
        for v in by_norm.get(rb[j, j], ()):
            for w in (v, tuple(-x for x in v)):
                if fits(w, j):
                    images.append(w)
                    if search(j + 1):
                        return True
                    images.pop()
        return False

    if not search(0):
        return None
    t = IntMatrix.from_rows(images).transpose()
    assert congruence(ra.mat, t).data == rb.data
    s = sa.matrix.mul(t).mul(_unimodular_inverse(sb.matrix))
    assert congruence(a.mat, s).data == b.data
    return UnimodularTransform(s)


# ---------------------------------------------------------------------------
# Orthogonal decomposition
# ---------------------------------------------------------------------------

def _row_space_basis(vectors: list[tuple[int, ...]]) -> list[list[int]]:
    """Basis of the sublattice of Z^n generated by the vectors (row HNF)."""
    work = [list(v) for v in vectors]
    n = len(work[0])
    basis: list[list[int]] = []
    col = 0
    rows_left = work
    while rows_left and col < n:
        nonzero = [r for r in rows_left if r[col] != 0]
        rest = [r for r in rows_left if r[col] == 0]
        if not nonzero:
            col += 1
            continue
        while len(nonzero) > 1:
            nonzero.sort(key=lambda r: abs(r[col]))
            piv = nonzero[0]
            reduced = [piv]
            for r in nonzero[1:]:
                q = r[col] // piv[col]
                newr = [x - q * y for x, y in zip(r, piv)]
                if newr[col] != 0:
                    reduced.append(newr)
                elif any(newr):
                    rest.append(newr)
            nonzero = reduced
        piv = nonzero[0]
        if piv[col] < 0:
            piv = [-x for x in piv]
        basis.append(piv)
        rows_left = rest
        col += 1
    return basis


def orthogonal_decompose(a: GramMatrix) -> DecomposabilityVerdict:
    """Split the lattice with Gram matrix A into orthogonal components.

    Vectors of norm up to the maximal reduced diagonal entry generate the
    lattice; each is recursively split into indecomposable vectors, and the
    connectivity components of the non-orthogonality graph on those span the
    orthogonal summands.  A single component means indecomposable.
    """
    n = a.dim
    if n == 1:
        return DecomposabilityVerdict(decomposable=False)
    reduced, tr = minkowski_reduce(a)
    bound = max(reduced[i, i] for i in range(n))
    svs = short_vectors(reduced, bound)
    by_norm: dict[int, list[tuple[int, ...]]] = {}
    for v, val in svs:
        by_norm.setdefault(val, []).append(v)

    def splittable(v: tuple[int, ...], val: int) -> bool:
        for xv in range(1, val):
            for x in by_norm.get(xv, ()):
                for w in (x, tuple(-t for t in x)):
                    y = tuple(p - q for p, q in zip(v, w))
                    if not any(y):
                        continue
                    if _gram_inner(reduced.mat, w, y) >= 0:
                        return True
        return False

    core = [(v, val) for v, val in svs if not splittable(v, val)]
    parent = list(range(len(core)))

    def find(i: int) -> int:
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i in range(len(core)):
        for j in range(i + 1, len(core)):
            if _gram_inner(reduced.mat, core[i][0], core[j][0]) != 0:
                ri, rj = find(i), find(j)
                if ri != rj:
                    parent[rj] = ri
    groups: dict[int, list[tuple[int, ...]]] = {}
    for i in range(len(core)):
        groups.setdefault(find(i), []).append(core[i][0])
    if len(groups) <= 1:
        return DecomposabilityVerdict(decomposable=False)
    components = sorted(groups.values(), key=lambda vs: min(vs))
    blocks = [_row_space_basis(vs) for vs in components]
    order = sorted(range(len(blocks)), key=lambda k: (len(blocks[k]), blocks[k]))
    stacked = [row for k in order for row in blocks[k]]
    w = IntMatrix.from_rows(stacked)
    if abs(determinant(w)) != 1:
        raise AssertionError("component bases do not span the full lattice")
    sizes = tuple(len(blocks[k]) for k in order)
    full = w.mul(tr.matrix.transpose())
    s = full.transpose()
    gram = congruence(a.mat, s)
    pos = 0
    bounds = []
    for size in sizes:
        bounds.append((pos, pos + size))
        pos += size
    for i in range(n):
        for j in range(n):
            inside = any(lo <= i < hi and lo <= j < hi for lo, hi in bounds)
            if not inside and gram[i, j] != 0:
                raise AssertionError("witness failed to block-diagonalize")
    return DecomposabilityVerdict(decomposable=True, block_sizes=sizes,
                                  witness=UnimodularTransform(s))


# ---------------------------------------------------------------------------
# Barnes feasibility and reduced form enumeration
# ---------------------------------------------------------------------------

def barnes_feasible(diag: list[int], p_d: int) -> bool:
    """Barnes inequality test for a sorted reduced diagonal.

    Supported lengths 2..5; the length selects the inequality.  The length 4
    inequality carries a quarter term and is compared after scaling by 4, so
    everything stays in integers.
    """
    ln = len(diag)
    if ln < 2 or ln > 5:
        raise DimensionError(f"unsupported diagonal length {ln}")
    if any(x < 1 for x in diag):
        raise ValueError("diagonal entries must be >= 1")
    if any(diag[i] > diag[i + 1] for i in range(ln - 1)):
        raise ValueError("diagonal must be sorted ascending")
    if ln == 2:
        a, b = diag
        return 4 * a * b - a * a <= 4 * p_d
    if ln == 3:
        a, b, c = diag
        return 4 * a * b * c - a * b * b - a * a * c <= 4 * p_d
    if ln == 4:
        a, b, c, d = diag
        lhs = (16 * a * b * c * d - 4 * a * a * c * d - 4 * a * b * b * d
               - 4 * a * b * c * c + a * a * (c - b) ** 2)
        return lhs <= 16 * p_d
    a, b, c, d, e = diag
    return a * b * c * d * e <= 8 * p_d


def _signed_permutation_orbit(rows: tuple[tuple[int, ...], ...]):
    n = len(rows)
    for perm in permutations(range(n)):
        base = [[rows[perm[i]][perm[j]] for j in range(n)] for i in range(n)]
        for signs in product((1, -1), repeat=n):
            yield tuple(
                tuple(signs[i] * signs[j] * base[i][j] for j in range(n))
                for i in range(n)
            )


def _entry_key(x: int) -> tuple[int, int]:
    return (abs(x), 0 if x >= 0 else 1)


def _matrix_key(rows) -> tuple:
    return tuple(_entry_key(x) for row in rows for x in row)


def canonical_signed_permutation_form(rows) -> tuple[tuple[int, ...], ...]:
    """Preferred orbit representative under simultaneous signed permutations.

    Among orbit members satisfying the reduction conditions (all orbits of
    reduced matrices have at least one) the matrix minimizing the elementwise
    (magnitude, sign) order is returned, so positive entries win ties.
    """
    frozen = tuple(tuple(r) for r in rows)
    best = None
    best_key = None
    for cand in _signed_permutation_orbit(frozen):
        if not _reduction_conditions_hold(cand):
            continue
        key = _matrix_key(cand)
        if best_key is None or key < best_key:
            best, best_key = cand, key
    if best is None:  # no reduced member: fall back to the raw orbit minimum
        for cand in _signed_permutation_orbit(frozen):
            key = _matrix_key(cand)
            if best_key is None or key < best_key:
                best, best_key = cand, key
    return best


def enumerate_reduced_forms(dim: int, det_target: int) -> list[GramMatrix]:
    """All reduced forms of the given dimension and determinant.

    Enumerates matrices satisfying the reduction conditions of
    ``minkowski_reduce`` whose diagonal passes ``barnes_feasible``, with
    determinant exactly ``det_target``, deduplicated up to signed permutation
    congruence.  Exhaustive for dim <= 4.
    """
    if det_target < 1:
        raise ValueError("determinant target must be >= 1")
    if dim > MAX_ENUM_DIM:
        raise DimensionError(f"enumeration supports dimension <= {MAX_ENUM_DIM}")
    if dim == 1:
        return [GramMatrix.from_rows([[det_target]])]

    diagonals: list[tuple[int, ...]] = []

    def extend_diag(prefix: list[int]) -> None:
        k = len(prefix)
        if k == dim:
            if barnes_feasible(prefix, det_target):
                diagonals.append(tuple(prefix))
            return
        v = prefix[-1] if prefix else 1
        while True:
            trial = prefix + [v] * (dim - k)
            if not barnes_feasible(trial, det_target):
                break
            extend_diag(prefix + [v])
            v += 1

    extend_diag([])

    found: dict[tuple, tuple[tuple[int, ...], ...]] = {}
    pair_order = [(i, j) for j in range(1, dim) for i in range(j)]

    def fill(mat: list[list[int]], idx: int) -> None:
        if idx == len(pair_order):
            if determinant(IntMatrix.from_rows(mat)) == det_target:
                canon = canonical_signed_permutation_form(mat)
                found.setdefault(_matrix_key(canon), canon)
            return
        i, j = pair_order[idx]
        half = mat[i][i] // 2  # 2|a_ij| <= a_ii <= a_jj
        complete_col = i == j - 1
        for val in range(-half, half + 1):
            mat[i][j] = mat[j][i] = val
            if complete_col:
                lead = [row[: j + 1] for row in mat[: j + 1]]
                if determinant(IntMatrix.from_rows(lead)) <= 0:
                    continue
            fill(mat, idx + 1)
        mat[i][j] = mat[j][i] = 0

    for diag in diagonals:
        mat = [[diag[i] if i == j else 0 for j in range(dim)] for i in range(dim)]
        fill(mat, 0)

    return [GramMatrix.from_rows(found[key]) for key in sorted(found)]
