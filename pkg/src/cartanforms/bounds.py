"""Character-count bounds from Cartan data, and certifying-form searches.

A positive definite integral quadratic form q evaluated entrywise against a
Cartan matrix C yields an upper bound sum(q_ij * c_ij) for the number of
ordinary characters.  This module evaluates such bounds, searches small form
families for the best certificate, evaluates the closed-form dimension bound
(p^d - 1)/l + l together with its chain-configuration variant, and runs the
exhaustive constrained search deciding whether any certifying form exists for
a given Cartan matrix and a system of prescribed 1-root vectors.

The constrained search is staged: all positive definite 7x7 leading
submatrices are enumerated first and counted, then each is completed.  The
intermediate count is reported, making it directly comparable across runs.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .exact_linalg import (
    DimensionError,
    IntMatrix,
    SymIntMatrix,
    is_positive_definite,
)
from .quadform import GramMatrix

PREFIX_STAGE = 7
DEFAULT_BUDGET = 400_000


class ConstraintError(ValueError):
    """Root constraints are mutually inconsistent or malformed."""


class FormRejectedError(ValueError):
    """Supplied quadratic form is not positive definite."""


@dataclass(frozen=True)
class QuadraticFormSpec:
    """Integral quadratic form sum q_ij X_i X_j, stored upper triangular.

    The doubled associated matrix (2*q_ii on the diagonal, q_ij off it) must
    be positive definite, which is checked exactly at construction.
    """

    dim: int
    coeffs: tuple[tuple[int, int, int], ...]  # (i, j, q_ij) with i <= j, 0-based

    def __post_init__(self):
        seen = set()
        for i, j, _ in self.coeffs:
            if not (0 <= i <= j < self.dim):
                raise DimensionError(f"coefficient index ({i},{j}) out of range")
            if (i, j) in seen:
                raise ValueError(f"duplicate coefficient ({i},{j})")
            seen.add((i, j))
        if not is_positive_definite(self.doubled_matrix()):
            raise FormRejectedError("form is not positive definite")

    @staticmethod
    def from_doubled_matrix(mat: SymIntMatrix) -> "QuadraticFormSpec":
        """Build from the doubled associated matrix (even diagonal required)."""
        n = mat.dim
        coeffs = []
        for i in range(n):
            if mat[i, i] % 2:
                raise ValueError("doubled matrix must have an even diagonal")
            if mat[i, i] // 2:
                coeffs.append((i, i, mat[i, i] // 2))
            for j in range(i + 1, n):
                if mat[i, j]:
                    coeffs.append((i, j, mat[i, j]))
        return QuadraticFormSpec(n, tuple(coeffs))

    @staticmethod
    def path_form(dim: int) -> "QuadraticFormSpec":
        coeffs = [(i, i, 1) for i in range(dim)]
        coeffs += [(i, i + 1, -1) for i in range(dim - 1)]
        return QuadraticFormSpec(dim, tuple(coeffs))

    @staticmethod
    def unit_form(dim: int) -> "QuadraticFormSpec":
        return QuadraticFormSpec(dim, tuple((i, i, 1) for i in range(dim)))

    def coeff(self, i: int, j: int) -> int:
        if i > j:
            i, j = j, i
        for a, b, q in self.coeffs:
            if (a, b) == (i, j):
                return q
        return 0

    def doubled_matrix(self) -> SymIntMatrix:
        m = [[0] * self.dim for _ in range(self.dim)]
        for i, j, q in self.coeffs:
            if i == j:
                m[i][i] = 2 * q
            else:
                m[i][j] = m[j][i] = q
        return SymIntMatrix.from_rows(m)

    def value_on(self, cartan: GramMatrix) -> int:
        if cartan.dim != self.dim:
            raise DimensionError("form and Cartan matrix dimensions differ")
        return sum(q * cartan[i, j] for i, j, q in self.coeffs)

    def to_json(self) -> dict:
        return {
            "dim": self.dim,
            "coeffs": [[i + 1, j + 1, q] for i, j, q in sorted(self.coeffs)],
        }


@dataclass(frozen=True)
class BoundCertificate:
    """A verified bound value together with the form that produced it."""

    form: QuadraticFormSpec
    value: int
    cartan: GramMatrix

    def __post_init__(self):
        if self.form.value_on(self.cartan) != self.value:
            raise ValueError("certificate value does not match the form")

    def to_json(self) -> dict:
        return {
            "form": self.form.to_json(),
            "value": self.value,
            "cartan": self.cartan.to_lists(),
        }


def kw_bound(cartan: GramMatrix, form: QuadraticFormSpec) -> BoundCertificate:
    """Evaluate sum(q_ij * c_ij); the form must be positive definite."""
    return BoundCertificate(form=form, value=form.value_on(cartan), cartan=cartan)


def kw_path_bound(cartan: GramMatrix) -> int:
    """Trace minus superdiagonal sum: the path-form specialization."""
    n = cartan.dim
    return (sum(cartan[i, i] for i in range(n))
            - sum(cartan[i, i + 1] for i in range(n - 1)))


def theorem_bound(p_d: int, l: int) -> Fraction:
    """(p_d - 1)/l + l, exact; reduces to p_d when l = 1."""
    if p_d < 1 or l < 1:
        raise ValueError("p_d and l must be positive")
    return Fraction(p_d - 1, l) + l


def chain_bound(p_d: int, l: int, a: int) -> tuple[Fraction, Fraction]:
    """Corner entry and bound for the chain configuration with tail entry a.

    Returns (epsilon, k_max) with epsilon = (p_d + a^2 (l-1))/l and
    k_max = (p_d - a^2)/l + l.
    """
    if l < 2:
        raise ValueError("chain configuration needs l >= 2")
    if a < 1:
        raise ValueError("tail entry must be >= 1")
    eps = Fraction(p_d + a * a * (l - 1), l)
    k_max = Fraction(p_d - a * a, l) + l
    return eps, k_max


# ---------------------------------------------------------------------------
# Best-bound search
# ---------------------------------------------------------------------------

def _max_hamiltonian_path(weights: list[list[int]]) -> tuple[int, list[int]]:
    """Maximum-weight Hamiltonian path via subset DP (n <= 9)."""
    n = len(weights)
    if n == 1:
        return 0, [0]
    best: dict[tuple[int, int], tuple[int, int]] = {}
    for v in range(n):
        best[(1 << v, v)] = (0, -1)
    full = (1 << n) - 1
    for mask in range(1, full + 1):
        for v in range(n):
            if not (mask >> v) & 1 or (mask, v) not in best:
                continue
            w0 = best[(mask, v)][0]
            for u in range(n):
                if (mask >> u) & 1:
                    continue
                nm = mask | (1 << u)
                cand = w0 + weights[v][u]
                if (nm, u) not in best or cand > best[(nm, u)][0]:
                    best[(nm, u)] = (cand, v)
    end = max(range(n), key=lambda v: best[(full, v)][0])
    path = [end]
    mask, v = full, end
    while best[(mask, v)][1] != -1:
        u = best[(mask, v)][1]
        mask ^= 1 << v
        path.append(u)
        v = u
    path.reverse()
    return best[(full, end)][0], path


def _path_certificate(cartan: GramMatrix) -> BoundCertificate:
    """Best path-form bound over all signed simultaneous permutations of C."""
    n = cartan.dim
    weights = [[abs(cartan[i, j]) for j in range(n)] for i in range(n)]
    _, path = _max_hamiltonian_path(weights)
    coeffs = [(i, i, 1) for i in range(n)]
    for a, b in zip(path, path[1:]):
        i, j = min(a, b), max(a, b)
        c = cartan[i, j]
        coeffs.append((i, j, -1 if c >= 0 else 1))
    form = QuadraticFormSpec(n, tuple(coeffs))
    return kw_bound(cartan, form)


def _triangle_ok(a: list[list[int]], i: int, j: int, k: int) -> bool:
    x, y, z = a[i][j], a[i][k], a[j][k]
    return 8 + 2 * x * y * z - 2 * (x * x + y * y + z * z) > 0


def best_kw_bound(cartan: GramMatrix, budget: int | None = None,
                  extra_forms: tuple[QuadraticFormSpec, ...] = ()) -> BoundCertificate:
    """Minimize the bound over the standard certificate families.

    Families searched: (a) the path form under all signed simultaneous
    permutations of C (solved exactly as a maximum-weight Hamiltonian path),
    (b) every positive definite form whose doubled matrix has diagonal 2 and
    off-diagonal entries in {-1, 0, 1} (complete branch-and-bound for
    dimension <= 7, node-budgeted above), and (c) any caller-supplied forms.
    The search never returns worse than the plain trace bound.
    """
    n = cartan.dim
    incumbent = _path_certificate(cartan)
    for form in extra_forms:
        cand = kw_bound(cartan, form)
        if cand.value < incumbent.value:
            incumbent = cand

    limited = n >= 8
    if budget is None:
        budget = DEFAULT_BUDGET
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    pairs.sort(key=lambda p: (-abs(cartan[p[0], p[1]]), p))
    tail_opt = [0] * (len(pairs) + 1)
    for idx in range(len(pairs) - 1, -1, -1):
        i, j = pairs[idx]
        tail_opt[idx] = tail_opt[idx + 1] - abs(cartan[i, j])

    a = [[2 if i == j else 0 for j in range(n)] for i in range(n)]
    trace = sum(cartan[i, i] for i in range(n))
    state = {"best": incumbent.value, "witness": None, "nodes": 0, "exhausted": True}

    def dfs(idx: int, partial: int) -> None:
        state["nodes"] += 1
        if limited and state["nodes"] > budget:
            state["exhausted"] = False
            return
        if partial + tail_opt[idx] >= state["best"]:
            return
        if idx == len(pairs):
            mat = SymIntMatrix.from_rows(a)
            if is_positive_definite(mat):
                state["best"] = partial
                state["witness"] = QuadraticFormSpec.from_doubled_matrix(mat)
            return
        i, j = pairs[idx]
        c = cartan[i, j]
        for val in (-1, 0, 1) if c >= 0 else (1, 0, -1):
            a[i][j] = a[j][i] = val
            ok = all(_triangle_ok(a, *sorted((i, j, k)))
                     for k in range(n)
                     if k != i and k != j and a[min(i, k)][max(i, k)] and a[min(j, k)][max(j, k)])
            if ok:
                dfs(idx + 1, partial + val * c)
        a[i][j] = a[j][i] = 0

    dfs(0, trace)
    if state["witness"] is not None:
        incumbent = kw_bound(cartan, state["witness"])
    return incumbent


# ---------------------------------------------------------------------------
# Constrained certifying-form search
# ---------------------------------------------------------------------------

@dataclass
class _LinearConstraint:
    pairs: tuple[tuple[int, int], ...]
    coeffs: tuple[int, ...]
    required: int


@dataclass
class SearchOutcome:
    """Result of the staged certifying-form search."""

    witness: QuadraticFormSpec | None
    prefix_count: int
    prefix_k: int
    nodes: int = 0


def _compile_constraints(dim: int, roots: list[tuple[int, ...]]) -> list[_LinearConstraint]:
    out = []
    for r in roots:
        if len(r) != dim:
            raise DimensionError("root length does not match dimension")
        pairs = []
        coeffs = []
        for i in range(dim):
            if r[i] == 0:
                continue
            for j in range(i + 1, dim):
                if r[j] != 0:
                    pairs.append((i, j))
                    coeffs.append(r[i] * r[j])
        required = 1 - sum(x * x for x in r)
        if not pairs:
            if required != 0:
                raise ConstraintError(f"root {r} cannot be a 1-root of any unit form")
            continue
        slack = sum(abs(c) for c in coeffs)
        if abs(required) > slack:
            raise ConstraintError(f"root {r} over-constrains the off-diagonal entries")
        out.append(_LinearConstraint(tuple(pairs), tuple(coeffs), required))
    return out


def _validate_roots(cartan: GramMatrix, roots: list[tuple[int, ...]]) -> None:
    n = cartan.dim
    gram = [[sum(r[i] * r[j] for r in roots) for j in range(n)] for i in range(n)]
    if gram != cartan.to_lists():
        raise ConstraintError("stacked roots do not reproduce the Cartan matrix")


class _CompletionSearch:
    """Backtracking over symmetric {-1,0,1} off-diagonal completions.

    Entries are assigned column by column; positive definiteness of every
    leading block is maintained through the bordered determinant
    2*det(A_m) - c^T adj(A_m) c, all in exact integer arithmetic.  Linear
    root constraints prune as soon as their remaining slack cannot reach the
    required value.
    """

    def __init__(self, dim: int, constraints: list[_LinearConstraint],
                 cartan: GramMatrix | None = None, target: int | None = None,
                 value_prune_after: int = PREFIX_STAGE):
        self.dim = dim
        self.constraints = constraints
        self.cartan = cartan
        self.target = target
        self.value_prune_after = value_prune_after
        self.by_pair: dict[tuple[int, int], list[tuple[int, int]]] = {}
        for cid, con in enumerate(constraints):
            for pair, coef in zip(con.pairs, con.coeffs):
                self.by_pair.setdefault(pair, []).append((cid, coef))
        self.partial = [c.required * 0 for c in constraints]
        self.slack = [sum(abs(c) for c in con.coeffs) for con in constraints]
        self.a = [[2 if i == j else 0 for j in range(dim)] for i in range(dim)]
        self.dets = [1, 2]  # dets[m] = det of leading m x m block
        self.adjs = [None, [[1]]]
        if cartan is not None:
            self.tail_value = [0] * (dim + 1)
            # tail_value[j] = most negative attainable value of columns >= j
            for j in range(dim - 1, 0, -1):
                self.tail_value[j] = self.tail_value[j + 1] - sum(
                    abs(cartan[i, j]) for i in range(j))
        self.nodes = 0

    def _feasible_constraint(self, cid: int) -> bool:
        need = self.constraints[cid].required - self.partial[cid]
        return abs(need) <= self.slack[cid]

    def _assign(self, i: int, j: int, val: int) -> list[int]:
        self.a[i][j] = self.a[j][i] = val
        touched = []
        for cid, coef in self.by_pair.get((i, j), ()):
            self.partial[cid] += coef * val
            self.slack[cid] -= abs(coef)
            touched.append(cid)
        return touched

    def _unassign(self, i: int, j: int, val: int, touched: list[int]) -> None:
        self.a[i][j] = self.a[j][i] = 0
        for cid in touched:
            coef = next(c for p, c in zip(self.constraints[cid].pairs,
                                          self.constraints[cid].coeffs) if p == (i, j))
            self.partial[cid] -= coef * val
            self.slack[cid] += abs(coef)

    def _bordered_det(self, j: int, upto: int) -> int:
        """det of the principal block on rows {0..upto-1, j}."""
        adj = self.adjs[upto]
        col = [self.a[i][j] for i in range(upto)]
        t = [sum(adj[r][c] * col[c] for c in range(upto)) for r in range(upto)]
        u = sum(col[r] * t[r] for r in range(upto))
        return 2 * self.dets[upto] - u

    def _push_column(self, j: int) -> bool:
        """Complete leading (j+1) block; update det/adjugate stacks."""
        m = j
        adj = self.adjs[m]
        col = [self.a[i][j] for i in range(m)]
        t = [sum(adj[r][c] * col[c] for c in range(m)) for r in range(m)]
        u = sum(col[r] * t[r] for r in range(m))
        d_new = 2 * self.dets[m] - u
        if d_new <= 0:
            return False
        d_old = self.dets[m]
        new_adj = [[(d_new * adj[r][c] + t[r] * t[c]) // d_old for c in range(m)] + [-t[r]]
                   for r in range(m)]
        new_adj.append([-t[c] for c in range(m)] + [d_old])
        self.dets.append(d_new)
        self.adjs.append(new_adj)
        return True

    def _pop_column(self) -> None:
        self.dets.pop()
        self.adjs.pop()

    def count_prefixes(self, k: int) -> int:
        """Count positive definite k x k completions.

        Constraints contained in the first k indices must hold exactly;
        constraints reaching beyond must still be completable from entries in
        {-1,0,1} (slack feasibility), which is how the staged search treats
        its prefixes.
        """
        if k < 1 or k > self.dim:
            raise ValueError("prefix size out of range")
        contained = [cid for cid, con in enumerate(self.constraints)
                     if all(i < k and j < k for i, j in con.pairs)]
        count = 0

        def walk(j: int, i: int) -> None:
            nonlocal count
            self.nodes += 1
            if j == k:
                if all(self.partial[cid] == self.constraints[cid].required
                       for cid in contained):
                    count += 1
                return
            if i == j:
                if not self._push_column(j):
                    return
                walk(j + 1, 0)
                self._pop_column()
                return
            for val in (-1, 0, 1):
                touched = self._assign(i, j, val)
                ok = all(self._feasible_constraint(cid) for cid in touched)
                if ok and i >= 1:
                    ok = self._bordered_det(j, i + 1) > 0
                if ok:
                    walk(j, i + 1)
                self._unassign(i, j, val, touched)

        walk(1, 0)
        return count

    def search(self) -> SearchOutcome:
        """Find the lexicographically smallest full completion, or None.

        Stage one enumerates positive definite PREFIX_STAGE-sized leading
        blocks (counted); stage two completes them under all constraints and
        the target bound.
        """
        n = self.dim
        stage = min(self.value_prune_after, n)
        outcome = SearchOutcome(witness=None, prefix_count=0, prefix_k=stage)
        trace = 0 if self.cartan is None else sum(self.cartan[i, i] for i in range(n))

        def walk(j: int, i: int, value: int) -> bool:
            self.nodes += 1
            if j == n:
                if any(self.partial[cid] != con.required
                       for cid, con in enumerate(self.constraints)):
                    return False
                if self.target is not None and value > self.target:
                    return False
                outcome.witness = QuadraticFormSpec.from_doubled_matrix(
                    SymIntMatrix.from_rows(self.a))
                return True
            if i == j:
                if not self._push_column(j):
                    return False
                if j + 1 == stage:
                    outcome.prefix_count += 1
                done = walk(j + 1, 0, value)
                self._pop_column()
                return done
            for val in (-1, 0, 1):
                touched = self._assign(i, j, val)
                ok = all(self._feasible_constraint(cid) for cid in touched)
                if ok and i >= 1:
                    ok = self._bordered_det(j, i + 1) > 0
                if ok and self.target is not None and j >= stage:
                    cval = value + val * self.cartan[i, j]
                    if cval + self.tail_value[j + 1] - sum(
                            abs(self.cartan[r, j]) for r in range(i + 1, j)) > self.target:
                        ok = False
                else:
                    cval = value + (val * self.cartan[i, j] if self.cartan is not None else 0)
                if ok and walk(j, i + 1, cval):
                    return True
                self._unassign(i, j, val, touched)
            return False

        walk(1, 0, trace)
        outcome.nodes = self.nodes
        return outcome


def search_certifying_form(cartan: GramMatrix, roots: list[tuple[int, ...]],
                           target: int, validate: bool = True) -> SearchOutcome:
    """Exhaustive search for a certifying form below the target.

    Looks for a positive definite form whose doubled matrix has diagonal 2
    and off-diagonal entries in {-1,0,1}, for which every given root r
    satisfies r A r^T = 2, and whose bound value is at most the target.
    Returns the outcome record; ``witness`` is None exactly when no such form
    exists (the search is exhaustive).
    """
    roots = [tuple(r) for r in roots]
    if validate:
        _validate_roots(cartan, roots)
    constraints = _compile_constraints(cartan.dim, roots)
    engine = _CompletionSearch(cartan.dim, constraints, cartan=cartan, target=target)
    return engine.search()


def count_pd_partial_completions(cartan: GramMatrix, roots: list[tuple[int, ...]],
                                 k: int, validate: bool = True) -> int:
    """Number of positive definite k x k leading completions.

    Counts assignments of the free entries a_ij with i,j <= k that keep every
    leading principal block positive definite and satisfy all root
    constraints touching only the first k indices.
    """
    roots = [tuple(r) for r in roots]
    if validate:
        _validate_roots(cartan, roots)
    constraints = _compile_constraints(cartan.dim, roots)
    engine = _CompletionSearch(cartan.dim, constraints)
    return engine.count_prefixes(k)


# ---------------------------------------------------------------------------
# Bundled search instance: the 9x9 Cartan matrix with sixteen prescribed
# decomposition rows used by the counterexample search.
# ---------------------------------------------------------------------------

_COUNTEREXAMPLE_CARTAN = (
    (4, 2, 2, 1, 1, 2, 2, 1, 1),
    (2, 4, 2, 1, 2, 1, 1, 2, 1),
    (2, 2, 4, 2, 1, 1, 1, 1, 2),
    (1, 1, 2, 4, 1, 2, 1, 2, 2),
    (1, 2, 1, 1, 4, 1, 2, 2, 2),
    (2, 1, 1, 2, 1, 4, 2, 2, 1),
    (2, 1, 1, 1, 2, 2, 4, 1, 2),
    (1, 2, 1, 2, 2, 2, 1, 4, 1),
    (1, 1, 2, 2, 2, 1, 2, 1, 4),
)

_COUNTEREXAMPLE_ROWS = (
    (1, 0, 0, 0, 0, 0, 0, 0, 0),
    (0, 1, 0, 0, 0, 0, 0, 0, 0),
    (0, 0, 1, 0, 0, 0, 0, 0, 0),
    (0, 0, 0, 1, 0, 0, 0, 0, 0),
    (0, 0, 0, 0, 1, 0, 0, 0, 0),
    (0, 0, 0, 0, 0, 1, 0, 0, 0),
    (0, 0, 0, 0, 0, 0, 1, 0, 0),
    (0, 0, 0, 0, 0, 0, 0, 1, 0),
    (0, 0, 0, 0, 0, 0, 0, 0, 1),
    (1, 1, 1, 0, 0, 0, 0, 0, 0),
    (1, 0, 0, 0, 0, 1, 1, 0, 0),
    (0, 0, 0, 1, 0, 1, 0, 1, 0),
    (0, 0, 0, 0, 1, 0, 1, 0, 1),
    (0, 1, 0, 0, 1, 0, 0, 1, 0),
    (0, 0, 1, 1, 0, 0, 0, 0, 1),
    (1, 1, 1, 1, 1, 1, 1, 1, 1),
)


@dataclass(frozen=True)
class SearchInstance:
    """A named (Cartan, roots, target) problem for the CLI and tests."""

    name: str
    cartan: GramMatrix
    roots: tuple[tuple[int, ...], ...]
    target: int
    fixed_columns: tuple[tuple[int, ...], ...] = ()


def _build_instances() -> dict[str, SearchInstance]:
    cartan = GramMatrix.from_rows([list(r) for r in _COUNTEREXAMPLE_CARTAN])
    # Two starting columns for the row-count search, in the arrangement the
    # off-diagonal entries force (overlap two, disjoint tails).
    col1 = tuple([1, 1, 1, 1, 0, 0] + [0] * 10)
    col2 = tuple([0, 0, 1, 1, 1, 1] + [0] * 10)
    return {
        "sec4": SearchInstance(
            name="sec4",
            cartan=cartan,
            roots=_COUNTEREXAMPLE_ROWS,
            target=16,
            fixed_columns=(col1, col2),
        )
    }


INSTANCES = _build_instances()
