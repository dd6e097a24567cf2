"""Network charts on the open positroid cell: boundary matrices, flow
polynomials, Pluecker valuations, Puiseux witnesses and the left twist.

A chart is a reduced plabic graph together with its acyclic perfect
orientation with sources 1..n-k.  Directed paths between boundary vertices
acquire Laurent monomial weights in the face variables (the product over
the faces enclosed between the path and the boundary arc to its right),
flows give Pluecker expressions, and the strongly minimal and maximal
terms of those define the two valuations attached to the chart.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Iterable, Optional, Sequence

from .laurent import LaurentPoly
from .partitions import (
    GridShape,
    Partition,
    SkewShape,
    all_partitions,
    cyclic_shift_iter,
    diag0,
    label_sort_key,
    max_diag,
    partition_str,
    partition_to_south_steps,
    partition_to_west_steps,
)
from .plabic import (
    BOUNDARY,
    FaceLabeling,
    Orientation,
    PlabicGraph,
    face_labels,
    perfect_orientation,
    region_left,
)


@dataclass
class NetworkChart:
    """A plabic graph with its source-{1..n-k} orientation and face labels.

    ``labels`` lists the nonempty face labels in canonical order; they are
    the variables of every Laurent polynomial the chart produces.  The
    empty label never appears in a path weight (it is the face behind the
    sources) and is excluded from the universe on purpose.
    """

    graph: PlabicGraph
    labeling: FaceLabeling
    orientation: Orientation
    labels: tuple[Partition, ...]

    @classmethod
    def of(cls, G: PlabicGraph) -> "NetworkChart":
        labeling = face_labels(G)
        orientation = perfect_orientation(G)
        labels = tuple(
            lam for lam in sorted(labeling.face_of_partition, key=label_sort_key) if lam != ()
        )
        return cls(G, labeling, orientation, labels)

    @property
    def shape(self) -> GridShape:
        return self.graph.shape

    def label_index(self, lam: Partition) -> int:
        return self.labels.index(lam)

    # -- paths -------------------------------------------------------------

    def paths_between(self, i: int, j: int) -> list[list[tuple[int, int]]]:
        """All directed paths from boundary vertex i to boundary vertex j."""
        out: list[list[tuple[int, int]]] = []
        start = self.graph.neighbor_of_boundary(i)
        if self.orientation.head[frozenset((i, start))] != start:
            return out

        def dfs(v: int, darts: list[tuple[int, int]]) -> None:
            if v == j:
                out.append(list(darts))
                return
            if self.graph.color[v] == BOUNDARY:
                return
            for u in self.orientation.out_neighbors(v):
                darts.append((v, u))
                dfs(u, darts)
                darts.pop()

        dfs(start, [(i, start)])
        return out

    def path_weight_exponents(self, darts: Sequence[tuple[int, int]]) -> tuple[int, ...]:
        """Exponent vector of the path weight over ``labels``."""
        region = region_left(self.graph, darts, self.labeling.faces)
        exps = [0] * len(self.labels)
        for f in region:
            lam = self.labeling.partition_of_face[f]
            if lam == ():
                raise AssertionError("the empty face can never lie left of a path")
            exps[self.label_index(lam)] += 1
        return tuple(exps)

    def path_weight(self, darts: Sequence[tuple[int, int]]) -> LaurentPoly:
        return LaurentPoly.monomial(self.labels, self.path_weight_exponents(darts))


def boundary_matrix(chart: NetworkChart) -> list[list[LaurentPoly]]:
    """The (n-k) x n matrix whose maximal minors are the flow polynomials.

    Row i, column j holds the signed sum of path weights from source i to
    boundary vertex j; the sign twist (-1)^{#sources strictly between i
    and j} makes all maximal minors subtraction-free.
    """
    shape = chart.shape
    rows, n = shape.rows, shape.n
    V = chart.labels
    M: list[list[LaurentPoly]] = []
    for i in range(1, rows + 1):
        row = []
        for j in range(1, n + 1):
            if j <= rows:
                row.append(LaurentPoly.one(V) if i == j else LaurentPoly.zero(V))
                continue
            total = LaurentPoly.zero(V)
            for darts in chart.paths_between(i, j):
                total = total + chart.path_weight(darts)
            sign = -1 if (rows - i) % 2 else 1
            row.append(sign * total)
        M.append(row)
    return M


# ---------------------------------------------------------------------------
# flow polynomials
# ---------------------------------------------------------------------------

class _ChartCache:
    # boundary matrices are reused heavily during a census sweep
    def __init__(self):
        self.matrix: Optional[list[list[LaurentPoly]]] = None


def _matrix_of(chart: NetworkChart) -> list[list[LaurentPoly]]:
    cache = getattr(chart, "_cache", None)
    if cache is None:
        cache = _ChartCache()
        object.__setattr__(chart, "_cache", cache)
    if cache.matrix is None:
        cache.matrix = boundary_matrix(chart)
    return cache.matrix


def flow_polynomial(chart: NetworkChart, lam: Partition) -> LaurentPoly:
    """The Pluecker coordinate P_lam in the chart's face variables.

    Computed as the maximal minor of the boundary matrix on the south-step
    columns of lam, by a division-free column-subset expansion.
    """
    M = _matrix_of(chart)
    cols = sorted(j - 1 for j in partition_to_south_steps(lam, chart.shape))
    V = chart.labels
    prev: dict[tuple[int, ...], LaurentPoly] = {(): LaurentPoly.one(V)}
    for r in range(len(cols)):
        cur: dict[tuple[int, ...], LaurentPoly] = {}
        for S in combinations(cols, r + 1):
            acc = LaurentPoly.zero(V)
            for t, c in enumerate(S):
                entry = M[r][c]
                if not entry:
                    continue
                sub = prev[S[:t] + S[t + 1 :]]
                term = entry * sub
                acc = acc + (term if (r + t) % 2 == 0 else -term)
            cur[S] = acc
        prev = cur
    return prev[tuple(cols)]


def enumerate_flows(chart: NetworkChart, lam: Partition) -> list[list[list[tuple[int, int]]]]:
    """All vertex-disjoint path systems realizing P_lam.

    The sources not in the south-step set are paired with the sinks in it,
    largest remaining source to smallest remaining sink; planarity then
    rules out any other pairing.
    """
    shape = chart.shape
    J = set(partition_to_south_steps(lam, shape))
    srcs = sorted((i for i in range(1, shape.rows + 1) if i not in J), reverse=True)
    sinks = sorted(j for j in J if j > shape.rows)
    if len(srcs) != len(sinks):
        raise AssertionError("source/sink mismatch")

    pairs = list(zip(srcs, sinks))
    flows: list[list[list[tuple[int, int]]]] = []

    def place(idx: int, used: set[int], system: list[list[tuple[int, int]]]) -> None:
        if idx == len(pairs):
            flows.append([list(p) for p in system])
            return
        i, j = pairs[idx]
        for path in chart.paths_between(i, j):
            verts = {v for d in path for v in d}
            if verts & used:
                continue
            system.append(path)
            place(idx + 1, used | verts, system)
            system.pop()

    place(0, set(), [])
    return flows


def flow_polynomial_direct(chart: NetworkChart, lam: Partition) -> LaurentPoly:
    """Same Pluecker coordinate, by explicit flow enumeration."""
    V = chart.labels
    total = LaurentPoly.zero(V)
    for flow in enumerate_flows(chart, lam):
        exps = [0] * len(V)
        for path in flow:
            for t, e in enumerate(chart.path_weight_exponents(path)):
                exps[t] += e
        total = total + LaurentPoly.monomial(V, exps)
    return total


def flow_weight(chart: NetworkChart, flow: list[list[tuple[int, int]]]) -> tuple[int, ...]:
    exps = [0] * len(chart.labels)
    for path in flow:
        for t, e in enumerate(chart.path_weight_exponents(path)):
            exps[t] += e
    return tuple(exps)


# ---------------------------------------------------------------------------
# valuations
# ---------------------------------------------------------------------------

ValuationVector = dict[Partition, int]


def _as_dict(chart: NetworkChart, exps: tuple[int, ...]) -> ValuationVector:
    return {lam: e for lam, e in zip(chart.labels, exps)}


def val_min(chart: NetworkChart, lam: Partition) -> ValuationVector:
    """Exponent of the strongly minimal term of the flow polynomial."""
    term = flow_polynomial(chart, lam).strongly_min_term()
    if term is None:
        raise RuntimeError(f"P_{partition_str(lam)} has no strongly minimal term")
    return _as_dict(chart, term[0])


def val_max(chart: NetworkChart, lam: Partition) -> ValuationVector:
    term = flow_polynomial(chart, lam).strongly_max_term()
    if term is None:
        raise RuntimeError(f"P_{partition_str(lam)} has no strongly maximal term")
    return _as_dict(chart, term[0])


def maxdiag_valuation(lam: Partition, shape: GridShape, labels: Iterable[Partition]) -> ValuationVector:
    """Closed form for the lowest-term valuation: mu -> MaxDiag(mu \\ lam)."""
    return {mu: max_diag(SkewShape(mu, lam)) for mu in labels}


def highest_valuation(lam: Partition, shape: GridShape, labels: Iterable[Partition]) -> ValuationVector:
    """Closed form for the highest-term valuation:
    mu -> Diag0(mu) - MaxDiag(lam \\ shift^{n-k}(mu))."""
    out: ValuationVector = {}
    for mu in labels:
        shifted = cyclic_shift_iter(mu, shape, shape.rows)
        out[mu] = diag0(mu) - max_diag(SkewShape(lam, shifted))
    return out


def valuation_table(chart: NetworkChart, variant: str = "min") -> dict[Partition, ValuationVector]:
    fn = val_min if variant == "min" else val_max
    return {lam: fn(chart, lam) for lam in all_partitions(chart.shape)}


# ---------------------------------------------------------------------------
# Puiseux witness
# ---------------------------------------------------------------------------

@dataclass
class PuiseuxWitness:
    """A point of the mirror Grassmannian over Puiseux series in t whose
    Pluecker valuations realize mu -> MaxDiag(mu \\ lam).

    The point is a lattice network on the transposed grid (k rows, n-k
    columns) with box contents t^e; ``contents`` holds the nonzero
    exponents.  Pluecker coordinates are sums over vertex-disjoint flows,
    so they are polynomials in t and 1/t with positive coefficients and
    their valuation is the minimal exponent present.
    """

    shape: GridShape
    lam: Partition
    contents: dict[tuple[int, int], int]

    def pluecker(self, mu: Partition) -> LaurentPoly:
        return _dual_grid_pluecker(self.shape, self.contents, mu)

    def valuation(self, mu: Partition) -> int:
        p = self.pluecker(mu)
        if not p:
            raise AssertionError("Pluecker coordinates of the witness never vanish")
        return min(e[0] for e in p.terms)


def puiseux_witness(lam: Partition, shape: GridShape) -> PuiseuxWitness:
    """Box contents for the witness attached to lam.

    Transpose lam, rotate it into the southeast corner of the k x (n-k)
    grid, and follow its border from the northeast grid corner to the
    southwest one.  Boxes northwest of the corners get t where the path
    turns from south to west and 1/t where it turns from west to south;
    corners whose northwest box falls outside the grid contribute nothing.
    """
    k, cols = shape.k, shape.rows
    lamT = tuple(sum(1 for p in lam if p >= r) for r in range(1, (lam[0] if lam else 0) + 1))
    heights = [sum(1 for part in lamT if part >= cols + 1 - c) for c in range(1, cols + 1)]

    contents: dict[tuple[int, int], int] = {}
    h = 0
    for c in range(cols, 0, -1):
        t_c = k - heights[c - 1]
        if t_c < h:
            raise AssertionError("border heights must be monotone")
        if t_c > h:
            if h >= 1:
                contents[(h, c)] = contents.get((h, c), 0) - 1
            contents[(t_c, c)] = contents.get((t_c, c), 0) + 1
        h = t_c
    return PuiseuxWitness(shape, lam, {b: e for b, e in contents.items() if e})


def _dual_grid_pluecker(shape: GridShape, contents: dict[tuple[int, int], int], mu: Partition) -> LaurentPoly:
    """Sum over vertex-disjoint flows on the k x (n-k) grid, west steps of
    mu as the column set.  Paths are stored as their crossing heights."""
    k, cols, n = shape.k, shape.rows, shape.n
    west = partition_to_west_steps(mu, shape)
    srcs = sorted((i for i in range(1, k + 1) if i not in west), reverse=True)
    sinks = sorted(j for j in west if j > k)
    pairs = list(zip(srcs, sinks))

    col_cost = [[sum(contents.get((r, c), 0) for r in range(hh + 1, k + 1)) for hh in range(k)]
                for c in range(cols + 1)]

    V = ("t",)
    total = LaurentPoly.zero(V)

    def paths_for(i: int, j: int):
        tv = n - j  # target vertical line
        out = []

        def grow(c: int, h: int, crossings: list[int]) -> None:
            if c == tv:
                out.append(list(crossings))
                return
            for nh in range(h, k):
                grow(c - 1, nh, crossings + [nh])

        # entry crossing of the easternmost column is forced onto line i-1
        grow(cols - 1, i - 1, [i - 1])
        return out

    def occupied(j: int, crossings: list[int]) -> frozenset:
        tv = n - j
        pts = set()
        cs = crossings + [k]  # the final run to the bottom edge
        for t, c in enumerate(range(cols, tv, -1)):
            h_here = cs[t]
            h_next = cs[t + 1]
            for y in range(h_here, h_next + 1):
                if y < k:
                    pts.add((c - 1, y))
        return frozenset(pts)

    def weight(crossings: list[int]) -> int:
        return sum(col_cost[c][h] for c, h in zip(range(cols, cols - len(crossings), -1), crossings))

    choices = [
        [(occupied(j, cr), weight(cr)) for cr in paths_for(i, j)]
        for i, j in pairs
    ]

    def place(idx: int, used: frozenset, acc: int) -> None:
        nonlocal total
        if idx == len(choices):
            total = total + LaurentPoly.monomial(V, (acc,))
            return
        for pts, w in choices[idx]:
            if pts & used:
                continue
            place(idx + 1, used | pts, acc + w)

    place(0, frozenset(), 0)
    return total


# ---------------------------------------------------------------------------
# the left twist
# ---------------------------------------------------------------------------

def left_twist(A: Sequence[Sequence], p: Optional[int] = None) -> list[list]:
    """Column-cyclic left twist of a full-rank (n-k) x n matrix.

    Column i of the result pairs to 1 with column i of A and to 0 with the
    n-k-1 columns cyclically preceding it.  Entries are Fractions unless a
    prime p is given, in which case everything happens in F_p.  Raises
    ZeroDivisionError when a cyclic window of A is singular, which means A
    is outside the open cell.
    """
    d = len(A)
    n = len(A[0])
    out_cols: list[list] = []
    for i in range(n):
        window = [(i - t) % n for t in range(d)]
        rows = [[A[r][c] for r in range(d)] for c in window]
        rhs = [1] + [0] * (d - 1)
        out_cols.append(_solve_linear(rows, rhs, p))
    return [[out_cols[c][r] for c in range(n)] for r in range(d)]


def _solve_linear(M: list[list], rhs: list, p: Optional[int]):
    d = len(M)
    if p is None:
        mat = [[Fraction(x) for x in row] + [Fraction(rhs[r])] for r, row in enumerate(M)]
    else:
        mat = [[x % p for x in row] + [rhs[r] % p] for r, row in enumerate(M)]
    for c in range(d):
        piv = next((r for r in range(c, d) if mat[r][c]), None)
        if piv is None:
            raise ZeroDivisionError("singular window; the point is not in the open cell")
        mat[c], mat[piv] = mat[piv], mat[c]
        inv = pow(mat[c][c], p - 2, p) if p else 1 / mat[c][c]
        mat[c] = [x * inv % p if p else x * inv for x in mat[c]]
        for r in range(d):
            if r != c and mat[r][c]:
                f = mat[r][c]
                mat[r] = [
                    (x - f * y) % p if p else x - f * y
                    for x, y in zip(mat[r], mat[c])
                ]
    return [mat[r][d] for r in range(d)]


# Frozen-by-frozen adjustment M for the k=3, n=5 rectangles seed, so that
# the twist pullback of every network parameter x_mu is the monomial
# prod_nu P_nu^{(B+M)_{mu,nu}}.  No closed form is known in general; this
# instance was fixed by matching the twist of the running example.
G25_TWIST_ADJUSTMENT: dict[tuple[Partition, Partition], int] = {
    ((3,), (3,)): 1,
    ((3, 3), (3,)): -1,
    ((3, 3), (2, 2)): -1,
    ((2, 2), (2, 2)): 1,
    ((2, 2), (1, 1)): -1,
    ((1, 1), (1, 1)): 1,
}


def adjusted_exchange(quiver, adjustment: dict[tuple[Partition, Partition], int]):
    """Exchange matrix rows with a frozen-pair adjustment added on top."""
    for (mu, nu) in adjustment:
        if mu not in quiver.frozen or nu not in quiver.frozen:
            raise ValueError("adjustment entries must pair frozen labels")
    return {
        mu: {nu: quiver.entry(mu, nu) + adjustment.get((mu, nu), 0) for nu in quiver.labels}
        for mu in quiver.labels
    }


def cluster_matrix_g25(P: dict[Partition, int], p: Optional[int] = None) -> list[list]:
    """Row-reduced 2x5 matrix whose Pluecker coordinates restrict to the
    given values on the rectangles cluster of the k=3, n=5 grid.

    Entries are rational expressions in the six cluster coordinates (the
    maximal one is normalized to 1); pass a prime p to work in F_p.
    """
    P0, P1, P2, P3 = P[()], P[(1,)], P[(2,)], P[(3,)]
    P11, P22 = P[(1, 1)], P[(2, 2)]

    def div(a, b):
        return a * pow(b, -1, p) % p if p else Fraction(a, 1) / b

    row1 = [1, 0, -P22, -div(P22 * P0 + P2 * P11, P1), -P2]
    row2 = [0, 1, div(P1 + P3 * P22, P2), div(P1 * P0 + P3 * P22 * P0 + P3 * P2 * P11, P1 * P2), P3]
    if p:
        row1 = [x % p for x in row1]
        row2 = [x % p for x in row2]
    return [row1, row2]


def check_twist_diagram(p: int, rng, trials: int = 20) -> None:
    """Close the twist square numerically in F_p, ``trials`` times.

    A random cluster point is lifted to a matrix A, twisted; separately its
    cluster coordinates are pushed through the monomial map given by the
    adjusted exchange matrix and fed to the boundary measurement.  The two
    resulting Pluecker vectors must agree projectively.  Raises on any
    mismatch; sampling outside the open cell just resamples.
    """
    from .plabic import build_rectangles, normalize, quiver_of

    shape = GridShape(3, 5)
    G = normalize(build_rectangles(shape))
    chart = NetworkChart.of(G)
    Bt = adjusted_exchange(quiver_of(G), G25_TWIST_ADJUSTMENT)
    M = _matrix_of(chart)
    cluster = [(), (1,), (2,), (3,), (1, 1), (2, 2)]

    done = 0
    while done < trials:
        P = {lam: rng.randrange(1, p) for lam in cluster}
        P[(3, 3)] = 1
        A = cluster_matrix_g25(P, p)
        vec = pluecker_vector_mod_p(A, shape, p)
        if not all(vec.values()):
            continue  # not in the open cell, resample
        for lam in cluster:
            if vec[lam] != P[lam]:
                raise AssertionError(f"cluster matrix does not interpolate P_{partition_str(lam)}")

        tau = left_twist(A, p)
        x = {
            mu: _monomial_eval(P, Bt[mu], p)
            for mu in chart.labels
        }
        N = [[entry.eval_mod_p(x, p) for entry in row] for row in M]
        vec_n = pluecker_vector_mod_p(N, shape, p)
        vec_t = pluecker_vector_mod_p(tau, shape, p)
        if not vec_n[(3, 3)] or not vec_t[(3, 3)]:
            continue
        scale = vec_t[(3, 3)] * pow(vec_n[(3, 3)], -1, p) % p
        for lam, v in vec_n.items():
            if v * scale % p != vec_t[lam]:
                raise AssertionError(
                    f"twist diagram fails at P_{partition_str(lam)} (trial {done})"
                )
        done += 1


def _monomial_eval(P: dict[Partition, int], row: dict[Partition, int], p: int) -> int:
    out = 1
    for nu, e in row.items():
        if e:
            out = out * pow(P[nu], e, p) % p
    return out


def pluecker_vector_mod_p(A: Sequence[Sequence[int]], shape: GridShape, p: int) -> dict[Partition, int]:
    """All Pluecker coordinates of a mod-p matrix, keyed by partitions."""
    from .plabic import _pluecker_mod_p

    out = {}
    for lam in all_partitions(shape):
        cols = sorted(j - 1 for j in partition_to_south_steps(lam, shape))
        out[lam] = _pluecker_mod_p([list(r) for r in A], cols, p)
    return out


def random_open_cell_point(shape: GridShape, p: int, rng) -> list[list[int]]:
    """Row-reduced random mod-p matrix with every Pluecker nonzero.

    Columns 1..n-k form the identity, so the top Pluecker is 1.
    """
    d, n = shape.rows, shape.n
    while True:
        A = [[1 if c == r else 0 for c in range(d)] + [rng.randrange(1, p) for _ in range(n - d)]
             for r in range(d)]
        vals = pluecker_vector_mod_p(A, shape, p)
        if all(v for v in vals.values()):
            return A
