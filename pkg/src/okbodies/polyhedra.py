"""Exact rational polytope engine.

Everything here is Fraction arithmetic; no floats.  Vertex enumeration is
an incremental double description over a rigorously large starting
simplex, so unboundedness is detected rather than silently truncated.
Volumes come from a pulling triangulation of the tight-set face lattice,
lattice points from a pruned box sweep.  The Gelfand-Tsetlin polytope, its
pattern-counting oracle and the unimodular change of variables that
relates it to the rectangles-cluster polytope live here too.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import factorial, gcd
from typing import Iterable, Optional, Sequence

from .partitions import (
    GridShape,
    Partition,
    label_sort_key,
    parse_partition,
    partition_str,
    rectangles,
)

Vec = tuple[Fraction, ...]
Ineq = tuple[tuple[Fraction, ...], Fraction]  # a, b with a.v + b >= 0


class UnboundedError(ValueError):
    pass


@dataclass(frozen=True)
class HPolytope:
    """Intersection of half-spaces a.v + b >= 0 over an ordered coordinate
    label set."""

    coords: tuple
    ineqs: tuple[Ineq, ...]

    @property
    def dim(self) -> int:
        return len(self.coords)

    def evaluate(self, ineq: Ineq, v: Sequence[Fraction]) -> Fraction:
        a, b = ineq
        return sum(x * y for x, y in zip(a, v)) + b

    def contains(self, v: Sequence[Fraction]) -> bool:
        return all(self.evaluate(q, v) >= 0 for q in self.ineqs)

    def scaled(self, r) -> "HPolytope":
        r = Fraction(r)
        if r < 0:
            raise ValueError("negative dilation")
        return HPolytope(self.coords, tuple((a, b * r) for a, b in self.ineqs))

    def translated(self, t: Sequence[Fraction]) -> "HPolytope":
        # substitute v -> v - t
        return HPolytope(
            self.coords,
            tuple((a, b - sum(x * y for x, y in zip(a, t))) for a, b in self.ineqs),
        )

    def with_ineqs(self, extra: Iterable[Ineq]) -> "HPolytope":
        return HPolytope(self.coords, self.ineqs + tuple(extra))

    def to_json(self) -> dict:
        return {
            "schema": "okbodies.hpolytope/1",
            "coords": [partition_str(c) for c in self.coords],
            "ineqs": [[frac_str(x) for x in a] + [frac_str(b)] for a, b in self.ineqs],
        }

    @classmethod
    def from_json(cls, doc: dict) -> "HPolytope":
        coords = tuple(parse_partition(s) for s in doc["coords"])
        ineqs = tuple(
            (tuple(parse_frac(x) for x in row[:-1]), parse_frac(row[-1]))
            for row in doc["ineqs"]
        )
        return cls(coords, ineqs)


@dataclass
class QPolytope:
    """H-representation plus its computed vertex set."""

    hrep: HPolytope
    vertices: tuple[Vec, ...]
    _lattice: dict = field(default_factory=dict, repr=False)

    @property
    def coords(self):
        return self.hrep.coords

    def is_empty(self) -> bool:
        return not self.vertices

    def is_integral(self) -> bool:
        return all(x.denominator == 1 for v in self.vertices for x in v)

    def nonintegral_vertices(self) -> list[Vec]:
        return [v for v in self.vertices if any(x.denominator != 1 for x in v)]

    def scaled(self, r) -> "QPolytope":
        r = Fraction(r)
        return QPolytope(self.hrep.scaled(r), tuple(tuple(r * x for x in v) for v in self.vertices))

    def translated(self, t: Sequence[Fraction]) -> "QPolytope":
        return QPolytope(
            self.hrep.translated(t),
            tuple(tuple(x + y for x, y in zip(v, t)) for v in self.vertices),
        )

    def to_json(self) -> dict:
        doc = self.hrep.to_json()
        doc["schema"] = "okbodies.qpolytope/1"
        doc["vertices"] = [[frac_str(x) for x in v] for v in self.vertices]
        if 1 in self._lattice:
            doc["lattice"] = [list(p) for p in self._lattice[1]]
        return doc


def frac_str(x: Fraction) -> str:
    return str(Fraction(x))


def parse_frac(s: str) -> Fraction:
    return Fraction(s)


# ---------------------------------------------------------------------------
# vertex enumeration
# ---------------------------------------------------------------------------

def _integer_rows(ineqs: Iterable[Ineq]) -> list[tuple[tuple[int, ...], int]]:
    rows = []
    for a, b in ineqs:
        terms = list(a) + [b]
        denom = 1
        for x in terms:
            denom = denom * x.denominator // gcd(denom, x.denominator)
        ints = [int(x * denom) for x in terms]
        g = 0
        for x in ints:
            g = gcd(g, abs(x))
        if g > 1:
            ints = [x // g for x in ints]
        rows.append((tuple(ints[:-1]), ints[-1]))
    return rows


def enumerate_vertices(H: HPolytope) -> tuple[Vec, ...]:
    """All vertices of a bounded H-polytope, deterministic lex order.

    Starts from a simplex provably containing every vertex (Cramer bound on
    the integer-cleared system), then cuts with each inequality, tracking
    exact tight sets as bitmasks; a surviving artificial facet at the end
    certifies a recession direction and raises.
    """
    d = H.dim
    rows = _integer_rows(H.ineqs)
    amax = max((abs(x) for a, _ in rows for x in a), default=1) or 1
    bmax = max((abs(b) for _, b in rows), default=1) or 1
    B = factorial(d) * amax ** d * (bmax + 1) + 1

    # artificial bits 0..d: coordinate floors then the ceiling sum bound
    nart = d + 1
    verts: list[tuple[Vec, int]] = []
    base = tuple(Fraction(-B) for _ in range(d))
    verts.append((base, (1 << d) - 1))
    for j in range(d):
        pt = list(base)
        pt[j] = Fraction((2 * d - 1) * B)
        mask = ((1 << d) - 1) ^ (1 << j) | (1 << d)
        verts.append((tuple(pt), mask))

    for idx, (a, b) in enumerate(rows):
        bit = 1 << (nart + idx)
        vals = [sum(Fraction(x) * y for x, y in zip(a, v)) + b for v, _ in verts]
        keep: list[tuple[Vec, int]] = []
        pos: list[int] = []
        neg: list[int] = []
        for t, ((v, mask), s) in enumerate(zip(verts, vals)):
            if s > 0:
                pos.append(t)
            elif s < 0:
                neg.append(t)
            else:
                keep.append((v, mask | bit))
        kept_pos = [(verts[t][0], verts[t][1]) for t in pos]
        keep.extend(kept_pos)
        if neg and pos:
            masks = [m for _, m in verts]
            new_pts: dict[Vec, int] = {}
            for u in pos:
                mu = masks[u]
                for w in neg:
                    common = mu & masks[w]
                    if bin(common).count("1") < d - 1:
                        continue
                    # combinatorial adjacency: no third vertex dominates
                    if any(
                        t != u and t != w and common & masks[t] == common
                        for t in range(len(verts))
                    ):
                        continue
                    su, sw = vals[u], vals[w]
                    pt = tuple(
                        (su * yw - sw * yu) / (su - sw)
                        for yu, yw in zip(verts[u][0], verts[w][0])
                    )
                    new_pts[pt] = common | bit
            keep.extend(new_pts.items())
        verts = keep
        if not verts:
            return ()

    art = (1 << nart) - 1
    if any(mask & art for _, mask in verts):
        raise UnboundedError("region is unbounded")
    return tuple(sorted(v for v, _ in verts))


def vertices(H: HPolytope) -> tuple[Vec, ...]:
    return enumerate_vertices(H)


def qpolytope(H: HPolytope) -> QPolytope:
    return QPolytope(H, enumerate_vertices(H))


def scale(P: QPolytope, r) -> QPolytope:
    return P.scaled(r)


def translate(P: QPolytope, t: Sequence[Fraction]) -> QPolytope:
    return P.translated(t)


def hull_of_points(coords: tuple, points: Iterable[Sequence[Fraction]]) -> QPolytope:
    """Facet description of a full-dimensional convex hull via polarity."""
    pts = sorted({tuple(Fraction(x) for x in p) for p in points})
    d = len(coords)
    if affine_rank(pts) != d:
        raise ValueError("hull is not full-dimensional")
    c = tuple(sum(p[i] for p in pts) / len(pts) for i in range(d))
    polar = HPolytope(
        coords,
        tuple((tuple(c[i] - p[i] for i in range(d)), Fraction(1)) for p in pts),
    )
    facets = []
    for y in enumerate_vertices(polar):
        b = 1 + sum(y[i] * c[i] for i in range(d))
        facets.append((tuple(-y[i] for i in range(d)), b))
    H = HPolytope(coords, tuple(facets))
    return QPolytope(H, enumerate_vertices(H))


def affine_rank(points: Sequence[Sequence[Fraction]]) -> int:
    if not points:
        return -1
    p0 = points[0]
    mat = [[Fraction(x) - Fraction(y) for x, y in zip(p, p0)] for p in points[1:]]
    return _rank(mat)


def _rank(mat: list[list[Fraction]]) -> int:
    mat = [row[:] for row in mat]
    rank = 0
    cols = len(mat[0]) if mat else 0
    for c in range(cols):
        piv = next((r for r in range(rank, len(mat)) if mat[r][c]), None)
        if piv is None:
            continue
        mat[rank], mat[piv] = mat[piv], mat[rank]
        inv = 1 / mat[rank][c]
        mat[rank] = [x * inv for x in mat[rank]]
        for r in range(len(mat)):
            if r != rank and mat[r][c]:
                f = mat[r][c]
                mat[r] = [x - f * y for x, y in zip(mat[r], mat[rank])]
        rank += 1
    return rank


def _det(mat: list[list[Fraction]]) -> Fraction:
    mat = [[Fraction(x) for x in row] for row in mat]
    n = len(mat)
    det = Fraction(1)
    for c in range(n):
        piv = next((r for r in range(c, n) if mat[r][c]), None)
        if piv is None:
            return Fraction(0)
        if piv != c:
            mat[c], mat[piv] = mat[piv], mat[c]
            det = -det
        det *= mat[c][c]
        inv = 1 / mat[c][c]
        for r in range(c + 1, n):
            if mat[r][c]:
                f = mat[r][c] * inv
                mat[r] = [x - f * y for x, y in zip(mat[r], mat[c])]
    return det


# ---------------------------------------------------------------------------
# lattice points
# ---------------------------------------------------------------------------

def lattice_points(P: QPolytope, r: int = 1) -> tuple[tuple[int, ...], ...]:
    """Integer points of the r-th dilation, cached per r."""
    if r in P._lattice:
        return P._lattice[r]
    if r == 0:
        pts = ((tuple([0] * P.hrep.dim),) if not P.is_empty() else ())
        # 0-dilation of a nonempty polytope is the origin only if 0 in P's cone;
        # dilating vertices by 0 collapses everything to the origin.
        P._lattice[0] = pts
        return pts
    Q = P.scaled(r)
    d = Q.hrep.dim
    if Q.is_empty():
        P._lattice[r] = ()
        return ()
    lo = [min(v[i] for v in Q.vertices) for i in range(d)]
    hi = [max(v[i] for v in Q.vertices) for i in range(d)]
    lo = [int(x) if x.denominator == 1 else int(x) + (1 if x > 0 else 0) for x in lo]
    hi = [int(x) if x.denominator == 1 else int(x) - (1 if x < 0 else 0) for x in hi]
    rows = _integer_rows(Q.hrep.ineqs)

    # best achievable contribution of coordinates c.. for each inequality
    suffix = []
    for a, _ in rows:
        best = [0] * (d + 1)
        for c in range(d - 1, -1, -1):
            best[c] = best[c + 1] + max(a[c] * lo[c], a[c] * hi[c])
        suffix.append(best)

    out: list[tuple[int, ...]] = []
    partial = [b for _, b in rows]
    point = [0] * d

    def sweep(c: int) -> None:
        if c == d:
            out.append(tuple(point))
            return
        for val in range(lo[c], hi[c] + 1):
            ok = True
            for t, (a, _) in enumerate(rows):
                partial[t] += a[c] * val
                if partial[t] + suffix[t][c + 1] < 0:
                    ok = False
            if ok:
                point[c] = val
                sweep(c + 1)
            for t, (a, _) in enumerate(rows):
                partial[t] -= a[c] * val
        point[c] = 0

    sweep(0)
    pts = tuple(sorted(out))
    P._lattice[r] = pts
    return pts


# ---------------------------------------------------------------------------
# volume
# ---------------------------------------------------------------------------

def volume(P: QPolytope) -> Fraction:
    """Exact Lebesgue volume; 0 (with a warning) for lower-dimensional P."""
    verts = list(P.vertices)
    d = P.hrep.dim
    if len(verts) <= d or affine_rank(verts) < d:
        warnings.warn("polytope is not full-dimensional; volume is 0")
        return Fraction(0)
    tight = [
        frozenset(i for i, q in enumerate(P.hrep.ineqs) if P.hrep.evaluate(q, v) == 0)
        for v in verts
    ]

    def faces_of(sub: frozenset) -> list[frozenset]:
        shared = frozenset.intersection(*(tight[t] for t in sub))
        groups = {}
        for i in range(len(P.hrep.ineqs)):
            if i in shared:
                continue
            g = frozenset(t for t in sub if i in tight[t])
            if g and g != sub:
                groups[g] = True
        maximal = [
            g for g in groups
            if not any(h != g and g < h for h in groups)
        ]
        return maximal

    @lru_cache(maxsize=None)
    def triangulate(sub: frozenset) -> tuple[tuple[int, ...], ...]:
        if len(sub) == 1:
            return ((next(iter(sub)),),)
        v0 = min(sub)
        out = []
        for f in faces_of(sub):
            if v0 in f:
                continue
            for simplex in triangulate(f):
                out.append((v0,) + simplex)
        return tuple(out)

    total = Fraction(0)
    for simplex in triangulate(frozenset(range(len(verts)))):
        if len(simplex) != d + 1:
            raise AssertionError("triangulation produced a degenerate cell")
        p0 = verts[simplex[0]]
        mat = [[verts[t][i] - p0[i] for i in range(d)] for t in simplex[1:]]
        total += abs(_det(mat))
    return total / factorial(d)


# ---------------------------------------------------------------------------
# H-representation canonicalization and comparison
# ---------------------------------------------------------------------------

def canonical_hrep(P: QPolytope) -> frozenset:
    """Facet-defining inequalities as primitive integer rows.

    Requires a full-dimensional polytope; duplicates and redundant rows are
    dropped by checking that the tight vertex set spans a facet.
    """
    d = P.hrep.dim
    rows = _integer_rows(P.hrep.ineqs)
    out = set()
    for (a, b), orig in zip(rows, P.hrep.ineqs):
        tight_pts = [v for v in P.vertices if P.hrep.evaluate(orig, v) == 0]
        if affine_rank(tight_pts) == d - 1:
            out.add((a, b))
    return frozenset(out)


def same_hrep(P: QPolytope, Q: QPolytope) -> bool:
    return P.hrep.coords == Q.hrep.coords and canonical_hrep(P) == canonical_hrep(Q)


def same_vertex_set(P: QPolytope, Q: QPolytope) -> bool:
    return P.hrep.coords == Q.hrep.coords and sorted(P.vertices) == sorted(Q.vertices)


def apply_linear(P: QPolytope, matrix: list[list[Fraction]], inverse: list[list[Fraction]]) -> QPolytope:
    """Image of P under v -> matrix.v, with the inverse supplied for the
    H-representation substitution."""
    d = P.hrep.dim
    ineqs = []
    for a, b in P.hrep.ineqs:
        # a.(inverse.f) + b >= 0
        new_a = tuple(
            sum(a[r] * inverse[r][c] for r in range(d)) for c in range(d)
        )
        ineqs.append((new_a, b))
    verts = tuple(
        tuple(sum(matrix[r][c] * v[c] for c in range(d)) for r in range(d))
        for v in P.vertices
    )
    return QPolytope(HPolytope(P.hrep.coords, tuple(ineqs)), tuple(sorted(verts)))


# ---------------------------------------------------------------------------
# Gelfand-Tsetlin
# ---------------------------------------------------------------------------

def gamma_coords(shape: GridShape) -> tuple[Partition, ...]:
    """Canonical coordinate order for rectangle-cluster polytopes."""
    return tuple(sorted(rectangles(shape), key=label_sort_key))


def _rect(i: int, j: int) -> Partition:
    return (j,) * i


def gt_polytope(shape: GridShape, r) -> HPolytope:
    """Interlacing-pattern polytope in the f-coordinates indexed by
    rectangles; exactly one inequality per superpotential summand."""
    coords = gamma_coords(shape)
    idx = {c: t for t, c in enumerate(coords)}
    d = len(coords)
    r = Fraction(r)
    rows_, cols_ = shape.rows, shape.k

    def e(c: Partition, val: int, a: list) -> None:
        a[idx[c]] += val

    ineqs: list[Ineq] = []

    a = [Fraction(0)] * d
    e(_rect(1, 1), 1, a)
    ineqs.append((tuple(a), Fraction(0)))

    a = [Fraction(0)] * d
    e(_rect(rows_, cols_), -1, a)
    ineqs.append((tuple(a), r))

    for i in range(2, rows_ + 1):
        for j in range(1, cols_ + 1):
            a = [Fraction(0)] * d
            e(_rect(i, j), 1, a)
            e(_rect(i - 1, j), -1, a)
            ineqs.append((tuple(a), Fraction(0)))
    for i in range(1, rows_ + 1):
        for j in range(2, cols_ + 1):
            a = [Fraction(0)] * d
            e(_rect(i, j), 1, a)
            e(_rect(i, j - 1), -1, a)
            ineqs.append((tuple(a), Fraction(0)))
    return HPolytope(coords, tuple(ineqs))


def gt_transform_matrices(shape: GridShape) -> tuple[list[list[Fraction]], list[list[Fraction]]]:
    """The unimodular map F: f_{i x j} = v_{i x j} - v_{(i-1) x (j-1)} and
    its telescoping inverse, as matrices over the canonical coordinates."""
    coords = gamma_coords(shape)
    idx = {c: t for t, c in enumerate(coords)}
    d = len(coords)
    F = [[Fraction(0)] * d for _ in range(d)]
    Finv = [[Fraction(0)] * d for _ in range(d)]
    for c in coords:
        i, j = len(c), c[0]
        F[idx[c]][idx[c]] = Fraction(1)
        if i > 1 and j > 1:
            F[idx[c]][idx[_rect(i - 1, j - 1)]] = Fraction(-1)
        t = 0
        while i - t >= 1 and j - t >= 1:
            Finv[idx[c]][idx[_rect(i - t, j - t)]] = Fraction(1)
            t += 1
    return F, Finv


def gt_map_F(v: Sequence[Fraction], shape: GridShape) -> Vec:
    """Pointwise change of variables f_{i x j} = v_{i x j} - v_{(i-1) x (j-1)}."""
    F, _ = gt_transform_matrices(shape)
    d = len(F)
    return tuple(sum(F[r][c] * Fraction(v[c]) for c in range(d)) for r in range(d))


def gt_map_F_inv(f: Sequence[Fraction], shape: GridShape) -> Vec:
    _, Finv = gt_transform_matrices(shape)
    d = len(Finv)
    return tuple(sum(Finv[r][c] * Fraction(f[c]) for c in range(d)) for r in range(d))


def gt_transform_polytope(P: QPolytope, shape: GridShape) -> QPolytope:
    F, Finv = gt_transform_matrices(shape)
    return apply_linear(P, F, Finv)


def gt_patterns(shape: GridShape, r: int):
    """All integral interlacing triangles with top row (0^k, r^{rows}),
    yielded as tuples of rows of decreasing length."""
    top = tuple([0] * shape.k + [r] * shape.rows)

    def descend(rows: list[tuple[int, ...]]):
        if len(rows[-1]) == 1:
            yield tuple(rows)
            return
        for nxt in _interlacing(rows[-1]):
            rows.append(nxt)
            yield from descend(rows)
            rows.pop()

    yield from descend([top])


def gt_pattern_count(shape: GridShape, r: int) -> int:
    """Number of integral interlacing patterns with top row (0^k, r^{n-k}).

    Direct recursive enumeration with memoization on rows; independent of
    the polytope engine on purpose, so it can serve as a counting oracle.
    """
    top = tuple([0] * shape.k + [r] * shape.rows)

    @lru_cache(maxsize=None)
    def count(row: tuple[int, ...]) -> int:
        if len(row) == 1:
            return 1
        total = 0
        for nxt in _interlacing(row):
            total += count(nxt)
        return total

    result = count(top)
    count.cache_clear()
    return result


def _interlacing(row: tuple[int, ...]):
    m = len(row)

    def grow(i: int, cur: list[int]):
        if i == m - 1:
            yield tuple(cur)
            return
        lo = row[i] if not cur else max(row[i], cur[-1])
        for val in range(lo, row[i + 1] + 1):
            cur.append(val)
            yield from grow(i + 1, cur)
            cur.pop()

    yield from grow(0, [])


def volume_formula(shape: GridShape) -> Fraction:
    """Closed form prod_{1<=i<=k} (k-i)!/(n-i)!: the leading Ehrhart
    coefficient of the degree-one polytope, independent of the chart."""
    out = Fraction(1)
    for i in range(1, shape.k + 1):
        out *= Fraction(factorial(shape.k - i), factorial(shape.n - i))
    return out


# ---------------------------------------------------------------------------
# integer decomposition property
# ---------------------------------------------------------------------------

def idp_r(P: QPolytope, r_max: int = 4, s_max: int = 3) -> Optional[int]:
    """Smallest r <= r_max such that rP is integrally closed (checking
    s-fold decompositions for s <= s_max), or None."""
    for r in range(1, r_max + 1):
        L1 = set(lattice_points(P, r))
        if not L1:
            continue
        good = True
        sums = L1
        for s in range(2, s_max + 1):
            sums = {tuple(x + y for x, y in zip(a, b)) for a in sums for b in L1}
            if sums != set(lattice_points(P, r * s)):
                good = False
                break
        if good:
            return r
    return None
