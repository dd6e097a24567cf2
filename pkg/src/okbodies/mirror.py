"""Superpotentials on plabic charts and their tropical shadows.

A chart carries a distinguished Laurent expansion of the superpotential,
one summand per matching with prescribed boundary; tropicalizing the
summands (min convention, one linear form each) cuts out the chart's
polytope.  Charts related by a square move get their polytopes related by
a piecewise-linear mutation, implemented here on points and, via a
two-piece split and rehull, on whole polytopes.

The base coordinate p at the empty label is normalized to 1 throughout,
so exponent vectors live on the nonempty labels only.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Optional, Sequence

from .charts import NetworkChart, maxdiag_valuation
from .laurent import LaurentPoly, format_laurent
from .partitions import GridShape, Partition, label_sort_key, partition_str
from .plabic import BLACK, Quiver, matchings_with_boundary
from .polyhedra import (
    HPolytope,
    QPolytope,
    Vec,
    enumerate_vertices,
    frac_str,
    gamma_coords,
    hull_of_points,
    qpolytope,
)


@dataclass(frozen=True)
class SuperpotentialExpansion:
    """Summands of the superpotential grouped by boundary index.

    ``terms[i]`` is the Laurent polynomial W_i; the slot ``i == rows`` is
    the q-weighted one.  ``summands`` keeps the raw monomial list, one
    entry per matching (or closed-form summand), before any merging.
    """

    shape: GridShape
    labels: tuple[Partition, ...]
    terms: Mapping[int, LaurentPoly]
    summands: tuple[tuple[int, tuple[int, ...]], ...]

    @property
    def q_index(self) -> int:
        return self.shape.rows

    def term(self, i: int) -> LaurentPoly:
        return self.terms[i]

    def total_terms(self) -> int:
        return len(self.summands)


def _check_positive(terms: Mapping[int, LaurentPoly]) -> None:
    for i, poly in terms.items():
        for exps, coeff in poly.terms.items():
            if not isinstance(coeff, int) or coeff <= 0:
                raise AssertionError(
                    f"W_{i} has a non-positive coefficient {coeff} at {exps}"
                )


def rectangles_superpotential(shape: GridShape) -> SuperpotentialExpansion:
    """Closed-form expansion on the rectangles chart.

    One summand per mixed ratio of rectangle variables; the missing
    rectangles (zero rows or columns) stand for the normalized base
    coordinate and simply drop out of the exponent vectors.
    """
    labels = gamma_coords(shape)
    index = {lab: t for t, lab in enumerate(labels)}
    rows, k, n = shape.rows, shape.k, shape.n

    def mono(num: Iterable[tuple[int, int]], den: Iterable[tuple[int, int]]):
        exps = [0] * len(labels)
        for i, j in num:
            if i > 0 and j > 0:
                exps[index[(j,) * i]] += 1
        for i, j in den:
            if i > 0 and j > 0:
                exps[index[(j,) * i]] -= 1
        return tuple(exps)

    summands: list[tuple[int, tuple[int, ...]]] = []
    summands.append((n, mono([(1, 1)], [])))
    summands.append((rows, mono([(rows - 1, k - 1)], [(rows, k)])))
    for i in range(2, rows + 1):
        for j in range(1, k + 1):
            summands.append(
                (i - 1, mono([(i, j), (i - 2, j - 1)], [(i - 1, j - 1), (i - 1, j)]))
            )
    for i in range(1, rows + 1):
        for j in range(2, k + 1):
            summands.append(
                (n - j + 1, mono([(i, j), (i - 1, j - 2)], [(i - 1, j - 1), (i, j - 1)]))
            )

    terms: dict[int, LaurentPoly] = {}
    for i, exps in summands:
        piece = LaurentPoly.monomial(labels, exps)
        terms[i] = terms[i] + piece if i in terms else piece
    _check_positive(terms)
    return SuperpotentialExpansion(shape, labels, terms, tuple(summands))


def boundary_target_set(i: int, shape: GridShape) -> tuple[int, ...]:
    """Boundary vertices a matching for the i-th summand group must cover:
    the cyclic run i+k+1 .. i-1 together with i+1."""
    k, n = shape.k, shape.n
    out = []
    t = (i + k) % n + 1
    while t != i:
        out.append(t)
        t = t % n + 1
    out.append(i % n + 1)
    return tuple(sorted(set(out)))


def frozen_boundary_labels(chart: NetworkChart) -> dict[int, Partition]:
    """The frozen label behind each boundary arc, keyed 1..n."""
    lab = chart.labeling
    return {
        j: lab.partition_of_face[f] for j, f in lab.faces.arc_face.items()
    }


def marsh_scott_expansion(chart: NetworkChart) -> SuperpotentialExpansion:
    """Matching expansion of the superpotential on an arbitrary chart.

    Each matching M with boundary set J^i contributes the monomial

        w_M * prod_{j = i-1, i+1, ..., i+k} p_{mu_j} / prod_{labels} p,

    where the edge weight collects the labels at the black endpoint that
    do not flank the edge.  Boundary edges have no black endpoint and
    weigh 1.
    """
    G = chart.graph
    shape = chart.shape
    labels = tuple(chart.labels)
    index = {lab: t for t, lab in enumerate(labels)}
    lab = chart.labeling
    faces = lab.faces
    mu = frozen_boundary_labels(chart)
    n = shape.n

    def bump(exps: list[int], p: Partition, delta: int) -> None:
        if p:
            exps[index[p]] += delta

    base = [0] * len(labels)
    for p in labels:
        base[index[p]] -= 1

    summands: list[tuple[int, tuple[int, ...]]] = []
    for i in range(1, n + 1):
        J = boundary_target_set(i, shape)
        matchings = matchings_with_boundary(G, J)
        if not matchings:
            raise TypeError(f"no matchings with boundary {J}; chart is not reduced of this type")
        frozen_factor = [mu[(i - 2) % n + 1]]
        frozen_factor += [mu[(i + t - 1) % n + 1] for t in range(1, shape.k + 1)]
        for M in matchings:
            exps = base[:]
            for p in frozen_factor:
                bump(exps, p, 1)
            for edge in M:
                u, v = tuple(edge)
                black = u if G.color[u] == BLACK else (v if G.color[v] == BLACK else None)
                if black is None:
                    continue
                flank = {faces.of_dart[(u, v)], faces.of_dart[(v, u)]}
                for w in G.rot[black]:
                    f = faces.of_dart[(black, w)]
                    if f not in flank:
                        bump(exps, lab.partition_of_face[f], 1)
            summands.append((i, tuple(exps)))

    terms: dict[int, LaurentPoly] = {}
    for i, exps in summands:
        piece = LaurentPoly.monomial(labels, exps)
        terms[i] = terms[i] + piece if i in terms else piece
    _check_positive(terms)
    return SuperpotentialExpansion(shape, labels, terms, tuple(summands))


def trop_value(poly: LaurentPoly, v: Sequence[Fraction]) -> Fraction:
    """Min-convention tropicalization of a positive Laurent polynomial,
    evaluated at a point of the exponent space."""
    return min(
        sum(e * Fraction(x) for e, x in zip(exps, v))
        for exps in poly.terms
    )


# ---------------------------------------------------------------------------
# tropical systems and polytopes
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class TropSystem:
    """One linear form per superpotential summand, tagged with the index
    of the r-slot that shifts it."""

    coords: tuple[Partition, ...]
    entries: tuple[tuple[tuple[int, ...], int], ...]
    r_vec: tuple[Fraction, ...]

    def shift(self, i: int) -> Fraction:
        return self.r_vec[i - 1]


def standard_r_vec(shape: GridShape, r) -> tuple[Fraction, ...]:
    vec = [Fraction(0)] * shape.n
    vec[shape.rows - 1] = Fraction(r)
    return tuple(vec)


def gamma_system(expansion: SuperpotentialExpansion, r_vec: Sequence) -> TropSystem:
    if len(r_vec) != expansion.shape.n:
        raise ValueError("r_vec must have one slot per boundary vertex")
    return TropSystem(
        expansion.labels,
        tuple((exps, i) for i, exps in expansion.summands),
        tuple(Fraction(r) for r in r_vec),
    )


def gamma_polytope(system: TropSystem) -> HPolytope:
    """Deduplicated inequality description Trop(p_M)(v) + r_i >= 0."""
    seen = set()
    ineqs = []
    for exps, i in system.entries:
        a = tuple(Fraction(e) for e in exps)
        b = system.shift(i)
        if (a, b) not in seen:
            seen.add((a, b))
            ineqs.append((a, b))
    return HPolytope(system.coords, tuple(ineqs))


def gamma_qpolytope(expansion: SuperpotentialExpansion, r_vec: Sequence) -> QPolytope:
    return qpolytope(gamma_polytope(gamma_system(expansion, r_vec)))


def trop_system_to_json(system: TropSystem) -> dict:
    groups: dict[int, list] = {}
    for exps, i in system.entries:
        groups.setdefault(i, []).append(
            [int(e) for e in exps] + [frac_str(system.shift(i))]
        )
    return {
        "schema": "okbodies.tropsystem/1",
        "coords": [partition_str(c) for c in system.coords],
        "r_vec": [frac_str(r) for r in system.r_vec],
        "entries": [
            {"shift_index": i, "forms": groups[i]} for i in sorted(groups)
        ],
    }


def as_vector(valuation: Mapping[Partition, int], coords: Sequence[Partition]) -> Vec:
    """Flatten a label-keyed valuation onto an ordered coordinate tuple."""
    return tuple(Fraction(valuation.get(lab, 0)) for lab in coords)


def translation_vector(r_vec: Sequence, chart: NetworkChart) -> Vec:
    """Shift relating the polytope of a general r-vector to the dilation
    by the total weight: minus the r-weighted sum of frozen valuations."""
    mu = frozen_boundary_labels(chart)
    out = [Fraction(0)] * len(chart.labels)
    for j in range(1, chart.shape.n + 1):
        r = Fraction(r_vec[j - 1])
        if not r:
            continue
        e_j = as_vector(maxdiag_valuation(mu[j], chart.shape, chart.labels), chart.labels)
        out = [x - r * v for x, v in zip(out, e_j)]
    return tuple(out)


# ---------------------------------------------------------------------------
# tropicalized cluster mutation
# ---------------------------------------------------------------------------

def _arrow_sums(quiver: Quiver, nu: Partition, coords: tuple[Partition, ...]):
    if nu in quiver.frozen:
        raise ValueError(f"cannot mutate at the frozen label {partition_str(nu)}")
    if nu not in quiver.labels:
        raise ValueError(f"{partition_str(nu)} is not a label of the quiver")
    index = {lab: t for t, lab in enumerate(coords)}
    into = [0] * len(coords)
    out = [0] * len(coords)
    for g in quiver.labels:
        e = quiver.entry(g, nu)
        if e and g in index:
            # the empty label is normalized to 1 and never enters coords;
            # its slot contributes 0 to either sum
            (into if e > 0 else out)[index[g]] = abs(e)
    return into, out


def trop_mutate_point(
    v: Sequence[Fraction],
    quiver: Quiver,
    nu: Partition,
    coords: Optional[tuple[Partition, ...]] = None,
    variant: str = "min",
) -> Vec:
    """Piecewise-linear mutation of a valuation vector at a mutable label.

    The slot of ``nu`` afterwards carries the coordinate of the label
    created by the corresponding square move; all other slots are fixed.
    """
    coords = coords or tuple(lab for lab in quiver.labels if lab)
    into, out = _arrow_sums(quiver, nu, coords)
    s_in = sum(m * Fraction(x) for m, x in zip(into, v))
    s_out = sum(m * Fraction(x) for m, x in zip(out, v))
    bend = min(s_in, s_out) if variant == "min" else max(s_in, s_out)
    t = coords.index(nu)
    w = list(Fraction(x) for x in v)
    w[t] = bend - w[t]
    return tuple(w)


def trop_mutate_polytope(
    P: QPolytope,
    quiver: Quiver,
    nu: Partition,
    variant: str = "min",
) -> QPolytope:
    """Image of a polytope under the piecewise-linear mutation at ``nu``.

    Splits along the bend hyperplane, maps both pieces linearly, and
    rehulls.  The image of a superpotential polytope is again convex;
    this is asserted post-hoc by checking that every hull vertex pulls
    back into one of the pieces, and an AssertionError means the input
    was not of that kind.
    """
    coords = P.hrep.coords
    if not P.vertices:
        return QPolytope(P.hrep, ())
    into, out = _arrow_sums(quiver, nu, coords)
    t = coords.index(nu)
    a_in = tuple(Fraction(m) for m in into)
    a_out = tuple(Fraction(m) for m in out)
    diff = tuple(x - y for x, y in zip(a_out, a_in))
    if variant == "min":
        pieces = [(diff, a_in), (tuple(-x for x in diff), a_out)]
    else:
        pieces = [(diff, a_out), (tuple(-x for x in diff), a_in)]

    def apply(linear: Vec, v: Sequence[Fraction]) -> Vec:
        w = list(v)
        w[t] = sum(c * x for c, x in zip(linear, v)) - v[t]
        return tuple(w)

    images: set[Vec] = set()
    for halfspace, linear in pieces:
        piece = P.hrep.with_ineqs([(halfspace, Fraction(0))])
        for v in enumerate_vertices(piece):
            images.add(apply(linear, v))
    if len(images) == 1:
        pt = next(iter(images))
        point_hrep = HPolytope(
            coords,
            tuple(
                row
                for s, x in enumerate(pt)
                for row in (
                    (tuple(Fraction(s == c) for c in range(len(coords))), -x),
                    (tuple(-Fraction(s == c) for c in range(len(coords))), x),
                )
            ),
        )
        return QPolytope(point_hrep, (pt,))
    Q = hull_of_points(coords, images)
    for w in Q.vertices:
        ok = False
        for halfspace, linear in pieces:
            pre = apply(linear, w)  # each piece's map is an involution
            if P.hrep.contains(pre) and sum(c * x for c, x in zip(halfspace, pre)) >= 0:
                ok = True
                break
        if not ok:
            raise AssertionError("mutated image failed its convexity certificate")
    return Q


def relabel_point(
    v: Sequence[Fraction],
    old_coords: tuple[Partition, ...],
    nu: Partition,
    new_label: Partition,
) -> tuple[tuple[Partition, ...], Vec]:
    """Reindex a mutated vector onto the successor chart's canonical
    coordinate order, with the slot of ``nu`` renamed to ``new_label``."""
    renamed = [new_label if lab == nu else lab for lab in old_coords]
    new_coords = tuple(sorted(renamed, key=label_sort_key))
    pos = {lab: t for t, lab in enumerate(renamed)}
    return new_coords, tuple(Fraction(v[pos[lab]]) for lab in new_coords)


def relabel_polytope(
    P: QPolytope,
    nu: Partition,
    new_label: Partition,
) -> QPolytope:
    old = P.hrep.coords
    renamed = [new_label if lab == nu else lab for lab in old]
    new_coords = tuple(sorted(renamed, key=label_sort_key))
    pos = {lab: t for t, lab in enumerate(renamed)}
    perm = [pos[lab] for lab in new_coords]
    ineqs = tuple(
        (tuple(a[s] for s in perm), b) for a, b in P.hrep.ineqs
    )
    verts = tuple(sorted(tuple(v[s] for s in perm) for v in P.vertices))
    return QPolytope(HPolytope(new_coords, ineqs), verts)


def describe_expansion(expansion: SuperpotentialExpansion) -> str:
    """Human-readable W_i list, q marked on its slot."""
    lines = []
    for i in sorted(expansion.terms):
        body = format_laurent(expansion.terms[i], lambda lab: "p" + partition_str(lab))
        mark = " (q slot)" if i == expansion.q_index else ""
        lines.append(f"W_{i}{mark} = {body}")
    return "\n".join(lines)
