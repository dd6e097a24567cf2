"""Exact polytope engine: double description, lattice sweeps, volumes and
the interlacing-pattern machinery, pinned on cubes, simplices and the
frozen pattern counts."""

import json
import math
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from okbodies.partitions import GridShape
from okbodies.polyhedra import (
    HPolytope,
    QPolytope,
    UnboundedError,
    affine_rank,
    canonical_hrep,
    enumerate_vertices,
    frac_str,
    gamma_coords,
    gt_map_F,
    gt_map_F_inv,
    gt_pattern_count,
    gt_patterns,
    gt_polytope,
    gt_transform_matrices,
    gt_transform_polytope,
    hull_of_points,
    idp_r,
    lattice_points,
    parse_frac,
    qpolytope,
    same_hrep,
    scale,
    volume,
    volume_formula,
)

F = Fraction


def axis_coords(d):
    return tuple((i + 1,) for i in range(d))


def cube(d):
    ineqs = []
    for i in range(d):
        a = [F(0)] * d
        a[i] = F(1)
        ineqs.append((tuple(a), F(0)))
        a = [F(0)] * d
        a[i] = F(-1)
        ineqs.append((tuple(a), F(1)))
    return qpolytope(HPolytope(axis_coords(d), tuple(ineqs)))


def simplex(d):
    ineqs = []
    for i in range(d):
        a = [F(0)] * d
        a[i] = F(1)
        ineqs.append((tuple(a), F(0)))
    ineqs.append((tuple([F(-1)] * d), F(1)))
    return qpolytope(HPolytope(axis_coords(d), tuple(ineqs)))


def test_cube_vertices_and_volume():
    for d in (1, 2, 3, 4):
        P = cube(d)
        assert len(P.vertices) == 2 ** d
        assert volume(P) == 1
        assert P.is_integral()
        assert len(canonical_hrep(P)) == 2 * d


def test_cube_lattice_counts():
    P = cube(3)
    for r in (1, 2, 3):
        assert len(lattice_points(P, r)) == (r + 1) ** 3
    assert lattice_points(P, 1) == lattice_points(scale(P, 1), 1)
    assert lattice_points(P, 2) == lattice_points(scale(P, 2), 1)


def test_simplex_volume_and_points():
    for d in (2, 3, 5):
        S = simplex(d)
        assert volume(S) == oracles.simplex_volume(sorted(S.vertices))
        assert volume(S) == F(1, math.factorial(d))
        assert len(S.vertices) == d + 1
        assert len(lattice_points(S, 1)) == d + 1


def test_empty_region_has_no_vertices():
    H = HPolytope(axis_coords(1), (((F(1),), F(-1)), ((F(-1),), F(0))))
    assert enumerate_vertices(H) == ()
    assert qpolytope(H).is_empty()


def test_unbounded_region_raises():
    H = HPolytope(axis_coords(2), (((F(1), F(0)), F(0)), ((F(0), F(1)), F(0))))
    with pytest.raises(UnboundedError):
        enumerate_vertices(H)


def test_redundant_rows_are_not_facets():
    P = cube(2)
    fat = qpolytope(P.hrep.with_ineqs([((F(1), F(0)), F(5)), ((F(1), F(1)), F(7))]))
    assert same_hrep(P, fat)
    assert len(canonical_hrep(fat)) == 4


def test_vertices_satisfy_every_inequality_exactly():
    P = simplex(4)
    for v in P.vertices:
        assert P.hrep.contains(v)


@settings(max_examples=40, deadline=None)
@given(
    st.lists(
        st.tuples(st.integers(-4, 4), st.integers(-4, 4), st.integers(-4, 4)),
        min_size=4,
        max_size=10,
    )
)
def test_hull_of_points_is_sound(pts):
    pts = [tuple(F(x) for x in p) for p in pts]
    if affine_rank(pts) < 3:
        return
    Q = hull_of_points(axis_coords(3), pts)
    assert set(Q.vertices) <= set(pts)
    for p in pts:
        assert Q.hrep.contains(p)
    # rebuilding from the hull's own H-rep changes nothing
    assert sorted(enumerate_vertices(Q.hrep)) == sorted(Q.vertices)


def test_translate_and_scale_track_vertices():
    P = simplex(3)
    t = (F(1), F(-2), F(1, 2))
    Q = P.translated(t)
    assert sorted(Q.vertices) == sorted(tuple(x + y for x, y in zip(v, t)) for v in P.vertices)
    assert volume(Q) == volume(P)
    R = scale(P, F(3, 2))
    assert volume(R) == F(27, 8) * volume(P)


def test_degenerate_volume_warns():
    # a segment inside the plane has volume 0 in dimension 2
    H = HPolytope(
        axis_coords(2),
        (
            ((F(1), F(0)), F(0)),
            ((F(-1), F(0)), F(1)),
            ((F(0), F(1)), F(0)),
            ((F(0), F(-1)), F(0)),
        ),
    )
    P = qpolytope(H)
    with pytest.warns(UserWarning):
        assert volume(P) == 0


# -- interlacing patterns ---------------------------------------------------

SHAPES = [GridShape(k=2, n=4), GridShape(k=3, n=5), GridShape(k=2, n=5), GridShape(k=3, n=6)]

PATTERN_COUNTS = {
    # frozen from the brute-force enumeration oracle
    (2, 4): {1: 6, 2: 20, 3: 50},
    (3, 5): {1: 10, 2: 50, 3: 175},
    (2, 5): {1: 10, 2: 50, 3: 175},
    (3, 6): {1: 20, 2: 175, 3: 980},
}


def test_gt_pattern_count_matches_oracle():
    for shape in SHAPES:
        for r in (1, 2, 3):
            want = PATTERN_COUNTS[(shape.k, shape.n)][r]
            assert gt_pattern_count(shape, r) == want
            assert oracles.gt_dimension(r, shape.k, shape.n) == want
        assert gt_pattern_count(shape, 0) == 1


def test_gt_patterns_enumerator_agrees():
    shape = GridShape(k=3, n=5)
    pats = list(gt_patterns(shape, 1))
    assert len(pats) == 10
    for rows in pats:
        assert rows[0] == (0, 0, 0, 1, 1)
        assert [len(r) for r in rows] == [5, 4, 3, 2, 1]
        for top, bot in zip(rows, rows[1:]):
            assert all(top[i] <= bot[i] <= top[i + 1] for i in range(len(bot)))


def test_gt_polytope_lattice_equals_pattern_count():
    for shape in SHAPES:
        for r in (1, 2):
            P = qpolytope(gt_polytope(shape, r))
            assert len(lattice_points(P, 1)) == PATTERN_COUNTS[(shape.k, shape.n)][r]


def test_gt_transform_is_unimodular():
    from okbodies.polyhedra import _det

    for shape in SHAPES:
        Fm, Finv = gt_transform_matrices(shape)
        d = len(Fm)
        prod = [
            [sum(Fm[i][t] * Finv[t][j] for t in range(d)) for j in range(d)]
            for i in range(d)
        ]
        assert prod == [[F(int(i == j)) for j in range(d)] for i in range(d)]
        assert abs(_det(Fm)) == 1


@settings(max_examples=30, deadline=None)
@given(st.lists(st.integers(-6, 6), min_size=6, max_size=6))
def test_gt_map_roundtrip(vals):
    shape = GridShape(k=3, n=5)
    v = tuple(F(x) for x in vals)
    assert gt_map_F_inv(gt_map_F(v, shape), shape) == v


def test_volume_formula_values():
    assert volume_formula(GridShape(k=3, n=5)) == F(1, 144)
    assert volume_formula(GridShape(k=2, n=4)) == F(1, 12)
    assert volume_formula(GridShape(k=3, n=6)) == F(1, 8640)


def test_idp_of_unit_cube():
    assert idp_r(cube(3)) == 1


def test_json_roundtrip():
    P = simplex(2)
    doc = P.hrep.to_json()
    text = json.dumps(doc)
    back = HPolytope.from_json(json.loads(text))
    assert back == P.hrep
    assert parse_frac(frac_str(F(-7, 3))) == F(-7, 3)


def test_gamma_coords_are_rectangles_in_canonical_order():
    assert gamma_coords(GridShape(k=3, n=5)) == (
        (1,),
        (1, 1),
        (2,),
        (3,),
        (2, 2),
        (3, 3),
    )
