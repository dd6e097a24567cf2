import random

import pytest

from okbodies.partitions import GridShape, all_partitions, frozen_mu
from okbodies.plabic import (
    PlabicGraph,
    build_rectangles,
    contract,
    face_labels,
    faces_of,
    matching_lattice,
    matchings_with_boundary,
    movable_faces,
    normalize,
    perfect_orientation,
    quiver_of,
    region_left,
    square_move,
    trip,
    trip_permutation,
)

G35 = GridShape(3, 5)
G36 = GridShape(3, 6)


@pytest.fixture(scope="module")
def rec35():
    return build_rectangles(G35)


@pytest.fixture(scope="module")
def rec36():
    return build_rectangles(G36)


def test_face_count_and_labels(rec35):
    assert len(faces_of(rec35)) == G35.num_boxes + 1
    lab = face_labels(rec35)
    assert set(lab.labels) == {(), (1,), (2,), (3,), (1, 1), (2, 2), (3, 3)}
    assert lab.frozen == frozenset({(), (3,), (3, 3), (2, 2), (1, 1)})
    assert lab.mutable == [(1,), (2,)]


def test_boundary_faces_are_the_frozen_rectangles(rec35, rec36):
    for G in (rec35, rec36):
        lab = face_labels(G)
        expect = {frozen_mu(i, G.shape) for i in range(1, G.shape.n + 1)}
        assert lab.frozen == frozenset(expect)


def test_trip_permutation_is_the_shift(rec35, rec36):
    for G in (rec35, rec36):
        n, d = G.shape.n, G.shape.rows
        assert trip_permutation(G) == {i: (i + d - 1) % n + 1 for i in range(1, n + 1)}


def test_trips_end_to_end(rec35):
    t = trip(rec35, 1)
    assert t[0][0] == 1 and t[-1][1] == 3
    # a trip never repeats a dart
    assert len(set(t)) == len(t)


def test_quiver_matches_frozen_matrix(rec35):
    Q = quiver_of(rec35)
    order = [(1,), (2,), (3,), (3, 3), (2, 2), (1, 1), ()]
    assert [Q.entry((1,), y) for y in order] == [0, 1, 0, 0, -1, 1, -1]
    assert [Q.entry((2,), y) for y in order] == [-1, 0, 1, -1, 1, 0, 0]
    # skew-symmetry, and no arrows between frozen labels
    for x in order:
        for y in order:
            assert Q.entry(x, y) == -Q.entry(y, x)
            if x in Q.frozen and y in Q.frozen:
                assert Q.entry(x, y) == 0


def test_quiver_mutation_involutive(rec35):
    Q = quiver_of(rec35)
    QQ = Q.mutate((1,)).mutate((1,))
    for x in Q.labels:
        for y in Q.labels:
            assert Q.entry(x, y) == QQ.entry(x, y)


def test_normalize_idempotent_and_label_preserving(rec35, rec36):
    for G in (rec35, rec36):
        H = normalize(G)
        assert normalize(H) == H
        assert set(face_labels(H).labels) == set(face_labels(G).labels)
        assert set(face_labels(contract(G)).labels) == set(face_labels(G).labels)
        assert all(H.degree(v) <= 3 for v in H.internal_vertices())


def test_perfect_orientation(rec35):
    O = perfect_orientation(rec35)
    assert O.sources == frozenset({1, 2})
    assert len(O.topo) == len(rec35.vertices())
    # each internal white has exactly one incoming edge, blacks one outgoing
    for v in rec35.internal_vertices():
        incoming = sum(
            1 for u in rec35.rot[v] if O.head[frozenset((u, v))] == v
        )
        if rec35.color[v] == "white":
            assert incoming == 1
        else:
            assert len(rec35.rot[v]) - incoming == 1


def test_matching_counts_match_flow_counts(rec35):
    # frozen counts: number of flows for each boundary subset of the
    # superpotential, cross-checked by hand against the flow polynomials
    for J, want in [((2, 5), 3), ((1, 3), 1), ((2, 4), 2), ((3, 5), 2), ((1, 4), 1)]:
        assert len(matchings_with_boundary(rec35, J)) == want


def test_matching_lattice_chain(rec35):
    lat = matching_lattice(rec35, (2, 5))
    assert len(lat.matchings) == 3
    m, chain = lat.minimum, []
    while lat.covers[m]:
        ((m, lab),) = lat.covers[m]
        chain.append(lab)
    assert m == lat.maximum
    assert chain == [(2,), (1,)]


def test_square_moves_frozen_labels(rec35):
    rng = random.Random(123)
    G = normalize(rec35)
    assert movable_faces(G) == [(1,), (2,)]
    res1 = square_move(G, (1,), rng)
    assert res1.new_label == (2, 1) and res1.exchange_checked
    res2 = square_move(G, (2,), rng)
    assert res2.new_label == (3, 2)
    back = square_move(res1.graph, (2, 1), rng)
    assert back.new_label == (1,)
    assert back.graph == G  # the move is an involution on normal forms


def test_square_move_refuses_frozen_and_missing(rec35):
    with pytest.raises(ValueError):
        square_move(rec35, (3, 3))
    with pytest.raises(ValueError):
        square_move(rec35, (9, 9, 9))


def test_label_sets_are_class_invariants_under_flips(rec36):
    # mutating twice at the same face returns to the same label set
    rng = random.Random(7)
    G = normalize(rec36)
    for nu in movable_faces(G):
        res = square_move(G, nu, rng)
        again = square_move(res.graph, res.new_label, rng)
        assert set(face_labels(again.graph).labels) == set(face_labels(G).labels)


def test_region_left_of_trip_sizes(rec35):
    # every face collects exactly n-k trips, by definition of the labels
    lab = face_labels(rec35)
    counts = [0] * len(lab.faces)
    for i in range(1, 6):
        for f in region_left(rec35, trip(rec35, i), lab.faces):
            counts[f] += 1
    assert all(c == G35.rows for c in counts)


def test_json_roundtrip(rec35):
    doc = rec35.to_json()
    assert doc["schema"] == "okbodies.plabic/1"
    H = PlabicGraph.from_json(doc)
    assert H == rec35
    assert set(face_labels(H).labels) == set(face_labels(rec35).labels)


def test_rectangles_graph_other_shapes():
    for shape in (GridShape(2, 4), GridShape(1, 3), GridShape(2, 5), GridShape(4, 6)):
        G = build_rectangles(shape)
        lab = face_labels(G)
        assert len(lab.labels) == shape.num_boxes + 1
        per = perfect_orientation(G)
        assert per.sources == frozenset(range(1, shape.rows + 1))
