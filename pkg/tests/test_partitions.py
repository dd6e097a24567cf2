from itertools import combinations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from okbodies.partitions import (
    GridShape,
    SkewShape,
    all_partitions,
    border_word,
    boundary_target_set,
    cyclic_shift,
    cyclic_shift_iter,
    diag0,
    frozen_mu,
    label_sort_key,
    max_diag,
    mu_box,
    parse_partition,
    partition_str,
    partition_to_south_steps,
    partition_to_west_steps,
    rectangles,
    south_steps_to_partition,
    west_steps_to_partition,
    word_to_partition,
)

from oracles import max_diag_bruteforce, walk_border

G35 = GridShape(3, 5)


# --- frozen examples ------------------------------------------------------

def test_south_steps_examples():
    assert south_steps_to_partition({1, 2}, G35) == (3, 3)
    assert south_steps_to_partition({4, 5}, G35) == ()
    assert south_steps_to_partition({1, 3}, G35) == (3, 2)
    assert south_steps_to_partition({2, 3}, G35) == (2, 2)


def test_max_diag_example():
    # two boxes survive on the main diagonal here, nothing longer elsewhere
    skew = SkewShape((7, 7, 4, 4, 3, 1), (6, 5, 2, 2, 2, 2))
    assert max_diag(skew) == 2


def test_border_word_and_shift_example():
    shape = GridShape(6, 10)
    mu = (6, 4, 4, 2)
    assert border_word(mu, shape) == (0, 0, 1, 0, 0, 1, 1, 0, 0, 1)
    assert diag0(mu) == 3
    assert cyclic_shift(mu, shape) == (5, 3, 3, 1)


def test_frozen_mu_g35():
    assert [frozen_mu(i, G35) for i in range(6)] == [
        (),
        (3,),
        (3, 3),
        (2, 2),
        (1, 1),
        (),
    ]


def test_mu_box_g35():
    assert mu_box(1, G35) == (3, 1)
    assert mu_box(2, G35) == (2,)  # the rim-hook case, i = n - k
    assert mu_box(3, G35) == (3, 2)
    assert mu_box(4, G35) == (2, 1)


def test_boundary_target_sets_g35():
    assert boundary_target_set(2, G35) == frozenset({1, 3})
    assert boundary_target_set(3, G35) == frozenset({2, 4})
    assert boundary_target_set(5, G35) == frozenset({1, 4})


def test_partition_text_roundtrip():
    assert partition_str(()) == "0"
    assert partition_str((3, 2)) == "3,2"
    assert parse_partition("0") == ()
    assert parse_partition("3,2") == (3, 2)


def test_all_partitions_count_and_order():
    parts = all_partitions(G35)
    assert len(parts) == 10  # C(5, 2)
    assert parts[0] == ()
    assert parts[-1] == (3, 3)
    keys = [label_sort_key(p) for p in parts]
    assert keys == sorted(keys)


def test_rectangles_g35():
    assert set(rectangles(G35)) == {(1,), (2,), (3,), (1, 1), (2, 2), (3, 3)}


# --- oracle comparisons and invariants ------------------------------------

shapes = st.tuples(st.integers(2, 8), st.integers(1, 7)).map(
    lambda t: GridShape(t[1], t[1] + (t[0] - t[1]) % t[0] + 1)
)


def small_shapes(max_n=9):
    return [
        GridShape(k, n)
        for n in range(2, max_n + 1)
        for k in range(1, n)
    ]


@pytest.mark.parametrize("shape", small_shapes(), ids=str)
def test_bijections_exhaustive(shape):
    for J in combinations(range(1, shape.n + 1), shape.rows):
        lam = south_steps_to_partition(J, shape)
        assert lam == walk_border(J, shape.k, shape.n)
        assert partition_to_south_steps(lam, shape) == frozenset(J)
        west = partition_to_west_steps(lam, shape)
        assert west == frozenset(range(1, shape.n + 1)) - frozenset(J)
        assert west_steps_to_partition(west, shape) == lam
        assert word_to_partition(border_word(lam, shape), shape) == lam


@pytest.mark.parametrize("shape", small_shapes(7), ids=str)
def test_cyclic_shift_order_n(shape):
    for lam in all_partitions(shape):
        assert cyclic_shift_iter(lam, shape, shape.n) == lam


@given(
    outer=st.lists(st.integers(0, 9), min_size=0, max_size=8),
    inner=st.lists(st.integers(0, 9), min_size=0, max_size=8),
)
@settings(max_examples=200)
def test_max_diag_matches_oracle(outer, inner):
    outer = tuple(sorted((p for p in outer if p > 0), reverse=True))
    inner = tuple(sorted((p for p in inner if p > 0), reverse=True))
    assert max_diag(SkewShape(outer, inner)) == max_diag_bruteforce(outer, inner)


@given(mu=st.lists(st.integers(1, 9), min_size=0, max_size=8))
@settings(max_examples=100)
def test_diag0_is_max_diag_over_empty(mu):
    mu = tuple(sorted(mu, reverse=True))
    assert diag0(mu) == max_diag(SkewShape(mu, ()))


@pytest.mark.parametrize("shape", small_shapes(8), ids=str)
def test_frozen_mu_are_rectangles(shape):
    for i in range(1, shape.n):
        mu = frozen_mu(i, shape)
        if i <= shape.rows:
            assert mu == (shape.k,) * i
        else:
            assert mu == (shape.n - i,) * shape.rows
    assert frozen_mu(shape.n, shape) == ()


@pytest.mark.parametrize("shape", small_shapes(8), ids=str)
def test_mu_box_adds_one_box(shape):
    if shape.k == 1 or shape.rows == 1:
        return  # boxes degenerate when the grid is a single row or column
    for i in range(1, shape.n + 1):
        mu, mub = frozen_mu(i, shape), mu_box(i, shape)
        if i == shape.rows:
            assert mub == (shape.k - 1,) * (shape.rows - 1)
        else:
            assert sum(mub) == sum(mu) + 1
            padded = mu + (0,) * (len(mub) - len(mu))
            assert all(a <= b for a, b in zip(padded, mub))
