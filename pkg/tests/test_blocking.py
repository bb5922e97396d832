from itertools import combinations

import pytest

from flatstat.blocking import (
    ProjectivePointSet,
    bad_directions,
    check_divisibility,
    hyperplane_split,
    is_blocking_set,
    minimum_blocking_size,
)
from flatstat.bounds import bose_burton_min, nu2
from flatstat.gf2core import LinearSubspace, orthogonal_complement
from flatstat.grassmann import enumerate_projective_subspaces
from flatstat.stats import PointSet


def random_subset(rng, n, size):
    return PointSet.from_points(n, rng.choice(1 << n, size=size, replace=False).tolist())


def test_fano_line_blocks_lines():
    line = ProjectivePointSet.from_subspace(LinearSubspace.span(3, [0b011, 0b101]))
    assert len(line) == 3
    assert is_blocking_set(line, 1) == (True, None)


def test_two_points_do_not_block():
    ok, missed = is_blocking_set(ProjectivePointSet(2, frozenset({1, 2})), 1)
    assert not ok
    assert not {1, 2} & set(missed.elements())


def test_all_points_block_everything():
    everything = ProjectivePointSet(3, frozenset(range(1, 16)))
    assert all(is_blocking_set(everything, k)[0] for k in range(4))


def test_minimum_blocking_sizes():
    size, b = minimum_blocking_size(2, 1)
    assert size == 3 == bose_burton_min(2, 1)
    assert is_blocking_set(b, 1)[0]
    assert minimum_blocking_size(2, 0)[0] == 7
    assert minimum_blocking_size(3, 2)[0] == bose_burton_min(3, 2)


def test_point_validation():
    with pytest.raises(ValueError):
        ProjectivePointSet(2, frozenset({0}))
    with pytest.raises(ValueError):
        ProjectivePointSet(2, frozenset({8}))


def test_subspace_bad_directions():
    for d in range(1, 5):
        w = LinearSubspace.span(d + 1, [1 << i for i in range(d)])
        s_set = PointSet.from_points(d + 1, w.elements())
        assert bad_directions(s_set, 1 << (d - 1)) == set(orthogonal_complement(w).elements()) - {0}


def test_bad_directions_two_methods(rng):
    for _ in range(300):
        n = int(rng.integers(2, 7))
        s = int(rng.integers(1, 1 << (n - 1)))
        s_set = random_subset(rng, n, 2 * s)
        assert bad_directions(s_set, s) == bad_directions(s_set, s, method="hyperplanes")


def test_bad_directions_size_check():
    with pytest.raises(ValueError, match="2s"):
        bad_directions(PointSet.from_points(3, [1, 2, 3]), 1)


@pytest.mark.parametrize("dim", [2, 3, 4])
def test_bad_directions_lower_bound_exhaustive(dim):
    d = dim - 1
    for mask in range(1 << (1 << dim)):
        size = mask.bit_count()
        if size % 2 or not 0 < size < 1 << dim:
            continue
        s = size // 2
        s_set = PointSet(dim, mask)
        assert len(bad_directions(s_set, s)) >= (1 << (d - nu2(s))) - 1


def test_hyperplane_split():
    s_set = PointSet.from_points(3, [0, 1, 2, 3])
    assert hyperplane_split(s_set, 0b100) == (4, 0)
    assert hyperplane_split(s_set, 0b001) == (2, 2)


def test_divisibility_examples():
    full = PointSet.full(4)
    for vecs in ([1], [1, 2], [3, 5, 9]):
        l_space = LinearSubspace.span(4, vecs)
        rep = check_divisibility(full, l_space)
        assert rep.vanishes and rep.equal
        assert set(rep.coset_counts) == {16 >> l_space.d}
    s_set = PointSet.from_points(3, [0, 1, 2, 3])
    rep = check_divisibility(s_set, LinearSubspace.span(3, [0b001]))
    assert rep.vanishes and rep.coset_counts == (2, 2)
    rep = check_divisibility(s_set, LinearSubspace.span(3, [0b100]))
    assert not rep.vanishes and rep.first_nonvanishing == 0b100


def test_divisibility_random(rng):
    hits = 0
    for _ in range(300):
        n = int(rng.integers(2, 6))
        s_set = PointSet.from_indicator(n, rng.integers(0, 2, 1 << n))
        l_space = LinearSubspace.span(n, rng.integers(1, 1 << n, int(rng.integers(1, n + 1))).tolist())
        rep = check_divisibility(s_set, l_space)
        assert rep.holds
        hits += rep.vanishes
    assert hits > 0


def test_projective_subspace_count_matches_lines():
    lines = list(enumerate_projective_subspaces(2, 1))
    for a, b in combinations(lines, 2):
        assert len(set(a.elements()) & set(b.elements()) - {0}) == 1
