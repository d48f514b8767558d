"""Blossom matcher vs. exhaustive search."""

import itertools
import random

import pytest

from colourcode.blossom import (
    MatchingError,
    matching_weight,
    min_weight_perfect_matching,
)


def brute_force_min_perfect(n, edges):
    """Minimum perfect-matching weight by enumerating all pairings."""
    lut = {}
    for i, j, w in edges:
        key = (i, j) if i < j else (j, i)
        if key not in lut or w < lut[key]:
            lut[key] = w

    best = [None]

    def rec(nodes, acc):
        if best[0] is not None and acc >= best[0]:
            return
        if not nodes:
            best[0] = acc
            return
        a = nodes[0]
        for t in range(1, len(nodes)):
            b = nodes[t]
            key = (a, b)
            if key in lut:
                rec(nodes[1:t] + nodes[t + 1:], acc + lut[key])

    rec(tuple(range(n)), 0)
    return best[0]


def test_single_edge():
    pairs = min_weight_perfect_matching(2, [(0, 1, 5)])
    assert sorted(sorted(p) for p in pairs) == [[0, 1]]
    assert matching_weight(pairs, [(0, 1, 5)]) == 5


def test_four_cycle_forced_optimum():
    edges = [(0, 1, 1), (1, 2, 2), (2, 3, 1), (3, 0, 2)]
    pairs = min_weight_perfect_matching(4, edges)
    assert matching_weight(pairs, edges) == 2
    assert sorted(sorted(p) for p in pairs) == [[0, 1], [2, 3]]


def test_prefers_heavy_pair_when_forced():
    # Triangle plus pendant: perfect matching must use the pendant edge.
    edges = [(0, 1, 1), (1, 2, 1), (0, 2, 1), (2, 3, 9)]
    pairs = min_weight_perfect_matching(4, edges)
    assert matching_weight(pairs, edges) == 10


def test_no_perfect_matching_raises():
    with pytest.raises(MatchingError):
        min_weight_perfect_matching(4, [(0, 1, 1), (0, 2, 1), (0, 3, 1)])


def test_zero_weights_ok():
    edges = [(0, 1, 0), (1, 2, 0), (2, 3, 0), (3, 0, 0)]
    pairs = min_weight_perfect_matching(4, edges)
    assert matching_weight(pairs, edges) == 0


@pytest.mark.parametrize("n,trials,seed", [(6, 200, 11), (8, 120, 12),
                                           (10, 60, 13), (16, 40, 14)])
def test_random_complete_graphs_match_brute_force(n, trials, seed):
    rng = random.Random(seed)
    for _ in range(trials):
        edges = [(i, j, rng.randint(0, 9))
                 for i in range(n) for j in range(i + 1, n)]
        pairs = min_weight_perfect_matching(n, edges)
        assert len(pairs) == n // 2
        w = matching_weight(pairs, edges)
        assert w == brute_force_min_perfect(n, edges)


def test_random_sparse_graphs_match_brute_force():
    rng = random.Random(99)
    done = 0
    while done < 150:
        n = rng.choice([4, 6, 8, 10])
        all_pairs = list(itertools.combinations(range(n), 2))
        m = rng.randint(n, len(all_pairs))
        chosen = rng.sample(all_pairs, m)
        edges = [(i, j, rng.randint(0, 30)) for (i, j) in chosen]
        expect = brute_force_min_perfect(n, edges)
        if expect is None:
            with pytest.raises(MatchingError):
                min_weight_perfect_matching(n, edges)
        else:
            pairs = min_weight_perfect_matching(n, edges)
            assert matching_weight(pairs, edges) == expect
        done += 1


def test_large_weights_and_scale():
    rng = random.Random(5)
    for _ in range(20):
        n = 12
        edges = [(i, j, rng.randint(0, 10 ** 6))
                 for i in range(n) for j in range(i + 1, n)]
        pairs = min_weight_perfect_matching(n, edges)
        assert matching_weight(pairs, edges) == brute_force_min_perfect(n, edges)


def test_determinism():
    rng = random.Random(7)
    edges = [(i, j, rng.randint(0, 4))
             for i in range(10) for j in range(i + 1, 10)]
    a = min_weight_perfect_matching(10, edges)
    b = min_weight_perfect_matching(10, edges)
    assert a == b
