import random

import pytest

from sdnkit.errors import TreeInputError
from sdnkit.isomorphism import colored_isomorphic, rooted_isomorphic, unrooted_isomorphic
from sdnkit.sorting import SortConfig

from oracles import (
    ahu_canonical,
    ahu_unrooted,
    all_free_trees,
    random_tree,
    reattach_edge,
    relabel_shuffle,
)


def test_single_nodes():
    assert rooted_isomorphic((1, [], 0), (1, [], 0))


def test_path_rooted_at_end_vs_middle():
    edges = [(0, 1), (1, 2)]
    assert not rooted_isomorphic((3, edges, 0), (3, edges, 1))


def test_different_sizes():
    assert not rooted_isomorphic((2, [(0, 1)], 0), (3, [(0, 1), (1, 2)], 0))
    assert not unrooted_isomorphic((2, [(0, 1)]), (3, [(0, 1), (1, 2)]))


def test_path4_vs_star4():
    assert not unrooted_isomorphic(
        (4, [(0, 1), (1, 2), (2, 3)]), (4, [(0, 1), (0, 2), (0, 3)])
    )


def test_relabeled_copies_random():
    rng = random.Random(51)
    for style in range(4):
        for _ in range(30):
            n = rng.randrange(1, 200)
            edges = random_tree(n, rng, style)
            root = rng.randrange(n)
            edges2, root2, _ = relabel_shuffle(n, edges, rng, root=root)
            assert rooted_isomorphic((n, edges, root), (n, edges2, root2))
            assert unrooted_isomorphic((n, edges), (n, edges2))


def test_mutants_match_oracle():
    rng = random.Random(53)
    for _ in range(80):
        n = rng.randrange(3, 120)
        edges = random_tree(n, rng, rng.randrange(4))
        mutated = reattach_edge(n, edges, rng)
        want = ahu_unrooted(n, edges) == ahu_unrooted(n, mutated)
        assert unrooted_isomorphic((n, edges), (n, mutated)) == want


def test_rooted_matches_oracle_random_pairs():
    rng = random.Random(57)
    for _ in range(120):
        n = rng.randrange(1, 60)
        e1 = random_tree(n, rng, rng.randrange(4))
        e2 = random_tree(n, rng, rng.randrange(4))
        r1, r2 = rng.randrange(n), rng.randrange(n)
        want = ahu_canonical(n, e1, r1) == ahu_canonical(n, e2, r2)
        assert rooted_isomorphic((n, e1, r1), (n, e2, r2)) == want
        assert rooted_isomorphic((n, e1, r1), (n, e2, r2), early_exit=False) == want


def test_symmetry_and_reflexivity():
    rng = random.Random(59)
    for _ in range(20):
        n = rng.randrange(1, 80)
        e1 = random_tree(n, rng)
        e2 = random_tree(n, rng)
        assert unrooted_isomorphic((n, e1), (n, e1))
        a = unrooted_isomorphic((n, e1), (n, e2))
        b = unrooted_isomorphic((n, e2), (n, e1))
        assert a == b


def test_exhaustive_small_free_trees():
    trees = all_free_trees(7)
    flat = [(n, e) for n, lst in trees.items() for e in lst]
    for i, (n1, e1) in enumerate(flat):
        for n2, e2 in flat[i:]:
            want = n1 == n2 and ahu_unrooted(n1, e1) == ahu_unrooted(n2, e2)
            assert unrooted_isomorphic((n1, e1), (n2, e2)) == want


def test_colored_recoloring_flips():
    rng = random.Random(61)
    for _ in range(30):
        n = rng.randrange(2, 60)
        edges = random_tree(n, rng)
        colors = [rng.randrange(max(1, n // 2)) for _ in range(n)]
        edges2, _, colors2 = relabel_shuffle(n, edges, rng, colors=colors)
        assert colored_isomorphic((n, edges, colors), (n, edges2, colors2))
        bad = list(colors2)
        bad[rng.randrange(n)] = n - 1 if n > 1 else 0
        # a fresh color value changes the color multiset
        if sorted(bad) != sorted(colors):
            assert not colored_isomorphic((n, edges, colors), (n, edges2, bad))


def test_colored_matches_oracle():
    rng = random.Random(67)
    for _ in range(60):
        n = rng.randrange(1, 40)
        e1 = random_tree(n, rng, rng.randrange(4))
        e2 = random_tree(n, rng, rng.randrange(4))
        c1 = [rng.randrange(n) for _ in range(n)]
        c2 = [rng.randrange(n) for _ in range(n)]
        want = ahu_unrooted(n, e1, c1) == ahu_unrooted(n, e2, c2)
        assert colored_isomorphic((n, e1, c1), (n, e2, c2)) == want


def test_colored_all_same_color_equals_uncolored():
    rng = random.Random(71)
    for _ in range(40):
        n = rng.randrange(1, 50)
        e1 = random_tree(n, rng, rng.randrange(4))
        e2 = random_tree(n, rng, rng.randrange(4))
        plain = unrooted_isomorphic((n, e1), (n, e2))
        colored = colored_isomorphic((n, e1, [0] * n), (n, e2, [0] * n))
        assert plain == colored


def test_colored_rooted_variant():
    edges = [(0, 1), (0, 2)]
    assert colored_isomorphic(
        (3, edges, 0, [1, 2, 2]), (3, edges, 0, [1, 2, 2]), rooted=True
    )
    assert not colored_isomorphic(
        (3, edges, 0, [1, 2, 2]), (3, edges, 0, [2, 2, 2]), rooted=True
    )


def test_colored_range_validation():
    with pytest.raises(TreeInputError):
        colored_isomorphic((2, [(0, 1)], [0, 5]), (2, [(0, 1)], [0, 1]))
    with pytest.raises(TreeInputError):
        colored_isomorphic((2, [(0, 1)], [0]), (2, [(0, 1)], [0, 1]))


def test_counters_stay_linear():
    rng = random.Random(73)
    n = 3000
    edges = random_tree(n, rng)
    edges2, root2, _ = relabel_shuffle(n, edges, rng, root=0)
    counters = {}
    assert rooted_isomorphic((n, edges, 0), (n, edges2, root2), counters=counters)
    # every node contributes one label entry per tree
    assert counters["label_numbers"] == 2 * n
    # total sorted child-vector entries are bounded by the child count
    assert counters["sort_numbers"] <= 2 * n
    assert counters["label_bits"] <= 64 * n


def test_lookup_width_variants():
    rng = random.Random(79)
    n = 40
    edges = random_tree(n, rng)
    edges2, root2, _ = relabel_shuffle(n, edges, rng, root=0)
    for lookup_bits in (8, 16, 32):
        cfg = SortConfig(lookup_bits)
        assert rooted_isomorphic((n, edges, 0), (n, edges2, root2), cfg)
