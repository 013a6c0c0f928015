"""Tree isomorphism in linear time over height-synchronized labels.

Both trees are walked level by level, by height.  Every node carries a
(height, label) pair packed as two codewords in its classification
slot.  One round turns each frontier node's children pairs into single
packed numbers, sorts them into a canonical vector, collects one
length-tagged entry per node from both trees into a shared sequence,
and dense-ranks that sequence; the dense rank becomes the node's label.
Two subtrees get equal pairs exactly when they are isomorphic, so after
the last round the root pairs decide the answer.

Labels restart at zero every round; pairs from different rounds stay
distinct because the height component rides along.  A label is a dense
rank over at most one entry per node, so it fits in a slot widened by a
fixed per-node share of 4*log(2n)+6 bits; the sorted child vectors
themselves only live in a per-round buffer, never in the slots.
"""

from collections import Counter

from .codec import SdnSequence, codeword
from .errors import TreeInputError
from .memory import account
from .ranking import build_dense_rank
from .sorting import SortConfig, sort
from .trees import BalancedParens, ClassificationStore, bp_from_tree, tree_center


def _as_bp(tree):
    if isinstance(tree, BalancedParens):
        return tree
    n, edges, root = tree
    return bp_from_tree(n, edges, root if root is not None else 0)


def _label_store(bp):
    """Classification store whose slots provably hold any (height, label)
    pair: label < 2n and height < n, so 4*bitlen(2n)+6 extra bits per
    node cover both codewords even at leaves."""
    return ClassificationStore(bp, extra_per_open=4 * (2 * bp.n).bit_length() + 6)


def _frontier_entries(bp, store, frontier, cfg, color_of, counters):
    """Phase one of a round: canonical child vectors, kept transient.

    Returns [(open, close, entry bits, entry value)] plus the total bits
    the wrapped entries will occupy in the shared level sequence.  The
    entry value packs the sorted child vector, extended by the node's
    color codeword when coloring is on.
    """
    entries = []
    z_bits = 0
    words = bp.bits.words
    size = bp.size
    findclose = bp.findclose
    pair_of = store.packed_pair_pos
    members = frontier._members
    for i in range(len(frontier)):
        u = members[i]
        nxt = u + 1
        if not (words[nxt >> 6] >> (63 - (nxt & 63))) & 1:
            close = nxt  # leaf: the open parenthesis closes immediately
            child = None
        else:
            close = findclose(u)
            child = nxt
        packed = []
        while child is not None:
            # child pairs pack injectively: equal ints would differ only
            # by leading zero codewords, changing the codeword count
            child_close = findclose(child)
            packed.append(pair_of(child, child_close))
            after = child_close + 1
            child = (
                after
                if after < size and (words[after >> 6] >> (63 - (after & 63))) & 1
                else None
            )
        if not packed:
            xlen = 0
            xval = 0
        elif len(packed) == 1:
            xlen, xval = codeword(packed[0])
        elif len(packed) == 2:
            a, b = packed
            if b < a:
                a, b = b, a
            wa, va = codeword(a)
            wb, vb = codeword(b)
            xlen = wa + wb
            xval = (va << wb) | vb
        else:
            widths = [codeword(v)[0] for v in packed]
            vec = SdnSequence(sum(widths))
            vec_items = []
            for v in packed:
                vec_items.append((vec.append(v), 0))
            vec_items = [(p, w) for (p, _), w in zip(vec_items, widths)]
            vec_sorted = sort(vec, cfg, items=vec_items)
            xlen = vec_sorted.write_cursor
            xval = vec_sorted.bits.read(0, xlen)
            if counters is not None:
                counters["sorts"] = counters.get("sorts", 0) + 1
                counters["sort_numbers"] = counters.get("sort_numbers", 0) + len(packed)
                counters["sort_bits"] = counters.get("sort_bits", 0) + xlen
            del vec, vec_sorted
        if color_of is not None:
            wc, vc = codeword(color_of(u))
            xval = (xval << wc) | vc
            xlen += wc
        entries.append((u, close, xlen, (1 << xlen) | xval))
        z_bits += 2 * (xlen + 1) + 1
    return entries, z_bits


def _rooted_iso(bp1, bp2, cfg, early_exit, colors1=None, colors2=None, counters=None):
    if bp1.n != bp2.n:
        return False
    store1 = _label_store(bp1)
    store2 = _label_store(bp2)
    it1 = bp1.height_iterator()
    it2 = bp2.height_iterator()

    color_of1 = color_of2 = None
    if colors1 is not None:
        color_of1 = lambda pos: colors1[bp1.node_of_pos(pos)]
        color_of2 = lambda pos: colors2[bp2.node_of_pos(pos)]

    sides = (
        (bp1, store1, color_of1),
        (bp2, store2, color_of2),
    )
    height = -1
    while True:
        more = it1.has_next()
        if more != it2.has_next():
            return False
        if not more:
            break
        height += 1
        frontiers = (it1.next(), it2.next())
        if early_exit and len(frontiers[0]) != len(frontiers[1]):
            return False

        per_side = []
        total_bits = 0
        for (bp, store, color_of), frontier in zip(sides, frontiers):
            entries, z_bits = _frontier_entries(
                bp, store, frontier, cfg, color_of, counters
            )
            per_side.append(entries)
            total_bits += z_bits

        first_value = per_side[0][0][3]
        all_equal = all(
            e[3] == first_value for entries in per_side for e in entries
        )
        if all_equal:
            # one distinct entry in the round: every label is zero
            if counters is not None:
                counters["rounds"] = counters.get("rounds", 0) + 1
                counters["label_numbers"] = counters.get("label_numbers", 0) + sum(
                    len(e) for e in per_side
                )
            for (bp, store, _), entries in zip(sides, per_side):
                for u, close, xlen, value in entries:
                    store.write_pair_pos(u, close, height, 0)
            continue

        with account.borrow(total_bits + 64 * (len(per_side[0]) + len(per_side[1]))):
            level = SdnSequence(total_bits)
            zpos = []
            level_entries = []
            for entries in per_side:
                for u, close, xlen, value in entries:
                    pos = level.append(value)
                    zpos.append(pos)
                    level_entries.append((pos, value))

            ranks = build_dense_rank(level, cfg, entries=level_entries)
            if counters is not None:
                counters["rounds"] = counters.get("rounds", 0) + 1
                counters["label_numbers"] = counters.get("label_numbers", 0) + len(zpos)
                counters["label_bits"] = (
                    counters.get("label_bits", 0) + level.write_cursor
                )

            idx = 0
            signatures = []
            for (bp, store, _), entries in zip(sides, per_side):
                sig = [] if early_exit else None
                for u, close, xlen, value in entries:
                    label = ranks.rank(zpos[idx], value)
                    idx += 1
                    store.write_pair_pos(u, close, height, label)
                    if sig is not None:
                        sig.append(label)
                signatures.append(sig)
            if early_exit and Counter(signatures[0]) != Counter(signatures[1]):
                return False
            del ranks, level

    pair1 = store1.read_pair_pos(0, bp1.size - 1)
    pair2 = store2.read_pair_pos(0, bp2.size - 1)
    return pair1[:2] == pair2[:2]


def rooted_isomorphic(tree1, tree2, cfg=None, *, early_exit=True, counters=None):
    """Decide isomorphism of two rooted trees.

    Trees are BalancedParens instances or (n, edges, root) tuples.  With
    early_exit (default) a round whose label multisets differ between
    the trees answers False immediately; disabling it always runs to the
    roots, which is useful for worst-case timing.
    """
    cfg = cfg or SortConfig()
    return _rooted_iso(_as_bp(tree1), _as_bp(tree2), cfg, early_exit, counters=counters)


def unrooted_isomorphic(tree1, tree2, cfg=None, *, early_exit=True):
    """Decide isomorphism of two unrooted trees given as (n, edges).

    Roots the trees at their centers and tries every center pairing.
    """
    cfg = cfg or SortConfig()
    n1, edges1 = tree1
    n2, edges2 = tree2
    if n1 != n2:
        return False
    c1 = tree_center(n1, edges1)
    c2 = tree_center(n2, edges2)
    if len(c1) != len(c2):
        return False
    bps1 = [bp_from_tree(n1, edges1, r) for r in c1]
    bps2 = [bp_from_tree(n2, edges2, r) for r in c2]
    for bp1 in bps1:
        for bp2 in bps2:
            if _rooted_iso(bp1, bp2, cfg, early_exit):
                return True
    return False


def colored_isomorphic(tree1, tree2, cfg=None, *, early_exit=True, rooted=False):
    """Decide isomorphism of colored trees.

    Unrooted inputs are (n, edges, colors); rooted=True expects
    (n, edges, root, colors).  Colors are indexed by original node id
    and must lie in [0, n).  A node's color joins its child vector as
    the final entry, so any isomorphism must preserve colors.
    """
    cfg = cfg or SortConfig()
    if rooted:
        n1, edges1, root1, colors1 = tree1
        n2, edges2, root2, colors2 = tree2
    else:
        n1, edges1, colors1 = tree1
        n2, edges2, colors2 = tree2
        root1 = root2 = None
    if n1 != n2:
        return False
    for n, colors in ((n1, colors1), (n2, colors2)):
        if len(colors) != n or any(not 0 <= c < max(n, 2) for c in colors):
            raise TreeInputError("colors must be n integers in [0, n)")
    if rooted:
        bp1 = bp_from_tree(n1, edges1, root1 if root1 is not None else 0, colors=colors1)
        bp2 = bp_from_tree(n2, edges2, root2 if root2 is not None else 0, colors=colors2)
        return _rooted_iso(
            bp1, bp2, cfg, early_exit, colors1=bp1.colors, colors2=bp2.colors
        )
    c1 = tree_center(n1, edges1)
    c2 = tree_center(n2, edges2)
    if len(c1) != len(c2):
        return False
    for r1 in c1:
        bp1 = bp_from_tree(n1, edges1, r1, colors=colors1)
        for r2 in c2:
            bp2 = bp_from_tree(n2, edges2, r2, colors=colors2)
            if _rooted_iso(
                bp1, bp2, cfg, early_exit, colors1=bp1.colors, colors2=bp2.colors
            ):
                return True
    return False
