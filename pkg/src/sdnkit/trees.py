"""Ordinal-tree machinery on a 2n-bit parenthesis encoding.

A rooted n-node tree is encoded as 2n parentheses (1 = open, 0 = close)
in depth-first preorder; node i of the ordinal tree owns the i-th open
parenthesis.  Navigation (matching parenthesis, enclosing parenthesis)
runs on a min-max excess tree over 64-bit blocks: most matches resolve
inside one block by byte steps, the rest climb the block tree in
O(log(n/64)) steps.
"""

from .bits import BitSequence, RankSelectIndex
from .codec import codeword, encoded_length
from .errors import IteratorExhaustedError, TreeInputError
from .memory import account

# per-byte and per-16-bit-chunk excess summaries: running excess delta,
# min and max of the running excess over the chunk (1 = +1, 0 = -1)
_EXC8 = [0] * 256
_MIN8 = [0] * 256
_MAX8 = [0] * 256
for _b in range(256):
    _e = 0
    _mn = 9
    _mx = -9
    for _i in range(7, -1, -1):
        _e += 1 if (_b >> _i) & 1 else -1
        if _e < _mn:
            _mn = _e
        if _e > _mx:
            _mx = _e
    _EXC8[_b] = _e
    _MIN8[_b] = _mn
    _MAX8[_b] = _mx
_EXC16 = [0] * 65536
_MIN16 = [0] * 65536
_MAX16 = [0] * 65536
for _c in range(65536):
    _hi = _c >> 8
    _lo = _c & 0xFF
    _EXC16[_c] = _EXC8[_hi] + _EXC8[_lo]
    _MIN16[_c] = min(_MIN8[_hi], _EXC8[_hi] + _MIN8[_lo])
    _MAX16[_c] = max(_MAX8[_hi], _EXC8[_hi] + _MAX8[_lo])
account.alloc_table(256 * 3 * 8 + 65536 * 3 * 8)

_INF = 1 << 40


class BalancedParens:
    """Navigable balanced-parenthesis encoding of an ordinal tree."""

    __slots__ = (
        "bits",
        "n",
        "size",
        "rs",
        "block_base",
        "block_min",
        "block_max",
        "tree_min",
        "tree_max",
        "tree_size",
        "colors",
        "_charged",
    )

    def __init__(self, bits, colors=None):
        size = bits.len_bits
        if size == 0 or size & 1:
            raise TreeInputError("parenthesis sequence must have positive even length")
        self.bits = bits
        self.size = size
        self.n = size // 2
        self.colors = colors
        self._build_nav()
        self.rs = RankSelectIndex(bits)
        if (
            self.rs.total_ones != self.n
            or not bits.get(0)
            or self.block_base[-1] != 0
            or any(m < 0 for m in self.block_min)
        ):
            raise TreeInputError("sequence is not a balanced single-root encoding")

    @classmethod
    def from_string(cls, text):
        text = text.strip()
        bits = BitSequence(len(text))
        excess = 0
        for i, ch in enumerate(text):
            if ch == "(":
                bits.set(i)
                excess += 1
            elif ch == ")":
                excess -= 1
            else:
                raise TreeInputError(f"unexpected character {ch!r}")
            if excess < 0 or (excess == 0 and i != len(text) - 1):
                raise TreeInputError("sequence is not a balanced single-root encoding")
        if excess != 0:
            raise TreeInputError("sequence is not a balanced single-root encoding")
        return cls(bits)

    def to_string(self):
        return "".join("(" if self.bits.get(i) else ")" for i in range(self.size))

    def _build_nav(self):
        words = self.bits.words
        nblocks = len(words)
        block_base = [0] * (nblocks + 1)
        block_min = [0] * nblocks
        block_max = [0] * nblocks
        exc8, mn8, mx8 = _EXC8, _MIN8, _MAX8
        size = self.size
        acc = 0
        for j, w in enumerate(words):
            block_base[j] = acc
            valid = size - (j << 6)
            if valid > 64:
                valid = 64
            rel = 0
            mn = _INF
            mx = -_INF
            full, tail = divmod(valid, 8)
            sh = 56
            for _ in range(full):
                b = (w >> sh) & 0xFF
                m = rel + mn8[b]
                if m < mn:
                    mn = m
                m = rel + mx8[b]
                if m > mx:
                    mx = m
                rel += exc8[b]
                sh -= 8
            if tail:
                b = (w >> sh) & 0xFF
                for i in range(7, 7 - tail, -1):
                    rel += 1 if (b >> i) & 1 else -1
                    if rel < mn:
                        mn = rel
                    if rel > mx:
                        mx = rel
            block_min[j] = acc + mn
            block_max[j] = acc + mx
            acc += rel
        block_base[nblocks] = acc
        self.block_base = block_base
        self.block_min = block_min
        self.block_max = block_max

        p = 1
        while p < nblocks:
            p <<= 1
        tmin = [_INF] * (2 * p)
        tmax = [-_INF] * (2 * p)
        tmin[p : p + nblocks] = block_min
        tmax[p : p + nblocks] = block_max
        for v in range(p - 1, 0, -1):
            l, r = 2 * v, 2 * v + 1
            tmin[v] = tmin[l] if tmin[l] < tmin[r] else tmin[r]
            tmax[v] = tmax[l] if tmax[l] > tmax[r] else tmax[r]
        self.tree_min = tmin
        self.tree_max = tmax
        self.tree_size = p
        self._charged = (nblocks + 1) * 32 + nblocks * 64 + 4 * p * 32
        account.alloc(self._charged)

    def __del__(self):
        try:
            account.free(self._charged)
        except Exception:
            pass

    # -- excess ---------------------------------------------------------

    def excess(self, pos):
        """Running excess after bits 0..pos; excess(-1) = 0."""
        if pos < 0:
            return 0
        off = pos & 63
        # ones minus zeros among the first off+1 bits of the home word
        prefix = self.bits.words[pos >> 6] >> (63 - off)
        return self.block_base[pos >> 6] + 2 * prefix.bit_count() - (off + 1)

    # -- directional searches --------------------------------------------

    def _fwd(self, pos, target):
        """Smallest q >= pos with excess(q) == target, or -2 if none."""
        size = self.size
        if pos >= size:
            return -2
        j = pos >> 6
        off = pos & 63
        e = self.excess(pos - 1)
        found, e = _word_fwd(self.bits.words[j], off, e, target, min(64, size - (j << 6)))
        if found >= 0:
            return (j << 6) + found
        j = self._tree_fwd_block(j + 1, target)
        if j < 0:
            return -2
        found, _ = _word_fwd(
            self.bits.words[j],
            0,
            self.block_base[j],
            target,
            min(64, size - (j << 6)),
        )
        return (j << 6) + found

    def _bwd(self, pos, target):
        """Largest q <= pos with excess(q) == target, -1 if only the
        virtual start matches, -2 if none."""
        if pos < 0:
            return -1 if target == 0 else -2
        j = pos >> 6
        off = pos & 63
        found = _word_bwd(self.bits.words[j], off, self.block_base[j], target)
        if found >= 0:
            return (j << 6) + found
        j = self._tree_bwd_block(j - 1, target)
        if j < 0:
            return -1 if target == 0 else -2
        found = _word_bwd(
            self.bits.words[j],
            min(63, self.size - (j << 6) - 1),
            self.block_base[j],
            target,
        )
        return (j << 6) + found

    def _tree_fwd_block(self, j0, target):
        nblocks = len(self.bits.words)
        if j0 >= nblocks:
            return -1
        p = self.tree_size
        tmin, tmax = self.tree_min, self.tree_max
        v = p + j0
        if tmin[v] <= target <= tmax[v]:
            return j0
        while v > 1:
            if not v & 1:
                s = v + 1
                if tmin[s] <= target <= tmax[s]:
                    v = s
                    break
            v >>= 1
        else:
            return -1
        while v < p:
            l = 2 * v
            v = l if tmin[l] <= target <= tmax[l] else l + 1
        return v - p

    def _tree_bwd_block(self, j0, target):
        if j0 < 0:
            return -1
        p = self.tree_size
        tmin, tmax = self.tree_min, self.tree_max
        v = p + j0
        if tmin[v] <= target <= tmax[v]:
            return j0
        while v > 1:
            if v & 1:
                s = v - 1
                if tmin[s] <= target <= tmax[s]:
                    v = s
                    break
            v >>= 1
        else:
            return -1
        while v < p:
            r = 2 * v + 1
            v = r if tmin[r] <= target <= tmax[r] else 2 * v
        return v - p

    # -- parenthesis navigation -------------------------------------------

    def findclose(self, i):
        """Position of the closing parenthesis matching the open one at i."""
        w = i >> 6
        word = self.bits.words[w]
        off = i & 63
        rel = 2 * (word >> (63 - off)).bit_count() - (off + 1)
        target_rel = rel - 1
        limit = self.size - (w << 6)
        if limit > 64:
            limit = 64
        found, _ = _word_fwd(word, off + 1, rel, target_rel, limit)
        if found >= 0:
            return (w << 6) + found
        base = self.block_base[w]
        j = self._tree_fwd_block(w + 1, base + target_rel)
        if j < 0:
            return -2
        limit = self.size - (j << 6)
        if limit > 64:
            limit = 64
        found, _ = _word_fwd(
            self.bits.words[j], 0, self.block_base[j], base + target_rel, limit
        )
        return (j << 6) + found

    def findopen(self, i):
        """Position of the open parenthesis matching the closing one at i."""
        return self._bwd(i - 1, self.excess(i)) + 1

    def enclose(self, i):
        """Nearest open position properly enclosing the open one at i.

        Returns None for the root.
        """
        target = self.excess(i) - 2
        if target < 0:
            return None
        return self._bwd(i - 1, target) + 1

    # -- positional tree relations ----------------------------------------

    def is_leaf_pos(self, i):
        return not self.bits.get(i + 1)

    def parent_pos(self, i):
        return self.enclose(i)

    def first_child_pos(self, i):
        return i + 1 if self.bits.get(i + 1) else None

    def right_sibling_pos(self, i):
        c = self.findclose(i) + 1
        if c < self.size and self.bits.get(c):
            return c
        return None

    def left_sibling_pos(self, i):
        if i == 0 or self.bits.get(i - 1):
            return None
        return self.findopen(i - 1)

    def desc_pos(self, i):
        """Number of proper descendants of the node opened at i."""
        return (self.findclose(i) - i - 1) // 2

    # -- node-id interface (preorder numbering) ----------------------------

    def pos_of_node(self, u):
        return self.rs.select(u + 1)

    def node_of_pos(self, i):
        return self.rs.rank(i + 1) - 1

    def parent(self, u):
        p = self.parent_pos(self.pos_of_node(u))
        return None if p is None else self.node_of_pos(p)

    def first_child(self, u):
        p = self.first_child_pos(self.pos_of_node(u))
        return None if p is None else self.node_of_pos(p)

    def right_sibling(self, u):
        p = self.right_sibling_pos(self.pos_of_node(u))
        return None if p is None else self.node_of_pos(p)

    def left_sibling(self, u):
        p = self.left_sibling_pos(self.pos_of_node(u))
        return None if p is None else self.node_of_pos(p)

    def height_iterator(self):
        return HeightIterator(self)


def bp_from_tree(n, edges, root=0, colors=None):
    """Encode a rooted tree given as an edge list; children keep input order.

    When colors (indexed by original node id) are given, the returned
    encoding carries them re-ordered by preorder so color lookups follow
    node numbering.
    """
    if n <= 0:
        raise TreeInputError("tree must have at least one node")
    if len(edges) != n - 1:
        raise TreeInputError(f"a tree on {n} nodes needs {n - 1} edges, got {len(edges)}")
    if not 0 <= root < n:
        raise TreeInputError(f"root {root} out of range")

    deg = [0] * n
    for u, v in edges:
        if not (0 <= u < n and 0 <= v < n):
            raise TreeInputError(f"edge ({u}, {v}) out of range")
        deg[u] += 1
        deg[v] += 1
    xadj = [0] * (n + 1)
    for u in range(n):
        xadj[u + 1] = xadj[u] + deg[u]
    adj = [0] * (2 * (n - 1))
    fill = list(xadj)
    for u, v in edges:
        adj[fill[u]] = v
        fill[u] += 1
        adj[fill[v]] = u
        fill[v] += 1
    with account.borrow((3 * n + 2) * 32 + 2 * (n - 1) * 32):
        bits = BitSequence(2 * n)
        pre_colors = [0] * n if colors is not None else None
        visited = [False] * n
        pos = 0
        pre = 0
        # stack of (node, parent, next adjacency index)
        stack = [(root, -1, xadj[root])]
        visited[root] = True
        bits.set(pos)
        pos += 1
        if pre_colors is not None:
            pre_colors[0] = colors[root]
        pre = 1
        while stack:
            u, par, ptr = stack[-1]
            end = xadj[u + 1]
            child = -1
            while ptr < end:
                w = adj[ptr]
                ptr += 1
                if w != par:
                    child = w
                    break
            stack[-1] = (u, par, ptr)
            if child < 0:
                pos += 1  # close parenthesis is already 0
                stack.pop()
                continue
            if visited[child]:
                raise TreeInputError("edges contain a cycle or duplicate")
            visited[child] = True
            bits.set(pos)
            pos += 1
            if pre_colors is not None:
                pre_colors[pre] = colors[child]
            pre += 1
            stack.append((child, u, xadj[child]))
        if pre != n:
            raise TreeInputError("edge list is disconnected")
    return BalancedParens(bits, colors=pre_colors)


def _word_fwd(word, off, base_excess, target, limit):
    """First position in [off, limit) of this word where the running
    excess equals target; base_excess is the excess just before `off`.
    Returns (position or -1, excess after the scanned range)."""
    e = base_excess
    i = off
    # align to a byte boundary bit by bit
    while i < limit and i & 7:
        e += 1 if (word >> (63 - i)) & 1 else -1
        if e == target:
            return i, e
        i += 1
    if i & 8 and i + 8 <= limit:
        b = (word >> (56 - i)) & 0xFF
        if e + _MIN8[b] <= target <= e + _MAX8[b]:
            for sh in range(7, -1, -1):
                e += 1 if (b >> sh) & 1 else -1
                if e == target:
                    return i + (7 - sh), e
        e += _EXC8[b]
        i += 8
    while i + 16 <= limit:
        c = (word >> (48 - i)) & 0xFFFF
        if e + _MIN16[c] <= target <= e + _MAX16[c]:
            b = c >> 8
            if not (e + _MIN8[b] <= target <= e + _MAX8[b]):
                e += _EXC8[b]
                i += 8
                b = c & 0xFF
            for sh in range(7, -1, -1):
                e += 1 if (b >> sh) & 1 else -1
                if e == target:
                    return i + (7 - sh), e
            raise AssertionError
        e += _EXC16[c]
        i += 16
    if i + 8 <= limit:
        b = (word >> (56 - i)) & 0xFF
        if e + _MIN8[b] <= target <= e + _MAX8[b]:
            for sh in range(7, -1, -1):
                e += 1 if (b >> sh) & 1 else -1
                if e == target:
                    return i + (7 - sh), e
        else:
            e += _EXC8[b]
            i += 8
    while i < limit:
        e += 1 if (word >> (63 - i)) & 1 else -1
        if e == target:
            return i, e
        i += 1
    return -1, e


def _word_bwd(word, off, block_base, target):
    """Largest position in [0, off] of this word where the running excess
    equals target; block_base is the excess just before the word."""
    for bi in range((off >> 3), -1, -1):
        start = 8 * bi
        # excess just before this byte, from the popcount of the prefix
        base = block_base + (
            2 * (word >> (64 - start)).bit_count() - start if start else 0
        )
        b = (word >> (56 - start)) & 0xFF
        if not (base + _MIN8[b] <= target <= base + _MAX8[b]):
            continue
        hi = off - start
        if hi > 7:
            hi = 7
        e = base
        best = -1
        for k in range(hi + 1):
            e += 1 if (b >> (7 - k)) & 1 else -1
            if e == target:
                best = start + k
        if best >= 0:
            return best
    return -1


class ChoiceDictionary:
    """Set over [0, universe) with O(1) add/remove/contains/choice/clear.

    Two index arrays back the membership test, so construction does not
    initialize per-element state; the actual footprint is two
    machine-word entries per universe slot.
    """

    __slots__ = ("universe", "_members", "_slot", "_count", "_charged")

    def __init__(self, universe):
        self.universe = universe
        self._members = [0] * universe
        self._slot = [0] * universe
        self._count = 0
        self._charged = universe * 64
        account.alloc(self._charged)

    def __del__(self):
        try:
            account.free(self._charged)
        except Exception:
            pass

    def __len__(self):
        return self._count

    def contains(self, x):
        s = self._slot[x]
        return s < self._count and self._members[s] == x

    __contains__ = contains

    def add(self, x):
        if self.contains(x):
            return
        c = self._count
        self._members[c] = x
        self._slot[x] = c
        self._count = c + 1

    def add_new(self, x):
        """Add x known not to be a member (skips the membership test)."""
        c = self._count
        self._members[c] = x
        self._slot[x] = c
        self._count = c + 1

    def remove(self, x):
        s = self._slot[x]
        c = self._count - 1
        if s > c or self._members[s] != x:
            return
        last = self._members[c]
        self._members[s] = last
        self._slot[last] = s
        self._count = c

    def choice(self):
        """Some current member, or None when empty."""
        c = self._count
        return self._members[c - 1] if c else None

    def clear(self):
        self._count = 0

    def __iter__(self):
        members = self._members
        for i in range(self._count):
            yield members[i]


class HeightIterator:
    """Emit all nodes of a tree level by level, by height.

    next() returns a ChoiceDictionary of the open-parenthesis positions
    of every node with the current height (starting at the leaves) and
    is amortized O(1) per emitted node: when a node is emitted, it
    relays a per-family token rightward over already-emitted siblings;
    the parent is emitted once the token crosses the last child.

    The returned dictionary is only valid until the following next()
    call.  `work` counts trigger checks plus relay steps.
    """

    __slots__ = ("bp", "emitted", "tokens", "frontier", "next_frontier", "count", "height", "work", "_started")

    def __init__(self, bp):
        self.bp = bp
        size = bp.size
        self.emitted = BitSequence(size)
        self.tokens = BitSequence(size)
        self.frontier = ChoiceDictionary(size)
        self.next_frontier = ChoiceDictionary(size)
        self.count = 0
        self.height = -1
        self.work = 0
        self._started = False

    def has_next(self):
        return self.count < self.bp.n

    def next(self):
        if not self.has_next():
            raise IteratorExhaustedError("all heights have been emitted")
        if not self._started:
            self._started = True
            self._collect_leaves()
            self.height = 0
            return self.frontier
        self._relay_round()
        self.frontier, self.next_frontier = self.next_frontier, self.frontier
        self.next_frontier.clear()
        self.height += 1
        return self.frontier

    def _collect_leaves(self):
        bp = self.bp
        words = bp.bits.words
        size = bp.size
        frontier = self.frontier
        emitted = self.emitted
        nwords = len(words)
        total = 0
        for j in range(nwords):
            w = words[j]
            pat = (w & ~(w << 1)) & ~1
            # open in the last bit, close in the next word's first bit
            if j + 1 < nwords and (w & 1) and not (words[j + 1] >> 63):
                pat |= 1
            base = j << 6
            while pat:
                sh = pat.bit_length() - 1
                pat ^= 1 << sh
                pos = base + (63 - sh)
                if pos < size:
                    frontier.add(pos)
                    emitted.set(pos)
                    total += 1
        self.count = total

    def _relay_round(self):
        bp = self.bp
        words = bp.bits.words
        ewords = self.emitted.words
        size = bp.size
        emitted = self.emitted
        tokens = self.tokens
        nxt = self.next_frontier
        findclose = bp.findclose
        work = self.work
        frontier = self.frontier
        members = frontier._members
        for i in range(len(frontier)):
            u = members[i]
            work += 1
            if u == 0:
                continue  # root has no siblings and no parent
            if not (words[(u - 1) >> 6] >> (63 - ((u - 1) & 63))) & 1:
                v = bp.findopen(u - 1)
                if not (emitted.get(v) and tokens.get(v)):
                    continue
                tokens.set(v, 0)
            # else: leftmost child, the token starts here implicitly
            cur = u
            while True:
                work += 1
                after = findclose(cur) + 1
                if after >= size or not (words[after >> 6] >> (63 - (after & 63))) & 1:
                    parent = bp.enclose(cur)
                    if parent is not None:
                        emitted.set(parent)
                        nxt.add_new(parent)
                        self.count += 1
                    break
                if not (ewords[after >> 6] >> (63 - (after & 63))) & 1:
                    tokens.set(cur)
                    break
                cur = after
        self.work = work


class ClassificationStore:
    """Per-node scratch numbers packed into slots scaled off parenthesis spans.

    Node u owns bits [3c*open(u), 3c*close(u)), which geometrically
    contains every descendant's slot: writing u invalidates exactly the
    numbers stored below it.  Reads return garbage (never raise) when no
    valid number is present, per contract.

    extra_per_open widens every node's slot by that many bits (one share
    per open parenthesis in its span, located through the parenthesis
    rank), preserving containment; the isomorphism rounds use it so a
    (height, label) pair provably fits even at leaves.
    """

    __slots__ = ("bp", "c", "factor", "extra", "store", "value_cap")

    def __init__(self, bp, c=1, extra_per_open=0):
        if c < 1:
            raise ValueError("scale constant must be positive")
        self.bp = bp
        self.c = c
        self.factor = 3 * c
        self.extra = extra_per_open
        self.value_cap = bp.n * bp.n
        self.store = BitSequence(self.factor * bp.size + extra_per_open * bp.n)

    def slot_pos(self, open_pos, close_pos):
        f = self.factor
        if not self.extra:
            return f * open_pos, f * close_pos
        e = self.extra
        before = self.bp.rs.rank(open_pos)
        inside = (close_pos - open_pos + 1) >> 1  # node plus descendants
        return f * open_pos + e * before, f * close_pos + e * (before + inside)

    def write_pos(self, open_pos, close_pos, x):
        lo, hi = self.slot_pos(open_pos, close_pos)
        desc = (close_pos - open_pos - 1) // 2
        if x > self.value_cap or x > (1 << (2 * self.c * desc)):
            raise ValueError(f"value {x} exceeds the write contract for this node")
        width, value = codeword(x)
        if lo + width > hi:
            raise ValueError(f"codeword of {width} bits does not fit a slot of {hi - lo}")
        self.store.write(lo, width, value)

    def read_pos(self, open_pos, close_pos):
        lo, hi = self.slot_pos(open_pos, close_pos)
        return self._decode_lenient(lo, hi)[0]

    def _decode_lenient(self, lo, hi):
        """Decode one codeword inside [lo, hi); clipped garbage decodes to 0."""
        words = self.store.words
        run = 0
        p = lo
        while True:
            if p >= hi:
                return 0, hi
            off = p & 63
            avail = 64 - off
            if p + avail > hi:
                avail = hi - p
            mask = (1 << avail) - 1
            chunk = (words[p >> 6] >> (64 - off - avail)) & mask
            if chunk == mask:
                run += avail
                p += avail
                continue
            lead = avail - (chunk ^ mask).bit_length()
            run += lead
            p += lead + 1
            break
        if run == 0:
            return 0, p
        if p + run > hi:
            return 0, hi
        return self.store.read(p, run), p + run

    def write_raw_pos(self, open_pos, close_pos, src_bits, src_pos, width):
        lo, hi = self.slot_pos(open_pos, close_pos)
        if lo + width > hi:
            raise ValueError(f"{width} raw bits do not fit a slot of {hi - lo}")
        i = 0
        while i < width:
            take = min(64, width - i)
            self.store.write(lo + i, take, src_bits.read(src_pos + i, take))
            i += take

    def write_raw_int_pos(self, open_pos, close_pos, width, value):
        lo, hi = self.slot_pos(open_pos, close_pos)
        if lo + width > hi:
            raise ValueError(f"{width} raw bits do not fit a slot of {hi - lo}")
        self.store.write(lo, width, value)

    def read_raw_pos(self, open_pos, width):
        lo = self.factor * open_pos
        if self.extra:
            lo += self.extra * self.bp.rs.rank(open_pos)
        return self.store.read(lo, width)

    def write_pair_pos(self, open_pos, close_pos, a, b):
        lo, hi = self.slot_pos(open_pos, close_pos)
        wa, va = codeword(a)
        wb, vb = codeword(b)
        if lo + wa + wb > hi:
            raise ValueError(
                f"pair of {wa + wb} bits does not fit a slot of {hi - lo}"
            )
        self.store.write(lo, wa + wb, (va << wb) | vb)

    def read_pair_pos(self, open_pos, close_pos):
        lo, hi = self.slot_pos(open_pos, close_pos)
        a, p = self._decode_lenient(lo, hi)
        b, q = self._decode_lenient(p, hi)
        return a, b, q - lo

    def packed_pair_pos(self, open_pos, close_pos):
        """The two stored codewords re-read as one raw integer."""
        lo, hi = self.slot_pos(open_pos, close_pos)
        words = self.store.words
        p = lo
        for _ in (0, 1):
            run = 0
            while True:
                off = p & 63
                avail = 64 - off
                if p + avail > hi:
                    avail = hi - p
                if avail <= 0:
                    p = hi
                    break
                mask = (1 << avail) - 1
                chunk = (words[p >> 6] >> (64 - off - avail)) & mask
                if chunk == mask:
                    run += avail
                    p += avail
                    continue
                lead = avail - (chunk ^ mask).bit_length()
                p += lead + 1
                run += lead
                break
            p += run
            if p > hi:
                p = hi
        return self.store.read(lo, p - lo)

    # node-id convenience used by the public contract

    def write(self, u, x):
        pos = self.bp.pos_of_node(u)
        self.write_pos(pos, self.bp.findclose(pos), x)

    def read(self, u):
        pos = self.bp.pos_of_node(u)
        return self.read_pos(pos, self.bp.findclose(pos))

    def vector(self, u):
        """Concatenated codewords of u's children, left to right, as a string."""
        pos = self.bp.pos_of_node(u)
        child = self.bp.first_child_pos(pos)
        parts = []
        while child is not None:
            close = self.bp.findclose(child)
            value = self.read_pos(child, close)
            width, cw = codeword(value)
            parts.append(format(cw, "b").zfill(width))
            child = self.bp.right_sibling_pos(child)
        return "".join(parts)


def classification_store(bp, c=1):
    return ClassificationStore(bp, c)


def tree_center(n, edges):
    """The one or two eccentricity-minimizing nodes, by degree peeling.

    Degrees are kept as codewords in statically allocated slots and
    decremented in place; two choice dictionaries hold the current and
    the next layer of degree-1 nodes, and peeling stops once at most two
    nodes remain.
    """
    if n == 1:
        return [0]
    if len(edges) != n - 1:
        raise TreeInputError(f"a tree on {n} nodes needs {n - 1} edges, got {len(edges)}")
    if n == 2:
        return [0, 1]

    deg = [0] * n
    for u, v in edges:
        if not (0 <= u < n and 0 <= v < n):
            raise TreeInputError(f"edge ({u}, {v}) out of range")
        deg[u] += 1
        deg[v] += 1
    if min(deg) == 0:
        raise TreeInputError("edge list is disconnected")
    xadj = [0] * (n + 1)
    for u in range(n):
        xadj[u + 1] = xadj[u] + deg[u]
    adj = [0] * (2 * (n - 1))
    fill = list(xadj)
    for u, v in edges:
        adj[fill[u]] = v
        fill[u] += 1
        adj[fill[v]] = u
        fill[v] += 1

    seen = [False] * n
    seen[0] = True
    todo = [0]
    reached = 1
    while todo:
        u = todo.pop()
        for t in range(xadj[u], xadj[u + 1]):
            w = adj[t]
            if not seen[w]:
                seen[w] = True
                reached += 1
                todo.append(w)
    if reached != n:
        raise TreeInputError("edge list is disconnected")

    with account.borrow((3 * n + 2) * 32 + 2 * (n - 1) * 32):
        # static slots, one codeword per node, in-place decrement
        slot_bits = sum(encoded_length(d) for d in deg)
        degrees = BitSequence(slot_bits)
        starts = BitSequence(slot_bits + 1)
        pos = 0
        for d in deg:
            width, value = codeword(d)
            degrees.write(pos, width, value)
            starts.set(pos)
            pos += width
        start_index = RankSelectIndex(starts)

        def read_deg(u):
            p = start_index.select(u + 1)
            run = 0
            while degrees.get(p + run):
                run += 1
            if run == 0:
                return 0, p
            return degrees.read(p + run + 1, run), p

        def write_deg(p, d):
            width, value = codeword(d)
            degrees.write(p, width, value)

        current = ChoiceDictionary(n)
        nxt = ChoiceDictionary(n)
        removed = BitSequence(n)
        for u in range(n):
            if deg[u] == 1:
                current.add(u)
        peeled = 0

        while True:
            if peeled >= n - 2:
                return list(current)
            while len(current):
                u = current.choice()
                current.remove(u)
                removed.set(u)
                peeled += 1
                v = -1
                for t in range(xadj[u], xadj[u + 1]):
                    w = adj[t]
                    if not removed.get(w):
                        v = w
                        break
                if v < 0:
                    continue
                dv, p = read_deg(v)
                write_deg(p, dv - 1)
                if dv - 1 == 1:
                    nxt.add(v)
            current, nxt = nxt, current
            nxt.clear()


# -- tree text formats --------------------------------------------------
#
# Edge list: first line n, then n-1 lines "u v" (0-indexed), then
# optionally a line "root r" and/or a line of n space-separated color
# integers indexed by node id.  Parenthesis format: a single line over
# "()" (node ids are preorder ranks, root is node 0), optionally
# followed by a line of n colors in preorder.


def parse_tree_text(text):
    """Parse either tree format; returns (n, edges, root, colors)."""
    lines = [
        (i + 1, line.strip()) for i, line in enumerate(text.splitlines()) if line.strip()
    ]
    if not lines:
        raise TreeInputError("empty tree file")
    first_no, first = lines[0]
    if first.startswith("("):
        return _parse_paren_format(lines)
    try:
        n = int(first)
    except ValueError:
        raise TreeInputError(f"line {first_no}: expected a node count") from None
    if n <= 0:
        raise TreeInputError(f"line {first_no}: node count must be positive")
    edges = []
    root = None
    colors = None
    for lineno, line in lines[1:]:
        tokens = line.split()
        if len(edges) < n - 1:
            if len(tokens) != 2:
                raise TreeInputError(f"line {lineno}: expected an edge 'u v'")
            try:
                u, v = int(tokens[0]), int(tokens[1])
            except ValueError:
                raise TreeInputError(f"line {lineno}: bad edge endpoints") from None
            edges.append((u, v))
        elif tokens[0] == "root" and len(tokens) == 2:
            try:
                root = int(tokens[1])
            except ValueError:
                raise TreeInputError(f"line {lineno}: bad root id") from None
        elif len(tokens) == n:
            try:
                colors = [int(t) for t in tokens]
            except ValueError:
                raise TreeInputError(f"line {lineno}: bad color list") from None
        else:
            raise TreeInputError(f"line {lineno}: unexpected trailing line")
    if len(edges) != n - 1:
        raise TreeInputError(f"expected {n - 1} edges, found {len(edges)}")
    return n, edges, root, colors


def _parse_paren_format(lines):
    lineno, text = lines[0]
    if len(text) & 1 or not text:
        raise TreeInputError(f"line {lineno}: unbalanced parenthesis string")
    n = len(text) // 2
    edges = []
    stack = []
    nid = 0
    for ch in text:
        if ch == "(":
            if stack:
                edges.append((stack[-1], nid))
            stack.append(nid)
            nid += 1
        elif ch == ")":
            if not stack:
                raise TreeInputError(f"line {lineno}: unbalanced parenthesis string")
            stack.pop()
        else:
            raise TreeInputError(f"line {lineno}: unexpected character {ch!r}")
    if stack or nid != n:
        raise TreeInputError(f"line {lineno}: unbalanced parenthesis string")
    colors = None
    if len(lines) > 1:
        cno, cline = lines[1]
        tokens = cline.split()
        if len(tokens) != n:
            raise TreeInputError(f"line {cno}: expected {n} colors")
        try:
            colors = [int(t) for t in tokens]
        except ValueError:
            raise TreeInputError(f"line {cno}: bad color list") from None
        if len(lines) > 2:
            raise TreeInputError(f"line {lines[2][0]}: unexpected trailing line")
    return n, edges, 0, colors


def format_tree_text(n, edges, root=None, colors=None):
    out = [str(n)]
    out.extend(f"{u} {v}" for u, v in edges)
    if root is not None:
        out.append(f"root {root}")
    if colors is not None:
        out.append(" ".join(str(c) for c in colors))
    return "\n".join(out) + "\n"
