"""Independent reference implementations and generators for the tests.

Everything here is brute force or textbook: linear scans, explicit DFS,
BFS from every node, canonical strings.  None of it shares code with
the library paths it checks.
"""

from collections import deque


# -- bit level ----------------------------------------------------------


def rank_oracle(bitstring, j):
    """Ones among the first j characters of a '0'/'1' string."""
    return bitstring[:j].count("1")


def select_oracle(bitstring, k):
    """0-indexed position of the k-th '1' (k >= 1)."""
    seen = 0
    for i, ch in enumerate(bitstring):
        if ch == "1":
            seen += 1
            if seen == k:
                return i
    raise ValueError("not enough ones")


def popcount_oracle(z):
    count = 0
    while z:
        count += z & 1
        z >>= 1
    return count


def frame_sum_oracle(e, width):
    """Decode e's `width` bits MSB-first as codewords, summing values."""
    bits = format(e, "b").zfill(width)
    i = 0
    total = 0
    while i < width:
        run = 0
        while i < width and bits[i] == "1":
            run += 1
            i += 1
        if i >= width:
            break
        i += 1  # separator / zero codeword
        if run == 0:
            continue
        if i + run > width:
            break
        total += int(bits[i : i + run], 2)
        i += run
    return total


# -- sorting / ranking ----------------------------------------------------


def stable_sort_oracle(values):
    """(sorted values, permutation of original indices)."""
    order = sorted(range(len(values)), key=lambda i: (values[i], i))
    return [values[i] for i in order], order


def dense_rank_oracle(values, x):
    return len({v for v in values if v < x})


def competitive_rank_oracle(values, x):
    return sum(1 for v in values if v < x)


# -- trees ----------------------------------------------------------------


def adjacency(n, edges):
    adj = [[] for _ in range(n)]
    for u, v in edges:
        adj[u].append(v)
        adj[v].append(u)
    return adj


def rooted_children(n, edges, root):
    """children lists honoring edge-insertion order, plus the DFS preorder."""
    adj = adjacency(n, edges)
    parent = [-2] * n
    parent[root] = -1
    children = [[] for _ in range(n)]
    order = []
    stack = [(root, iter(adj[root]))]
    order.append(root)
    while stack:
        u, it = stack[-1]
        advanced = False
        for w in it:
            if parent[w] == -2:
                parent[w] = u
                children[u].append(w)
                order.append(w)
                stack.append((w, iter(adj[w])))
                advanced = True
                break
        if not advanced:
            stack.pop()
    return children, order, parent


def depths_oracle(n, edges, root):
    children, order, _ = rooted_children(n, edges, root)
    depth = [0] * n
    for u in order:
        for c in children[u]:
            depth[c] = depth[u] + 1
    return depth


def heights_oracle(n, edges, root):
    children, order, _ = rooted_children(n, edges, root)
    height = [0] * n
    for u in reversed(order):
        height[u] = 1 + max((height[c] for c in children[u]), default=-1)
    return height


def center_oracle(n, edges):
    """Eccentricity minimizers by BFS from every node."""
    adj = adjacency(n, edges)
    best = None
    ecc = [0] * n
    for s in range(n):
        dist = [-1] * n
        dist[s] = 0
        q = deque([s])
        while q:
            u = q.popleft()
            for w in adj[u]:
                if dist[w] < 0:
                    dist[w] = dist[u] + 1
                    q.append(w)
        ecc[s] = max(dist)
    best = min(ecc)
    return sorted(i for i in range(n) if ecc[i] == best)


def ahu_canonical(n, edges, root, colors=None):
    """Canonical string of a rooted (optionally colored) tree."""
    children, order, _ = rooted_children(n, edges, root)
    canon = [None] * n
    for u in reversed(order):
        inner = "".join(sorted(canon[c] for c in children[u]))
        if colors is None:
            canon[u] = "(" + inner + ")"
        else:
            canon[u] = f"({colors[u]}:" + inner + ")"
    return canon[root]


def ahu_unrooted(n, edges, colors=None):
    cs = center_oracle(n, edges)
    return min(ahu_canonical(n, edges, r, colors) for r in cs)


# -- generators -----------------------------------------------------------


def random_tree(n, rng, style=0):
    """Edge list of a random tree; styles vary the shape distribution."""
    if style == 1:  # path heavy
        return [(i - 1 if rng.random() < 0.9 else rng.randrange(i), i) for i in range(1, n)]
    if style == 2:  # star heavy
        return [(0 if rng.random() < 0.8 else rng.randrange(i), i) for i in range(1, n)]
    if style == 3:  # complete-ish binary
        return [((i - 1) // 2, i) for i in range(1, n)]
    return [(rng.randrange(i), i) for i in range(1, n)]


def relabel_shuffle(n, edges, rng, root=None, colors=None):
    """Random relabeling with shuffled edge order and flipped endpoints."""
    perm = list(range(n))
    rng.shuffle(perm)
    out = []
    for u, v in edges:
        a, b = perm[u], perm[v]
        out.append((a, b) if rng.random() < 0.5 else (b, a))
    rng.shuffle(out)
    new_root = perm[root] if root is not None else None
    new_colors = None
    if colors is not None:
        new_colors = [0] * n
        for u in range(n):
            new_colors[perm[u]] = colors[u]
    return out, new_root, new_colors


def reattach_edge(n, edges, rng):
    """Move one edge endpoint; returns a valid tree (may stay isomorphic)."""
    if n < 3:
        return list(edges)
    while True:
        i = rng.randrange(len(edges))
        u, v = edges[i]
        rest = edges[:i] + edges[i + 1 :]
        # component of u after removing the edge
        adj = adjacency(n, rest)
        comp = [False] * n
        comp[u] = True
        q = deque([u])
        while q:
            a = q.popleft()
            for b in adj[a]:
                if not comp[b]:
                    comp[b] = True
                    q.append(b)
        cands = [w for w in range(n) if comp[w] and w != u]
        if not cands:
            continue
        w = cands[rng.randrange(len(cands))]
        return rest + [(w, v)]


def prufer_to_edges(seq, n):
    degree = [1] * n
    for x in seq:
        degree[x] += 1
    edges = []
    leaves = sorted(i for i in range(n) if degree[i] == 1)
    import heapq

    heapq.heapify(leaves)
    for x in seq:
        leaf = heapq.heappop(leaves)
        edges.append((leaf, x))
        degree[x] -= 1
        if degree[x] == 1:
            heapq.heappush(leaves, x)
    a = heapq.heappop(leaves)
    b = heapq.heappop(leaves)
    edges.append((a, b))
    return edges


def all_free_trees(max_n):
    """One representative edge list per isomorphism class, n <= max_n."""
    from itertools import product

    out = {1: [[]]}
    if max_n >= 2:
        out[2] = [[(0, 1)]]
    for n in range(3, max_n + 1):
        seen = {}
        for seq in product(range(n), repeat=n - 2):
            edges = prufer_to_edges(list(seq), n)
            key = ahu_unrooted(n, edges)
            if key not in seen:
                seen[key] = edges
        out[n] = list(seen.values())
    return out


def random_values(k, rng, big_bias=0.15, big_bits=512):
    """Mixed-magnitude nonnegative integers, some far above word size."""
    values = []
    for _ in range(k):
        r = rng.random()
        if r < 0.45:
            values.append(rng.randrange(0, 16))
        elif r < 0.8:
            values.append(rng.randrange(0, 1 << rng.randrange(1, 20)))
        elif r < 1 - big_bias:
            values.append(rng.randrange(0, 1 << 48))
        else:
            width = rng.randrange(64, big_bits + 1)
            values.append(rng.randrange(1 << (width - 1), 1 << width))
    return values
