"""Compiled closure kernels over edge arrays, used where no trace is needed.

``components`` answers K_3-percolation (connectivity).  ``k4_clique_classes``
runs the K_4 clique merge dynamics: seed edges are grouped into classes
whose vertex sets are the cliques of the closure.
"""
import numba
import numpy as np


@numba.njit(cache=True)
def _find(parent, x):
    while parent[x] != x:
        parent[x] = parent[parent[x]]
        x = parent[x]
    return x


@numba.njit(cache=True)
def components(n, us, vs):
    """Number of connected components of the graph on ``n`` vertices."""
    parent = np.arange(n)
    count = n
    for i in range(len(us)):
        a = _find(parent, us[i])
        b = _find(parent, vs[i])
        if a != b:
            parent[a] = b
            count -= 1
    return count


@numba.njit(cache=True)
def _member(size, slot, pool, us, vs, c, x):
    if size[c] == 2:
        return us[c] == x or vs[c] == x
    return (pool[slot[c], x >> 6] >> np.uint64(x & 63)) & np.uint64(1) != 0


@numba.njit(cache=True)
def _shares_two(size, slot, pool, us, vs, b, r, a):
    # a is known to lie in both classes
    if size[b] == 2:
        return _member(size, slot, pool, us, vs, r, us[b] + vs[b] - a)
    if size[r] == 2:
        return _member(size, slot, pool, us, vs, b, us[r] + vs[r] - a)
    pb = pool[slot[b]]
    pr = pool[slot[r]]
    seen = 0
    for w in range(pb.shape[0]):
        x = pb[w] & pr[w]
        while x != 0:
            seen += 1
            if seen >= 2:
                return True
            x &= x - np.uint64(1)
    return False


@numba.njit(cache=True)
def _touches_other(size, slot, pool, us, vs, c, r, a):
    # some vertex other than a lies in both c and r
    if size[c] == 2:
        if us[c] != a and _member(size, slot, pool, us, vs, r, us[c]):
            return True
        return vs[c] != a and _member(size, slot, pool, us, vs, r, vs[c])
    if size[r] == 2:
        if us[r] != a and _member(size, slot, pool, us, vs, c, us[r]):
            return True
        return vs[r] != a and _member(size, slot, pool, us, vs, c, vs[r])
    pc = pool[slot[c]]
    pr = pool[slot[r]]
    aw = a >> 6
    for w in range(pc.shape[0]):
        x = pc[w] & pr[w]
        if w == aw:
            x &= ~(np.uint64(1) << np.uint64(a & 63))
        if x != 0:
            return True
    return False


@numba.njit(cache=True)
def _bit_index(low):
    # position of the single set bit of low
    bit = 0
    if low & np.uint64(0xFFFFFFFF) == 0:
        low >>= np.uint64(32)
        bit += 32
    if low & np.uint64(0xFFFF) == 0:
        low >>= np.uint64(16)
        bit += 16
    if low & np.uint64(0xFF) == 0:
        low >>= np.uint64(8)
        bit += 8
    if low & np.uint64(0xF) == 0:
        low >>= np.uint64(4)
        bit += 4
    if low & np.uint64(0x3) == 0:
        low >>= np.uint64(2)
        bit += 2
    if low & np.uint64(0x1) == 0:
        bit += 1
    return bit


@numba.njit(cache=True)
def _third_class(parent, start, inc, size, slot, pool, us, vs, side, other, a):
    """A class meeting ``side`` at some x != a and ``other`` at some vertex != a, or -1."""
    if size[side] == 2:
        x = us[side] + vs[side] - a
        for k in range(start[x], start[x + 1]):
            c = _find(parent, inc[k])
            if c != side and c != other and _touches_other(size, slot, pool, us, vs, c, other, a):
                return c
        return -1
    ps = pool[slot[side]]
    for w in range(ps.shape[0]):
        bitsw = ps[w]
        while bitsw != 0:
            low = bitsw & (~bitsw + np.uint64(1))
            bitsw ^= low
            x = w * 64 + _bit_index(low)
            if x == a:
                continue
            for k in range(start[x], start[x + 1]):
                c = _find(parent, inc[k])
                if c != side and c != other and _touches_other(size, slot, pool, us, vs, c, other, a):
                    return c
    return -1


@numba.njit(cache=True)
def _fill_vertices(size, head, node_v, node_next, us, vs, c, buf):
    if size[c] == 2:
        buf[0] = us[c]
        buf[1] = vs[c]
        return 2
    k = 0
    t = head[c]
    while t >= 0:
        buf[k] = node_v[t]
        k += 1
        t = node_next[t]
    return k


@numba.njit(cache=True)
def _grow(arr, cap):
    out = np.empty(cap, arr.dtype)
    out[: arr.shape[0]] = arr
    return out


@numba.njit(cache=True)
def _push(stack, top, pending, x):
    if not pending[x]:
        pending[x] = True
        stack[top] = x
        top += 1
    return top


@numba.njit(cache=True)
def k4_clique_classes(n, us, vs, stop_when_full, big_from=0):
    """Class label (root seed-edge id) of every seed edge under the K_4 merge process.

    Returns ``(labels, full)``; ``full`` is True once some class spans all
    ``n`` vertices.  With ``stop_when_full`` the run ends at that point and
    the labels are partial.

    Work is organised per vertex: a pending vertex a is scanned for two
    classes at a sharing a second vertex, and for triangles of classes with
    a corner at a.  A class that gains a vertex makes that vertex pending.
    """
    m = len(us)
    labels = np.arange(m)
    if m == 0:
        return labels, n <= 1
    words = (n + 63) >> 6
    if big_from <= 0:
        big_from = max(16, words)  # classes at least this large are not marked vertex by vertex
    deg = np.zeros(n + 1, np.int64)
    for i in range(m):
        deg[us[i] + 1] += 1
        deg[vs[i] + 1] += 1
    start = np.cumsum(deg)
    fill = start[:-1].copy()
    inc = np.empty(2 * m, np.int64)
    for i in range(m):
        inc[fill[us[i]]] = i
        fill[us[i]] += 1
        inc[fill[vs[i]]] = i
        fill[vs[i]] += 1

    parent = labels
    size = np.full(m, 2, np.int64)
    slot = np.full(m, -1, np.int64)
    pool = np.zeros((8, words), np.uint64)
    free = np.empty(8, np.int64)
    nfree = 0
    nslots = 0

    # vertex lists of classes with more than two vertices, as linked nodes
    head = np.full(m, -1, np.int64)
    node_v = np.empty(4 * n + 16, np.int64)
    node_next = np.empty(4 * n + 16, np.int64)
    nnodes = 0

    stack = np.empty(n, np.int64)
    pending = np.zeros(n, np.bool_)
    top = 0
    for x in range(n - 1, -1, -1):
        if start[x + 1] > start[x]:
            top = _push(stack, top, pending, x)

    stamp = np.zeros(m, np.int64)
    tick = 0
    mark = np.full(n, -1, np.int64)
    marked = np.empty(n, np.int64)
    here = np.empty(2 * m, np.int64)
    bigs = np.empty(2 * m, np.int64)
    buf = np.empty(n, np.int64)
    buf2 = np.empty(n, np.int64)
    parts = np.empty(3, np.int64)
    full = n == 2

    while top > 0 and not (full and stop_when_full):
        top -= 1
        a = stack[top]
        pending[a] = False
        tick += 1
        nh = 0
        nb = 0
        for j in range(start[a], start[a + 1]):
            c = _find(parent, inc[j])
            if stamp[c] != tick:
                stamp[c] = tick
                here[nh] = c
                nh += 1
                if size[c] >= big_from:
                    bigs[nb] = c
                    nb += 1
        nparts = 0
        nm = 0
        # pairs: a second shared vertex shows up as a mark collision
        for i in range(nh):
            c = here[i]
            if size[c] >= big_from:
                continue
            k = _fill_vertices(size, head, node_v, node_next, us, vs, c, buf)
            for q in range(k):
                y = buf[q]
                if y == a:
                    continue
                if mark[y] >= 0:
                    parts[0] = mark[y]
                    parts[1] = c
                    nparts = 2
                    break
                mark[y] = c
                marked[nm] = y
                nm += 1
            if nparts:
                break
        if nparts == 0:
            for i in range(nb):
                g = bigs[i]
                for j in range(nh):
                    c = here[j]
                    if c != g and _shares_two(size, slot, pool, us, vs, c, g, a):
                        parts[0] = g
                        parts[1] = c
                        nparts = 2
                        break
                if nparts:
                    break
        # triangles with a corner at a: b at a, c through x in b, meeting another class at a
        if nparts == 0:
            for i in range(nh):
                b = here[i]
                if size[b] >= big_from:
                    continue
                kb = _fill_vertices(size, head, node_v, node_next, us, vs, b, buf)
                for q in range(kb):
                    x = buf[q]
                    if x == a:
                        continue
                    for t in range(start[x], start[x + 1]):
                        c = _find(parent, inc[t])
                        if stamp[c] == tick:
                            continue  # c is at a as well
                        if size[c] == 2:
                            y = us[c] + vs[c] - x
                            if y == a:
                                continue
                            if mark[y] >= 0 and mark[y] != b:
                                parts[2] = mark[y]
                                nparts = 3
                            else:
                                for gi in range(nb):
                                    if _member(size, slot, pool, us, vs, bigs[gi], y):
                                        parts[2] = bigs[gi]
                                        nparts = 3
                                        break
                        elif size[c] < big_from:
                            kc = _fill_vertices(size, head, node_v, node_next, us, vs, c, buf2)
                            for z in range(kc):
                                y = buf2[z]
                                if y == x or y == a:
                                    continue
                                if mark[y] >= 0 and mark[y] != b:
                                    parts[2] = mark[y]
                                    nparts = 3
                                    break
                                for gi in range(nb):
                                    if _member(size, slot, pool, us, vs, bigs[gi], y):
                                        parts[2] = bigs[gi]
                                        nparts = 3
                                        break
                                if nparts:
                                    break
                        else:
                            for z in range(nm):
                                y = marked[z]
                                if y != x and mark[y] != b and _member(size, slot, pool, us, vs, c, y):
                                    parts[2] = mark[y]
                                    nparts = 3
                                    break
                            if nparts == 0:
                                for gi in range(nb):
                                    if _touches_other(size, slot, pool, us, vs, c, bigs[gi], a):
                                        parts[2] = bigs[gi]
                                        nparts = 3
                                        break
                        if nparts:
                            parts[0] = b
                            parts[1] = c
                            break
                    if nparts:
                        break
                if nparts:
                    break
        if nparts == 0:
            # two large classes meeting at a
            for i in range(nb):
                for j in range(i + 1, nb):
                    g1 = bigs[i]
                    g2 = bigs[j]
                    if size[g1] <= size[g2]:
                        found = _third_class(parent, start, inc, size, slot, pool, us, vs, g1, g2, a)
                    else:
                        found = _third_class(parent, start, inc, size, slot, pool, us, vs, g2, g1, a)
                    if found >= 0:
                        parts[0] = g1
                        parts[1] = g2
                        parts[2] = found
                        nparts = 3
                        break
                if nparts:
                    break
        for z in range(nm):
            mark[marked[z]] = -1
        if nparts == 0:
            continue

        base = parts[0]
        for i in range(1, nparts):
            if size[parts[i]] > size[base]:
                base = parts[i]
        if slot[base] < 0:
            if nfree > 0:
                nfree -= 1
                s = free[nfree]
            else:
                if nslots == pool.shape[0]:
                    grown = np.zeros((2 * nslots, words), np.uint64)
                    grown[:nslots] = pool
                    pool = grown
                s = nslots
                nslots += 1
            slot[base] = s
            pool[s, us[base] >> 6] |= np.uint64(1) << np.uint64(us[base] & 63)
            pool[s, vs[base] >> 6] |= np.uint64(1) << np.uint64(vs[base] & 63)
            if nnodes + 2 > node_v.shape[0]:
                node_v = _grow(node_v, 2 * node_v.shape[0])
                node_next = _grow(node_next, 2 * node_next.shape[0])
            node_v[nnodes] = us[base]
            node_next[nnodes] = nnodes + 1
            node_v[nnodes + 1] = vs[base]
            node_next[nnodes + 1] = -1
            head[base] = nnodes
            nnodes += 2
        pbase = pool[slot[base]]
        for i in range(nparts):
            o = parts[i]
            if o == base:
                continue
            k = _fill_vertices(size, head, node_v, node_next, us, vs, o, buf)
            for q in range(k):
                x = buf[q]
                bit = np.uint64(1) << np.uint64(x & 63)
                if pbase[x >> 6] & bit == 0:
                    pbase[x >> 6] |= bit
                    size[base] += 1
                    if nnodes == node_v.shape[0]:
                        node_v = _grow(node_v, 2 * nnodes)
                        node_next = _grow(node_next, 2 * nnodes)
                    node_v[nnodes] = x
                    node_next[nnodes] = head[base]
                    head[base] = nnodes
                    nnodes += 1
                    top = _push(stack, top, pending, x)
            if slot[o] >= 0:
                pool[slot[o]] = 0
                if nfree == free.shape[0]:
                    grownf = np.empty(2 * nfree, np.int64)
                    grownf[:nfree] = free
                    free = grownf
                free[nfree] = slot[o]
                nfree += 1
                slot[o] = -1
            parent[o] = base
        if size[base] == n:
            full = True
        top = _push(stack, top, pending, a)

    for i in range(m):
        labels[i] = _find(parent, i)
    return labels, full
