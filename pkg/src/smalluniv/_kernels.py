"""Compiled hot paths.

Graphs are passed as int64 arrays of row bitmasks.  Kernels never allocate
per solver call in the batch loops; workspaces are created once per batch.
"""

import numpy as np
from numba import njit

MAX_GENS = 64


@njit(cache=True, inline="always")
def popcount(x):
    c = 0
    while x != 0:
        x &= x - 1
        c += 1
    return c


@njit(cache=True, inline="always")
def bit_index(b):
    # index of the single set bit in b
    i = 0
    while (b >> i) & 1 == 0:
        i += 1
    return i


@njit(cache=True, inline="always")
def full_mask(n):
    if n >= 64:
        return np.int64(-1)
    return (np.int64(1) << n) - 1


# -- induced subgraph isomorphism (label-class splitting) -----------------


@njit(cache=True)
def _split_search(padj, pdeg, tadj, P, T, ncls0, mapping):
    # Iterative depth-first search; the last two columns of P and T hold
    # the per-depth frame: class count, branch vertex, branch class and
    # the target vertices still to try.
    NC = P.shape[1] - 1
    AUX = P.shape[1] - 2
    depth = 0
    P[0, NC] = ncls0
    entering = True
    while True:
        if entering:
            ncls = P[depth, NC]
            if ncls == 0:
                return True
            best = 0
            best_size = 1 << 30
            for c in range(ncls):
                s = popcount(T[depth, c])
                if s < best_size:
                    best_size = s
                    best = c
            x = P[depth, best]
            v = -1
            vd = -1
            while x != 0:
                b = x & -x
                x ^= b
                u = bit_index(b)
                if pdeg[u] > vd:
                    vd = pdeg[u]
                    v = u
            P[depth, AUX] = v
            T[depth, NC] = best
            T[depth, AUX] = T[depth, best]
            entering = False
        rem = T[depth, AUX]
        if rem == 0:
            if depth == 0:
                return False
            depth -= 1
            continue
        wbit = rem & -rem
        T[depth, AUX] = rem ^ wbit
        w = bit_index(wbit)
        v = P[depth, AUX]
        best = T[depth, NC]
        ncls = P[depth, NC]
        vbit = np.int64(1) << v
        nv = padj[v]
        nw = tadj[w]
        nc = 0
        ok = True
        for c in range(ncls):
            p = P[depth, c]
            t = T[depth, c]
            if c == best:
                p &= ~vbit
                t &= ~wbit
            pa = p & nv
            if pa != 0:
                ta = t & nw
                if popcount(ta) < popcount(pa):
                    ok = False
                    break
                P[depth + 1, nc] = pa
                T[depth + 1, nc] = ta
                nc += 1
            pn = p & ~nv
            if pn != 0:
                tn = t & ~nw
                if popcount(tn) < popcount(pn):
                    ok = False
                    break
                P[depth + 1, nc] = pn
                T[depth + 1, nc] = tn
                nc += 1
        if ok:
            mapping[v] = w
            depth += 1
            P[depth, NC] = nc
            entering = True


@njit(cache=True)
def make_workspace(pmax):
    size = pmax + 2
    P = np.zeros((size, size + 2), dtype=np.int64)
    T = np.zeros((size, size + 2), dtype=np.int64)
    mapping = np.full(max(pmax, 1), -1, dtype=np.int64)
    pdeg = np.zeros(max(pmax, 1), dtype=np.int64)
    return P, T, mapping, pdeg


@njit(cache=True)
def subiso_ws(padj, pn, tadj, tn, P, T, mapping, pdeg):
    """Decide whether the pattern is an induced subgraph of the target.

    On success ``mapping[:pn]`` holds an embedding.
    """
    if pn > tn:
        return False
    if pn == 0:
        return True
    for u in range(pn):
        pdeg[u] = popcount(padj[u])
        mapping[u] = -1
    P[0, 0] = full_mask(pn)
    T[0, 0] = full_mask(tn)
    return _split_search(padj, pdeg, tadj, P, T, 1, mapping)


@njit(cache=True)
def subiso(padj, pn, tadj, tn):
    P, T, mapping, pdeg = make_workspace(pn)
    return subiso_ws(padj, pn, tadj, tn, P, T, mapping, pdeg)


@njit(cache=True)
def find_embedding(padj, pn, tadj, tn):
    P, T, mapping, pdeg = make_workspace(pn)
    if subiso_ws(padj, pn, tadj, tn, P, T, mapping, pdeg):
        return mapping[:pn].copy()
    return np.empty(0, dtype=np.int64)


# -- universality scans ---------------------------------------------------


@njit(cache=True)
def check_universal(fam_adj, fam_n, g_adj, gn, P, T, mapping, pdeg):
    """Return (is_universal, solver_calls) testing members in array order."""
    calls = 0
    for f in range(fam_adj.shape[0]):
        calls += 1
        if not subiso_ws(fam_adj[f], fam_n[f], g_adj, gn, P, T, mapping, pdeg):
            return False, calls
    return True, calls


@njit(cache=True)
def scan_batch(fam_adj, fam_n, cands, gn, out_univ, out_calls):
    pmax = 0
    for f in range(fam_n.shape[0]):
        pmax = max(pmax, fam_n[f])
    P, T, mapping, pdeg = make_workspace(pmax)
    for c in range(cands.shape[0]):
        ok, calls = check_universal(fam_adj, fam_n, cands[c], gn, P, T, mapping, pdeg)
        out_univ[c] = ok
        out_calls[c] = calls


@njit(cache=True)
def score_graph(fam_adj, fam_n, g_adj, gn, floor, P, T, mapping, pdeg):
    """Count contained members, counting down; -1 once below ``floor``.

    Returns (score, solver_calls).
    """
    total = fam_adj.shape[0]
    score = total
    calls = 0
    for f in range(total):
        calls += 1
        if not subiso_ws(fam_adj[f], fam_n[f], g_adj, gn, P, T, mapping, pdeg):
            score -= 1
            if score < floor:
                return -1, calls
    return score, calls


# -- canonical labelling --------------------------------------------------


@njit(cache=True)
def _uf_find(uf, x):
    while uf[x] != x:
        uf[x] = uf[uf[x]]
        x = uf[x]
    return x


@njit(cache=True)
def make_canon_workspace(n):
    m = max(n, 1)
    perm = np.zeros(m, dtype=np.int64)
    bestperm = np.zeros(m, dtype=np.int64)
    bestcol = np.zeros(m + 1, dtype=np.int64)
    cmp = np.zeros(m + 1, dtype=np.int64)
    tried = np.zeros(m + 1, dtype=np.int64)
    used = np.zeros(m + 1, dtype=np.int64)
    uf = np.zeros((m + 1, m), dtype=np.int64)
    ufng = np.zeros(m + 1, dtype=np.int64)
    gens = np.zeros((MAX_GENS, m), dtype=np.int64)
    return perm, bestperm, bestcol, cmp, tried, used, uf, ufng, gens


@njit(cache=True)
def canon_search(adj, n, test_only, perm, bestperm, bestcol, cmp, tried, used, uf, ufng, gens):
    """Search for the lexicographically smallest graph6 bit string.

    Bits are read column by column over the upper triangle, exactly the
    graph6 order.  New label ``i`` is old vertex ``bestperm[i]``.  With
    ``test_only`` the search stops at the first relabelling smaller than the
    input and returns 0; otherwise it returns 1 and fills ``bestperm``.
    Subtrees equivalent under automorphisms found so far are skipped.
    """
    if n <= 1:
        bestperm[0] = 0
        return 1
    for j in range(n):
        bestperm[j] = j
        col = 0
        for i in range(j):
            col = (col << 1) | ((adj[i] >> j) & 1)
        bestcol[j] = col
    ng = 0
    d = 0
    cmp[0] = 0
    tried[0] = 0
    used[0] = 0
    ufng[0] = -1
    while True:
        if d == n:
            if cmp[n] != 0:
                for i in range(n):
                    bestperm[i] = perm[i]
                for i in range(n + 1):
                    cmp[i] = 0
                d = n - 1
                continue
            jd = n
            for i in range(n):
                if perm[i] != bestperm[i]:
                    jd = i
                    break
            if jd == n:
                d = n - 1
                continue
            if ng < MAX_GENS:
                for i in range(n):
                    gens[ng, bestperm[i]] = perm[i]
                ng += 1
            d = jd
            continue

        # orbits of the generators fixing perm[0..d-1] pointwise
        if ufng[d] != ng:
            for x in range(n):
                uf[d, x] = x
            for g in range(ng):
                fixes = True
                for i in range(d):
                    if gens[g, perm[i]] != perm[i]:
                        fixes = False
                        break
                if fixes:
                    for x in range(n):
                        a = _uf_find(uf[d], x)
                        b = _uf_find(uf[d], gens[g, x])
                        if a != b:
                            if a < b:
                                uf[d, b] = a
                            else:
                                uf[d, a] = b
            ufng[d] = ng

        v = -1
        avail = ~(used[d] | tried[d]) & full_mask(n)
        while avail != 0:
            b = avail & -avail
            avail ^= b
            cand = bit_index(b)
            rc = _uf_find(uf[d], cand)
            skip = False
            t = tried[d]
            while t != 0:
                tb = t & -t
                t ^= tb
                if _uf_find(uf[d], bit_index(tb)) == rc:
                    skip = True
                    break
            if not skip:
                v = cand
                break
        if v < 0:
            if d == 0:
                break
            d -= 1
            continue

        tried[d] |= np.int64(1) << v
        perm[d] = v
        col = 0
        for i in range(d):
            col = (col << 1) | ((adj[perm[i]] >> v) & 1)
        c = cmp[d]
        if c == 0:
            if col > bestcol[d]:
                continue
            if col < bestcol[d]:
                if test_only:
                    return 0
                bestcol[d] = col
                c = -1
        else:
            bestcol[d] = col
        cmp[d + 1] = c
        used[d + 1] = used[d] | (np.int64(1) << v)
        d += 1
        tried[d] = 0
        ufng[d] = -1
    return 1


@njit(cache=True)
def canonical_labelling(adj, n):
    perm, bestperm, bestcol, cmp, tried, used, uf, ufng, gens = make_canon_workspace(n)
    canon_search(adj, n, False, perm, bestperm, bestcol, cmp, tried, used, uf, ufng, gens)
    return bestperm[:n].copy()


@njit(cache=True)
def relabel_rows(adj, n, perm, out):
    for i in range(n):
        row = adj[perm[i]]
        r = 0
        for j in range(n):
            if (row >> perm[j]) & 1:
                r |= np.int64(1) << j
        out[i] = r


@njit(cache=True)
def canonicalize_batch(graphs, n, out):
    perm, bestperm, bestcol, cmp, tried, used, uf, ufng, gens = make_canon_workspace(n)
    for g in range(graphs.shape[0]):
        canon_search(graphs[g], n, False, perm, bestperm, bestcol, cmp, tried, used, uf, ufng, gens)
        relabel_rows(graphs[g], n, bestperm, out[g])


@njit(cache=True)
def is_canonical(adj, n):
    perm, bestperm, bestcol, cmp, tried, used, uf, ufng, gens = make_canon_workspace(n)
    return canon_search(adj, n, True, perm, bestperm, bestcol, cmp, tried, used, uf, ufng, gens) == 1


@njit(cache=True)
def extend_orderly(parents, n, out):
    """Canonical children of order ``n`` for each canonical parent of order n-1.

    A child is the parent plus vertex ``n-1`` joined to a neighbourhood
    subset; it is kept iff its own matrix is canonical.  Children appear in
    parent order, then ascending neighbourhood mask.  Returns the row count
    written to ``out`` (capacity must be ``len(parents) * 2**(n-1)``).
    """
    perm, bestperm, bestcol, cmp, tried, used, uf, ufng, gens = make_canon_workspace(n)
    child = np.zeros(n, dtype=np.int64)
    count = 0
    last = n - 1
    for p in range(parents.shape[0]):
        for s in range(np.int64(1) << last):
            for i in range(last):
                child[i] = parents[p, i] | (((s >> i) & 1) << last)
            child[last] = s
            if canon_search(child, n, True, perm, bestperm, bestcol, cmp, tried, used, uf, ufng, gens) == 1:
                for i in range(n):
                    out[count, i] = child[i]
                count += 1
    return count


# -- tree completion ------------------------------------------------------


@njit(cache=True)
def _fill_completion(rows, k, m, tail, n, g):
    # star on 0..k-1 with centre 0, row bits to tail, tail block bottom-right
    for i in range(n):
        g[i] = 0
    for i in range(1, k):
        g[0] |= np.int64(1) << i
        g[i] |= np.int64(1)
    for i in range(k):
        x = rows[i]
        for t in range(m):
            if (x >> (m - 1 - t)) & 1:
                g[i] |= np.int64(1) << (k + t)
                g[k + t] |= np.int64(1) << i
    for t in range(m):
        g[k + t] |= tail[t] << k


@njit(cache=True)
def make_completion_graph(rows, k, m, tail):
    n = k + m
    g = np.zeros(max(n, 1), dtype=np.int64)
    _fill_completion(rows, k, m, tail, n, g)
    return g[:n].copy()


@njit(cache=True)
def completion_scan(k, m, tails, fam_adj, fam_n, first_lo, first_hi, out, out_cap):
    """Symmetry-broken completion search over rows with x1 in [first_lo, first_hi).

    Row 0 (the centre) and row 1 range freely; row i >= 2 is bounded by row
    i-1.  Every tail matrix is tried per row sequence.  Universal graphs are
    written to ``out``; returns (found, matrices_tested, solver_calls).
    Writes past ``out_cap`` are counted but dropped.
    """
    n = k + m
    top = np.int64(1) << m
    pmax = 0
    for f in range(fam_n.shape[0]):
        pmax = max(pmax, fam_n[f])
    P, T, mapping, pdeg = make_workspace(pmax)
    rows = np.zeros(max(k, 1), dtype=np.int64)
    g = np.zeros(max(n, 1), dtype=np.int64)
    found = 0
    tested = 0
    calls = 0
    for x0 in range(first_lo, first_hi):
        rows[0] = x0
        if k == 1:
            for tix in range(tails.shape[0]):
                _fill_completion(rows, k, m, tails[tix], n, g)
                tested += 1
                ok, c = check_universal(fam_adj, fam_n, g, n, P, T, mapping, pdeg)
                calls += c
                if ok:
                    if found < out_cap:
                        for i in range(n):
                            out[found, i] = g[i]
                    found += 1
            continue
        # odometer over rows[1..k-1]: rows[1] free, rows[i] <= rows[i-1]
        for i in range(1, k):
            rows[i] = 0
        while True:
            for tix in range(tails.shape[0]):
                _fill_completion(rows, k, m, tails[tix], n, g)
                tested += 1
                ok, c = check_universal(fam_adj, fam_n, g, n, P, T, mapping, pdeg)
                calls += c
                if ok:
                    if found < out_cap:
                        for i in range(n):
                            out[found, i] = g[i]
                    found += 1
            # advance: rightmost position that can still grow
            pos = k - 1
            while pos >= 1:
                limit = top - 1 if pos == 1 else rows[pos - 1]
                if rows[pos] < limit:
                    break
                pos -= 1
            if pos < 1:
                break
            rows[pos] += 1
            for i in range(pos + 1, k):
                rows[i] = 0
    return found, tested, calls


@njit(cache=True)
def naive_completion_scan(k, m, fam_adj, fam_n, lo, hi, out, out_cap):
    """All completions around the fixed star: every row and tail bit free."""
    n = k + m
    pmax = 0
    for f in range(fam_n.shape[0]):
        pmax = max(pmax, fam_n[f])
    P, T, mapping, pdeg = make_workspace(pmax)
    rows = np.zeros(max(k, 1), dtype=np.int64)
    tail = np.zeros(max(m, 1), dtype=np.int64)
    g = np.zeros(max(n, 1), dtype=np.int64)
    row_bits = k * m
    found = 0
    tested = 0
    calls = 0
    for code in range(lo, hi):
        for i in range(k):
            rows[i] = (code >> (i * m)) & ((np.int64(1) << m) - 1)
        bit = row_bits
        for t in range(m):
            tail[t] = 0
        for j in range(1, m):
            for i in range(j):
                if (code >> bit) & 1:
                    tail[i] |= np.int64(1) << j
                    tail[j] |= np.int64(1) << i
                bit += 1
        _fill_completion(rows, k, m, tail, n, g)
        tested += 1
        ok, c = check_universal(fam_adj, fam_n, g, n, P, T, mapping, pdeg)
        calls += c
        if ok:
            if found < out_cap:
                for i in range(n):
                    out[found, i] = g[i]
            found += 1
    return found, tested, calls
