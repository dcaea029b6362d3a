"""Hot inner loops shared by the counting and bound modules.

Every kernel exists twice: a scalar loop that numba compiles when the JIT
backend is active (see ``_backend``), and a NumPy-vectorized or plain-Python
fallback.  Both paths produce identical results; the dispatch helpers at the
bottom pick one based on the active backend.  Graphs enter as CSR arrays
(``indptr``/``indices``, int64, neighbor lists strictly sorted).
"""

import numpy as np

from ._backend import USING_NUMBA, njit


# ---------------------------------------------------------------------------
# k-cycle census (canonical DFS: smallest vertex first, second < last)
# ---------------------------------------------------------------------------

@njit(cache=True)
def _count_cycles_loop(indptr, indices, k):
    n = indptr.shape[0] - 1
    total = 0
    path = np.empty(k, np.int64)
    ptr = np.empty(k, np.int64)
    in_path = np.zeros(n, np.uint8)
    for s in range(n):
        path[0] = s
        in_path[s] = 1
        ptr[0] = indptr[s]
        depth = 0
        while depth >= 0:
            cur = path[depth]
            if ptr[depth] < indptr[cur + 1]:
                v = indices[ptr[depth]]
                ptr[depth] += 1
                if v <= s or in_path[v] == 1:
                    continue
                if depth == k - 2:
                    # v sits in the last slot; orientation rule plus closure
                    if path[1] < v:
                        lo = indptr[v]
                        hi = indptr[v + 1]
                        while lo < hi:
                            mid = (lo + hi) >> 1
                            if indices[mid] < s:
                                lo = mid + 1
                            else:
                                hi = mid
                        if lo < indptr[v + 1] and indices[lo] == s:
                            total += 1
                else:
                    path[depth + 1] = v
                    in_path[v] = 1
                    ptr[depth + 1] = indptr[v]
                    depth += 1
            else:
                in_path[cur] = 0
                depth -= 1
    return total


def _count_cycles_python(indptr, indices, k):
    """Fallback census: same canonical DFS over Python lists."""
    n = len(indptr) - 1
    adj = [indices[indptr[i]:indptr[i + 1]].tolist() for i in range(n)]
    adjset = [set(a) for a in adj]
    total = 0

    def extend(s, path, used, depth):
        nonlocal total
        last = path[-1]
        if depth == k - 2:
            v1 = path[1]
            for v in adj[last]:
                if v > v1 and v not in used and s in adjset[v]:
                    total += 1
            return
        for v in adj[last]:
            if v <= s or v in used:
                continue
            path.append(v)
            used.add(v)
            extend(s, path, used, depth + 1)
            used.discard(v)
            path.pop()

    for s in range(n):
        extend(s, [s], {s}, 0)
    return total


# ---------------------------------------------------------------------------
# Triangle census via sorted-neighbor-list intersection (i < j < l)
# ---------------------------------------------------------------------------

@njit(cache=True)
def _count_triangles_loop(indptr, indices):
    n = indptr.shape[0] - 1
    total = 0
    for i in range(n):
        for q in range(indptr[i], indptr[i + 1]):
            j = indices[q]
            if j <= i:
                continue
            # two-pointer merge over the > j suffixes of adj(i) and adj(j)
            a = q + 1
            b = indptr[j]
            hi_b = indptr[j + 1]
            while b < hi_b and indices[b] <= j:
                b += 1
            hi_a = indptr[i + 1]
            while a < hi_a and b < hi_b:
                va = indices[a]
                vb = indices[b]
                if va == vb:
                    total += 1
                    a += 1
                    b += 1
                elif va < vb:
                    a += 1
                else:
                    b += 1
    return total


def _count_triangles_numpy(indptr, indices):
    """Fallback triangle census: per-edge np.intersect1d on sorted suffixes."""
    n = len(indptr) - 1
    total = 0
    for i in range(n):
        row = indices[indptr[i]:indptr[i + 1]]
        for j in row[row > i]:
            suf_i = row[np.searchsorted(row, j, side="right"):]
            row_j = indices[indptr[j]:indptr[j + 1]]
            suf_j = row_j[np.searchsorted(row_j, j, side="right"):]
            total += np.intersect1d(suf_i, suf_j, assume_unique=True).size
    return int(total)


# ---------------------------------------------------------------------------
# Chen-Stein bound terms over the candidate-cycle index set
#
# Inputs: one row of sorted (compressed) edge ids per candidate cycle, the
# per-candidate occurrence probability, a CSR map from edge id to the
# candidates through that edge, and per-edge probabilities.  b1 sums
# p_a * p_b over pairs sharing an edge (self pair included); b2 sums the
# joint probability p_ab = p_a * p_b / prod(shared edge probs) over distinct
# pairs sharing an edge.
# ---------------------------------------------------------------------------

@njit(cache=True)
def _bound_terms_loop(edge_rows, p_cand, cand_indptr, cand_indices, p_edge):
    nc = edge_rows.shape[0]
    k = edge_rows.shape[1]
    stamp = np.zeros(nc, np.int64)
    b1 = 0.0
    b2 = 0.0
    for a in range(nc):
        pa = p_cand[a]
        acc = 0.0
        for t in range(k):
            e = edge_rows[a, t]
            for q in range(cand_indptr[e], cand_indptr[e + 1]):
                b = cand_indices[q]
                if stamp[b] == a + 1:
                    continue
                stamp[b] = a + 1
                pb = p_cand[b]
                acc += pb
                if b != a:
                    shared = 1.0
                    i = 0
                    j = 0
                    while i < k and j < k:
                        ea = edge_rows[a, i]
                        eb = edge_rows[b, j]
                        if ea == eb:
                            shared *= p_edge[ea]
                            i += 1
                            j += 1
                        elif ea < eb:
                            i += 1
                        else:
                            j += 1
                    b2 += pa * pb / shared
        b1 += pa * acc
    return b1, b2


def _bound_terms_numpy(edge_rows, p_cand, cand_indptr, cand_indices, p_edge):
    """Fallback bound terms: vectorized over each candidate's neighborhood."""
    nc, k = edge_rows.shape
    b1 = 0.0
    b2 = 0.0
    for a in range(nc):
        segs = [cand_indices[cand_indptr[e]:cand_indptr[e + 1]]
                for e in edge_rows[a]]
        nbr = np.unique(np.concatenate(segs))
        pa = p_cand[a]
        b1 += pa * float(p_cand[nbr].sum())
        others = nbr[nbr != a]
        if others.size:
            rows = edge_rows[others]
            mask = (rows[:, :, None] == edge_rows[a][None, None, :]).any(axis=2)
            shared = np.where(mask, p_edge[rows], 1.0).prod(axis=1)
            b2 += float((pa * p_cand[others] / shared).sum())
    return b1, b2


# ---------------------------------------------------------------------------
# Dispatch
# ---------------------------------------------------------------------------

def count_cycles(indptr, indices, k):
    if USING_NUMBA:
        return int(_count_cycles_loop(indptr, indices, k))
    return int(_count_cycles_python(indptr, indices, k))


def count_triangles(indptr, indices):
    if USING_NUMBA:
        return int(_count_triangles_loop(indptr, indices))
    return _count_triangles_numpy(indptr, indices)


def bound_terms(edge_rows, p_cand, cand_indptr, cand_indices, p_edge):
    if USING_NUMBA:
        b1, b2 = _bound_terms_loop(edge_rows, p_cand, cand_indptr,
                                   cand_indices, p_edge)
    else:
        b1, b2 = _bound_terms_numpy(edge_rows, p_cand, cand_indptr,
                                    cand_indices, p_edge)
    return float(b1), float(b2)
