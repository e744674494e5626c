"""Compiled inner loops shared by the encoding, modularity and operator modules.

All kernels take the network in CSR form (``indptr``, ``indices``, ``degrees``)
and plain int64 arrays, and never allocate Python objects.
"""
import numpy as np
from numba import njit


@njit(cache=True)
def _find(parent, i):
    root = i
    while parent[root] != root:
        root = parent[root]
    while parent[i] != root:
        nxt = parent[i]
        parent[i] = root
        i = nxt
    return root


@njit(cache=True)
def decode_labels(alleles):
    """Component labels of the undirected genotype graph, numbered by first appearance."""
    n = alleles.shape[0]
    parent = np.arange(n)
    for i in range(n):
        a = _find(parent, i)
        b = _find(parent, alleles[i])
        if a != b:
            if a < b:
                parent[b] = a
            else:
                parent[a] = b
    labels = np.empty(n, dtype=np.int64)
    root_label = np.full(n, -1, dtype=np.int64)
    k = 0
    for i in range(n):
        r = _find(parent, i)
        if root_label[r] < 0:
            root_label[r] = k
            k += 1
        labels[i] = root_label[r]
    return labels, k


@njit(cache=True)
def compact_labels(labels):
    """Renumber arbitrary non-negative labels to 0..k-1 by first appearance."""
    n = labels.shape[0]
    size = 0
    for i in range(n):
        if labels[i] + 1 > size:
            size = labels[i] + 1
    remap = np.full(size, -1, dtype=np.int64)
    out = np.empty(n, dtype=np.int64)
    k = 0
    for i in range(n):
        lab = labels[i]
        if remap[lab] < 0:
            remap[lab] = k
            k += 1
        out[i] = remap[lab]
    return out, k


@njit(cache=True)
def modularity_from_labels(indptr, indices, degrees, labels):
    """Q as the sum over communities of e_c/m - (d_c/2m)^2."""
    n = degrees.shape[0]
    size = 0
    for i in range(n):
        if labels[i] + 1 > size:
            size = labels[i] + 1
    inner = np.zeros(size)  # twice the within-community edge count
    dsum = np.zeros(size)
    two_m = 0.0
    for i in range(n):
        li = labels[i]
        dsum[li] += degrees[i]
        two_m += degrees[i]
        for p in range(indptr[i], indptr[i + 1]):
            if labels[indices[p]] == li:
                inner[li] += 1.0
    q = 0.0
    for c in range(size):
        q += inner[c] / two_m - (dsum[c] / two_m) ** 2
    return q


@njit(cache=True)
def mrw_alleles(indptr, indices, uniforms):
    """One random-walk step per node: a uniformly chosen neighbor, or self when isolated."""
    n = indptr.shape[0] - 1
    out = np.empty(n, dtype=np.int64)
    for i in range(n):
        k = indptr[i + 1] - indptr[i]
        if k == 0:
            out[i] = i
        else:
            pick = int(uniforms[i] * k)
            if pick >= k:
                pick = k - 1
            out[i] = indices[indptr[i] + pick]
    return out


@njit(cache=True)
def in_degrees(alleles):
    n = alleles.shape[0]
    counts = np.zeros(n, dtype=np.int64)
    for i in range(n):
        counts[alleles[i]] += 1
    return counts


@njit(cache=True)
def lsma(indptr, indices, degrees, alleles, labels, uniforms):
    """Local-search mutation of every marginal gene, in ascending node order.

    ``alleles`` and ``labels`` are updated in place; ``labels`` must be the
    decoded community structure of ``alleles`` on entry and stays consistent
    with it throughout. Returns the number of genes whose label changed.
    """
    n = alleles.shape[0]
    size = 0
    for i in range(n):
        if labels[i] + 1 > size:
            size = labels[i] + 1
    two_m = 0.0
    comm_deg = np.zeros(size)
    for i in range(n):
        comm_deg[labels[i]] += degrees[i]
        two_m += degrees[i]
    indeg = in_degrees(alleles)
    links = np.zeros(size, dtype=np.int64)
    cand = np.empty(size, dtype=np.int64)
    stamp = np.full(size, -1, dtype=np.int64)
    moved = 0
    for i in range(n):
        if indeg[i] != 0:
            continue
        cur = labels[i]
        ki = degrees[i]
        # candidate labels: i's own label first, then neighbor labels in adjacency order
        ncand = 1
        cand[0] = cur
        stamp[cur] = i
        links[cur] = 0
        for p in range(indptr[i], indptr[i + 1]):
            lab = labels[indices[p]]
            if stamp[lab] != i:
                stamp[lab] = i
                cand[ncand] = lab
                ncand += 1
                links[lab] = 0
        for p in range(indptr[i], indptr[i + 1]):
            links[labels[indices[p]]] += 1
        best = -1
        best_f = -np.inf
        for c in range(ncand):
            lab = cand[c]
            others = comm_deg[lab]
            if lab == cur:
                others -= ki
            f = links[lab] - ki * (others + ki) / two_m
            if f > best_f:
                best_f = f
                best = lab
        count = links[best]
        if count == 0:
            target = i
        else:
            pick = int(uniforms[i] * count)
            if pick >= count:
                pick = count - 1
            target = -1
            for p in range(indptr[i], indptr[i + 1]):
                j = indices[p]
                if labels[j] == best:
                    if pick == 0:
                        target = j
                        break
                    pick -= 1
        indeg[alleles[i]] -= 1
        alleles[i] = target
        indeg[target] += 1
        if best != cur:
            comm_deg[cur] -= ki
            comm_deg[best] += ki
            labels[i] = best
            moved += 1
    return moved


@njit(cache=True)
def is_safe(indptr, indices, alleles):
    n = alleles.shape[0]
    for i in range(n):
        a = alleles[i]
        if a == i:
            continue
        lo = indptr[i]
        hi = indptr[i + 1]
        # neighbor lists are sorted
        while lo < hi:
            mid = (lo + hi) // 2
            if indices[mid] < a:
                lo = mid + 1
            else:
                hi = mid
        if lo == indptr[i + 1] or indices[lo] != a:
            return False
    return True


@njit(cache=True)
def breed(indptr, indices, degrees, parents, parent_pairs, masks, uniforms):
    """A generation of offspring: uniform crossover of each parent pair, then LSMA.

    Row ``j`` of the outputs is exactly what ``lsma`` yields on
    ``where(masks[j], parents[a], parents[b])`` with ``uniforms[j]``.
    """
    lam, n = masks.shape
    children = np.empty((lam, n), dtype=np.int64)
    labels = np.empty((lam, n), dtype=np.int64)
    qs = np.empty(lam)
    for j in range(lam):
        a = parents[parent_pairs[j, 0]]
        b = parents[parent_pairs[j, 1]]
        child = children[j]
        for i in range(n):
            child[i] = a[i] if masks[j, i] else b[i]
        lab, _ = decode_labels(child)
        lsma(indptr, indices, degrees, child, lab, uniforms[j])
        labels[j] = lab
        qs[j] = modularity_from_labels(indptr, indices, degrees, lab)
    return children, labels, qs
