"""Compiled inner loops shared by the graph and centrality modules.

All kernels operate on the CSR arrays of a graph (indptr, indices) plus a
boolean removal mask, so no adjacency structure is ever rebuilt during an
attack. Everything is single-threaded and allocation-light: per-source
scratch arrays are reused and only the touched entries are reset.
"""

from __future__ import annotations

import numpy as np
from numba import njit


@njit(cache=True)
def residual_degrees(indptr, indices, removed):
    """Degree of every non-removed node counting only non-removed neighbors."""
    n = indptr.shape[0] - 1
    deg = np.zeros(n, np.int64)
    for v in range(n):
        if removed[v]:
            continue
        d = 0
        for ei in range(indptr[v], indptr[v + 1]):
            if not removed[indices[ei]]:
                d += 1
        deg[v] = d
    return deg


@njit(cache=True)
def component_labels(indptr, indices, removed):
    """Label residual nodes by connected component; removed nodes get -1."""
    n = indptr.shape[0] - 1
    comp = np.full(n, -1, np.int32)
    queue = np.empty(n, np.int32)
    c = 0
    for s in range(n):
        if removed[s] or comp[s] >= 0:
            continue
        comp[s] = c
        queue[0] = s
        head = 0
        cnt = 1
        while head < cnt:
            v = queue[head]
            head += 1
            for ei in range(indptr[v], indptr[v + 1]):
                w = indices[ei]
                if not removed[w] and comp[w] < 0:
                    comp[w] = c
                    queue[cnt] = w
                    cnt += 1
        c += 1
    return comp, c


@njit(cache=True)
def _uf_find(parent, x):
    # path halving
    while parent[x] != x:
        parent[x] = parent[parent[x]]
        x = parent[x]
    return x


@njit(cache=True)
def sq_curve_reverse(indptr, indices, attack):
    """Exact giant-component fraction after each attack prefix.

    Runs the attack backwards: start from the graph with every attacked node
    absent, then re-insert nodes in reverse order, merging components with a
    size-tracking union-find. The giant component can only grow while
    inserting, so a running maximum gives s(Q) for every prefix length Q in
    one O((N + M) * alpha) pass instead of L forward recomputations.
    """
    n = indptr.shape[0] - 1
    L = attack.shape[0]
    parent = np.arange(n)
    size = np.ones(n, np.int64)
    active = np.ones(n, np.bool_)
    for t in range(L):
        active[attack[t]] = False
    curve = np.empty(L + 1, np.float64)

    gc = 0
    for v in range(n):
        if active[v]:
            gc = 1
            break
    for v in range(n):
        if not active[v]:
            continue
        for ei in range(indptr[v], indptr[v + 1]):
            w = indices[ei]
            if w <= v or not active[w]:
                continue
            rv = _uf_find(parent, v)
            rw = _uf_find(parent, w)
            if rv == rw:
                continue
            if size[rv] < size[rw]:
                rv, rw = rw, rv
            parent[rw] = rv
            size[rv] += size[rw]
            if size[rv] > gc:
                gc = size[rv]
    curve[L] = gc / n

    for t in range(L - 1, -1, -1):
        v = attack[t]
        active[v] = True
        if gc == 0:
            gc = 1
        for ei in range(indptr[v], indptr[v + 1]):
            w = indices[ei]
            if not active[w]:
                continue
            rv = _uf_find(parent, v)
            rw = _uf_find(parent, w)
            if rv == rw:
                continue
            if size[rv] < size[rw]:
                rv, rw = rw, rv
            parent[rw] = rv
            size[rv] += size[rw]
            if size[rv] > gc:
                gc = size[rv]
        curve[t] = gc / n
    return curve


@njit(cache=True)
def brandes_accumulate(indptr, indices, removed, sources, scores):
    """Add raw shortest-path dependencies of each source into `scores`.

    One BFS plus reverse accumulation per source (Brandes' recurrence), with
    removed nodes invisible as sources, targets, and intermediates. The raw
    sum counts every ordered pair once; callers divide by two to count
    unordered pairs once, and scale by residual/Y for pivot estimates.
    """
    n = indptr.shape[0] - 1
    # removed nodes are folded into dist as -2 so the hot loops read a single
    # int32 stream instead of dist plus the removal mask
    dist = np.empty(n, np.int32)
    for v in range(n):
        dist[v] = -2 if removed[v] else -1
    sigma = np.zeros(n, np.float64)
    delta = np.zeros(n, np.float64)
    order = np.empty(n, np.int32)
    for si in range(sources.shape[0]):
        s = sources[si]
        dist[s] = 0
        sigma[s] = 1.0
        order[0] = s
        head = 0
        cnt = 1
        while head < cnt:
            v = order[head]
            head += 1
            dv = dist[v]
            sv = sigma[v]
            for ei in range(indptr[v], indptr[v + 1]):
                w = indices[ei]
                dw = dist[w]
                if dw == -1:
                    dist[w] = dv + 1
                    sigma[w] = sv
                    order[cnt] = w
                    cnt += 1
                elif dw == dv + 1:
                    sigma[w] += sv
        # nodes in reverse BFS order have non-increasing distance, so each
        # delta[w] is final when visited; dist of removed nodes is -2 and
        # never equals dw - 1 >= 0
        for oi in range(cnt - 1, 0, -1):
            w = order[oi]
            coeff = (1.0 + delta[w]) / sigma[w]
            dtarget = dist[w] - 1
            for ei in range(indptr[w], indptr[w + 1]):
                v = indices[ei]
                if dist[v] == dtarget:
                    delta[v] += sigma[v] * coeff
            scores[w] += delta[w]
        for oi in range(cnt):
            v = order[oi]
            dist[v] = -1
            sigma[v] = 0.0
            delta[v] = 0.0


@njit(cache=True)
def betweenness_component(indptr, indices, members, scores):
    """Raw betweenness of one residual component, peeling pendant trees.

    `members` must be exactly the nodes of one connected residual component;
    their `scores` entries must be zeroed by the caller. Degree-<=1 nodes are
    peeled iteratively; every peeled node's score follows from the masses of
    the branches it separates (all paths between two branches cross it, and
    each such path is unique inside a pendant tree). The remaining 2-core is
    scored with Brandes where each core node carries its pendant mass, plus a
    closed-form term for the pairs its own pendant trees exchange with the
    rest. All mass arithmetic is on integers (stored in float64), so the tree
    part is exact; results are in the same raw ordered-pair units as
    brandes_accumulate.
    """
    n = indptr.shape[0] - 1
    W = members.shape[0]
    if W <= 2:
        return
    Wf = float(W)
    cross_all = (Wf - 1.0) * (Wf - 1.0)
    status = np.zeros(n, np.int8)  # 0 outside, 1 live member, 2 peeled
    ideg = np.zeros(n, np.int32)
    sbm = np.zeros(n, np.float64)  # sum of peeled branch masses
    sbs = np.zeros(n, np.float64)  # sum of squared peeled branch masses
    for mi in range(W):
        status[members[mi]] = 1
    for mi in range(W):
        v = members[mi]
        d = 0
        for ei in range(indptr[v], indptr[v + 1]):
            if status[indices[ei]] != 0:
                d += 1
        ideg[v] = d
    queue = np.empty(W, np.int32)
    qn = 0
    for mi in range(W):
        v = members[mi]
        if ideg[v] <= 1:
            queue[qn] = v
            qn += 1
    head = 0
    while head < qn:
        u = queue[head]
        head += 1
        status[u] = 2
        mu = 1.0 + sbm[u]
        up = Wf - mu
        scores[u] += cross_all - sbs[u] - up * up
        for ei in range(indptr[u], indptr[u + 1]):
            p = indices[ei]
            if status[p] == 1:
                sbm[p] += mu
                sbs[p] += mu * mu
                ideg[p] -= 1
                if ideg[p] == 1:
                    queue[qn] = p
                    qn += 1
                break
    n_core = W - qn
    if n_core == 0:
        return
    core = np.empty(n_core, np.int32)
    ci = 0
    for mi in range(W):
        v = members[mi]
        if status[v] == 1:
            core[ci] = v
            ci += 1
            # pairs between v's own pendant trees and everything else
            up = Wf - 1.0 - sbm[v]
            scores[v] += cross_all - sbs[v] - up * up
    dist = np.full(n, -2, np.int32)
    for ki in range(n_core):
        dist[core[ki]] = -1
    sigma = np.zeros(n, np.float64)
    delta = np.zeros(n, np.float64)
    order = np.empty(n_core, np.int32)
    for si in range(n_core):
        s = core[si]
        ws = 1.0 + sbm[s]
        dist[s] = 0
        sigma[s] = 1.0
        order[0] = s
        head = 0
        cnt = 1
        while head < cnt:
            v = order[head]
            head += 1
            dv = dist[v]
            sv = sigma[v]
            for ei in range(indptr[v], indptr[v + 1]):
                w = indices[ei]
                dw = dist[w]
                if dw == -1:
                    dist[w] = dv + 1
                    sigma[w] = sv
                    order[cnt] = w
                    cnt += 1
                elif dw == dv + 1:
                    sigma[w] += sv
        for oi in range(cnt - 1, 0, -1):
            w = order[oi]
            coeff = (1.0 + sbm[w] + delta[w]) / sigma[w]
            dtarget = dist[w] - 1
            for ei in range(indptr[w], indptr[w + 1]):
                v = indices[ei]
                if dist[v] == dtarget:
                    delta[v] += sigma[v] * coeff
            scores[w] += ws * delta[w]
        for oi in range(cnt):
            v = order[oi]
            dist[v] = -1
            sigma[v] = 0.0
            delta[v] = 0.0


@njit(cache=True)
def collective_influence_scores(indptr, indices, removed, radius):
    """CI_r(i) = (k_i - 1) * sum of (k_j - 1) over the ball boundary at r.

    k is the residual degree; the boundary is the set of nodes at BFS
    distance exactly `radius` from i in the residual graph. Nodes with
    residual degree <= 1 score 0 by definition.
    """
    n = indptr.shape[0] - 1
    deg = residual_degrees(indptr, indices, removed)
    scores = np.zeros(n, np.float64)
    mark = np.full(n, -1, np.int64)
    queue = np.empty(n, np.int64)
    qdist = np.empty(n, np.int64)
    for i in range(n):
        if removed[i] or deg[i] <= 1:
            continue
        mark[i] = i
        queue[0] = i
        qdist[0] = 0
        head = 0
        cnt = 1
        boundary = 0.0
        while head < cnt:
            v = queue[head]
            dv = qdist[head]
            head += 1
            if dv == radius:
                boundary += deg[v] - 1
                continue
            for ei in range(indptr[v], indptr[v + 1]):
                w = indices[ei]
                if not removed[w] and mark[w] != i:
                    mark[w] = i
                    queue[cnt] = w
                    qdist[cnt] = dv + 1
                    cnt += 1
        scores[i] = (deg[i] - 1.0) * boundary
    return scores


@njit(cache=True)
def pagerank_iterate(indptr, indices, removed, damping, tol, max_iters):
    """Power iteration over the residual graph, L1 stopping rule.

    Mass from residual nodes with no residual neighbors is redistributed
    uniformly, so the scores of the non-removed nodes always sum to 1.
    Removed nodes hold score 0.
    """
    n = indptr.shape[0] - 1
    deg = residual_degrees(indptr, indices, removed)
    n_res = 0
    for v in range(n):
        if not removed[v]:
            n_res += 1
    x = np.zeros(n, np.float64)
    if n_res == 0:
        return x
    inv = 1.0 / n_res
    for v in range(n):
        if not removed[v]:
            x[v] = inv
    xn = np.zeros(n, np.float64)
    base = (1.0 - damping) * inv
    for _ in range(max_iters):
        dangling = 0.0
        for v in range(n):
            if not removed[v] and deg[v] == 0:
                dangling += x[v]
        shared = base + damping * dangling * inv
        for v in range(n):
            xn[v] = 0.0
        for v in range(n):
            if removed[v] or deg[v] == 0:
                continue
            push = damping * x[v] / deg[v]
            for ei in range(indptr[v], indptr[v + 1]):
                w = indices[ei]
                if not removed[w]:
                    xn[w] += push
        delta = 0.0
        for v in range(n):
            if removed[v]:
                continue
            xv = xn[v] + shared
            delta += abs(xv - x[v])
            x[v] = xv
        if delta <= tol:
            break
    return x
