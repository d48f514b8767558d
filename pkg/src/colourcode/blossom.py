"""Exact minimum-weight perfect matching on general weighted graphs.

Primal-dual blossom algorithm (O(V^3)).  Weights must be non-negative
integers; callers that need fractional tie-breaking should pre-scale.
Minimisation is reduced to maximum-weight maximum-cardinality matching
by reflecting the weights, which preserves the optimum over perfect
matchings.
"""

from __future__ import annotations


class MatchingError(Exception):
    """Raised when the graph admits no perfect matching."""


def min_weight_perfect_matching(n_nodes, edges):
    """Return a minimum-weight perfect matching.

    Parameters
    ----------
    n_nodes : int
        Number of vertices, indexed 0..n_nodes-1.
    edges : list of (i, j, w)
        Undirected weighted edges, w a non-negative integer.

    Returns
    -------
    list of (i, j) pairs covering every vertex exactly once, with
    minimum total weight.  Deterministic for a fixed edge order.

    Raises
    ------
    MatchingError
        If no perfect matching exists (odd component, isolated node).
    """
    if n_nodes == 0:
        return []
    if n_nodes % 2:
        raise MatchingError("odd number of nodes")
    if not edges:
        raise MatchingError("no edges")
    wmax = max(w for (_, _, w) in edges)
    flipped = [(i, j, wmax - w) for (i, j, w) in edges]
    mate = _max_weight_matching(n_nodes, flipped, maxcardinality=True)
    pairs = []
    seen = [False] * n_nodes
    for v in range(n_nodes):
        if seen[v]:
            continue
        if mate[v] < 0:
            raise MatchingError("no perfect matching covers node %d" % v)
        seen[v] = True
        seen[mate[v]] = True
        pairs.append((v, mate[v]))
    return pairs


def matching_weight(pairs, edges):
    """Total weight of a matching given as vertex pairs."""
    lut = {}
    for i, j, w in edges:
        key = (i, j) if i < j else (j, i)
        if key not in lut or w < lut[key]:
            lut[key] = w
    return sum(lut[(i, j) if i < j else (j, i)] for (i, j) in pairs)


def _max_weight_matching(nvertex, edges, maxcardinality=False):
    """Galil/Edmonds primal-dual maximum-weight matching.

    Returns mate[v] = partner vertex or -1.  Integer weights keep all
    dual variables integral (duals carry an implicit factor 2).
    """
    nedge = len(edges)
    for (i, j, w) in edges:
        if i == j or not (0 <= i < nvertex) or not (0 <= j < nvertex):
            raise ValueError("bad edge (%d,%d,%r)" % (i, j, w))

    maxweight = max(0, max(w for (_, _, w) in edges))

    # endpoint[p] = vertex at endpoint p of edge p//2
    endpoint = [edges[p // 2][p % 2] for p in range(2 * nedge)]
    # neighbend[v] = remote endpoints of edges incident to v
    neighbend = [[] for _ in range(nvertex)]
    for k in range(nedge):
        i, j, _ = edges[k]
        neighbend[i].append(2 * k + 1)
        neighbend[j].append(2 * k)

    mate = [-1] * nvertex               # mate[v] = remote endpoint or -1
    # label per top-level blossom: 0 free, 1 S, 2 T; 5 = augmented through
    label = [0] * (2 * nvertex)
    labelend = [-1] * (2 * nvertex)     # endpoint via which label arrived
    inblossom = list(range(nvertex))    # top-level blossom of each vertex
    blossomparent = [-1] * (2 * nvertex)
    blossombase = list(range(nvertex)) + [-1] * nvertex
    blossomchilds = [None] * (2 * nvertex)
    blossomendps = [None] * (2 * nvertex)
    bestedge = [-1] * (2 * nvertex)     # least-slack edge candidate
    blossombestedges = [None] * (2 * nvertex)
    unusedblossoms = list(range(nvertex, 2 * nvertex))
    dualvar = [maxweight] * nvertex + [0] * nvertex
    allowedge = [False] * nedge
    queue = []

    def slack(k):
        i, j, wt = edges[k]
        return dualvar[i] + dualvar[j] - 2 * wt

    def blossom_leaves(b):
        if b < nvertex:
            return (b,)
        out = []
        stack = [b]
        while stack:
            t = stack.pop()
            if t < nvertex:
                out.append(t)
            else:
                stack.extend(blossomchilds[t])
        return out

    def assign_label(w, t, p):
        while True:
            b = inblossom[w]
            label[w] = label[b] = t
            labelend[w] = labelend[b] = p
            bestedge[w] = bestedge[b] = -1
            if t == 1:
                if b < nvertex:
                    queue.append(b)
                else:
                    queue.extend(blossom_leaves(b))
                return
            # t == 2: continue the alternating path through the mate
            base = blossombase[b]
            p = mate[base] ^ 1
            w = endpoint[mate[base]]
            t = 1

    def scan_blossom(v, w):
        # Find a common ancestor (new blossom base) or detect augmenting path.
        path = []
        base = -1
        while v != -1 or w != -1:
            b = inblossom[v]
            if label[b] & 4:
                base = blossombase[b]
                break
            path.append(b)
            label[b] = 5
            if labelend[b] == -1:
                v = -1
            else:
                v = endpoint[labelend[b]]
                b = inblossom[v]
                v = endpoint[labelend[b]]
            if w != -1:
                v, w = w, v
        for b in path:
            label[b] = 1
        return base

    def add_blossom(base, k):
        (v, w, _) = edges[k]
        bb = inblossom[base]
        bv = inblossom[v]
        bw = inblossom[w]
        b = unusedblossoms.pop()
        blossombase[b] = base
        blossomparent[b] = -1
        blossomparent[bb] = b
        path = []
        endps = []
        while bv != bb:
            blossomparent[bv] = b
            path.append(bv)
            endps.append(labelend[bv])
            v = endpoint[labelend[bv]]
            bv = inblossom[v]
        path.append(bb)
        path.reverse()
        endps.reverse()
        endps.append(2 * k)
        while bw != bb:
            blossomparent[bw] = b
            path.append(bw)
            endps.append(labelend[bw] ^ 1)
            w = endpoint[labelend[bw]]
            bw = inblossom[w]
        blossomchilds[b] = path
        blossomendps[b] = endps
        label[b] = 1
        labelend[b] = labelend[bb]
        dualvar[b] = 0
        for leaf in blossom_leaves(b):
            if label[inblossom[leaf]] == 2:
                queue.append(leaf)
            inblossom[leaf] = b
        bestedgeto = {}
        for bv in path:
            if blossombestedges[bv] is None:
                nblists = [[p // 2 for p in neighbend[leaf]]
                           for leaf in blossom_leaves(bv)]
            else:
                nblists = [blossombestedges[bv]]
            for nblist in nblists:
                for kk in nblist:
                    (i, j, _) = edges[kk]
                    if inblossom[j] == b:
                        i, j = j, i
                    bj = inblossom[j]
                    if bj != b and label[bj] == 1:
                        cur = bestedgeto.get(bj, -1)
                        if cur == -1 or slack(kk) < slack(cur):
                            bestedgeto[bj] = kk
            blossombestedges[bv] = None
            bestedge[bv] = -1
        blossombestedges[b] = list(bestedgeto.values())
        bestedge[b] = -1
        for kk in blossombestedges[b]:
            if bestedge[b] == -1 or slack(kk) < slack(bestedge[b]):
                bestedge[b] = kk

    def expand_blossom(b, endstage):
        for s in blossomchilds[b]:
            blossomparent[s] = -1
            if s < nvertex:
                inblossom[s] = s
            elif endstage and dualvar[s] == 0:
                expand_blossom(s, endstage)
            else:
                for leaf in blossom_leaves(s):
                    inblossom[leaf] = s
        if (not endstage) and label[b] == 2:
            # Relabel the path through the former blossom.
            entrychild = inblossom[endpoint[labelend[b] ^ 1]]
            j = blossomchilds[b].index(entrychild)
            if j & 1:
                j -= len(blossomchilds[b])
                jstep = 1
                endptrick = 0
            else:
                jstep = -1
                endptrick = 1
            p = labelend[b]
            while j != 0:
                label[endpoint[p ^ 1]] = 0
                label[endpoint[blossomendps[b][j - endptrick] ^ endptrick ^ 1]] = 0
                assign_label(endpoint[p ^ 1], 2, p)
                allowedge[blossomendps[b][j - endptrick] // 2] = True
                j += jstep
                p = blossomendps[b][j - endptrick] ^ endptrick
                allowedge[p // 2] = True
                j += jstep
            bv = blossomchilds[b][j]
            label[endpoint[p ^ 1]] = label[bv] = 2
            labelend[endpoint[p ^ 1]] = labelend[bv] = p
            bestedge[bv] = -1
            j += jstep
            while blossomchilds[b][j] != entrychild:
                bv = blossomchilds[b][j]
                if label[bv] == 1:
                    j += jstep
                    continue
                for v in blossom_leaves(bv):
                    if label[v] != 0:
                        break
                if label[v] != 0:
                    label[v] = 0
                    label[endpoint[mate[blossombase[bv]]]] = 0
                    assign_label(v, 2, labelend[v])
                j += jstep
        label[b] = labelend[b] = -1
        blossomchilds[b] = blossomendps[b] = None
        blossombase[b] = -1
        blossombestedges[b] = None
        bestedge[b] = -1
        unusedblossoms.append(b)

    def augment_blossom(b, v):
        t = v
        while blossomparent[t] != b:
            t = blossomparent[t]
        if t >= nvertex:
            augment_blossom(t, v)
        i = j = blossomchilds[b].index(t)
        if i & 1:
            j -= len(blossomchilds[b])
            jstep = 1
            endptrick = 0
        else:
            jstep = -1
            endptrick = 1
        while j != 0:
            j += jstep
            t = blossomchilds[b][j]
            p = blossomendps[b][j - endptrick] ^ endptrick
            if t >= nvertex:
                augment_blossom(t, endpoint[p])
            j += jstep
            t = blossomchilds[b][j]
            if t >= nvertex:
                augment_blossom(t, endpoint[p ^ 1])
            mate[endpoint[p]] = p ^ 1
            mate[endpoint[p ^ 1]] = p
        blossomchilds[b] = blossomchilds[b][i:] + blossomchilds[b][:i]
        blossomendps[b] = blossomendps[b][i:] + blossomendps[b][:i]
        blossombase[b] = blossombase[blossomchilds[b][0]]
        assert blossombase[b] == v

    def augment_matching(k):
        (v, w, _) = edges[k]
        for (s, p) in ((v, 2 * k + 1), (w, 2 * k)):
            while True:
                bs = inblossom[s]
                assert label[bs] == 1
                assert labelend[bs] == mate[blossombase[bs]]
                if bs >= nvertex:
                    augment_blossom(bs, s)
                mate[s] = p
                if labelend[bs] == -1:
                    break
                t = endpoint[labelend[bs]]
                bt = inblossom[t]
                assert label[bt] == 2
                s = endpoint[labelend[bt]]
                j = endpoint[labelend[bt] ^ 1]
                assert blossombase[bt] == t
                if bt >= nvertex:
                    augment_blossom(bt, j)
                mate[j] = labelend[bt]
                p = labelend[bt] ^ 1

    for _ in range(nvertex):
        label[:] = [0] * (2 * nvertex)
        bestedge[:] = [-1] * (2 * nvertex)
        for ll in range(nvertex, 2 * nvertex):
            blossombestedges[ll] = None
        allowedge[:] = [False] * nedge
        queue[:] = []
        for v in range(nvertex):
            if mate[v] == -1 and label[inblossom[v]] == 0:
                assign_label(v, 1, -1)
        augmented = False
        while True:
            while queue and not augmented:
                v = queue.pop()
                bv = inblossom[v]
                dv = dualvar[v]
                for p in neighbend[v]:
                    k = p // 2
                    w = endpoint[p]
                    bw = inblossom[w]
                    if bv == bw:
                        continue
                    if not allowedge[k]:
                        kslack = dv + dualvar[w] - 2 * edges[k][2]
                        if kslack <= 0:
                            allowedge[k] = True
                    if allowedge[k]:
                        lbw = label[bw]
                        if lbw == 0:
                            assign_label(w, 2, p ^ 1)
                        elif lbw == 1:
                            base = scan_blossom(v, w)
                            if base >= 0:
                                add_blossom(base, k)
                                bv = inblossom[v]
                            else:
                                augment_matching(k)
                                augmented = True
                                break
                        elif label[w] == 0:
                            label[w] = 2
                            labelend[w] = p ^ 1
                    elif label[bw] == 1:
                        if bestedge[bv] == -1 or kslack < slack(bestedge[bv]):
                            bestedge[bv] = k
                    elif label[w] == 0:
                        if bestedge[w] == -1 or kslack < slack(bestedge[w]):
                            bestedge[w] = k
            if augmented:
                break

            # No augmenting path found; adjust dual variables.
            deltatype = -1
            delta = deltaedge = deltablossom = None
            if not maxcardinality:
                deltatype = 1
                delta = min(dualvar[:nvertex])
            for v in range(nvertex):
                if label[inblossom[v]] == 0 and bestedge[v] != -1:
                    d = slack(bestedge[v])
                    if deltatype == -1 or d < delta:
                        delta = d
                        deltatype = 2
                        deltaedge = bestedge[v]
            for b in range(2 * nvertex):
                if (blossomparent[b] == -1 and label[b] == 1 and
                        bestedge[b] != -1):
                    kslack = slack(bestedge[b])
                    d = kslack // 2
                    if deltatype == -1 or d < delta:
                        delta = d
                        deltatype = 3
                        deltaedge = bestedge[b]
            for b in range(nvertex, 2 * nvertex):
                if (blossombase[b] >= 0 and blossomparent[b] == -1 and
                        label[b] == 2 and
                        (deltatype == -1 or dualvar[b] < delta)):
                    delta = dualvar[b]
                    deltatype = 4
                    deltablossom = b
            if deltatype == -1:
                # No further progress possible (maxcardinality reached).
                deltatype = 1
                delta = max(0, min(dualvar[:nvertex]))

            for v in range(nvertex):
                lab = label[inblossom[v]]
                if lab == 1:
                    dualvar[v] -= delta
                elif lab == 2:
                    dualvar[v] += delta
            for b in range(nvertex, 2 * nvertex):
                if blossombase[b] >= 0 and blossomparent[b] == -1:
                    if label[b] == 1:
                        dualvar[b] += delta
                    elif label[b] == 2:
                        dualvar[b] -= delta

            if deltatype == 1:
                break
            elif deltatype == 2:
                allowedge[deltaedge] = True
                (i, j, _) = edges[deltaedge]
                if label[inblossom[i]] == 0:
                    i, j = j, i
                queue.append(i)
            elif deltatype == 3:
                allowedge[deltaedge] = True
                (i, j, _) = edges[deltaedge]
                queue.append(i)
            elif deltatype == 4:
                expand_blossom(deltablossom, False)

        if not augmented:
            break

        for b in range(nvertex, 2 * nvertex):
            if (blossomparent[b] == -1 and blossombase[b] >= 0 and
                    label[b] == 1 and dualvar[b] == 0):
                expand_blossom(b, True)

    return [endpoint[mate[v]] if mate[v] >= 0 else -1 for v in range(nvertex)]
