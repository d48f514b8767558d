"""Approximate minimum-weight hypergraph matching via mimic graphs.

The rank-3 hypergraph is never matched directly.  For an ordered colour
permutation (s | a, b) every a-b edge is replaced by a five-edge series
through four new nodes (the two disables, the pair node p and its
boundary p'), and every hyperedge {s,a,b} becomes an edge from s to the
pair node.  The minimum matching of this mimic graph lower-bounds the
hypergraph optimum; reading off which singletons matched which pair
nodes gives a pair assignment, and collapsing those pairs yields a trial
graph whose matching upper-bounds the optimum.  When the two weight-sums
meet, the trial matching is certified optimal.

All matchings are computed with the exact blossom matcher on integer
weights.  Trial diversity comes from deterministic sub-integer weight
perturbations that can only break ties, never reorder distinct
weight-sums.  Disconnected syndromes are decoded per component with
content-derived trial seeds, so results do not depend on what else is in
the round.
"""

from __future__ import annotations

import zlib
from dataclasses import dataclass, field

import numpy as np

from .blossom import min_weight_perfect_matching
from .syndrome_graph import BOUNDARY, Element, SyndromeHypergraph

PERMUTATIONS = [(s, a, b)
                for s in (0, 1, 2)
                for (a, b) in ((x, y) for x in (0, 1, 2) for y in (0, 1, 2)
                               if x != y and x != s and y != s)]


@dataclass
class MatchOutcome:
    """Result of one decode: matching plus weight-sum provenance."""
    matching: list               # hypergraph Elements (boundary edges incl.)
    w_mimic: int
    w_trial: int
    certificate: bool
    source: str = "trial"
    per_component: list = field(default_factory=list)


class OracleTooLarge(Exception):
    """exact_hypermatch refuses oversized instances."""


def exact_min_error_decode(lattice, z_parity, cap=None):
    """Minimum-weight error set reproducing a single-round Z syndrome.

    Enumerates qubit subsets of increasing size (deterministic
    lexicographic order) and returns the first whose ideal syndrome
    equals z_parity, as a qubit mask.  This equals the weight of the
    minimum-weight hypergraph matching with dummy pairs everywhere, and
    serves as the independent oracle for failure-ratio sampling.
    """
    from itertools import combinations
    from .noise import _support_masks

    cache = getattr(lattice, "_min_err_cache", None)
    if cache is None:
        cache = {}
        lattice._min_err_cache = cache
    got = cache.get(z_parity)
    if got is not None:
        return got
    if cap is None:
        cap = lattice.params.F + 1
    masks = _support_masks(lattice)
    Q = lattice.n_qubits
    qsig = []
    for q in range(Q):
        sig = 0
        for pid, m in enumerate(masks):
            if (m >> q) & 1:
                sig |= (1 << pid)
        qsig.append(sig)
    for w in range(cap + 1):
        for sub in combinations(range(Q), w):
            sig = 0
            for q in sub:
                sig ^= qsig[q]
            if sig == z_parity:
                corr = 0
                for q in sub:
                    corr |= (1 << q)
                cache[z_parity] = corr
                return corr
    raise OracleTooLarge("no error set of weight <= %d reproduces syndrome"
                         % cap)


# ---------------------------------------------------------------------------
# exact exponential oracle


def exact_hypermatch(h, limit=16):
    """Exhaustive minimum-weight perfect hypergraph matching.

    Only non-boundary nodes are branched over; boundary partners always
    complete the matching through the weight-0 mirror.  Returns
    (elements, W_hyper).  Refuses instances with more than `limit`
    non-boundary nodes.
    """
    real = [n.id for n in h.nodes if n.kind != BOUNDARY]
    if len(real) > limit:
        raise OracleTooLarge("%d non-boundary nodes > limit %d"
                             % (len(real), limit))
    bd_edge = {}
    edges = {}
    hypers = {}
    for el in h.elements:
        kinds = [h.nodes[n].kind for n in el.nodes]
        if BOUNDARY in kinds:
            nid = el.nodes[0] if kinds[1] == BOUNDARY else el.nodes[1]
            if nid not in bd_edge or el.weight < bd_edge[nid].weight:
                bd_edge[nid] = el
            continue
        if el.is_hyper:
            key = tuple(sorted(el.nodes))
            if key not in hypers or el.weight < hypers[key].weight:
                hypers[key] = el
        else:
            key = tuple(sorted(el.nodes))
            if key not in edges or el.weight < edges[key].weight:
                edges[key] = el

    order = sorted(real)
    pos = {n: i for i, n in enumerate(order)}
    n = len(order)
    options_at = [[] for _ in range(n)]
    for key, el in sorted(edges.items()):
        i, j = pos[key[0]], pos[key[1]]
        options_at[min(i, j)].append((el.weight, (max(i, j),), el))
    for key, el in sorted(hypers.items()):
        ids = sorted(pos[x] for x in key)
        options_at[ids[0]].append((el.weight, (ids[1], ids[2]), el))
    for nid, el in bd_edge.items():
        options_at[pos[nid]].append((el.weight, (), el))
    for i in range(n):
        options_at[i].sort(key=lambda o: o[0])

    best = [None, None]          # weight, chosen elements

    def rec(covered, acc, chosen):
        if best[0] is not None and acc >= best[0]:
            return
        i = 0
        while i < n and (covered >> i) & 1:
            i += 1
        if i == n:
            best[0] = acc
            best[1] = list(chosen)
            return
        for (w, others, el) in options_at[i]:
            if any((covered >> j) & 1 for j in others):
                continue
            cov = covered | (1 << i)
            for j in others:
                cov |= (1 << j)
            chosen.append(el)
            rec(cov, acc + w, chosen)
            chosen.pop()

    rec(0, 0, [])
    if best[0] is None:
        raise AssertionError("no perfect hypergraph matching found")
    return best[1], best[0]


# ---------------------------------------------------------------------------
# mimic graph


@dataclass
class MimicGraph:
    """Blossom-ready graph emulating the hypergraph for one permutation."""
    perm: tuple
    n_nodes: int
    edges: list                  # (u, v, weight, tag); tag explains origin
    series: list                 # (na, nb, abar, p, pprime, bbar)
    hyper_of_edge: dict          # (s, p) -> hypergraph Element
    n_hyper_nodes: int           # nodes of the hypergraph itself


def build_mimic(h, perm):
    """Mimic graph for ordered permutation (singleton, forced, free)."""
    s_col, a_col, b_col = perm
    n0 = len(h.nodes)
    edges = []
    series_nodes = []
    hyper_of_edge = {}

    def node_colour(nid):
        return h.nodes[nid].colour

    def is_boundary(nid):
        return h.nodes[nid].kind == BOUNDARY

    # collect hyperedges per (a, b) pair and direct a-b edges
    pair_hyper = {}
    pair_edge = {}
    plain = []
    for el in h.elements:
        if el.is_hyper:
            byc = {node_colour(x): x for x in el.nodes}
            na, nb = byc[a_col], byc[b_col]
            pair_hyper.setdefault((na, nb), []).append((byc[s_col], el))
            continue
        u, v = el.nodes
        cu, cv = node_colour(u), node_colour(v)
        if not (is_boundary(u) or is_boundary(v)) and {cu, cv} == {a_col, b_col}:
            na, nb = (u, v) if cu == a_col else (v, u)
            key = (na, nb)
            if key not in pair_edge or el.weight < pair_edge[key].weight:
                pair_edge[key] = el
            continue
        plain.append(el)

    nxt = n0
    mirror_pairs = set()
    for key in sorted(pair_hyper):
        # pairs carrying no hyperedge keep their plain edge: a series
        # would only re-encode the same two matching patterns
        na, nb = key
        abar, p, pprime, bbar = nxt, nxt + 1, nxt + 2, nxt + 3
        nxt += 4
        series_nodes.append((na, nb, abar, p, pprime, bbar))
        edges.append((na, abar, 0, ("dis", na)))
        edges.append((abar, p, 0, ("dis", na)))
        edges.append((pprime, bbar, 0, ("dis", nb)))
        edges.append((bbar, nb, 0, ("dis", nb)))
        direct = pair_edge.get(key)
        if direct is not None:
            edges.append((p, pprime, direct.weight, ("pair-edge", direct)))
        for (ns, el) in pair_hyper.get(key, ()):
            edges.append((ns, p, el.weight, ("hyper", el)))
            hyper_of_edge[(ns, p)] = el
            edges.append((h.boundary_partner(ns), pprime, 0, ("pb", ns)))
        mirror_pairs.add((h.boundary_partner(na), h.boundary_partner(nb)))
    for key in sorted(set(pair_edge) - set(pair_hyper)):
        el = pair_edge[key]
        na, nb = key
        edges.append((na, nb, el.weight, ("plain", el)))
        mirror_pairs.add((h.boundary_partner(na), h.boundary_partner(nb)))

    for el in plain:
        u, v = el.nodes
        edges.append((u, v, el.weight, ("plain", el)))
        if not (is_boundary(u) or is_boundary(v)):
            mirror_pairs.add((h.boundary_partner(u), h.boundary_partner(v)))

    for (pu, pv) in sorted(mirror_pairs):
        edges.append((pu, pv, 0, ("mirror", None)))

    return MimicGraph(perm=perm, n_nodes=nxt, edges=edges,
                      series=series_nodes, hyper_of_edge=hyper_of_edge,
                      n_hyper_nodes=n0)


def match_mimic(mimic, deltas=None):
    """Blossom on the mimic graph with optional tie-break perturbations.

    Weights are scaled so the perturbation never changes the integer
    weight-sum ordering.  Returns (W_mimic integer part, matched pairs).
    """
    scale = 256 * (len(mimic.edges) + 1)
    eds = []
    for idx, (u, v, w, tag) in enumerate(mimic.edges):
        dw = 0 if deltas is None else int(deltas[idx])
        eds.append((u, v, w * scale + dw))
    pairs = min_weight_perfect_matching(mimic.n_nodes, eds)
    lut = {}
    for u, v, w in eds:
        key = (u, v) if u < v else (v, u)
        if key not in lut or w < lut[key]:
            lut[key] = w
    total = sum(lut[(u, v) if u < v else (v, u)] for (u, v) in pairs)
    return total // scale, pairs


def assign_pairs(mimic, pairs):
    """Extract (singleton, forced-member) collapse pairs from a mimic
    matching: every matched singleton-to-pair-node edge assigns the
    singleton to the series' a-side node."""
    matched = {}
    for (u, v) in pairs:
        matched[u] = v
        matched[v] = u
    out = []
    p_of = {p: (na, nb) for (na, nb, abar, p, pprime, bbar) in mimic.series}
    for (na, nb, abar, p, pprime, bbar) in mimic.series:
        partner = matched.get(p)
        if partner is None or partner in (abar, pprime):
            continue
        # p matched to a singleton: the a-side disable is forced onto na
        out.append((partner, na))
    return out


# ---------------------------------------------------------------------------
# trial graph


def collapse_to_trial(h, pairs):
    """Collapse (singleton, member) pairs and rematch.

    Hyperedges containing both members of a pair become edges; other
    hyperedges and any edge dangling off a collapsed pair are dropped.
    Boundary partners collapse in mirror.  Returns (W_trial, elements)
    where elements form a perfect hypergraph matching.
    """
    used = [x for pr in pairs for x in pr]
    if len(set(used)) != len(used):
        raise ValueError("overlapping collapse pairs")
    group = {}
    for k, (ns, na) in enumerate(sorted(pairs)):
        group[ns] = k
        group[na] = k
    n0 = len(h.nodes)
    # trial node ids: merged pair -> fresh id; others keep their own
    merged_id = {}
    nxt = n0
    for k in range(len(pairs)):
        merged_id[k] = nxt
        nxt += 1
    merged_partner = {}
    for k in range(len(pairs)):
        merged_partner[k] = nxt
        nxt += 1

    def tid(nid):
        g = group.get(nid)
        return merged_id[g] if g is not None else nid

    bd_of = {}
    for el in h.elements:
        kinds = [h.nodes[n].kind for n in el.nodes]
        if BOUNDARY in kinds:
            nid = el.nodes[0] if kinds[1] == BOUNDARY else el.nodes[1]
            if nid not in bd_of or el.weight < bd_of[nid].weight:
                bd_of[nid] = el

    edges = []
    mirror_pairs = set()

    def partner_t(nid):
        g = group.get(nid)
        if g is not None:
            return merged_partner[g]
        return h.boundary_partner(nid)

    for el in h.elements:
        kinds = [h.nodes[n].kind for n in el.nodes]
        if el.is_hyper:
            gs = [group.get(x) for x in el.nodes]
            pair_gs = [g for g in gs if g is not None]
            if len(pair_gs) == 2 and pair_gs[0] == pair_gs[1]:
                g = pair_gs[0]
                outside = next(x for x in el.nodes if group.get(x) != g)
                edges.append((merged_id[g], tid(outside), el.weight,
                              ("el", el)))
                mirror_pairs.add((merged_partner[g], partner_t(outside)))
            continue
        u, v = el.nodes
        gu, gv = group.get(u), group.get(v)
        if BOUNDARY in kinds:
            nid = u if kinds[1] == BOUNDARY else v
            if group.get(nid) is None:
                edges.append((nid, h.boundary_partner(nid), el.weight,
                              ("el", el)))
            continue
        if gu is None and gv is None:
            edges.append((u, v, el.weight, ("el", el)))
            mirror_pairs.add((h.boundary_partner(u), h.boundary_partner(v)))
        elif gu is not None and gu == gv:
            # internal pair edge: the pair may resolve itself this way
            edges.append((merged_id[gu], merged_partner[gu], el.weight,
                          ("el", el)))
        # edges dangling off a collapsed pair are dropped

    for k, (ns, na) in enumerate(sorted(pairs)):
        w1 = bd_of.get(ns)
        w2 = bd_of.get(na)
        if w1 is not None and w2 is not None:
            edges.append((merged_id[k], merged_partner[k],
                          w1.weight + w2.weight, ("bd2", (w1, w2))))

    for (pu, pv) in sorted(mirror_pairs):
        edges.append((pu, pv, 0, ("mirror", None)))

    # deduplicate, keep lightest per endpoint pair
    best = {}
    for (u, v, w, tag) in edges:
        key = (u, v) if u < v else (v, u)
        if key not in best or w < best[key][0]:
            best[key] = (w, tag)
    # compact to the vertices that actually appear (collapsed originals
    # leave holes in the id space)
    verts = sorted({x for key in best for x in key})
    cid = {v: i for i, v in enumerate(verts)}
    eds = [(cid[u], cid[v], w) for (u, v), (w, tag) in sorted(best.items())]
    pairs_m = min_weight_perfect_matching(len(verts), eds)

    total = 0
    chosen = []
    for (cu, cv) in pairs_m:
        u, v = verts[cu], verts[cv]
        key = (u, v) if u < v else (v, u)
        w, tag = best[key]
        total += w
        kind, payload = tag
        if kind == "el":
            chosen.append(payload)
        elif kind == "bd2":
            chosen.append(payload[0])
            chosen.append(payload[1])
    return total, chosen


# ---------------------------------------------------------------------------
# full decode


def _component_split(h):
    """Connected components over non-boundary nodes."""
    real = [n.id for n in h.nodes if n.kind != BOUNDARY]
    parent = {n: n for n in real}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(x, y):
        rx, ry = find(x), find(y)
        if rx != ry:
            parent[max(rx, ry)] = min(rx, ry)

    for el in h.elements:
        rs = [n for n in el.nodes if h.nodes[n].kind != BOUNDARY]
        for x in rs[1:]:
            union(rs[0], x)
    comps = {}
    for n in real:
        comps.setdefault(find(n), []).append(n)
    return [sorted(v) for _, v in sorted(comps.items())]


def _subgraph(h, comp):
    comp_set = set(comp)
    remap = {}
    nodes = []
    for nid in comp:
        n = h.nodes[nid]
        remap[nid] = len(nodes)
        nodes.append([len(nodes), n.kind, n.colour, n.face, n.round, -1])
    for nid in comp:
        n = h.nodes[nid]
        pid = len(nodes)
        remap[n.partner] = pid
        nodes.append([pid, BOUNDARY, n.colour, n.face, n.round, remap[nid]])
        nodes[remap[nid]][5] = pid
    elements = []
    for el in h.elements:
        reals = [n for n in el.nodes if h.nodes[n].kind != BOUNDARY]
        if not reals or reals[0] not in comp_set:
            continue
        elements.append(Element(tuple(remap[x] for x in el.nodes),
                                el.weight, el.rep))
    from .syndrome_graph import Node
    node_objs = [Node(id=x[0], kind=x[1], colour=x[2], face=x[3],
                      round=x[4], partner=x[5]) for x in nodes]
    return SyndromeHypergraph(nodes=node_objs, elements=elements,
                              n_regular=len(comp), lattice=h.lattice), remap


def _component_key(sub):
    base = min((n.round for n in sub.nodes), default=0)
    parts = []
    for n in sub.nodes:
        parts.append("%s:%d:%r:%d" % (n.kind, n.colour, n.face,
                                      n.round - base))
    for el in sub.elements:
        parts.append("e%s:%d" % (",".join(map(str, el.nodes)), el.weight))
    return zlib.crc32("|".join(parts).encode()) & 0xFFFFFFFF


def _decode_component(sub, trials_per_variant, seed):
    key = _component_key(sub)
    mimics = [build_mimic(sub, perm) for perm in PERMUTATIONS]
    w_mimics = []
    base_pairs = []
    for mm in mimics:
        w, prs = match_mimic(mm)
        w_mimics.append(w)
        base_pairs.append(prs)
    w_mimic = max(w_mimics)
    kept = [i for i, w in enumerate(w_mimics) if w == w_mimic]

    best = None                  # (w_trial, order, elements)
    order = 0
    for t in range(trials_per_variant):
        for vi in kept:
            mm = mimics[vi]
            if t == 0:
                prs = base_pairs[vi]
            else:
                rng = np.random.default_rng(
                    np.random.SeedSequence([seed & 0xFFFFFFFF, key,
                                            vi, t]))
                deltas = rng.integers(0, 256, size=len(mm.edges))
                _, prs = match_mimic(mm, deltas)
            collapse = assign_pairs(mm, prs)
            w_trial, elements = collapse_to_trial(sub, collapse)
            if best is None or w_trial < best[0]:
                best = (w_trial, order, elements)
            order += 1
            if best[0] == w_mimic:
                break
        if best is not None and best[0] == w_mimic:
            break

    w_trial, _, elements = best
    return w_mimic, w_trial, elements


def decode_match(h, trials_per_variant=25, seed=0, cache=None):
    """Decode a syndrome hypergraph into a MatchOutcome.

    Components are decoded independently with trial seeds derived from
    the component content, so identical sub-syndromes decode identically
    wherever they occur.  Trials stop early once the weight-sum
    certificate (W_trial == W_mimic) is reached.  An optional cache dict
    memoises per-component results across calls.
    """
    comps = _component_split(h)
    matching = []
    w_mimic = 0
    w_trial = 0
    per_component = []
    for comp in comps:
        sub, remap = _subgraph(h, comp)
        inv = {v: k for k, v in remap.items()}
        ckey = None
        got = None
        if cache is not None:
            ckey = _component_content(sub)
            got = cache.get(ckey)
        if got is None:
            wm, wt, elements = _decode_component(sub, trials_per_variant,
                                                 seed)
            if cache is not None:
                cache[ckey] = (wm, wt, elements)
        else:
            wm, wt, elements = got
        w_mimic += wm
        w_trial += wt
        per_component.append((wm, wt))
        for el in elements:
            matching.append(Element(tuple(inv[x] for x in el.nodes),
                                    el.weight, el.rep))
    return MatchOutcome(matching=matching, w_mimic=w_mimic, w_trial=w_trial,
                        certificate=(w_trial == w_mimic),
                        per_component=per_component)


def _component_content(sub):
    base = min((n.round for n in sub.nodes), default=0)
    nodes = tuple((n.kind, n.colour, n.face, n.round - base)
                  for n in sub.nodes)
    els = tuple((el.nodes, el.weight, el.rep) for el in sub.elements)
    return (nodes, els)
