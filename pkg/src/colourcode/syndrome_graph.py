"""Detection events -> weighted rank-3 syndrome hypergraph.

Chain lengths combine two shortest-path machineries:

* per-colour move graphs over all faces (measured and boundary): a move
  shifts one terminal between two same-colour faces at the cost of the
  two qubits shared by the other faces; used for seeding 3-chains and for
  locating which boundary face masks a hidden terminal;
* a unified graph over visible faces only, whose edges are single errors
  or error pairs that toggle exactly two (or one, for boundary closure)
  measured faces; this captures the colour-changing routes that open up
  next to boundaries.

Every edge carries one concrete minimum-length representative (a qubit
mask); degenerate alternatives are deliberately ignored.  Temporal mode
adds |dt| to every weight (a time segment costs the same as one error)
and restricts hyperedges to adjacent-round triples.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass

import numpy as np

from .lattice import RED, GREEN, BLUE

REGULAR, DUMMY, BOUNDARY, INJECTED = "regular", "dummy", "boundary", "injected"
INF = 1 << 30


@dataclass(frozen=True)
class Node:
    id: int
    kind: str
    colour: int
    face: tuple          # face key ('p', idx) or ('b', idx)
    round: int
    partner: int


@dataclass(frozen=True)
class Element:
    """Edge (2 nodes) or hyperedge (3 nodes) with its chain representative."""
    nodes: tuple
    weight: int
    rep: int             # qubit bitmask of the representative chain

    @property
    def is_hyper(self):
        return len(self.nodes) == 3


@dataclass
class SyndromeHypergraph:
    nodes: list
    elements: list           # inter-node elements plus boundary edges
    n_regular: int           # count of non-boundary nodes
    lattice: object

    def boundary_partner(self, nid):
        return self.nodes[nid].partner

    def mirror_elements(self):
        """Weight-0 boundary-side copies of every inter-node element."""
        out = []
        for el in self.elements:
            ns = [self.nodes[n] for n in el.nodes]
            if any(n.kind == BOUNDARY for n in ns):
                continue
            out.append(Element(tuple(self.nodes[n].partner for n in el.nodes),
                               0, 0))
        return out

    def dump(self):
        lines = []
        for n in self.nodes:
            lines.append("n %d %s %d %d" % (n.id, n.kind, n.colour, n.round))
        for el in self.elements + self.mirror_elements():
            tag = "H" if el.is_hyper else "E"
            lines.append("%s %d %s" % (tag, el.weight,
                                       " ".join(str(x) for x in el.nodes)))
        return "\n".join(lines) + "\n"


def _dijkstra(n, adj, src):
    dist = [INF] * n
    pred = [None] * n
    dist[src] = 0
    pq = [(0, src)]
    done = [False] * n
    while pq:
        d, u = heapq.heappop(pq)
        if done[u]:
            continue
        done[u] = True
        for v, w, mask in adj[u]:
            nd = d + w
            if nd < dist[v]:
                dist[v] = nd
                pred[v] = (u, mask)
                heapq.heappush(pq, (nd, v))
    return dist, pred


class ChainMetrics:
    """Minimum chain lengths and representatives for one lattice."""

    def __init__(self, lattice):
        self.lattice = lattice
        n_pl = len(lattice.plaquettes)

        # --- per-colour move graphs over all faces -------------------
        self.faces = {c: [] for c in (RED, GREEN, BLUE)}
        self.fidx = {}
        for key, face in sorted(lattice.face_of_key.items(), key=str):
            self.fidx[key] = len(self.faces[face.colour])
            self.faces[face.colour].append(key)
        adj = {c: [[] for _ in self.faces[c]] for c in (RED, GREEN, BLUE)}
        for colour, fu, fv, pair in lattice.moves:
            u, v = self.fidx[fu], self.fidx[fv]
            mask = (1 << pair[0]) | (1 << pair[1])
            adj[colour][u].append((v, 2, mask))
            adj[colour][v].append((u, 2, mask))
        self.cdist = {}
        self.cpred = {}
        for c in (RED, GREEN, BLUE):
            n = len(self.faces[c])
            self.cdist[c] = []
            self.cpred[c] = []
            for s in range(n):
                d, p = _dijkstra(n, adj[c], s)
                self.cdist[c].append(d)
                self.cpred[c].append(p)
        self.bdnear = {}
        self.bddist = {}
        for c in (RED, GREEN, BLUE):
            bidx = [i for i, key in enumerate(self.faces[c]) if key[0] == "b"]
            n = len(self.faces[c])
            bd = np.full(n, INF, dtype=np.int64)
            near = [None] * n
            for i in range(n):
                for b in bidx:
                    if self.cdist[c][i][b] < bd[i]:
                        bd[i] = self.cdist[c][i][b]
                        near[i] = b
            self.bddist[c] = bd
            self.bdnear[c] = near

        # --- unified graph over visible faces + sink -----------------
        Q = lattice.n_qubits
        vis = []
        self.qface = np.zeros((Q, 3), dtype=np.int64)
        for q in range(Q):
            pids = []
            for c in (RED, GREEN, BLUE):
                kind, idx = lattice.qubit_faces[q][c]
                self.qface[q][c] = self.fidx[lattice.qubit_faces[q][c]]
                if kind == "p":
                    pids.append(idx)
            vis.append(tuple(sorted(pids)))
        self.SINK = n_pl
        uadj = [[] for _ in range(n_pl + 1)]

        def add_u(a, b, w, mask):
            uadj[a].append((b, w, mask))
            uadj[b].append((a, w, mask))

        for q in range(Q):
            v = vis[q]
            if len(v) == 2:
                add_u(v[0], v[1], 1, 1 << q)
            elif len(v) == 1:
                add_u(v[0], self.SINK, 1, 1 << q)
        vismask = [0] * Q
        for q in range(Q):
            mm = 0
            for pid in vis[q]:
                mm |= 1 << pid
            vismask[q] = mm
        for q1 in range(Q):
            for q2 in range(q1 + 1, Q):
                x = vismask[q1] ^ vismask[q2]
                pc = x.bit_count()
                if pc == 2:
                    lo = (x & -x).bit_length() - 1
                    hi = x.bit_length() - 1
                    add_u(lo, hi, 2, (1 << q1) | (1 << q2))
                elif pc == 1:
                    add_u(x.bit_length() - 1, self.SINK, 2,
                          (1 << q1) | (1 << q2))
        self.udist = []
        self.upred = []
        for s in range(n_pl + 1):
            d, p = _dijkstra(n_pl + 1, uadj, s)
            self.udist.append(d)
            self.upred.append(p)

        self.bulk = [q for q in range(Q) if len(vis[q]) == 3]
        self._rep_cache = {}
        self._bd_cache = {}
        self._pair_cache = {}
        self._triple_cache = {}

    # --- representative reconstruction -------------------------------
    def _crep(self, colour, src, dst):
        key = ("c", colour, src, dst)
        got = self._rep_cache.get(key)
        if got is None:
            rep = 0
            v = dst
            while v != src:
                u, mask = self.cpred[colour][src][v]
                rep ^= mask
                v = u
            self._rep_cache[key] = rep
            got = rep
        return got

    def _urep(self, src, dst):
        key = ("u", src, dst)
        got = self._rep_cache.get(key)
        if got is None:
            rep = 0
            v = dst
            while v != src:
                u, mask = self.upred[src][v]
                rep ^= mask
                v = u
            self._rep_cache[key] = rep
            got = rep
        return got

    # --- seeded 3-chains (per-colour machinery) ----------------------
    def _seeded(self, targets):
        """Min single-seed 3-chain; targets: colour -> per-colour face
        index or 'bd'.  Returns (w, rep, used boundary faces) or None."""
        Q = self.lattice.n_qubits
        total = np.ones(Q, dtype=np.int64)
        for c in (RED, GREEN, BLUE):
            t = targets[c]
            col = self.qface[:, c]
            if t == "bd":
                total = total + self.bddist[c][col]
            else:
                dists = np.array([self.cdist[c][t][f] for f in col],
                                 dtype=np.int64)
                total = total + dists
        q = int(np.argmin(total))
        w = int(total[q])
        if w >= INF:
            return None
        rep = 1 << q
        used = {}
        for c in (RED, GREEN, BLUE):
            fq = int(self.qface[q][c])
            t = targets[c]
            if t == "bd":
                dst = self.bdnear[c][fq]
                used[c] = dst
                if dst is not None and dst != fq:
                    rep ^= self._crep(c, fq, dst)
            else:
                used[c] = t
                rep ^= self._crep(c, t, fq)
        return w, rep, used

    # --- public chain queries (by plaquette id) ----------------------
    def boundary_chain(self, pid):
        """Min chain masking the lone terminal at measured face pid."""
        got = self._bd_cache.get(pid)
        if got is not None:
            return got
        colour = self.lattice.plaquettes[pid].colour
        f = self.fidx[("p", pid)]
        best_w = int(self.bddist[colour][f])
        best_rep = None
        if best_w < INF:
            b = self.bdnear[colour][f]
            best_rep = self._crep(colour, f, b) if b != f else 0
        targets = {c: "bd" for c in (RED, GREEN, BLUE)}
        targets[colour] = f
        tri = self._seeded(targets)
        if tri is not None and tri[0] < best_w:
            best_w, best_rep = tri[0], tri[1]
        du = self.udist[pid][self.SINK]
        if du < best_w:
            best_w, best_rep = du, self._urep(pid, self.SINK)
        if best_rep is None:
            raise AssertionError("face %d unreachable from any boundary" % pid)
        got = (best_w, best_rep)
        self._bd_cache[pid] = got
        return got

    def pair_chain(self, pa, pb):
        """Min chain leaving exactly the two measured terminals pa, pb."""
        key = (pa, pb) if pa < pb else (pb, pa)
        got = self._pair_cache.get(key)
        if got is not None:
            return got
        pla = self.lattice.plaquettes[pa]
        plb = self.lattice.plaquettes[pb]
        best_w, best_rep = INF, None
        if pla.colour == plb.colour:
            c = pla.colour
            fa, fb = self.fidx[("p", pa)], self.fidx[("p", pb)]
            w = self.cdist[c][fa][fb]
            if w < best_w:
                best_w, best_rep = w, self._crep(c, fa, fb)
        else:
            targets = {c: "bd" for c in (RED, GREEN, BLUE)}
            targets[pla.colour] = self.fidx[("p", pa)]
            targets[plb.colour] = self.fidx[("p", pb)]
            tri = self._seeded(targets)
            if tri is not None and tri[0] < best_w:
                best_w, best_rep = tri[0], tri[1]
        w = self.udist[pa][pb]
        if w < best_w:
            best_w, best_rep = w, self._urep(pa, pb)
        wa, ra = self.boundary_chain(pa)
        wb, rb = self.boundary_chain(pb)
        if wa + wb < best_w:
            best_w, best_rep = wa + wb, ra ^ rb
        got = None if best_rep is None else (best_w, best_rep)
        self._pair_cache[key] = got
        return got

    def triple_chain(self, pr, pg, pb):
        """Min chain leaving one terminal of each colour."""
        key = (pr, pg, pb)
        got = self._triple_cache.get(key)
        if got is not None:
            return got[0]
        best = None
        tri = self._seeded({RED: self.fidx[("p", pr)],
                            GREEN: self.fidx[("p", pg)],
                            BLUE: self.fidx[("p", pb)]})
        if tri is not None:
            best = (tri[0], tri[1])
        for lone, oa, ob in ((pr, pg, pb), (pg, pr, pb), (pb, pr, pg)):
            wl, rl = self.boundary_chain(lone)
            pc = self.pair_chain(oa, ob)
            if pc is None:
                continue
            cand = (wl + pc[0], rl ^ pc[1])
            if best is None or cand[0] < best[0]:
                best = cand
        self._triple_cache[key] = (best,)
        return best

    def hosted_triple(self, pa, pb, host_colour):
        """Min 3-chain for terminals pa, pb with the third terminal masked
        by a specific host_colour boundary face; returns
        (w, rep, dark face key) or None."""
        pla = self.lattice.plaquettes[pa]
        plb = self.lattice.plaquettes[pb]
        targets = {c: "bd" for c in (RED, GREEN, BLUE)}
        targets[pla.colour] = self.fidx[("p", pa)]
        targets[plb.colour] = self.fidx[("p", pb)]
        tri = self._seeded(targets)
        if tri is None:
            return None
        w, rep, used = tri
        dark = used.get(host_colour)
        if dark is None:
            return None
        return w, rep, self.faces[host_colour][dark]


def get_metrics(lattice):
    m = getattr(lattice, "_chain_metrics", None)
    if m is None:
        m = ChainMetrics(lattice)
        lattice._chain_metrics = m
    return m


def min_chain(lattice, pattern, *args):
    """Public probe for minimum chains; returns (weight, qubit mask) or None.

    Patterns (faces given as plaquette ids of measured faces):
      ("pair", pid1, pid2)         two same- or mixed-colour terminals
      ("boundary", pid)            chain masking one terminal
      ("triple", pidR, pidG, pidB) full 3-chain
    """
    m = get_metrics(lattice)
    if pattern == "pair":
        return m.pair_chain(*args)
    if pattern == "boundary":
        return m.boundary_chain(args[0])
    if pattern == "triple":
        return m.triple_chain(*args)
    raise ValueError("unknown pattern %r" % (pattern,))


def build_hypergraph(events, lattice, temporal=False, radius=None,
                     dummy_mode="toggles"):
    """Construct the matching hypergraph for a DetectionEvents set.

    Nodes: one regular node per event, a dummy pair per multi-toggle
    plaquette, injected green/blue nodes hosting red-blue / red-green
    3-chains, and one boundary partner per node.  Elements: 2-chain and
    mixed-colour edges, rank-3 hyperedges, dummy links and boundary
    edges.  Elements that can never enter a minimum matching (weight
    above the combined boundary fallback or beyond the search radius)
    are omitted.

    dummy_mode selects where dummy pairs go: "toggles" trusts the
    simulator's toggle counts (a pair wherever an eigenvalue changed
    twice or more); "all" puts a pair on every plaquette of every round,
    which makes the minimum matching weight equal the minimum number of
    errors reproducing the syndrome, at the price of a larger graph.
    """
    m = get_metrics(lattice)
    if radius is None:
        radius = lattice.params.d

    nodes = []
    elements = []

    def add_node(kind, colour, face, rnd):
        nid = len(nodes)
        nodes.append([nid, kind, colour, face, rnd, -1])
        return nid

    for (pid, r, colour) in sorted(events.events):
        add_node(REGULAR, colour, ("p", pid), r)
    if events.events:
        if dummy_mode == "toggles":
            dummy_sites = sorted(events.toggle_meta)
        elif dummy_mode == "all":
            dummy_sites = [(pid, r)
                           for r in range(events.n_rounds)
                           for pid in range(len(lattice.plaquettes))]
        else:
            raise ValueError("unknown dummy_mode %r" % (dummy_mode,))
    else:
        dummy_sites = []
    for (pid, r) in dummy_sites:
        colour = lattice.plaquettes[pid].colour
        a = add_node(DUMMY, colour, ("p", pid), r)
        b = add_node(DUMMY, colour, ("p", pid), r)
        elements.append(Element((a, b), 0, 0))

    real = list(range(len(nodes)))

    def pid_of(nid):
        return nodes[nid][3][1]

    def colour_of(nid):
        return nodes[nid][2]

    def round_of(nid):
        return nodes[nid][4]

    bd_w = {nid: m.boundary_chain(pid_of(nid)) for nid in real}

    def dt(a, b):
        if not temporal:
            return 0 if round_of(a) == round_of(b) else None
        return abs(round_of(a) - round_of(b))

    for i in range(len(real)):
        for j in range(i + 1, len(real)):
            a, b = real[i], real[j]
            delta = dt(a, b)
            if delta is None or delta > bd_w[a][0] + bd_w[b][0]:
                continue
            res = m.pair_chain(pid_of(a), pid_of(b))
            if res is None:
                continue
            w, rep = res
            if w > radius or w > bd_w[a][0] + bd_w[b][0]:
                continue
            elements.append(Element((a, b), w + delta, rep))

    by_colour = {RED: [], GREEN: [], BLUE: []}
    for nid in real:
        by_colour[colour_of(nid)].append(nid)

    def triple_delta(rs):
        if not temporal:
            return 0 if len(set(rs)) == 1 else None
        if max(rs) - min(rs) > 1:
            return None
        hi = sum(1 for x in rs if x == max(rs))
        return min(hi, 3 - hi) if max(rs) > min(rs) else 0

    tspan = 1 if temporal else 0
    for a in by_colour[RED]:
        for b in by_colour[GREEN]:
            if abs(round_of(a) - round_of(b)) > tspan:
                continue
            for c in by_colour[BLUE]:
                if abs(round_of(a) - round_of(c)) > tspan or \
                        abs(round_of(b) - round_of(c)) > tspan:
                    continue
                delta = triple_delta((round_of(a), round_of(b), round_of(c)))
                if delta is None:
                    continue
                tri = m.triple_chain(pid_of(a), pid_of(b), pid_of(c))
                if tri is None:
                    continue
                w, rep = tri
                if w > radius:
                    continue
                # a hyperedge earns its keep only when the genuine 3-chain
                # strictly beats every decomposition already present as
                # separate edges
                decomp = bd_w[a][0] + bd_w[b][0] + bd_w[c][0]
                for (x, y, z) in ((a, b, c), (b, c, a), (a, c, b)):
                    pc = m.pair_chain(pid_of(x), pid_of(y))
                    if pc is not None:
                        decomp = min(decomp, pc[0] + bd_w[z][0])
                if w >= decomp:
                    continue
                elements.append(Element((a, b, c), w + delta, rep))

    # injected green/blue boundary nodes hosting red-blue / red-green
    # 3-chains
    injected = {}

    def inject(colour, face_key, rnd):
        key = (colour, face_key, rnd)
        nid = injected.get(key)
        if nid is None:
            nid = add_node(INJECTED, colour, face_key, rnd)
            injected[key] = nid
            bd_w[nid] = (0, 0)
        return nid

    for a in by_colour[RED]:
        for host_colour, other in ((GREEN, BLUE), (BLUE, GREEN)):
            for b in by_colour[other]:
                delta = dt(a, b)
                if delta is None or delta > bd_w[a][0] + bd_w[b][0]:
                    continue
                res = m.hosted_triple(pid_of(a), pid_of(b), host_colour)
                if res is None:
                    continue
                w, rep, dark_key = res
                if w > radius or w >= bd_w[a][0] + bd_w[b][0]:
                    continue
                nid = inject(host_colour, dark_key,
                             min(round_of(a), round_of(b)))
                elements.append(Element(tuple(sorted((a, b, nid))),
                                        w + delta, rep))

    # boundary partners and boundary edges
    n_regular = len(nodes)
    for nid in range(n_regular):
        pid = len(nodes)
        nodes.append([pid, BOUNDARY, nodes[nid][2], nodes[nid][3],
                      nodes[nid][4], nid])
        nodes[nid][5] = pid
        w, rep = bd_w[nid]
        elements.append(Element((nid, pid), w, rep))

    node_objs = [Node(id=n[0], kind=n[1], colour=n[2], face=n[3],
                      round=n[4], partner=n[5]) for n in nodes]
    return SyndromeHypergraph(nodes=node_objs, elements=elements,
                              n_regular=n_regular, lattice=lattice)
