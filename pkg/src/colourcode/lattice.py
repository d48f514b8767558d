"""Triangular 4.8.8 colour-code lattice construction.

The patch is built from the dual (tetrakis) picture: data qubits are the
small right triangles of a square grid with centre points, stabilizers are
the grid vertices (octagons, green/blue by checkerboard parity) and centre
points (red squares).  The distance-d patch uses c = (d+1)/2 square
columns: squares with i+j <= c-2 contribute all four triangles, squares on
the diagonal i+j = c-1 contribute their S and W triangles, and one corner
triangle is trimmed so that Q = 2c^2 - 1.  The diagonal row of red squares
is the red boundary, the left column of green octagons the green boundary,
and the bottom row of blue octagons the blue boundary.

Primal coordinates: triangle (k,i,j) sits at (4i+dx, 4j+dy) with
S=(2,1), E=(3,2), N=(2,3), W=(1,2); faces sit at (4i+2,4j+2) for squares
and (4x,4y) for octagons.  Ids are row-major in these coordinates.
"""

from __future__ import annotations

from dataclasses import dataclass, field

RED, GREEN, BLUE = 0, 1, 2
COLOUR_NAMES = ("R", "G", "B")
COLOUR_INDEX = {"R": RED, "G": GREEN, "B": BLUE}

_TRI_OFFSET = {"S": (2, 1), "E": (3, 2), "N": (2, 3), "W": (1, 2)}


@dataclass(frozen=True)
class CodeParams:
    """Distance and derived counts for one triangular patch."""
    d: int
    Q: int
    F: int
    E: int

    @staticmethod
    def for_distance(d):
        if d % 2 == 0 or d < 3:
            raise ValueError("distance must be an odd integer >= 3, got %r" % (d,))
        c = (d + 1) // 2
        return CodeParams(d=d, Q=2 * c * c - 1, F=(d + 1) // 2, E=(d - 1) // 2)


@dataclass(frozen=True)
class Plaquette:
    """One face of the patch; measured faces are stabilizers."""
    id: int
    colour: int
    support: tuple          # qubit ids, sorted
    measured: bool
    pos: tuple              # (x, y) in primal coordinates


@dataclass
class CodeLattice:
    params: CodeParams
    qubit_pos: list            # qubit id -> (x, y)
    plaquettes: list           # measured Plaquette objects, id = index
    boundary_faces: list       # unmeasured Plaquette objects (dark faces)
    qubit_faces: list          # qubit id -> per-colour face key or None
    face_of_key: dict          # face key ('p', idx) / ('b', idx) -> Plaquette
    logical_support: tuple     # reference logical operator, qubit ids
    moves: list                # (colour, face_key_u, face_key_v, (q,) or (q1,q2))
    _support_sets: list = field(default_factory=list, repr=False)

    @property
    def d(self):
        return self.params.d

    @property
    def n_qubits(self):
        return self.params.Q

    def plaquettes_of_colour(self, colour):
        return [p for p in self.plaquettes if p.colour == colour]

    def support_set(self, pid):
        if not self._support_sets:
            self._support_sets = [frozenset(p.support) for p in self.plaquettes]
        return self._support_sets[pid]


def _triangles(c):
    """Kept triangles of the distance-(2c-1) patch, as (k, i, j) tags."""
    kept = []
    for i in range(c):
        for j in range(c - i):
            if i + j <= c - 2:
                kept += [(k, i, j) for k in "SENW"]
            elif i + j == c - 1:
                kept.append(("S", i, j))
                kept.append(("W", i, j))
    trim = ("W", 0, c - 1) if c % 2 == 1 else ("S", c - 1, 0)
    kept.remove(trim)
    return kept


def _tri_vertices(k, i, j):
    """The three dual vertices (faces) of triangle (k,i,j)."""
    centre = ("C", i, j)
    if k == "S":
        return (centre, ("G", i, j), ("G", i + 1, j))
    if k == "E":
        return (centre, ("G", i + 1, j), ("G", i + 1, j + 1))
    if k == "N":
        return (centre, ("G", i, j + 1), ("G", i + 1, j + 1))
    return (centre, ("G", i, j), ("G", i, j + 1))


def _vertex_colour(v):
    if v[0] == "C":
        return RED
    return GREEN if (v[1] + v[2]) % 2 == 0 else BLUE


def _vertex_pos(v):
    if v[0] == "C":
        return (4 * v[1] + 2, 4 * v[2] + 2)
    return (4 * v[1], 4 * v[2])


def _measured_vertices(c):
    meas = set()
    for i in range(c - 1):
        for j in range(c - 1 - i):
            meas.add(("C", i, j))
    for x in range(1, c - 1):
        for y in range(1, c - x):
            meas.add(("G", x, y))
    for y in range(1, c, 2):
        meas.add(("G", 0, y))
    for x in range(2, c, 2):
        meas.add(("G", x, 0))
    for x in range(1, c):
        meas.add(("G", x, c - x))
    return meas


def _reference_logical(c):
    L = [("E", 0, j) for j in range(c - 1)]
    L += [("N", 0, j) for j in range(0, c - 1, 2)]
    L += [("S", 0, j) for j in range(1, c - 1, 2)]
    L.append(("S", 0, c - 1) if c % 2 == 1 else ("W", 0, c - 1))
    return L


def build_lattice(d):
    """Construct the distance-d triangular 4.8.8 patch.

    Deterministic: equal d gives identical lattices with stable ids.
    Raises ValueError for even or sub-3 distances.
    """
    params = CodeParams.for_distance(d)
    c = (d + 1) // 2

    tris = _triangles(c)
    tri_pos = {}
    for (k, i, j) in tris:
        dx, dy = _TRI_OFFSET[k]
        tri_pos[(k, i, j)] = (4 * i + dx, 4 * j + dy)
    order = sorted(tris, key=lambda t: (tri_pos[t][1], tri_pos[t][0]))
    qubit_id = {t: n for n, t in enumerate(order)}
    qubit_pos = [tri_pos[t] for t in order]

    star = {}
    for t in tris:
        for v in _tri_vertices(*t):
            star.setdefault(v, []).append(qubit_id[t])

    measured_keys = _measured_vertices(c)
    meas_vs = sorted((v for v in star if v in measured_keys),
                     key=lambda v: (_vertex_pos(v)[1], _vertex_pos(v)[0]))
    dark_vs = sorted((v for v in star if v not in measured_keys),
                     key=lambda v: (_vertex_pos(v)[1], _vertex_pos(v)[0]))

    plaquettes = [
        Plaquette(id=n, colour=_vertex_colour(v),
                  support=tuple(sorted(star[v])), measured=True,
                  pos=_vertex_pos(v))
        for n, v in enumerate(meas_vs)
    ]
    boundary_faces = [
        Plaquette(id=n, colour=_vertex_colour(v),
                  support=tuple(sorted(star[v])), measured=False,
                  pos=_vertex_pos(v))
        for n, v in enumerate(dark_vs)
    ]

    face_key = {}
    for n, v in enumerate(meas_vs):
        face_key[v] = ("p", n)
    for n, v in enumerate(dark_vs):
        face_key[v] = ("b", n)
    face_of_key = {}
    for p in plaquettes:
        face_of_key[("p", p.id)] = p
    for b in boundary_faces:
        face_of_key[("b", b.id)] = b

    qubit_faces = [None] * len(order)
    for t in order:
        entry = [None, None, None]
        for v in _tri_vertices(*t):
            entry[_vertex_colour(v)] = face_key[v]
        qubit_faces[qubit_id[t]] = tuple(entry)

    # Terminal-shifting moves: two triangles sharing a dual edge shift a
    # terminal between their opposite (same-colour) vertices at the cost
    # of both qubits.  Single qubits give the creation moves used for
    # 3-chain seeding.
    edge_tris = {}
    for t in tris:
        vs = _tri_vertices(*t)
        for a in range(3):
            e = tuple(sorted((vs[a], vs[(a + 1) % 3]), key=str))
            edge_tris.setdefault(e, []).append(t)
    moves = []
    for e, ts in sorted(edge_tris.items(), key=str):
        if len(ts) != 2:
            continue
        t1, t2 = ts
        w1 = next(v for v in _tri_vertices(*t1) if v not in e)
        w2 = next(v for v in _tri_vertices(*t2) if v not in e)
        colour = _vertex_colour(w1)
        assert colour == _vertex_colour(w2)
        moves.append((colour, face_key[w1], face_key[w2],
                      (qubit_id[t1], qubit_id[t2])))

    logical = tuple(sorted(qubit_id[t] for t in _reference_logical(c)))

    lat = CodeLattice(params=params, qubit_pos=qubit_pos,
                      plaquettes=plaquettes, boundary_faces=boundary_faces,
                      qubit_faces=qubit_faces, face_of_key=face_of_key,
                      logical_support=logical, moves=moves)
    violations = validate(lat)
    if violations:
        raise AssertionError("lattice self-validation failed: %s" % violations[:3])
    return lat


def validate(lattice):
    """Check the lattice invariants; returns a list of violation strings."""
    out = []
    p = lattice.params
    Q = len(lattice.qubit_pos)
    P = len(lattice.plaquettes)
    if Q % 2 == 0:
        out.append("Q=%d is even" % Q)
    if Q != p.Q:
        out.append("Q=%d != params.Q=%d" % (Q, p.Q))
    if 2 * P + 1 != Q:
        out.append("2P+1=%d != Q=%d (P=%d)" % (2 * P + 1, Q, P))
    if p.F != p.E + 1 or p.F != (p.d + 1) // 2:
        out.append("F/E inconsistent with d")

    for pl in lattice.plaquettes:
        if len(pl.support) % 2:
            out.append("plaquette %d has odd support %d" % (pl.id, len(pl.support)))
        if pl.colour == RED and len(pl.support) != 4:
            out.append("red plaquette %d has support %d != 4" % (pl.id, len(pl.support)))

    sups = [set(pl.support) for pl in lattice.plaquettes]
    for a in range(P):
        for b in range(a + 1, P):
            ov = len(sups[a] & sups[b])
            if ov % 2:
                out.append("plaquettes %d,%d overlap oddly (%d)" % (a, b, ov))

    for q, faces in enumerate(lattice.qubit_faces):
        for col in (RED, GREEN, BLUE):
            key = faces[col]
            if key is None:
                out.append("qubit %d missing colour %d entirely" % (q, col))
                continue
            face = lattice.face_of_key[key]
            if face.colour != col:
                out.append("qubit %d colour slot %d holds colour %d" % (q, col, face.colour))
            if q not in face.support:
                out.append("qubit %d not in support of its face %r" % (q, key))

    # every measured face must be reachable through qubit_faces
    seen = {f for faces in lattice.qubit_faces for f in faces}
    for pl in lattice.plaquettes:
        if ("p", pl.id) not in seen:
            out.append("plaquette %d not adjacent to any qubit" % pl.id)

    # reference logical: odd weight d, zero syndrome
    L = set(lattice.logical_support)
    if len(L) != p.d:
        out.append("logical support weight %d != d" % len(L))
    if len(L) % 2 == 0:
        out.append("logical support has even weight")
    for pl in lattice.plaquettes:
        if len(L & set(pl.support)) % 2:
            out.append("logical anticommutes with plaquette %d" % pl.id)
    return out


def dump_lattice(lattice):
    """Line-oriented text dump: q/p/b records."""
    lines = []
    for q, (x, y) in enumerate(lattice.qubit_pos):
        lines.append("q %d %d %d" % (q, x, y))
    for pl in lattice.plaquettes:
        lines.append("p %d %s %s" % (pl.id, COLOUR_NAMES[pl.colour],
                                     " ".join(str(q) for q in pl.support)))
    for bf in lattice.boundary_faces:
        lines.append("b %s %d %d %s" % (COLOUR_NAMES[bf.colour], bf.pos[0], bf.pos[1],
                                        " ".join(str(q) for q in bf.support)))
    return "\n".join(lines) + "\n"
