"""Pauli-frame noise injection and syndrome extraction.

Frames are bitmasks over data qubits (bit q set = error on qubit q).
Parities are bitmasks over plaquette ids (bit set = -1 eigenvalue).

Circuit-level extraction uses a fixed deterministic schedule per round:
first all Z-stabilizer gadgets in plaquette-id order, then all
X-stabilizer gadgets.  Red squares use one ancilla and w CNOTs; green and
blue faces of weight w use a (w/2)-qubit cat state prepared by a CNOT
ladder from a seed, each cat member coupling to two data qubits and
measured independently (plaquette outcome = XOR of members).  Every
preparation, two-qubit gate and measurement is a fault location: prep and
measurement flip with probability p0, gates draw one of the 15 non-trivial
two-qubit Paulis with probability p0/15 each.  Fault effects (outcome
flips, X/Z errors dumped onto data, propagation along not-yet-executed
gates) are precompiled per location into effect tables.

A data error dumped mid-round is seen this round only by gadgets that
read the qubit later in the schedule; others see it next round.  Toggle
counts record how many elementary events flipped each outcome relative to
the previous round, which is what dummy-pair insertion consumes.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .lattice import RED

_I, _X, _Y, _Z = 0, 1, 2, 3
TWO_QUBIT_PAULIS = [(a, b) for a in range(4) for b in range(4)][1:]


@dataclass(frozen=True)
class ErrorModel:
    """Depolarizing-style circuit noise, all channels driven by p0."""
    p0: float

    def __post_init__(self):
        if not (0.0 <= self.p0 <= 1.0):
            raise ValueError("p0 must lie in [0,1], got %r" % (self.p0,))

    @property
    def p_mem_each(self):
        return self.p0 / 3.0

    @property
    def p_gate_each(self):
        return self.p0 / 15.0

    @property
    def p_prep(self):
        return self.p0

    @property
    def p_meas(self):
        return self.p0

    @property
    def effective_x_rate(self):
        # only X and Y memory errors feed the X sector
        return (2.0 / 3.0) * self.p0


@dataclass
class PauliFrame:
    """Accumulated X and Z errors as bitmasks over data qubits."""
    xerr: int = 0
    zerr: int = 0

    def copy(self):
        return PauliFrame(self.xerr, self.zerr)

    def flip_x(self, q):
        self.xerr ^= (1 << q)

    def flip_z(self, q):
        self.zerr ^= (1 << q)


@dataclass
class RoundRecord:
    """One extraction round: parities plus per-plaquette toggle counts."""
    z_parity: int
    x_parity: int
    z_toggles: dict
    x_toggles: dict


@dataclass
class SyndromeHistory:
    rounds: list = field(default_factory=list)

    def __len__(self):
        return len(self.rounds)


@dataclass
class DetectionEvents:
    """Round-to-round parity changes, plus toggle multiplicity metadata."""
    events: list                 # (plaquette id, round, colour)
    toggle_meta: dict            # (plaquette id, round) -> toggle count >= 2
    n_rounds: int


def _support_masks(lattice):
    masks = getattr(lattice, "_noise_masks", None)
    if masks is None:
        masks = [0] * len(lattice.plaquettes)
        for p in lattice.plaquettes:
            m = 0
            for q in p.support:
                m |= (1 << q)
            masks[p.id] = m
        lattice._noise_masks = masks
    return masks


def apply_memory_noise(frame, model, rng, n_qubits, forced=None):
    """One timestep of memory noise; returns (xflips, zflips) lists.

    Each qubit independently suffers X, Y or Z with probability p0/3 each.
    `forced` is a test hook: list of (qubit, pauli) applied instead of
    random draws.
    """
    xflips, zflips = [], []
    if forced is not None:
        for q, pauli in forced:
            if pauli in (_X, _Y):
                frame.flip_x(q)
                xflips.append(q)
            if pauli in (_Y, _Z):
                frame.flip_z(q)
                zflips.append(q)
        return xflips, zflips
    if model.p0 == 0.0:
        return xflips, zflips
    u = rng.random(n_qubits)
    third = model.p0 / 3.0
    for q in range(n_qubits):
        uq = u[q]
        if uq >= model.p0:
            continue
        if uq < third:
            pauli = _X
        elif uq < 2 * third:
            pauli = _Y
        else:
            pauli = _Z
        if pauli in (_X, _Y):
            frame.flip_x(q)
            xflips.append(q)
        if pauli in (_Y, _Z):
            frame.flip_z(q)
            zflips.append(q)
    return xflips, zflips


def extract_ideal(lattice, frame):
    """Noiseless stabilizer readout of the current frame."""
    masks = _support_masks(lattice)
    zp = xp = 0
    for pid, m in enumerate(masks):
        if (frame.xerr & m).bit_count() & 1:
            zp |= (1 << pid)
        if (frame.zerr & m).bit_count() & 1:
            xp |= (1 << pid)
    return zp, xp


class CircuitSchedule:
    """Precompiled fault locations and effect tables for one lattice.

    Location effect entries map a Pauli pair (a, b) to
    (z_out, x_out, dumpx, dumpz): outcome flips of this gadget and data
    qubits hit by X/Z errors.  Dump read-times equal the location's global
    time index; `read_time[(pid, q)]` is when the Z gadget of `pid` reads
    qubit q.
    """

    def __init__(self, lattice):
        self.lattice = lattice
        self.locations = []          # (kind, sector, pid, payload)
        self.read_time = {}          # (pid, q) -> time of z-gadget read
        plist = lattice.plaquettes
        t = 0

        def loc(kind, sector, pid, payload):
            nonlocal t
            self.locations.append((kind, sector, pid, payload, t))
            t += 1

        for p in plist:
            S = list(p.support)
            if p.colour == RED:
                loc("prep", "z", p.id, {"flip": True})
                for k, q in enumerate(S):
                    self.read_time[(p.id, q)] = t
                    later = S[k + 1:]
                    loc("gate", "z", p.id, {"q": q, "anc_later": later})
                loc("meas", "z", p.id, {})
            else:
                m = len(S) // 2
                members = [S[2 * i: 2 * i + 2] for i in range(m)]
                for i in range(m):
                    flips = (m - i) % 2 == 1
                    loc("prep", "z", p.id,
                        {"seed": i == 0, "flip": flips, "mem_later": members[i]})
                for k in range(m - 1):
                    # ladder gate a_k -> a_{k+1}
                    fl_ctrl = True                      # X on a_k flips 1 member
                    fl_tgt = (m - 1 - k) % 2 == 1       # X on a_{k+1} spreads
                    loc("ladder", "z", p.id,
                        {"fc": fl_ctrl, "ft": fl_tgt,
                         "mem_c": members[k], "mem_t": members[k + 1]})
                for k, q in enumerate(S):
                    self.read_time[(p.id, q)] = t
                    mem = members[k // 2]
                    later = [x for x in mem if S.index(x) > k]
                    loc("gate", "z", p.id, {"q": q, "anc_later": later})
                for i in range(m):
                    loc("meas", "z", p.id, {})
        for p in plist:
            S = list(p.support)
            if p.colour == RED:
                loc("prep", "x", p.id, {"flip": True})
                for k, q in enumerate(S):
                    later = S[k + 1:]
                    loc("gate", "x", p.id, {"q": q, "anc_later": later})
                loc("meas", "x", p.id, {})
            else:
                m = len(S) // 2
                members = [S[2 * i: 2 * i + 2] for i in range(m)]
                for i in range(m):
                    flips = (m - i) % 2 == 1
                    loc("prep", "x", p.id,
                        {"seed": i == 0, "flip": flips, "mem_later": members[i]})
                for k in range(m - 1):
                    fl_ctrl = True
                    fl_tgt = (m - 1 - k) % 2 == 1
                    loc("ladder", "x", p.id,
                        {"fc": fl_ctrl, "ft": fl_tgt,
                         "mem_c": members[k], "mem_t": members[k + 1]})
                for k, q in enumerate(S):
                    mem = members[k // 2]
                    later = [x for x in mem if S.index(x) > k]
                    loc("gate", "x", p.id, {"q": q, "anc_later": later})
                for i in range(m):
                    loc("meas", "x", p.id, {})
        self.n_locations = len(self.locations)
        self._effects = [self._compile(loc_) for loc_ in self.locations]

    def _compile(self, location):
        """Effect table: fault draw -> (zout, xout, dumpx, dumpz)."""
        kind, sector, pid, pay, t = location
        table = {}
        if kind == "meas":
            table[None] = (1, 0, (), ()) if sector == "z" else (0, 1, (), ())
            return table
        if kind == "prep":
            if pay.get("seed", False):
                # seed fault is a phase flip on the cat: no outcome effect,
                # but it rides the data gates onto the seed's partners
                partners = tuple(pay["mem_later"])
                if sector == "z":
                    table[None] = (0, 0, (), partners)
                else:
                    table[None] = (0, 0, partners, ())
            else:
                out = 1 if pay["flip"] else 0
                if sector == "z":
                    table[None] = (out, 0, (), ())
                else:
                    table[None] = (0, out, (), ())
            return table
        if kind == "ladder":
            for (a, b) in TWO_QUBIT_PAULIS:
                zo = xo = 0
                dumpx, dumpz = [], []
                if sector == "z":
                    # X components flip member outcomes (ladder spreads X
                    # forward); Z components dump onto the members' later
                    # data partners.
                    if a in (_X, _Y) and pay["fc"]:
                        zo ^= 1
                    if b in (_X, _Y) and pay["ft"]:
                        zo ^= 1
                    if a in (_Z, _Y):
                        dumpz.extend(pay["mem_c"])
                    if b in (_Z, _Y):
                        dumpz.extend(pay["mem_t"])
                else:
                    if a in (_Z, _Y) and pay["fc"]:
                        xo ^= 1
                    if b in (_Z, _Y) and pay["ft"]:
                        xo ^= 1
                    if a in (_X, _Y):
                        dumpx.extend(pay["mem_c"])
                    if b in (_X, _Y):
                        dumpx.extend(pay["mem_t"])
                table[(a, b)] = (zo, xo, tuple(dumpx), tuple(dumpz))
            return table
        # two-qubit data gate; a = ancilla/member side, b = data side
        q = pay["q"]
        for (a, b) in TWO_QUBIT_PAULIS:
            zo = xo = 0
            dumpx, dumpz = [], []
            if sector == "z":
                if a in (_X, _Y):
                    zo ^= 1                       # flips this member/ancilla
                if a in (_Z, _Y):
                    dumpz.extend(pay["anc_later"])
                if b in (_X, _Y):
                    dumpx.append(q)
                if b in (_Z, _Y):
                    dumpz.append(q)
            else:
                if a in (_Z, _Y):
                    xo ^= 1
                if a in (_X, _Y):
                    dumpx.extend(pay["anc_later"])
                if b in (_X, _Y):
                    dumpx.append(q)
                if b in (_Z, _Y):
                    dumpz.append(q)
            table[(a, b)] = (zo, xo, tuple(dumpx), tuple(dumpz))
        return table

    def draw_fault(self, idx, rng):
        kind = self.locations[idx][0]
        if kind in ("prep", "meas"):
            return None
        k = int(rng.integers(0, 15))
        return TWO_QUBIT_PAULIS[k]


def get_schedule(lattice):
    sched = getattr(lattice, "_circuit_schedule", None)
    if sched is None:
        sched = CircuitSchedule(lattice)
        lattice._circuit_schedule = sched
    return sched


@dataclass
class CircuitRound:
    z_parity: int
    x_parity: int
    z_read_toggles: dict         # circuit-fault toggles landing this round
    x_read_toggles: dict
    z_next_toggles: dict         # echoes and late dumps for next round
    x_next_toggles: dict


def extract_circuit(lattice, frame, model, rng, forced_faults=None,
                    fault_locs=None):
    """One noisy extraction round; mutates `frame` with gate dumps.

    forced_faults: test hook, list of (location index, pauli pair or None).
    fault_locs: pre-drawn fault placements (same format) from a caller
    that samples the per-round fault count itself.
    """
    sched = get_schedule(lattice)
    masks = _support_masks(lattice)
    plist = lattice.plaquettes

    if forced_faults is not None:
        faults = list(forced_faults)
    elif fault_locs is not None:
        faults = list(fault_locs)
    else:
        faults = []
        if model.p0 > 0.0:
            u = rng.random(sched.n_locations)
            for idx in range(sched.n_locations):
                if u[idx] < model.p0:
                    faults.append((idx, sched.draw_fault(idx, rng)))
    faults.sort(key=lambda f: f[0])

    zout = {}
    xout = {}
    dumpsx = []                  # (time, qubit)
    dumpsz = []
    for idx, pauli in faults:
        kind, sector, pid, pay, t = sched.locations[idx]
        table = sched._effects[idx]
        zo, xo, dx, dz = table[pauli if kind in ("ladder", "gate") else None]
        if zo:
            zout[pid] = zout.get(pid, 0) + 1
        if xo:
            xout[pid] = xout.get(pid, 0) + 1
        for q in dx:
            dumpsx.append((t, q))
        for q in dz:
            dumpsz.append((t, q))

    # Z-sector parities with read-time-aware dumps
    zp = 0
    z_read = {}
    z_next = {}
    for p in plist:
        par = (frame.xerr & masks[p.id]).bit_count() & 1
        for (t, q) in dumpsx:
            rt = sched.read_time.get((p.id, q))
            if rt is None or q not in p.support:
                continue
            if rt > t:
                par ^= 1
                z_read[p.id] = z_read.get(p.id, 0) + 1
            else:
                z_next[p.id] = z_next.get(p.id, 0) + 1
        n = zout.get(p.id, 0)
        if n:
            par ^= (n & 1)
            z_read[p.id] = z_read.get(p.id, 0) + n
            z_next[p.id] = z_next.get(p.id, 0) + n
        if par:
            zp |= (1 << p.id)

    # X-sector parities: X gadgets run after all Z gadgets, so every zerr
    # dump from this round is already in place when they read.
    xp = 0
    x_read = {}
    x_next = {}
    zerr_now = frame.zerr
    for (t, q) in dumpsz:
        zerr_now ^= (1 << q)
    for p in plist:
        par = (zerr_now & masks[p.id]).bit_count() & 1
        n = xout.get(p.id, 0)
        if n:
            par ^= (n & 1)
            x_read[p.id] = x_read.get(p.id, 0) + n
            x_next[p.id] = x_next.get(p.id, 0) + n
        if par:
            xp |= (1 << p.id)
    for (t, q) in dumpsz:
        for p in plist:
            if q in p.support:
                x_read[p.id] = x_read.get(p.id, 0) + 1

    for (t, q) in dumpsx:
        frame.flip_x(q)
    for (t, q) in dumpsz:
        frame.flip_z(q)

    return CircuitRound(z_parity=zp, x_parity=xp,
                        z_read_toggles=z_read, x_read_toggles=x_read,
                        z_next_toggles=z_next, x_next_toggles=x_next)


class Collator:
    """Accumulates rounds into a SyndromeHistory with toggle accounting."""

    def __init__(self, lattice):
        self.lattice = lattice
        self.history = SyndromeHistory()
        self._mem_z = {}
        self._mem_x = {}
        self._carry_z = {}
        self._carry_x = {}

    def note_memory_flips(self, xflips, zflips):
        for q in xflips:
            for colour in range(3):
                kind, idx = self.lattice.qubit_faces[q][colour]
                if kind == "p":
                    self._mem_z[idx] = self._mem_z.get(idx, 0) + 1
        for q in zflips:
            for colour in range(3):
                kind, idx = self.lattice.qubit_faces[q][colour]
                if kind == "p":
                    self._mem_x[idx] = self._mem_x.get(idx, 0) + 1

    def _merge(self, *dicts):
        out = {}
        for dct in dicts:
            for k, v in dct.items():
                out[k] = out.get(k, 0) + v
        return out

    def add_ideal_round(self, z_parity, x_parity):
        rec = RoundRecord(z_parity=z_parity, x_parity=x_parity,
                          z_toggles=self._merge(self._mem_z, self._carry_z),
                          x_toggles=self._merge(self._mem_x, self._carry_x))
        self.history.rounds.append(rec)
        self._mem_z, self._mem_x = {}, {}
        self._carry_z, self._carry_x = {}, {}
        return rec

    def add_circuit_round(self, cround):
        rec = RoundRecord(
            z_parity=cround.z_parity, x_parity=cround.x_parity,
            z_toggles=self._merge(self._mem_z, self._carry_z,
                                  cround.z_read_toggles),
            x_toggles=self._merge(self._mem_x, self._carry_x,
                                  cround.x_read_toggles))
        self.history.rounds.append(rec)
        self._mem_z, self._mem_x = {}, {}
        self._carry_z = dict(cround.z_next_toggles)
        self._carry_x = dict(cround.x_next_toggles)
        return rec

    def preview_ideal_round(self, z_parity, x_parity):
        """The record an appended ideal round would produce, without
        committing it (used for the per-round final ideal readout)."""
        return RoundRecord(z_parity=z_parity, x_parity=x_parity,
                           z_toggles=self._merge(self._mem_z, self._carry_z),
                           x_toggles=self._merge(self._mem_x, self._carry_x))


def detection_events(history, lattice, sector="z"):
    """Diff consecutive rounds into detection events with toggle metadata.

    Round 0 is differenced against the all-+1 initial state.
    """
    events = []
    meta = {}
    prev = 0
    colour_of = [p.colour for p in lattice.plaquettes]
    for r, rec in enumerate(history.rounds):
        par = rec.z_parity if sector == "z" else rec.x_parity
        togg = rec.z_toggles if sector == "z" else rec.x_toggles
        diff = par ^ prev
        while diff:
            low = diff & -diff
            pid = low.bit_length() - 1
            events.append((pid, r, colour_of[pid]))
            diff ^= low
        for pid, cnt in togg.items():
            if cnt >= 2:
                meta[(pid, r)] = cnt
        prev = par
    return DetectionEvents(events=events, toggle_meta=meta,
                           n_rounds=len(history.rounds))
