"""Memory-lifetime simulation and failure-ratio sampling.

Each instance runs the paper-style loop: perfect initialisation, then per
timestep memory noise on every data qubit, syndrome extraction (ideal or
circuit-level), collation of detection events over time, an ideally
measured final round, decoding, and a failure check against a copy of
the frame.  The live frame is never corrected; failure is judged from
the parity of (frame xor correction) against the reference logical.

Performance comes from three exact rewrites of that loop:

* rounds with no fault anywhere are skipped geometrically (nothing in
  the loop state changes, so the previous verdict persists);
* under ideal extraction each round decodes independently, so the
  per-round verdict is memoised by syndrome;
* under circuit extraction, detection events separated by more than a
  weight horizon can never share a matching element, so old event
  clusters are decoded once, retired, and only their logical parity is
  carried forward.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .combinatorics import qubits_for_distance
from .decoder import LogicalOperatorBasis, matching_to_correction
from .lattice import build_lattice
from .matcher import decode_match, exact_min_error_decode
from .noise import ErrorModel, PauliFrame, extract_circuit, extract_ideal, \
    get_schedule, _support_masks, TWO_QUBIT_PAULIS
from .syndrome_graph import build_hypergraph
from . import noise as _noise


@dataclass
class SimConfig:
    d: int
    p0: float
    mode: str = "ideal"              # "ideal" | "circuit"
    instances: int = 1000
    max_rounds: int = 1_000_000
    seed: int = 0
    trials_per_variant: int = 25
    temporal: bool | None = None     # default: circuit -> True

    def __post_init__(self):
        if self.mode not in ("ideal", "circuit"):
            raise ValueError("mode must be 'ideal' or 'circuit'")
        if self.instances < 1:
            raise ValueError("instances must be >= 1")
        if not (0.0 <= self.p0 < 1.0):
            raise ValueError("p0 must lie in [0, 1)")
        if self.temporal is None:
            self.temporal = (self.mode == "circuit")


@dataclass
class PointResult:
    d: int
    p0: float
    mode: str
    instances: int
    failures: int
    censored: int
    failure_times: list
    total_rounds: int

    @property
    def mean_rounds(self):
        if not self.failure_times:
            return math.nan
        return float(np.mean(self.failure_times))

    @property
    def stderr(self):
        n = len(self.failure_times)
        if n < 2:
            return math.nan
        return float(np.std(self.failure_times, ddof=1) / math.sqrt(n))

    @property
    def rate(self):
        """Per-round failure probability (geometric MLE, censoring-safe)."""
        if self.total_rounds == 0:
            return math.nan
        return self.failures / self.total_rounds

    @property
    def rate_err(self):
        if self.total_rounds == 0 or self.failures == 0:
            return math.nan
        q = self.rate
        return math.sqrt(q * (1.0 - q) / self.total_rounds)

    @property
    def lifetime(self):
        q = self.rate
        return math.inf if q == 0 else 1.0 / q

    @property
    def lifetime_err(self):
        q, e = self.rate, self.rate_err
        if not (q > 0) or math.isnan(e):
            return math.nan
        return e / (q * q)


@dataclass
class SimResult:
    config_seed: int
    points: list = field(default_factory=list)

    def csv(self):
        lines = ["d,p0,mode,instances,mean_rounds,stderr,censored"]
        for pt in self.points:
            lines.append("%d,%g,%s,%d,%g,%g,%d"
                         % (pt.d, pt.p0, pt.mode, pt.instances,
                            pt.mean_rounds, pt.stderr, pt.censored))
        return "\n".join(lines) + "\n"


_LATTICES = {}


def _lattice(d):
    lat = _LATTICES.get(d)
    if lat is None:
        lat = build_lattice(d)
        _LATTICES[d] = lat
    return lat


def unencoded_lifetime(p0):
    """Mean rounds before a bare qubit takes an X or Y hit."""
    if p0 <= 0:
        return math.inf
    return 1.0 / ((2.0 / 3.0) * p0)


class _Decoder:
    """Cached component decoding for one (lattice, mode) combination."""

    def __init__(self, lattice, temporal, trials_per_variant, seed):
        self.lattice = lattice
        self.temporal = temporal
        self.trials = trials_per_variant
        self.seed = seed
        self.logical = 0
        for q in lattice.logical_support:
            self.logical |= 1 << q
        self.cache = {}
        self.component_cache = {}

    def corr_mask(self, events, meta, n_rounds):
        """Correction mask for an event set; memoised on content.

        Keys use rounds relative to the earliest event: corrections are
        time-translation invariant once projected to a single mask.
        """
        if events:
            base = min(r for (_, r, _) in events)
        elif meta:
            base = min(r for (_, r) in meta)
        else:
            return 0
        ev_t = tuple(sorted((p, r - base, c) for (p, r, c) in events))
        meta_t = tuple(sorted(((p, r - base), v) for (p, r), v in meta.items()))
        key = (ev_t, meta_t)
        got = self.cache.get(key)
        if got is not None:
            return got
        from .noise import DetectionEvents
        ev = DetectionEvents(events=list(ev_t),
                             toggle_meta={k: v for k, v in meta_t},
                             n_rounds=max((r for (_, r, _) in ev_t),
                                          default=0) + 1)
        h = build_hypergraph(ev, self.lattice, temporal=self.temporal)
        out = decode_match(h, trials_per_variant=self.trials, seed=self.seed,
                           cache=self.component_cache)
        corr = matching_to_correction(out, h)
        self.cache[key] = corr.xmask
        return corr.xmask


def _coupling_horizon(lattice):
    """Rounds beyond which two detection events can never share a
    matching element: retained elements weigh at most the sum of the two
    boundary weights, and the temporal span never exceeds the weight."""
    from .syndrome_graph import get_metrics
    m = get_metrics(lattice)
    maxbd = max(m.boundary_chain(p.id)[0] for p in lattice.plaquettes)
    return min(2 * maxbd, lattice.params.d) + 1


def _trunc_binom_sampler(L, p0):
    """Inverse-CDF table for Binomial(L, p0) conditioned on >= 1."""
    probs = []
    logq = math.log1p(-p0) if p0 < 1 else -math.inf
    for k in range(1, L + 1):
        lp = (math.lgamma(L + 1) - math.lgamma(k + 1) - math.lgamma(L - k + 1)
              + k * math.log(p0) + (L - k) * logq)
        probs.append(math.exp(lp))
    total = sum(probs)
    cdf = np.cumsum([p / total for p in probs])
    return cdf


def run_instance(config, lattice=None, instance_seed=None, decoder=None):
    """Simulate one memory instance; returns the failure round (1-based)
    or None when censored at max_rounds."""
    if lattice is None:
        lattice = _lattice(config.d)
    rng = np.random.default_rng(
        np.random.SeedSequence([config.seed & 0xFFFFFFFF,
                                0 if instance_seed is None else instance_seed]))
    if decoder is None:
        decoder = _Decoder(lattice, config.temporal,
                           config.trials_per_variant, config.seed)
    if config.mode == "ideal":
        return _run_ideal(config, lattice, rng, decoder)
    return _run_circuit(config, lattice, rng, decoder)


def _run_ideal(config, lattice, rng, decoder):
    Q = lattice.n_qubits
    p0 = config.p0
    if p0 == 0.0:
        return None
    model = ErrorModel(p0)
    masks = _support_masks(lattice)
    colour_of = [p.colour for p in lattice.plaquettes]
    L = decoder.logical
    p_any = 1.0 - (1.0 - p0) ** Q
    cdf = _trunc_binom_sampler(Q, p0)
    t = 0
    while True:
        gap = int(rng.geometric(p_any))
        t += gap
        if t > config.max_rounds:
            return None
        k = 1 + int(np.searchsorted(cdf, rng.random()))
        qs = rng.choice(Q, size=k, replace=False)
        paulis = rng.integers(0, 3, size=k)            # 0=X 1=Y 2=Z
        err = 0
        toggles = {}
        for q, pl in zip(qs, paulis):
            if pl <= 1:
                err |= 1 << int(q)
                for colour in range(3):
                    kind, idx = lattice.qubit_faces[int(q)][colour]
                    if kind == "p":
                        toggles[idx] = toggles.get(idx, 0) + 1
        if err == 0:
            continue
        events = []
        meta = {}
        for pid, cnt in toggles.items():
            if cnt & 1:
                events.append((pid, 0, colour_of[pid]))
            if cnt >= 2:
                meta[(pid, 0)] = cnt
        if not events and not meta:
            continue
        corr = decoder.corr_mask(events, meta, 1)
        fail = ((err & L).bit_count() ^ (corr & L).bit_count()) & 1
        if fail:
            return t


def _run_circuit(config, lattice, rng, decoder):
    Q = lattice.n_qubits
    p0 = config.p0
    if p0 == 0.0:
        return None
    model = ErrorModel(p0)
    sched = get_schedule(lattice)
    masks = _support_masks(lattice)
    colour_of = [p.colour for p in lattice.plaquettes]
    L = decoder.logical
    n_loc = sched.n_locations
    n_all = n_loc + Q
    p_any = 1.0 - (1.0 - p0) ** n_all
    cdf = _trunc_binom_sampler(n_all, p0)
    gap_horizon = _coupling_horizon(lattice)

    frame = PauliFrame()
    prev_parity = 0
    carry = {}
    active = []                 # (pid, round, colour)
    active_meta = {}
    settled_parity = 0
    hot = 0
    t = 0

    def retire(now):
        # Decode and drop event clusters whose rounds all sit more than a
        # weight horizon behind both `now` and the surviving events; no
        # matching element can connect across such a gap.
        nonlocal settled_parity, active, active_meta
        rounds = sorted({r for (_, r, _) in active}
                        | {r for (_, r) in active_meta})
        if not rounds:
            return
        cut = None
        prev = rounds[0]
        for r in rounds[1:]:
            if r - prev > gap_horizon:
                cut = prev
            prev = r
        if rounds[-1] < now - gap_horizon:
            cut = rounds[-1]
        if cut is None or cut >= now - gap_horizon:
            return
        old_ev = [e for e in active if e[1] <= cut]
        old_meta = {k: v for k, v in active_meta.items() if k[1] <= cut}
        if old_ev or old_meta:
            corr = decoder.corr_mask(old_ev, old_meta, cut + 1)
            settled_parity ^= (corr & L).bit_count() & 1
        active = [e for e in active if e[1] > cut]
        active_meta = {k: v for k, v in active_meta.items() if k[1] > cut}

    while True:
        if hot == 0:
            gap = int(rng.geometric(p_any))
            t += gap
        else:
            t += 1
        if t > config.max_rounds:
            return None
        if hot == 0:
            k = 1 + int(np.searchsorted(cdf, rng.random()))
            idxs = rng.choice(n_all, size=k, replace=False)
        else:
            k = int(rng.binomial(n_all, p0))
            idxs = rng.choice(n_all, size=k, replace=False) if k else []
        mem_toggles = {}
        new_err_qubits = []
        fault_locs = []
        for idx in sorted(int(i) for i in idxs):
            if idx < Q:
                pl = int(rng.integers(0, 3))
                if pl <= 1:
                    frame.flip_x(idx)
                    new_err_qubits.append(idx)
                if pl >= 1:
                    frame.flip_z(idx)
            else:
                loc = idx - Q
                fault_locs.append((loc, sched.draw_fault(loc, rng)))
        for q in new_err_qubits:
            for colour in range(3):
                kind, fidx = lattice.qubit_faces[q][colour]
                if kind == "p":
                    mem_toggles[fidx] = mem_toggles.get(fidx, 0) + 1

        cr = extract_circuit(lattice, frame, model, rng,
                             fault_locs=fault_locs)
        togg = dict(mem_toggles)
        for pid, v in carry.items():
            togg[pid] = togg.get(pid, 0) + v
        for pid, v in cr.z_read_toggles.items():
            togg[pid] = togg.get(pid, 0) + v
        carry = dict(cr.z_next_toggles)
        diff = cr.z_parity ^ prev_parity
        prev_parity = cr.z_parity
        changed = False
        while diff:
            low = diff & -diff
            pid = low.bit_length() - 1
            active.append((pid, t, colour_of[pid]))
            changed = True
            diff ^= low
        for pid, cnt in togg.items():
            if cnt >= 2:
                active_meta[(pid, t)] = active_meta.get((pid, t), 0) + cnt
                changed = True

        # final ideal readout for the failure check
        zp_ideal, _ = extract_ideal(lattice, frame)
        fdiff = zp_ideal ^ prev_parity
        final_events = []
        while fdiff:
            low = fdiff & -fdiff
            pid = low.bit_length() - 1
            final_events.append((pid, t + 1, colour_of[pid]))
            fdiff ^= low
        final_meta = {(pid, t + 1): v for pid, v in carry.items() if v >= 2}

        retire(t)
        corr = 0
        if active or final_events or final_meta:
            events = list(active) + final_events
            meta = dict(active_meta)
            meta.update(final_meta)
            corr = decoder.corr_mask(events, meta, t + 2)
        fail = (((frame.xerr ^ corr) & L).bit_count() & 1) ^ settled_parity
        if fail:
            return t

        pending = bool(final_events or final_meta or carry or fault_locs
                       or new_err_qubits)
        hot = 2 if (changed or pending) else max(0, hot - 1)


def sweep(config_list, workers=1, progress=None):
    """Run a list of SimConfig points; returns SimResult.

    Instances carry pre-assigned seeds, so the aggregate is identical for
    any worker count.
    """
    if isinstance(config_list, SimConfig):
        config_list = [config_list]
    points = []
    for cfg in config_list:
        times = _run_point(cfg, workers)
        failures = [x for x in times if x is not None]
        censored = sum(1 for x in times if x is None)
        total = sum(failures) + censored * cfg.max_rounds
        points.append(PointResult(d=cfg.d, p0=cfg.p0, mode=cfg.mode,
                                  instances=cfg.instances,
                                  failures=len(failures), censored=censored,
                                  failure_times=sorted(failures),
                                  total_rounds=total))
        if progress:
            progress(points[-1])
    return SimResult(config_seed=config_list[0].seed if config_list else 0,
                     points=points)


_DECODERS = {}


def _decoder_for(cfg, lattice):
    key = (cfg.d, cfg.temporal, cfg.trials_per_variant, cfg.seed)
    dec = _DECODERS.get(key)
    if dec is None:
        dec = _Decoder(lattice, cfg.temporal, cfg.trials_per_variant,
                       cfg.seed)
        _DECODERS[key] = dec
    return dec


def _run_chunk(args):
    cfg, lo, hi = args
    lattice = _lattice(cfg.d)
    decoder = _decoder_for(cfg, lattice)
    out = []
    for i in range(lo, hi):
        out.append((i, run_instance(cfg, lattice, instance_seed=i,
                                    decoder=decoder)))
    return out


def _run_point(cfg, workers):
    n = cfg.instances
    if workers <= 1:
        res = _run_chunk((cfg, 0, n))
    else:
        from concurrent.futures import ProcessPoolExecutor
        chunk = max(1, (n + workers * 4 - 1) // (workers * 4))
        jobs = [(cfg, lo, min(n, lo + chunk)) for lo in range(0, n, chunk)]
        res = []
        with ProcessPoolExecutor(max_workers=workers) as ex:
            for part in ex.map(_run_chunk, jobs):
                res.extend(part)
    res.sort()
    return [x for (_, x) in res]


def estimate_rk(d, k, samples, seed=0, decoder="approx",
                trials_per_variant=25):
    """Failure ratio of uniformly drawn (F+k)-error patterns.

    decoder="approx" uses the mimic/trial pipeline; "oracle" uses the
    exact minimum-error decoder.  Returns (r, stderr).
    """
    lattice = _lattice(d)
    F = lattice.params.F
    weight = F + k
    Q = lattice.n_qubits
    if weight < 0 or weight > Q:
        raise ValueError("F+k outside [0, Q]")
    if weight == 0:
        return 0.0, 0.0
    rng = np.random.default_rng(np.random.SeedSequence([seed & 0xFFFFFFFF,
                                                        d, k]))
    basis = LogicalOperatorBasis.for_lattice(lattice)
    L = basis.support
    colour_of = [p.colour for p in lattice.plaquettes]
    dec = _Decoder(lattice, False, trials_per_variant, seed)
    corr_parity_cache = {}
    fails = 0
    for _ in range(samples):
        qs = rng.choice(Q, size=weight, replace=False)
        err = 0
        toggles = {}
        for q in qs:
            err |= 1 << int(q)
            for colour in range(3):
                kind, idx = lattice.qubit_faces[int(q)][colour]
                if kind == "p":
                    toggles[idx] = toggles.get(idx, 0) + 1
        if decoder == "oracle":
            zp, _ = extract_ideal(lattice, PauliFrame(xerr=err))
            key = zp
            par = corr_parity_cache.get(key)
            if par is None:
                corr = exact_min_error_decode(lattice, zp, cap=weight)
                par = (corr & L).bit_count() & 1
                corr_parity_cache[key] = par
        else:
            events = []
            meta = {}
            for pid, cnt in toggles.items():
                if cnt & 1:
                    events.append((pid, 0, colour_of[pid]))
                if cnt >= 2:
                    meta[(pid, 0)] = cnt
            corr = dec.corr_mask(events, meta, 1)
            par = (corr & L).bit_count() & 1
        fail = ((err & L).bit_count() & 1) ^ par
        fails += fail
    r = fails / samples
    err_r = math.sqrt(max(r * (1 - r), 1e-12) / samples)
    return r, err_r


def logical_rate_polynomial(d, p0, prefactors):
    """Evaluate p_L = p^F sum_k A[F+k] p^k (1-p)^((Q-F)-k), p = 2/3 p0.

    prefactors: sequence of A values for k = 0..Q-F (length Q-F+1).
    """
    Q = qubits_for_distance(d)
    F = (d + 1) // 2
    n = Q - F + 1
    if len(prefactors) != n:
        raise ValueError("expected %d prefactors (k = 0..%d), got %d"
                         % (n, n - 1, len(prefactors)))
    p = 2.0 * p0 / 3.0
    total = 0.0
    for k, A in enumerate(prefactors):
        total += float(A) * p ** k * (1.0 - p) ** ((Q - F) - k)
    return total * p ** F


def prefactors_from_rk(d, rk):
    """A-vector for logical_rate_polynomial from sampled ratios.

    rk: dict k -> failure ratio; missing k count as zero.
    """
    from math import comb
    Q = qubits_for_distance(d)
    F = (d + 1) // 2
    out = []
    for k in range(0, Q - F + 1):
        r = rk.get(k, 0.0)
        out.append(comb(Q, F + k) * r)
    return out
