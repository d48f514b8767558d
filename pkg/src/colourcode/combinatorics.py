"""Logical-operator enumeration, dangerous-syndrome counts and bounds.

Exact counts come from enumerating the logical-X coset of the stabilizer
group: full doubling over all 2^P products when P is small enough to
vectorize, otherwise a weight-pruned depth-first search over the
row-echelon basis.  The analytic side evaluates the continuous-chain
bound, the dangerous-syndrome bound, its binomial clamp, and the
asymptotic threshold they imply.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import comb, log

import numpy as np

from .decoder import LogicalOperatorBasis


class ResourceCapExceeded(Exception):
    """Enumeration would exceed the configured search budget."""


def _stabilizer_rows(lattice):
    rows = []
    for p in lattice.plaquettes:
        m = 0
        for q in p.support:
            m |= 1 << q
        rows.append(m)
    return rows


def _echelon(rows):
    basis = []
    for r in rows:
        x = r
        for (piv, v) in basis:
            if (x >> piv) & 1:
                x ^= v
        if x:
            basis.append((x.bit_length() - 1, x))
            basis.sort(reverse=True)
    return basis


def enumerate_logical_operators(lattice, max_length=None, max_nodes=20_000_000):
    """All logical-X supports of weight <= max_length, as qubit masks.

    Uses full coset doubling for small stabilizer groups, else a pruned
    search; raises ResourceCapExceeded when the pruned search would visit
    more than max_nodes states.
    """
    if max_length is None:
        max_length = lattice.params.d
    rows = _stabilizer_rows(lattice)
    basis = _echelon(rows)
    x0 = 0
    for q in lattice.logical_support:
        x0 |= 1 << q
    for (piv, v) in basis:
        if (x0 >> piv) & 1:
            x0 ^= v
    P = len(basis)
    Q = lattice.n_qubits

    if P <= 24 and Q <= 63:
        arr = np.zeros(1, dtype=np.uint64)
        for (_, v) in basis:
            arr = np.concatenate([arr, arr ^ np.uint64(v)])
        arr ^= np.uint64(x0)
        tmp = arr.copy()
        cnt = np.zeros_like(tmp)
        while True:
            nz = tmp != 0
            if not nz.any():
                break
            cnt[nz] += 1
            tmp[nz] &= tmp[nz] - np.uint64(1)
        keep = arr[cnt <= max_length]
        return sorted(int(x) for x in keep)

    # pruned DFS over the echelon basis: each selected row contributes its
    # private pivot column to the final weight, so more than max_length
    # selections can never reach the weight cap
    ordered = sorted(basis)
    out = []
    budget = [max_nodes]

    def rec(i, acc, nsel):
        budget[0] -= 1
        if budget[0] < 0:
            raise ResourceCapExceeded("enumeration exceeded node budget")
        if nsel > max_length:
            return
        if i == len(ordered):
            if acc.bit_count() <= max_length:
                out.append(acc)
            return
        rec(i + 1, acc, nsel)
        rec(i + 1, acc ^ ordered[i][1], nsel + 1)

    rec(0, x0, 0)
    return sorted(set(out))


def count_AdF(lattice, max_nodes=20_000_000):
    """Number of dangerous F-error sets under exact matching: unique
    F-subsets of qubits lying on a single minimum-length logical."""
    d = lattice.params.d
    F = lattice.params.F
    ops = [m for m in enumerate_logical_operators(lattice, d, max_nodes)
           if m.bit_count() == d]
    seen = set()
    for m in ops:
        qubits = []
        mm = m
        while mm:
            low = mm & -mm
            qubits.append(low.bit_length() - 1)
            mm ^= low
        from itertools import combinations
        for sub in combinations(qubits, F):
            sm = 0
            for q in sub:
                sm |= 1 << q
            seen.add(sm)
    return len(seen)


@dataclass
class CountTable:
    """Exact and sampled dangerous-syndrome counts per distance."""
    exact: dict = field(default_factory=dict)      # d -> A_d(F)
    sampled: dict = field(default_factory=dict)    # (d, k) -> (count, err)
    lam: int = 0


@dataclass(frozen=True)
class BoundParams:
    d: int
    Q: int
    lam: int

    @property
    def F(self):
        return (self.d + 1) // 2


def qubits_for_distance(d):
    c = (d + 1) // 2
    return 2 * c * c - 1


def bound_Nd(d, Q=None, lam=0):
    """Continuous-chain count bound: Q ((d-1)/2)^2 6^((d-1)/2 + lam)."""
    if Q is None:
        Q = qubits_for_distance(d)
    e = (d - 1) // 2
    return Q * e * e * 6 ** (e + lam)


def bound_AdFk(d, k, Q=None, lam=0, clamped=False):
    """Dangerous-syndrome bound N_d C(d+2lam, F) C(Q-F, k), optionally
    clamped at the trivial count C(Q, F+k)."""
    if Q is None:
        Q = qubits_for_distance(d)
    F = (d + 1) // 2
    val = bound_Nd(d, Q, lam) * comb(d + 2 * lam, F) * comb(Q - F, k)
    if clamped:
        val = min(val, comb(Q, F + k))
    return val


def bound_pL_log(d, p0, Q=None, lam=0):
    """log of the simplified bound, safe for very large d."""
    if Q is None:
        Q = qubits_for_distance(d)
    if p0 <= 0:
        return -float("inf")
    F = (d + 1) // 2
    e = (d - 1) // 2
    p = 2.0 * p0 / 3.0
    return (log(Q) + 2 * log(max(e, 1)) + (e + lam) * log(6)
            + (d + 2 * lam) * log(2) + F * log(p))


def bound_pL(d, p0, Q=None, lam=0):
    """Simplified logical-rate bound N_d 2^(d+2lam) p^F with p = 2/3 p0."""
    if Q is None:
        Q = qubits_for_distance(d)
    F = (d + 1) // 2
    p = 2.0 * p0 / 3.0
    try:
        return float(bound_Nd(d, Q, lam)) * 2.0 ** (d + 2 * lam) * p ** F
    except OverflowError:
        from math import exp
        return exp(bound_pL_log(d, p0, Q, lam))


def bound_pL_clamped(d, p0, Q=None, lam=0):
    """Per-k clamped bound summed through the full logical-rate polynomial."""
    if Q is None:
        Q = qubits_for_distance(d)
    F = (d + 1) // 2
    p = 2.0 * p0 / 3.0
    total = 0.0
    for k in range(0, Q - F + 1):
        A = bound_AdFk(d, k, Q, lam, clamped=True)
        total += float(A) * p ** (F + k) * (1.0 - p) ** ((Q - F) - k)
    return total


def asymptotic_threshold():
    """The analytic threshold implied by the bound's growth rate.

    Successive-distance bounds differ by one factor of 6 (chain shifts),
    2^2 (error placements) and p (one extra error); their ratio reaches 1
    at p = 1/24, i.e. p0 = (3/2)/24 = 1/16.
    """
    return Fraction(3, 2) * Fraction(1, 6 * 4)


def threshold_trace():
    lines = [
        "per-step growth of the logical-rate bound: 6^1 * 2^2 = 24",
        "ratio p_L(d+2)/p_L(d) -> 24 p as d -> inf",
        "crossing at p = 1/24; memory split gives p0 = 3/2 * 1/24 = 1/16",
        "p_th = 0.0625",
    ]
    return "\n".join(lines)


def bound_ratio(d, p0, lam=0):
    """Finite-d ratio of successive Eq-style bounds; crossing indicator."""
    from math import exp
    return exp(bound_pL_log(d + 2, p0, lam=lam) - bound_pL_log(d, p0, lam=lam))


def gradient_check(counts):
    """Least-squares growth base of log(count) against (d-1)/2.

    counts: dict d -> positive count.  Returns the fitted base.
    """
    if len(counts) < 3:
        raise ValueError("need counts for at least 3 distances")
    xs = np.array([(d - 1) / 2 for d in sorted(counts)], dtype=float)
    ys = np.array([log(counts[d]) for d in sorted(counts)], dtype=float)
    slope, _ = np.polyfit(xs, ys, 1)
    return float(np.exp(slope))
