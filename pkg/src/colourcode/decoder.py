"""Corrections from matchings, codeword checks and failure detection."""

from __future__ import annotations

from dataclasses import dataclass

from .noise import extract_ideal, PauliFrame
from .syndrome_graph import BOUNDARY, INJECTED


@dataclass(frozen=True)
class Correction:
    """X-flips to apply, projected onto the final round."""
    xmask: int

    def qubits(self):
        out = []
        m = self.xmask
        while m:
            low = m & -m
            out.append(low.bit_length() - 1)
            m ^= low
        return out


@dataclass(frozen=True)
class LogicalOperatorBasis:
    """Reference logical support used for coset membership tests."""
    support: int                 # qubit bitmask, weight d

    @staticmethod
    def for_lattice(lattice):
        m = 0
        for q in lattice.logical_support:
            m |= (1 << q)
        return LogicalOperatorBasis(support=m)


def matching_to_correction(outcome, h):
    """XOR the representatives of matched elements that touch at least one
    regular or dummy node; boundary-boundary and unused-injected matches
    contribute nothing."""
    xmask = 0
    for el in outcome.matching:
        kinds = [h.nodes[n].kind for n in el.nodes]
        if all(k in (BOUNDARY, INJECTED) for k in kinds):
            continue
        xmask ^= el.rep
    return Correction(xmask=xmask)


def is_codeword(lattice, frame):
    """True iff every Z-sector plaquette parity is +1 for the X frame."""
    zp, _ = extract_ideal(lattice, frame)
    return zp == 0


def is_logical_failure(lattice, residual_xmask, basis=None):
    """Decide whether a residual codeword operator acts as logical X.

    The residual must already be a codeword (zero syndrome); failure is
    the parity of its overlap with the fixed logical-Z support, which is
    odd exactly on the logical coset.
    """
    if not is_codeword(lattice, PauliFrame(xerr=residual_xmask)):
        raise ValueError("residual frame is not a codeword")
    if basis is None:
        basis = LogicalOperatorBasis.for_lattice(lattice)
    return bool((residual_xmask & basis.support).bit_count() & 1)
