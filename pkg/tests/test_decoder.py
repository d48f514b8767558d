"""Correction application, codeword restoration, failure detection."""

import itertools

import numpy as np
import pytest

from colourcode.decoder import (
    LogicalOperatorBasis,
    is_codeword,
    is_logical_failure,
    matching_to_correction,
)
from colourcode.lattice import build_lattice
from colourcode.matcher import decode_match, exact_hypermatch
from colourcode.noise import (
    Collator,
    PauliFrame,
    detection_events,
    extract_ideal,
)
from colourcode.syndrome_graph import build_hypergraph


def decode_round(lat, xmask, seed=0, oracle=False):
    frame = PauliFrame(xerr=xmask)
    coll = Collator(lat)
    coll.note_memory_flips([q for q in range(lat.n_qubits)
                            if (xmask >> q) & 1], [])
    zp, xp = extract_ideal(lat, frame)
    coll.add_ideal_round(zp, xp)
    ev = detection_events(coll.history, lat)
    h = build_hypergraph(ev, lat)
    if oracle:
        elements, w = exact_hypermatch(h, limit=20)

        class _O:
            matching = elements
        out = _O()
    else:
        out = decode_match(h, seed=seed)
    corr = matching_to_correction(out, h)
    return corr, h, out


def test_codeword_checks():
    lat = build_lattice(3)
    assert is_codeword(lat, PauliFrame())
    assert not is_codeword(lat, PauliFrame(xerr=1))
    for p in lat.plaquettes:
        m = 0
        for q in p.support:
            m |= 1 << q
        assert is_codeword(lat, PauliFrame(xerr=m))


def test_logical_failure_on_reference_support():
    for d in (3, 5, 7):
        lat = build_lattice(d)
        basis = LogicalOperatorBasis.for_lattice(lat)
        assert is_logical_failure(lat, basis.support, basis)
        assert not is_logical_failure(lat, 0, basis)
        for p in lat.plaquettes:
            m = 0
            for q in p.support:
                m |= 1 << q
            assert not is_logical_failure(lat, m, basis)


def test_logical_failure_rejects_non_codeword():
    lat = build_lattice(3)
    with pytest.raises(ValueError):
        is_logical_failure(lat, 1)


def test_coset_test_agrees_with_group_membership_d3():
    lat = build_lattice(3)
    basis = LogicalOperatorBasis.for_lattice(lat)
    masks = []
    for p in lat.plaquettes:
        m = 0
        for q in p.support:
            m |= 1 << q
        masks.append(m)
    for bits in range(1 << len(masks)):
        prod = 0
        for i, m in enumerate(masks):
            if (bits >> i) & 1:
                prod ^= m
        assert not is_logical_failure(lat, prod, basis)
        assert is_logical_failure(lat, prod ^ basis.support, basis)


def test_coset_test_random_products_d5():
    lat = build_lattice(5)
    basis = LogicalOperatorBasis.for_lattice(lat)
    masks = []
    for p in lat.plaquettes:
        m = 0
        for q in p.support:
            m |= 1 << q
        masks.append(m)
    rng = np.random.default_rng(3)
    for _ in range(500):
        prod = 0
        for m in masks:
            if rng.random() < 0.5:
                prod ^= m
        assert not is_logical_failure(lat, prod, basis)
        assert is_logical_failure(lat, prod ^ basis.support, basis)


@pytest.mark.parametrize("d", [3, 5, 7, 9])
def test_post_correction_codeword_guarantee(d):
    lat = build_lattice(d)
    rng = np.random.default_rng(d)
    for _ in range(150):
        k = int(rng.integers(0, 5))
        mask = 0
        if k:
            for q in rng.choice(lat.n_qubits, size=k, replace=False):
                mask |= 1 << int(q)
        corr, h, out = decode_round(lat, mask, seed=int(rng.integers(1 << 30)))
        assert is_codeword(lat, PauliFrame(xerr=mask ^ corr.xmask))


def test_single_error_corrected_exactly():
    lat = build_lattice(5)
    bulk = next(q for q, faces in enumerate(lat.qubit_faces)
                if all(k[0] == "p" for k in faces))
    corr, h, out = decode_round(lat, 1 << bulk)
    assert corr.xmask == (1 << bulk)


def test_empty_matching_empty_correction():
    lat = build_lattice(3)
    corr, h, out = decode_round(lat, 0)
    assert corr.xmask == 0 and out.matching == []


def test_oracle_corrects_all_correctable_d3():
    # distance guarantee: every single error decodes without failure
    lat = build_lattice(3)
    basis = LogicalOperatorBasis.for_lattice(lat)
    for q in range(lat.n_qubits):
        corr, h, out = decode_round(lat, 1 << q, oracle=True)
        residual = (1 << q) ^ corr.xmask
        assert is_codeword(lat, PauliFrame(xerr=residual))
        assert not is_logical_failure(lat, residual, basis)


def test_oracle_corrects_all_pairs_d5_sample():
    lat = build_lattice(5)
    basis = LogicalOperatorBasis.for_lattice(lat)
    pairs = list(itertools.combinations(range(lat.n_qubits), 2))[:40]
    for q1, q2 in pairs:
        mask = (1 << q1) | (1 << q2)
        corr, h, out = decode_round(lat, mask, oracle=True)
        residual = mask ^ corr.xmask
        assert not is_logical_failure(lat, residual, basis)


def test_dummy_pair_self_match_contributes_nothing():
    lat = build_lattice(5)
    p8 = next(p for p in lat.plaquettes if len(p.support) == 8)
    q1, q2 = p8.support[0], p8.support[3]
    mask = (1 << q1) | (1 << q2)
    corr, h, out = decode_round(lat, mask)
    after = mask ^ corr.xmask
    assert is_codeword(lat, PauliFrame(xerr=after))
