"""Property-based invariants (hypothesis)."""

import random

import numpy as np
from hypothesis import given, settings, strategies as st

from colourcode.blossom import matching_weight, min_weight_perfect_matching
from colourcode.lattice import build_lattice
from colourcode.noise import ErrorModel, PauliFrame, apply_memory_noise, extract_ideal
from colourcode.syndrome_graph import min_chain
from tests.test_blossom import brute_force_min_perfect


@st.composite
def complete_graphs(draw):
    n = draw(st.sampled_from([4, 6, 8, 10]))
    edges = []
    for i in range(n):
        for j in range(i + 1, n):
            edges.append((i, j, draw(st.integers(min_value=0, max_value=12))))
    return n, edges


@settings(max_examples=60, deadline=None)
@given(complete_graphs())
def test_blossom_optimal_on_random_graphs(g):
    n, edges = g
    pairs = min_weight_perfect_matching(n, edges)
    assert len(pairs) == n // 2
    assert matching_weight(pairs, edges) == brute_force_min_perfect(n, edges)


@settings(max_examples=40, deadline=None)
@given(st.integers(min_value=0, max_value=(1 << 17) - 1),
       st.integers(min_value=0, max_value=(1 << 17) - 1))
def test_frame_composition_is_xor(a, b):
    lat = build_lattice(5)
    za, _ = extract_ideal(lat, PauliFrame(xerr=a))
    zb, _ = extract_ideal(lat, PauliFrame(xerr=b))
    zab, _ = extract_ideal(lat, PauliFrame(xerr=a ^ b))
    assert zab == za ^ zb


@settings(max_examples=30, deadline=None)
@given(st.integers(min_value=0, max_value=10 ** 9))
def test_memory_noise_applying_twice_restores(seed):
    lat = build_lattice(3)
    model = ErrorModel(0.4)
    rng = np.random.default_rng(seed)
    frame = PauliFrame()
    xf, zf = apply_memory_noise(frame, model, rng, lat.n_qubits)
    for q in xf:
        frame.flip_x(q)
    for q in zf:
        frame.flip_z(q)
    assert frame.xerr == 0 and frame.zerr == 0


@settings(max_examples=25, deadline=None)
@given(st.integers(min_value=0, max_value=10 ** 9))
def test_pair_chain_symmetry_and_triangle(seed):
    lat = build_lattice(5)
    rng = random.Random(seed)
    P = len(lat.plaquettes)
    a, b, c = rng.sample(range(P), 3)
    wab = min_chain(lat, "pair", a, b)
    wba = min_chain(lat, "pair", b, a)
    assert (wab is None) == (wba is None)
    if wab:
        assert wab[0] == wba[0]
    wac = min_chain(lat, "pair", a, c)
    wcb = min_chain(lat, "pair", c, b)
    if wab and wac and wcb:
        assert wab[0] <= wac[0] + wcb[0]
