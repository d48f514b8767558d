"""Walk one error through syndrome extraction, matching and correction.

Shows the weight-sum sandwich W_mimic <= W_hyper <= W_trial and the
certificate that the approximate matching found a true optimum.
Run:  python demos/demo_decoding.py
"""

import numpy as np

from colourcode.decoder import (
    LogicalOperatorBasis,
    is_codeword,
    is_logical_failure,
    matching_to_correction,
)
from colourcode.lattice import build_lattice
from colourcode.matcher import decode_match, exact_hypermatch
from colourcode.noise import Collator, PauliFrame, detection_events, extract_ideal
from colourcode.syndrome_graph import build_hypergraph

lat = build_lattice(7)
basis = LogicalOperatorBasis.for_lattice(lat)
rng = np.random.default_rng(11)

qs = sorted(int(q) for q in rng.choice(lat.n_qubits, size=4, replace=False))
print("injected X errors on qubits:", qs)

mask = 0
for q in qs:
    mask |= 1 << q
frame = PauliFrame(xerr=mask)
coll = Collator(lat)
coll.note_memory_flips(qs, [])
zp, xp = extract_ideal(lat, frame)
coll.add_ideal_round(zp, xp)
events = detection_events(coll.history, lat)
print("detection events (plaquette, round, colour):", events.events)
print("multi-toggle metadata:", events.toggle_meta)

h = build_hypergraph(events, lat)
print("hypergraph: %d nodes, %d elements" % (len(h.nodes), len(h.elements)))

out = decode_match(h, trials_per_variant=25, seed=1)
_, w_hyper = exact_hypermatch(h, limit=20)
print("W_mimic=%d  W_hyper=%d  W_trial=%d  certificate=%s"
      % (out.w_mimic, w_hyper, out.w_trial, out.certificate))
assert out.w_mimic <= w_hyper <= out.w_trial

corr = matching_to_correction(out, h)
print("correction flips qubits:", corr.qubits())
residual = mask ^ corr.xmask
print("codeword restored:", is_codeword(lat, PauliFrame(xerr=residual)))
print("logical failure:", is_logical_failure(lat, residual, basis))
