"""Memory-lifetime curves under ideal and circuit-level extraction.

Small sample sizes keep this demo quick; push `instances` up for smooth
curves.  Run:  python demos/demo_lifetime.py
"""

from colourcode.montecarlo import SimConfig, sweep, unencoded_lifetime

print("ideal extraction, lifetimes in rounds (1000 instances/point):")
print("%6s" % "p0", *("d=%d" % d for d in (3, 5, 7)), sep="\t")
for p0 in (0.09, 0.12, 0.15):
    row = ["%6.2f" % p0]
    for d in (3, 5, 7):
        cfg = SimConfig(d=d, p0=p0, mode="ideal", instances=1000,
                        max_rounds=10 ** 6, seed=5)
        pt = sweep(cfg).points[0]
        row.append("%7.1f" % pt.lifetime)
    print(*row, sep="\t")

print("\ncircuit-level extraction at p0 = 1e-3 (100 instances):")
for d in (3, 5):
    cfg = SimConfig(d=d, p0=1e-3, mode="circuit", instances=100,
                    max_rounds=200000, seed=6)
    pt = sweep(cfg, workers=2).points[0]
    print("  d=%d lifetime %8.0f rounds  (+- %.0f)"
          % (d, pt.lifetime, pt.lifetime_err))
print("  bare qubit      %8.0f rounds" % unencoded_lifetime(1e-3))
