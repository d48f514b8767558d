"""Build triangular 4.8.8 patches and look at their structure.

The distance-3 patch is the 7-qubit Steane code; larger patches tile
squares and octagons inside a triangle whose three sides mask one colour
each.  Run:  python demos/demo_lattice.py
"""

from colourcode.lattice import COLOUR_NAMES, build_lattice, dump_lattice, validate

for d in (3, 5, 7, 9):
    lat = build_lattice(d)
    sizes = {}
    for p in lat.plaquettes:
        key = (COLOUR_NAMES[p.colour], len(p.support))
        sizes[key] = sizes.get(key, 0) + 1
    print(f"d={d}: Q={lat.n_qubits} P={len(lat.plaquettes)} "
          f"faces={sorted(sizes.items())}")
    assert validate(lat) == []

print("\ndistance-3 patch, full dump (Steane code):")
print(dump_lattice(build_lattice(3)))

lat = build_lattice(9)
print("reference logical operator (d=9), qubit ids:",
      sorted(lat.logical_support))
print("its weight equals the distance:", len(lat.logical_support))
