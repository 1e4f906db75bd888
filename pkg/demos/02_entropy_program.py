#!/usr/bin/env python
"""The inner maximum-entropy program, checked against the exhaustive grid."""
import math

from cwbarriers import brute_force_max, make_cw_big, maximize_entropy, orbits
from cwbarriers.symmetry import cw_standard_action

q = 3
S = make_cw_big(q).support
part = orbits(S, cw_standard_action(q))
theta = (0.11, 0.445, 0.445)

full = maximize_entropy(S, theta)
reduced = maximize_entropy(S, theta, part)
print(f"full program     : {full.value_bits:.10f} bits, {full.iterations} iterations")
print(f"orbit-reduced    : {reduced.value_bits:.10f} bits, {reduced.iterations} iterations")

# the optimum is orbit-constant; print one mass per orbit
for orbit, m in zip(part.orbits, reduced.distribution.orbit_masses()):
    print(f"  orbit of {orbit[0]} (size {len(orbit)}): mass {m:.6f} per point")

grid = brute_force_max(S, theta, 0.01, part)
print(f"grid maximum     : {grid:.10f} bits (step 0.01)")

# putting all weight on one axis recovers log2 of its dimension
print("theta = (1,0,0):", maximize_entropy(S, (1, 0, 0)).value_bits, "=", math.log2(q + 2))
