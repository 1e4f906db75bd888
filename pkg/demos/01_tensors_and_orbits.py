#!/usr/bin/env python
"""Build the standard tensors and look at the symmetry of CW_q."""
from cwbarriers import kronecker, make_cw_big, make_matmul, orbits, serialize_tensor
from cwbarriers.symmetry import cw_standard_action, group_closure

# <2,2,2> has 8 support points on 4 x 4 x 4 index sets
M = make_matmul(2, 2, 2)
print("<2,2,2>", M.dims, len(M), "points")

# Kronecker products multiply dimensions and support sizes
K = kronecker(make_matmul(1, 2, 1), make_matmul(2, 1, 2))
print("<1,2,1> x <2,1,2>", K.dims, len(K), "points")

# CW_3 written out in the plain text format
T = make_cw_big(3)
print(serialize_tensor(T))

# S_q acts on the labels 1..q; the support splits into six orbits
for q in (1, 3, 8):
    part = orbits(make_cw_big(q).support, cw_standard_action(q))
    print(f"CW_{q}: {len(make_cw_big(q))} points, orbit sizes {part.sizes}")

print("order of the group acting on CW_4:", len(group_closure(cw_standard_action(4))))
