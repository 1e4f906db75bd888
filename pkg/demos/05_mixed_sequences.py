#!/usr/bin/env python
"""A sequence built from powers of two CW tensors at once."""
from cwbarriers import BarrierQuery, MixedFactor, MixedSequence, barrier_mixed, barrier_omega, orbits
from cwbarriers.symmetry import cw_standard_action
from cwbarriers.tensors import make_cw_big


def factor(q, weight):
    S = make_cw_big(q).support
    return MixedFactor(S, weight, q + 2, orbits(S, cw_standard_action(q)), f"cw:{q}")


# rank per step is taken as the product of factor ranks, so the value is labeled heuristic
seq = MixedSequence((factor(7, 9.0), factor(6, 5.14)))
res = barrier_mixed(seq, p=2.0)
print(f"CW_7^9 x CW_6^5.14: {res.value:.6f} ({res.rank_mode})")

for q in (6, 7):
    print(f"CW_{q} alone: {barrier_omega(BarrierQuery.from_id(f'cw:{q}', p=2.0)).value:.6f}")
