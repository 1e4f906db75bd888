#!/usr/bin/env python
"""alpha barriers, the implied omega bound, and a barrier curve saved as SVG."""
from cwbarriers import BarrierQuery, barrier_alpha, barrier_curve, omega_from_alpha
from cwbarriers.barriers import SearchConfig
from cwbarriers.reports import to_svg

for q in (1, 2, 5, 6, 8):
    res = barrier_alpha(BarrierQuery.from_id(f"cw:{q}"))
    print(f"CW_{q}: alpha <= {res.value:.4f}, theta* = ({res.theta_star.t1:.6f}, ...)")

# a lower bound alpha > a gives omega <= 6 / (2 + a)
print("omega bound from alpha = 0.31389:", round(omega_from_alpha(0.31389), 4))

curve = barrier_curve(BarrierQuery.from_id("cw:6"), 0.0, 3.0, 0.1, SearchConfig(theta_step=0.01))
for p, res in curve[::5]:
    print(f"p = {p:.1f}: barrier {res.value:.4f}")

with open("cw6_curve.svg", "w") as fh:
    fh.write(to_svg([(p, r.value) for p, r in curve], title="barrier via CW_6"))
print("wrote cw6_curve.svg")
