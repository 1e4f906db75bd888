#!/usr/bin/env python
"""Barriers for omega(2) through CW_q, q = 1..14."""
import time

from cwbarriers import BarrierQuery, barrier_omega

start = time.perf_counter()
print(" q  barrier  theta1  theta2=theta3")
for q in range(1, 15):
    res = barrier_omega(BarrierQuery.from_id(f"cw:{q}", p=2.0))
    t = res.theta_star
    print(f"{q:2d}  {res.value:.4f}  {t.t1:.4f}  {t.t2:.4f}")
print(f"{time.perf_counter() - start:.1f} s")
