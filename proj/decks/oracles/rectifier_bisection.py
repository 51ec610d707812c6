"""Junction voltage of rectifier.cir by bisection on the scalar KCL equation.

(5 - v)/R = IS*(exp(v/VT) - 1), solved with 60-digit arithmetic.
"""
from mpmath import mp, mpf, exp

mp.dps = 60
VS, R, IS, N, VT = mpf(5), mpf(1000), mpf("1e-14"), mpf(1), mpf("0.025852")


def f(v):
    return (VS - v) / R - IS * (exp(v / (N * VT)) - 1)


lo, hi = mpf(0), VS
for _ in range(200):
    mid = (lo + hi) / 2
    if f(mid) > 0:
        lo = mid
    else:
        hi = mid
v = (lo + hi) / 2
print(f"V(a) = {mp.nstr(v, 17)}")
print(f"I(V1) = {mp.nstr(-(VS - v) / R, 17)}")
