"""Exact 10%-90% rise times of rc_line.cir stages.

The ladder is linear: C dv/dt = -G v + g1 u(t). With the input ramp folded
in piecewise, the response is integrated exactly through the matrix
exponential on a fine grid and crossings are located by root refinement.
"""
import numpy as np
from scipy.linalg import expm
from scipy.optimize import brentq

N, R, C = 5, 1e3, 1e-9
DELAY, RISE = 1e-6, 1e-9
g = 1 / R
G = np.zeros((N, N))
for k in range(N):
    G[k, k] += g
    if k > 0:
        G[k, k - 1] -= g
        G[k - 1, k] -= g
        G[k - 1, k - 1] += g
A = -G / C
b = np.zeros(N)
b[0] = g / C
Ainv = np.linalg.inv(A)


def state(t):
    """Exact response to u = ramp from DELAY to DELAY+RISE then 1 (zero before)."""
    def ramp_resp(tau):
        # response to u(t) = t (unit slope ramp) starting at 0 from rest
        if tau <= 0:
            return np.zeros(N)
        E = expm(A * tau)
        return Ainv @ (Ainv @ ((E - np.eye(N)) @ b)) - Ainv @ b * tau
    return (ramp_resp(t - DELAY) - ramp_resp(t - DELAY - RISE)) / RISE


def crossing(k, level):
    ts = np.linspace(DELAY, 50e-6, 2001)
    vs = [state(t)[k] - level for t in ts]
    for i in range(len(ts) - 1):
        if vs[i] < 0 <= vs[i + 1]:
            return brentq(lambda t: state(t)[k] - level, ts[i], ts[i + 1], xtol=1e-15)
    raise RuntimeError("no crossing")


final = -Ainv @ b
for k in range(N):
    lo, hi = 0.1 * final[k], 0.9 * final[k]
    print(f"s{k + 1}: rise 10-90 = {crossing(k, hi) - crossing(k, lo):.17g} s")
