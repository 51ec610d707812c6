"""Effective resistances of the lattice decks from the graph Laplacian.

R_ab = (e_a - e_b)^T L^+ (e_a - e_b), L^+ the Moore-Penrose pseudo-inverse.
"""
import numpy as np


def laplacian(rows, cols, g=1.0):
    n = rows * cols
    lap = np.zeros((n, n))
    for i in range(rows):
        for j in range(cols):
            k = i * cols + j
            for di, dj in ((0, 1), (1, 0)):
                ni, nj = i + di, j + dj
                if ni < rows and nj < cols:
                    m = ni * cols + nj
                    lap[k, k] += g
                    lap[m, m] += g
                    lap[k, m] -= g
                    lap[m, k] -= g
    return lap


def r_eff(rows, cols, a, b):
    lp = np.linalg.pinv(laplacian(rows, cols))
    e = np.zeros(rows * cols)
    e[a[0] * cols + a[1]] += 1
    e[b[0] * cols + b[1]] -= 1
    return e @ lp @ e


for name, rows, cols, a, b in (
    ("lattice_2x2_adj", 2, 2, (0, 0), (0, 1)),
    ("lattice_2x2_diag", 2, 2, (0, 0), (1, 1)),
    ("lattice_3x3", 3, 3, (1, 1), (0, 0)),
    ("lattice_5x5", 5, 5, (2, 2), (0, 2)),
):
    print(f"{name}: {r_eff(rows, cols, a, b):.17g}")
