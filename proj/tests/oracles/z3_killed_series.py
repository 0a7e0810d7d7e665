"""Truncated-series oracle for the killed Green function of Z^3 at the origin.

Sums p^U_n(o,o) = P^U_n(o,o) / mu(o) for the simple random walk on Z^3 killed
outside the l1-ball of radius r, by repeated sparse application of the killed
transition matrix.  The killed walk decays geometrically, so the survival
probability after the horizon bounds the neglected tail.
"""
import sys

import numpy as np
import scipy.sparse as sp


def l1_ball(d, r):
    pts = [()]
    for _ in range(d):
        pts = [p + (c,) for p in pts for c in range(-r, r + 1)]
    return [p for p in pts if sum(abs(c) for c in p) <= r]


def killed_series(d, r, horizon):
    pts = l1_ball(d, r)
    index = {p: i for i, p in enumerate(pts)}
    rows, cols = [], []
    for p, i in index.items():
        for k in range(d):
            for s in (-1, 1):
                q = list(p)
                q[k] += s
                j = index.get(tuple(q))
                if j is not None:
                    rows.append(i)
                    cols.append(j)
    n = len(pts)
    P = sp.csr_matrix((np.full(len(rows), 1.0 / (2 * d)), (rows, cols)), shape=(n, n))
    o = index[(0,) * d]
    v = np.zeros(n)
    v[o] = 1.0
    surv = np.ones(n)
    total = 0.0
    for _ in range(horizon + 1):
        total += v[o]
        v = P @ v
    for _ in range(horizon):
        surv = P @ surv
    mu = 2.0 * d
    return total / mu, surv.max(), n


if __name__ == "__main__":
    r = int(sys.argv[1])
    horizon = int(sys.argv[2])
    g, s, n = killed_series(3, r, horizon)
    print(f"r={r} n={n} horizon={horizon} g={g:.15f} max_survival={s:.3e}")
