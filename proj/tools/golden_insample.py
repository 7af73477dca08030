#!/usr/bin/env python3
"""Independent numpy reference for `newsreg insample` on the test fixture.

Writes the report table the CLI should produce byte-for-byte:

    python3 tools/golden_insample.py tests/data/fixture > tests/golden/insample.csv
"""
import csv
import sys
from pathlib import Path

import numpy as np

HORIZONS = [0, 1, 3, 6, 9, 12]
SIGNALS = ["nr_good", "nr_bad"]


def read_columns(path):
    with open(path, newline="") as fh:
        rows = [r for r in csv.reader(fh) if r and not r[0].startswith("#")]
    header, body = rows[0], rows[1:]
    return {name: np.array([float(r[i]) for r in body]) for i, name in enumerate(header) if name != "period"}, [
        r[0] for r in body
    ]


def newey_west(X, e, lags):
    u = X * e[:, None]
    meat = u.T @ u
    for j in range(1, lags + 1):
        w = 1.0 - j / (lags + 1.0)
        g = u[j:].T @ u[:-j]
        meat += w * (g + g.T)
    bread = np.linalg.inv(X.T @ X)
    return bread @ meat @ bread


def hodrick(X, next_e, h):
    n, k = X.shape
    meat = np.zeros((k, k))
    for j in range(n + h - 1):
        lo, hi = max(0, j - h + 1), min(j, n - 1)
        z = X[lo : hi + 1].sum(axis=0)
        meat += next_e[j] ** 2 * np.outer(z, z)
    meat /= h * h
    bread = np.linalg.inv(X.T @ X)
    return bread @ meat @ bread


def fmt(v):
    s = "%.4f" % v
    return s[1:] if s.startswith("-") and set(s) <= set("-0.") else s


def main(fixture):
    returns, rperiods = read_columns(Path(fixture) / "returns.csv")
    signals, speriods = read_columns(Path(fixture) / "ratios.csv")
    assert rperiods == speriods, "fixture columns must share one index"
    r = returns["excess_return"]
    T = len(r)
    out = ["# newsreg schema 1", "signal,horizon,beta_pct,t_hodrick,t_nw,r2_pct,n_obs"]
    for name in SIGNALS:
        for h in HORIZONS:
            n = T if h == 0 else T - h
            x = signals[name][:n]
            x = (x - x.mean()) / x.std(ddof=1)
            y = r if h == 0 else np.array([r[t + 1 : t + 1 + h].mean() for t in range(n)])
            X = np.column_stack([np.ones(n), x])
            beta, *_ = np.linalg.lstsq(X, y, rcond=None)
            e = y - X @ beta
            r2 = 1.0 - (e @ e) / ((y - y.mean()) @ (y - y.mean()))
            t_nw = beta[1] / np.sqrt(newey_west(X, e, max(h, 1))[1, 1])
            t_h = ""
            if h >= 1:
                nxt = r[1:] - r[1:].mean()
                t_h = fmt(beta[1] / np.sqrt(hodrick(X, nxt, h)[1, 1]))
            out.append(",".join([name, str(h), fmt(100 * beta[1]), t_h, fmt(t_nw), fmt(100 * r2), str(n)]))
    sys.stdout.write("\n".join(out) + "\n")


if __name__ == "__main__":
    main(sys.argv[1] if len(sys.argv) > 1 else "tests/data/fixture")
