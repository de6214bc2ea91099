# Dense dynamic-programming oracle for one-factor take-or-pay contracts.
#
# Backward induction over (date, cumulative volume, factor state) with the
# factor on a uniform grid and exact OU transitions integrated by
# Gauss-Hermite quadrature. Integer local controls only. This is the source
# of the reference constants embedded in tests/acceptance/acceptance_paper.cpp;
# run with no arguments to recompute them all (a few minutes for the monthly
# grids, ~15 minutes for the two n=365 values).
#
# Usage:
#   python3 tools/dp_oracle.py                # recompute all embedded constants
#   python3 tools/dp_oracle.py '{"n":30,"T":1,"grid":"k/n","alpha":4,"sigma":0.7,
#     "F0":20,"K":20,"qmin":0,"qmax":1,"Qmin":20,"Qmax":25}'
import json
import sys

import numpy as np


def price(n, times, alpha, sigma, F0, K, qmin, qmax, Qmin, Qmax, nx=801, nh=41, xspan=6.0):
    """Optimal value of a firm take-or-pay contract, one OU factor.

    times holds the decision dates t_0..t_{n-1} (extra entries are ignored).
    The factor X_t is centered OU from X_0 = 0 with var v(t); the spot is the
    martingale S_k = F0 exp(X_k - v(t_k)/2). Controls are integers in
    [qmin, qmax] clipped to keep the cumulative volume able to reach
    [Qmin, Qmax] by date n.
    """
    v = lambda t: sigma * sigma * (1.0 - np.exp(-2.0 * alpha * t)) / (2.0 * alpha)
    lam2 = np.array([v(times[k]) for k in range(n)])
    smax = np.sqrt(max(lam2[-1], 1e-18))
    xg = np.linspace(-xspan * smax, xspan * smax, nx)
    gh_x, gh_w = np.polynomial.hermite_e.hermegauss(nh)  # nodes/weights for N(0,1)
    gh_w = gh_w / np.sqrt(2.0 * np.pi)

    # Cumulative levels 0..Qmax; feasible window before acting at date k.
    nq = Qmax + 1
    lo_k = [max(0, Qmin - (n - k) * qmax) for k in range(n + 1)]
    hi_k = [min(Qmax, k * qmax) for k in range(n + 1)]

    V = np.zeros((nq, nx))  # terminal value: zero on feasible levels
    for k in range(n - 1, -1, -1):
        S = F0 * np.exp(xg - lam2[k] / 2.0)
        payoff = S - K  # per unit taken
        if k + 1 < n:
            dt = times[k + 1] - times[k]
            dec = np.exp(-alpha * dt)
            sd = np.sqrt(sigma * sigma * (1.0 - np.exp(-2.0 * alpha * dt)) / (2.0 * alpha))
            xp = dec * xg[:, None] + sd * gh_x[None, :]
            C = np.zeros_like(V)
            for Q in range(lo_k[k + 1], hi_k[k + 1] + 1):
                interp = np.interp(xp.ravel(), xg, V[Q], left=V[Q][0], right=V[Q][-1])
                C[Q] = (interp.reshape(nx, nh) * gh_w[None, :]).sum(axis=1)
        else:
            C = np.zeros_like(V)
        Vn = np.full_like(V, -1e30)
        for Q in range(lo_k[k], hi_k[k] + 1):
            qlo = max(qmin, Qmin - Q - (n - k - 1) * qmax, 0)
            qhi = min(qmax, Qmax - Q)
            best = None
            for q in range(qlo, qhi + 1):
                val = q * payoff + C[Q + q]
                best = val if best is None else np.maximum(best, val)
            Vn[Q] = best
        V = Vn

    # Date-0 state may already carry variance (t_0 > 0): integrate over it.
    v0 = v(times[0])
    if v0 > 1e-14:
        val = np.interp(np.sqrt(v0) * gh_x, xg, V[0])
        return float((val * gh_w).sum())
    return float(np.interp(0.0, xg, V[0]))


def _times(n, T, conv):
    if conv == "k/n":
        return [k * T / n for k in range(n)]
    if conv == "k+1/365":
        return [(k + 1) / 365.0 for k in range(n)]
    raise ValueError(conv)


# Embedded-constant definitions: (label, kwargs). "month" = 31-day delivery
# month priced daily at ACT/365; "defaults" = n=30 over one year, t_k = k/30.
CASES = [
    ("base defaults", dict(n=30, conv="k/n", K=20, qmin=0, qmax=1, Qmin=20, Qmax=25)),
    ("base month", dict(n=31, conv="k+1/365", K=20, qmin=0, qmax=1, Qmin=20, Qmax=25)),
    ("strike-19 defaults", dict(n=30, conv="k/n", K=19, qmin=0, qmax=1, Qmin=20, Qmax=25)),
    ("floor-15 defaults", dict(n=30, conv="k/n", K=20, qmin=0, qmax=1, Qmin=15, Qmax=25)),
    ("floor-0 defaults", dict(n=30, conv="k/n", K=20, qmin=0, qmax=1, Qmin=0, Qmax=25)),
    ("strike-19 month", dict(n=31, conv="k+1/365", K=19, qmin=0, qmax=1, Qmin=20, Qmax=25)),
    ("floor-15 month", dict(n=31, conv="k+1/365", K=20, qmin=0, qmax=1, Qmin=15, Qmax=25)),
    ("floor-0 month", dict(n=31, conv="k+1/365", K=20, qmin=0, qmax=1, Qmin=0, Qmax=25)),
    ("bench-140 month", dict(n=31, conv="k+1/365", K=20, qmin=0, qmax=6, Qmin=140, Qmax=200)),
    ("bench-170 month", dict(n=31, conv="k+1/365", K=20, qmin=0, qmax=6, Qmin=170, Qmax=200)),
    # n=365 state grids are reduced (601 points, 21 nodes): ~1e-3 relative accuracy.
    ("bench-140 n365", dict(n=365, conv="k/n", K=20, qmin=0, qmax=6, Qmin=140, Qmax=200,
                            nx=601, nh=21)),
    ("bench-170 n365", dict(n=365, conv="k/n", K=20, qmin=0, qmax=6, Qmin=170, Qmax=200,
                            nx=601, nh=21)),
]


def main():
    if len(sys.argv) > 1:
        cfg = json.loads(sys.argv[1])
        times = cfg.get("times") or _times(cfg["n"], cfg.get("T", 1.0), cfg.get("grid", "k/n"))
        p = price(cfg["n"], times, cfg["alpha"], cfg["sigma"], cfg["F0"], cfg["K"],
                  cfg["qmin"], cfg["qmax"], cfg["Qmin"], cfg["Qmax"],
                  nx=cfg.get("nx", 801), nh=cfg.get("nh", 41))
        print(f"{p:.6f}")
        return
    for label, kw in CASES:
        conv = kw.pop("conv")
        n = kw.pop("n")
        p = price(n=n, times=_times(n, 1.0, conv), alpha=4.0, sigma=0.7, F0=20.0, **kw)
        print(f"{label}: {p:.6f}", flush=True)


if __name__ == "__main__":
    main()
