#!/usr/bin/env python3
"""Brute-force minimization of the cost-to-go relaxation.

The planner bounds the remaining cost from (stage j, speed v) by relaxing
the suffix to two decision variables: the terminal speed v_end and a single
representative speed v_bar, giving

    F(v_end, v_bar) = fs * max(0, dE) + E / v_bar + beta * (v_end - v_ref)^2
    dE = m/2 * (v_end^2 - v^2) + W_grade + dw * v_bar^2

This script recomputes the minimum on a refined grid, independent of the
closed-form/golden-section logic, for two frozen test cases on the toy
truck (phi = 10, beta = 10, ds = 25, n = 6 stages).
"""

import numpy as np

MASS = 40000.0
RHO, CD, AF = 1.188, 0.56, 10.0
G, CRR = 9.81, 0.0055
Q, ETA_OPT = 42600.0, 0.45
PHI, BETA, DS, N = 10.0, 10.0, 25.0, 6
W_FUEL = 1.0 / (1.0 + PHI)
W_TIME = PHI / (1.0 + PHI)
FS = W_FUEL / (Q * ETA_OPT)


def grid_min(j, v, grade, lo, hi, v_ref):
    stages_left = N - j
    wd = stages_left * MASS * G * (CRR * np.cos(grade) + np.sin(grade)) * DS
    dw = 0.5 * RHO * CD * AF * DS * stages_left
    e = W_TIME * DS * stages_left

    def sweep(end_lo, end_hi, bar_lo, bar_hi, pts):
        v_end = np.linspace(end_lo, end_hi, pts)[:, None]
        v_bar = np.linspace(bar_lo, bar_hi, pts)[None, :]
        d_e = 0.5 * MASS * (v_end**2 - v * v) + wd + dw * v_bar**2
        f = FS * np.maximum(0.0, d_e) + e / v_bar + BETA * (v_end - v_ref) ** 2
        k = np.unravel_index(np.argmin(f), f.shape)
        return (float(f[k]), float(v_end[k[0], 0]), float(v_bar[0, k[1]]))

    pts = 801
    best, be, bb = sweep(lo, hi, lo, hi, pts)
    step = (hi - lo) / (pts - 1)
    for _ in range(6):
        e_lo, e_hi = max(lo, be - 2 * step), min(hi, be + 2 * step)
        b_lo, b_hi = max(lo, bb - 2 * step), min(hi, bb + 2 * step)
        best, be, bb = sweep(e_lo, e_hi, b_lo, b_hi, pts)
        step = max(e_hi - e_lo, b_hi - b_lo) / (pts - 1)
    return best, be, bb


def main():
    np.seterr(all="raise")
    # Case 1: gentle 0.5% uphill, wide corridor -> fuel-free glide region.
    m1 = grid_min(j=2, v=19.0, grade=0.005, lo=15.0, hi=23.0, v_ref=23.0)
    print("case1 min  =", repr(m1[0]))
    print("case1 vend =", repr(m1[1]), " vbar =", repr(m1[2]))
    # Case 2: steep 4% climb -> fuel term active everywhere.
    m2 = grid_min(j=3, v=12.0, grade=0.04, lo=10.0, hi=14.0, v_ref=14.0)
    print("case2 min  =", repr(m2[0]))
    print("case2 vend =", repr(m2[1]), " vbar =", repr(m2[2]))


if __name__ == "__main__":
    main()
