"""Pure-Python simulation kernels (fallback backend).

These loops mirror the compiled kernels in ``_kernels.pyx`` operation for
operation, so both backends produce bitwise-identical trajectories. Keep the
arithmetic expression order in the two files in sync.
"""

from math import exp

import numpy as np


def nonlinear_trajectory(u, y_limit):
    """Second-order rational difference system driven by ``u``, zero history.

    Returns ``(y, bad_index)`` where ``bad_index`` is the first step whose
    magnitude exceeded ``y_limit`` (-1 if the trajectory stayed bounded).
    """
    u = np.ascontiguousarray(u, dtype=np.float64)
    steps = u.shape[0]
    y = np.zeros(steps)
    y1 = 0.0  # y(n-1)
    y2 = 0.0  # y(n-2)
    for n in range(2, steps):
        num = y1 * y2 * (y1 + 2.5)
        den = 1.0 + y1 * y1 + y2 * y2
        yn = num / den + u[n - 1]
        y[n] = yn
        if yn > y_limit or yn < -y_limit:
            return y, n
        y2 = y1
        y1 = yn
    return y, -1


def cstr_rk4(
    ca0,
    temp0,
    tc,
    substeps,
    dt,
    q_over_v,
    caf,
    tf,
    k0,
    e_over_r,
    heat_gain,
    cooling_gain,
    ca_max,
    temp_min,
    temp_max,
):
    """Classical RK4 integration of the two-state reactor.

    ``tc`` holds the coolant temperature, piecewise constant over each of the
    ``len(tc)`` sampling intervals of length ``dt``; each interval is split
    into ``substeps`` RK4 steps. Returns ``(states, bad_step)`` where
    ``states`` has ``len(tc) + 1`` rows of (concentration, temperature) and
    ``bad_step`` is the first sampling interval that left the physical bounds
    (-1 if none did).
    """
    tc = np.ascontiguousarray(tc, dtype=np.float64)
    samples = tc.shape[0]
    states = np.empty((samples + 1, 2))
    h = dt / substeps
    h2 = 0.5 * h
    h6 = h / 6.0
    ca = float(ca0)
    temp = float(temp0)
    states[0, 0] = ca
    states[0, 1] = temp
    for k in range(samples):
        tck = tc[k]
        for _ in range(substeps):
            r1 = k0 * exp(-e_over_r / temp) * ca
            f1c = q_over_v * (caf - ca) - r1
            f1t = q_over_v * (tf - temp) + heat_gain * r1 + cooling_gain * (tck - temp)

            ca2 = ca + h2 * f1c
            t2 = temp + h2 * f1t
            r2 = k0 * exp(-e_over_r / t2) * ca2
            f2c = q_over_v * (caf - ca2) - r2
            f2t = q_over_v * (tf - t2) + heat_gain * r2 + cooling_gain * (tck - t2)

            ca3 = ca + h2 * f2c
            t3 = temp + h2 * f2t
            r3 = k0 * exp(-e_over_r / t3) * ca3
            f3c = q_over_v * (caf - ca3) - r3
            f3t = q_over_v * (tf - t3) + heat_gain * r3 + cooling_gain * (tck - t3)

            ca4 = ca + h * f3c
            t4 = temp + h * f3t
            r4 = k0 * exp(-e_over_r / t4) * ca4
            f4c = q_over_v * (caf - ca4) - r4
            f4t = q_over_v * (tf - t4) + heat_gain * r4 + cooling_gain * (tck - t4)

            ca = ca + h6 * (f1c + 2.0 * f2c + 2.0 * f3c + f4c)
            temp = temp + h6 * (f1t + 2.0 * f2t + 2.0 * f3t + f4t)
            if ca < 0.0 or ca > ca_max or temp < temp_min or temp > temp_max:
                states[k + 1, 0] = ca
                states[k + 1, 1] = temp
                return states, k
        states[k + 1, 0] = ca
        states[k + 1, 1] = temp
    return states, -1
