# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled simulation kernels.

Twin of ``_kernels_py.py``; the arithmetic expression order must stay in
sync between the two files so the backends agree bitwise.
"""

from libc.math cimport exp

import numpy as np


def nonlinear_trajectory(u, double y_limit):
    """Second-order rational difference system driven by ``u``, zero history.

    Returns ``(y, bad_index)`` where ``bad_index`` is the first step whose
    magnitude exceeded ``y_limit`` (-1 if the trajectory stayed bounded).
    """
    cdef double[::1] uv = np.ascontiguousarray(u, dtype=np.float64)
    cdef Py_ssize_t steps = uv.shape[0]
    out = np.zeros(steps)
    cdef double[::1] y = out
    cdef double y1 = 0.0, y2 = 0.0, num, den, yn
    cdef Py_ssize_t n
    for n in range(2, steps):
        num = y1 * y2 * (y1 + 2.5)
        den = 1.0 + y1 * y1 + y2 * y2
        yn = num / den + uv[n - 1]
        y[n] = yn
        if yn > y_limit or yn < -y_limit:
            return out, n
        y2 = y1
        y1 = yn
    return out, -1


def cstr_rk4(
    double ca0,
    double temp0,
    tc,
    int substeps,
    double dt,
    double q_over_v,
    double caf,
    double tf,
    double k0,
    double e_over_r,
    double heat_gain,
    double cooling_gain,
    double ca_max,
    double temp_min,
    double temp_max,
):
    """Classical RK4 integration of the two-state reactor.

    Same contract as the pure-Python twin: returns ``(states, bad_step)``.
    """
    cdef double[::1] tcv = np.ascontiguousarray(tc, dtype=np.float64)
    cdef Py_ssize_t samples = tcv.shape[0]
    out = np.empty((samples + 1, 2))
    cdef double[:, ::1] states = out
    cdef double h = dt / substeps
    cdef double h2 = 0.5 * h
    cdef double h6 = h / 6.0
    cdef double ca = ca0
    cdef double temp = temp0
    cdef double tck, r1, f1c, f1t, ca2, t2, r2, f2c, f2t
    cdef double ca3, t3, r3, f3c, f3t, ca4, t4, r4, f4c, f4t
    cdef Py_ssize_t k
    cdef int s
    states[0, 0] = ca
    states[0, 1] = temp
    for k in range(samples):
        tck = tcv[k]
        for s in range(substeps):
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
                return out, k
        states[k + 1, 0] = ca
        states[k + 1, 1] = temp
    return out, -1
