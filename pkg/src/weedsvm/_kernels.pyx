# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled implementations of the hot kernels.

Must stay bit-for-bit compatible with `weedsvm._kernels_py`: same float
operations in the same order (the build disables FP contraction for this
reason).  Any change here needs the matching change there.
"""

import numpy as np

cimport numpy as cnp

cnp.import_array()

BACKEND_NAME = "compiled"


def glcm_counts(cnp.int32_t[:, ::1] gray, int levels, int drow, int dcol):
    cdef Py_ssize_t h = gray.shape[0]
    cdef Py_ssize_t w = gray.shape[1]
    cdef Py_ssize_t r0 = -drow if drow < 0 else 0
    cdef Py_ssize_t r1 = h - (drow if drow > 0 else 0)
    cdef Py_ssize_t c0 = -dcol if dcol < 0 else 0
    cdef Py_ssize_t c1 = w - (dcol if dcol > 0 else 0)
    counts = np.zeros((levels, levels), dtype=np.int64)
    cdef cnp.int64_t[:, ::1] cv = counts
    cdef Py_ssize_t r, c
    if r0 >= r1 or c0 >= c1:
        return counts
    for r in range(r0, r1):
        for c in range(c0, c1):
            cv[gray[r, c], gray[r + drow, c + dcol]] += 1
    return counts


def lbp_code_map(double[:, ::1] gray, int border,
                 int[::1] y00, int[::1] x00, int[::1] y01, int[::1] x01,
                 int[::1] y10, int[::1] x10, int[::1] y11, int[::1] x11,
                 double[::1] w00, double[::1] w01, double[::1] w10, double[::1] w11,
                 double threshold_slack):
    cdef Py_ssize_t h = gray.shape[0]
    cdef Py_ssize_t w = gray.shape[1]
    cdef Py_ssize_t m_count = y00.shape[0]
    codes = np.zeros((h - 2 * border, w - 2 * border), dtype=np.int64)
    cdef cnp.int64_t[:, ::1] out = codes
    cdef Py_ssize_t r, c, m
    cdef double lo, sample
    for r in range(border, h - border):
        for c in range(border, w - border):
            lo = gray[r, c] - threshold_slack
            for m in range(m_count):
                sample = (gray[r + y00[m], c + x00[m]] * w00[m]
                          + gray[r + y01[m], c + x01[m]] * w01[m]
                          + gray[r + y10[m], c + x10[m]] * w10[m]
                          + gray[r + y11[m], c + x11[m]] * w11[m])
                if sample >= lo:
                    out[r - border, c - border] |= (<cnp.int64_t>1) << m
    return codes


cdef inline unsigned long long _splitmix64_next(unsigned long long *state) nogil:
    cdef unsigned long long z
    state[0] = state[0] + <unsigned long long>0x9E3779B97F4A7C15
    z = state[0]
    z = (z ^ (z >> 30)) * <unsigned long long>0xBF58476D1CE4E5B9
    z = (z ^ (z >> 27)) * <unsigned long long>0x94D049BB133111EB
    return z ^ (z >> 31)


cdef double _recentre_bias(double[::1] alphas, double[::1] g, double[::1] y,
                           double C, double bound_eps) nogil:
    # bias from the current alphas: free-SV average, else the midpoint of
    # the interval the bound constraints leave for it (the dual objective
    # is bias-free, so a pairwise-optimal alpha state can coexist with a
    # badly centered running bias whose phantom violations no alpha step
    # can fix); must mirror the numpy fallback bit for bit
    cdef Py_ssize_t n = alphas.shape[0]
    cdef Py_ssize_t k
    cdef double total = 0.0
    cdef long count = 0
    cdef bint at_zero, has_lower = False, has_upper = False
    cdef double bound, lower = 0.0, upper = 0.0
    for k in range(n):
        if bound_eps < alphas[k] < C - bound_eps:
            total += y[k] - g[k]
            count += 1
    if count > 0:
        return total / count
    for k in range(n):
        at_zero = alphas[k] <= bound_eps
        bound = y[k] - g[k]
        if (at_zero and y[k] > 0.0) or (not at_zero and y[k] < 0.0):
            if not has_lower or bound > lower:
                lower = bound
                has_lower = True
        else:
            if not has_upper or bound < upper:
                upper = bound
                has_upper = True
    if has_lower and has_upper:
        return (lower + upper) / 2.0
    if has_lower:
        return lower
    if has_upper:
        return upper
    return 0.0


def smo_optimize(double[:, ::1] K, double[::1] y, double C, double tol,
                 int max_passes, long max_sweeps, unsigned long long seed):
    cdef Py_ssize_t n = K.shape[0]
    alphas_arr = np.zeros(n, dtype=np.float64)
    g_arr = np.zeros(n, dtype=np.float64)
    cdef double[::1] alphas = alphas_arr
    cdef double[::1] g = g_arr
    cdef double b = 0.0
    cdef unsigned long long state = seed
    # multipliers this close to a box bound count as being on it; keeps
    # sub-step-size residuals from ever flagging as violations
    cdef double bound_eps = 1e-10 * (1.0 if C < 1.0 else C)
    cdef int passes = 0
    cdef long sweeps = 0
    cdef Py_ssize_t i, j, k
    cdef int violations, changed
    cdef double e_i, e_j, r_i, a_i, a_j, lo, hi, eta
    cdef double a_i_new, a_j_new, b1, b2, d_i, d_j, step
    while passes < max_passes and sweeps < max_sweeps:
        violations = 0
        changed = 0
        for i in range(n):
            e_i = g[i] + b - y[i]
            r_i = y[i] * e_i
            if not ((r_i < -tol and alphas[i] < C - bound_eps)
                    or (r_i > tol and alphas[i] > bound_eps)):
                continue
            violations += 1
            j = (i + 1 + <Py_ssize_t>(_splitmix64_next(&state) % <unsigned long long>(n - 1))) % n
            e_j = g[j] + b - y[j]
            a_i = alphas[i]
            a_j = alphas[j]
            if y[i] != y[j]:
                lo = a_j - a_i if a_j - a_i > 0.0 else 0.0
                hi = C + a_j - a_i if C + a_j - a_i < C else C
            else:
                lo = a_i + a_j - C if a_i + a_j - C > 0.0 else 0.0
                hi = a_i + a_j if a_i + a_j < C else C
            if lo == hi:
                continue
            eta = 2.0 * K[i, j] - K[i, i] - K[j, j]
            if eta >= 0.0:
                continue
            a_j_new = a_j - y[j] * (e_i - e_j) / eta
            if a_j_new < lo:
                a_j_new = lo
            elif a_j_new > hi:
                a_j_new = hi
            step = a_j_new - a_j
            if (step if step >= 0.0 else -step) < 1e-12:
                continue
            a_i_new = a_i + y[i] * y[j] * (a_j - a_j_new)
            if a_i_new < 0.0:  # roundoff can push past the box
                a_i_new = 0.0
            elif a_i_new > C:
                a_i_new = C
            b1 = b - e_i - y[i] * (a_i_new - a_i) * K[i, i] - y[j] * (a_j_new - a_j) * K[i, j]
            b2 = b - e_j - y[i] * (a_i_new - a_i) * K[i, j] - y[j] * (a_j_new - a_j) * K[j, j]
            if 0.0 < a_i_new < C:
                b = b1
            elif 0.0 < a_j_new < C:
                b = b2
            else:
                b = (b1 + b2) / 2.0
            d_i = y[i] * (a_i_new - a_i)
            d_j = y[j] * (a_j_new - a_j)
            for k in range(n):
                g[k] = g[k] + (d_i * K[i, k] + d_j * K[j, k])
            alphas[i] = a_i_new
            alphas[j] = a_j_new
            changed += 1
        sweeps += 1
        passes = passes + 1 if violations == 0 else 0
        if violations > 0 and changed == 0:
            b = _recentre_bias(alphas, g, y, C, bound_eps)
    return alphas_arr, b, passes >= max_passes, sweeps
