"""Pure-numpy implementations of the hot kernels.

These are the fallback for the compiled `weedsvm._kernels` extension and the
reference its outputs are checked against: every function here must produce
bit-identical results to its compiled twin.  That constrains the float
arithmetic to elementwise operations written in the same order as the C code
(no dot-product reductions inside the SMO sweep, no FMA contraction on the
compiled side).
"""

import numpy as np

BACKEND_NAME = "python"

_MASK64 = (1 << 64) - 1


def glcm_counts(gray, levels, drow, dcol):
    """Count co-occurring gray-level pairs at a fixed (row, col) offset.

    Returns an int64 (levels, levels) matrix of raw counts; entry (i, j) is
    the number of positions whose pixel has level i and whose offset
    neighbor has level j.  Symmetrization and normalization are the
    caller's job.
    """
    h, w = gray.shape
    r0, r1 = max(0, -drow), h - max(0, drow)
    c0, c1 = max(0, -dcol), w - max(0, dcol)
    counts = np.zeros((levels, levels), dtype=np.int64)
    if r0 >= r1 or c0 >= c1:
        return counts
    a = gray[r0:r1, c0:c1].astype(np.int64)
    b = gray[r0 + drow:r1 + drow, c0 + dcol:c1 + dcol].astype(np.int64)
    flat = np.bincount((a * levels + b).ravel(), minlength=levels * levels)
    counts += flat.reshape(levels, levels)
    return counts


def lbp_code_map(gray, border, y00, x00, y01, x01, y10, x10, y11, x11,
                 w00, w01, w10, w11, threshold_slack):
    """Compute the LBP code of every interior pixel.

    `gray` is float64; the eight offset arrays and four weight arrays
    describe one bilinear sample per neighbor (offsets pre-clamped so every
    read stays within `border` of the center).  Bit m of the code is set
    when sample m >= center - threshold_slack; the slack absorbs bilinear
    roundoff so exact ties count as "greater or equal".
    """
    h, w = gray.shape
    oh, ow = h - 2 * border, w - 2 * border
    codes = np.zeros((oh, ow), dtype=np.int64)
    center = gray[border:h - border, border:w - border]
    lo = center - threshold_slack
    for m in range(y00.shape[0]):
        g00 = gray[border + y00[m]:border + y00[m] + oh,
                   border + x00[m]:border + x00[m] + ow]
        g01 = gray[border + y01[m]:border + y01[m] + oh,
                   border + x01[m]:border + x01[m] + ow]
        g10 = gray[border + y10[m]:border + y10[m] + oh,
                   border + x10[m]:border + x10[m] + ow]
        g11 = gray[border + y11[m]:border + y11[m] + oh,
                   border + x11[m]:border + x11[m] + ow]
        sample = g00 * w00[m] + g01 * w01[m] + g10 * w10[m] + g11 * w11[m]
        codes |= (sample >= lo).astype(np.int64) << m
    return codes


def _splitmix64(state):
    state = (state + 0x9E3779B97F4A7C15) & _MASK64
    z = state
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
    return state, (z ^ (z >> 31))


def _recentre_bias(alphas, g, y, C, bound_eps):
    """Bias from the current alphas: free-SV average, else the midpoint of
    the interval the bound constraints leave for it.

    The dual objective does not involve the bias, so a pairwise-optimal
    alpha state can coexist with a badly centered running bias whose
    phantom violations no alpha step can fix; recentering resolves that.
    Plain index-order loops so the compiled twin matches bit for bit.
    """
    n = alphas.shape[0]
    total = 0.0
    count = 0
    for k in range(n):
        if bound_eps < alphas[k] < C - bound_eps:
            total += y[k] - g[k]
            count += 1
    if count > 0:
        return total / count
    has_lower = False
    has_upper = False
    lower = 0.0
    upper = 0.0
    for k in range(n):
        at_zero = alphas[k] <= bound_eps
        bound = y[k] - g[k]  # value of b making this margin exactly 1
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


def smo_optimize(K, y, C, tol, max_passes, max_sweeps, seed):
    """Sequential minimal optimization over a precomputed kernel matrix.

    Simplified SMO: scan every index for a KKT violation at `tol`, pair it
    with a seeded-random second index, and solve the two-variable
    subproblem analytically.  A sweep that sees violations but cannot move
    recentres the running bias before the next sweep.  Terminates once
    `max_passes` consecutive sweeps detect no violation, or gives up
    (converged=False) after `max_sweeps` sweeps.

    Returns (alphas, bias, converged, sweeps).  The bias is the running
    estimate used during optimization; callers recompute the final bias
    from the KKT conditions.
    """
    n = K.shape[0]
    alphas = np.zeros(n, dtype=np.float64)
    g = np.zeros(n, dtype=np.float64)  # g[i] = sum_k alpha_k y_k K[k, i]
    b = 0.0
    state = seed & _MASK64
    # multipliers this close to a box bound count as being on it; keeps
    # sub-step-size residuals from ever flagging as violations
    bound_eps = 1e-10 * (1.0 if C < 1.0 else C)
    passes = 0
    sweeps = 0
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
            state, rnd = _splitmix64(state)
            j = (i + 1 + (rnd % (n - 1))) % n
            e_j = g[j] + b - y[j]
            a_i, a_j = alphas[i], alphas[j]
            if y[i] != y[j]:
                lo = max(0.0, a_j - a_i)
                hi = min(C, C + a_j - a_i)
            else:
                lo = max(0.0, a_i + a_j - C)
                hi = min(C, a_i + a_j)
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
            if abs(a_j_new - a_j) < 1e-12:
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
            g += d_i * K[i] + d_j * K[j]
            alphas[i] = a_i_new
            alphas[j] = a_j_new
            changed += 1
        sweeps += 1
        passes = passes + 1 if violations == 0 else 0
        if violations > 0 and changed == 0:
            b = _recentre_bias(alphas, g, y, C, bound_eps)
    return alphas, b, passes >= max_passes, sweeps
