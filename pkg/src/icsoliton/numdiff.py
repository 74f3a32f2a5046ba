"""Finite-difference derivatives along sampled curves.

Identity verification differentiates sampled quantities with 4th-order
central stencils and cross-checks each estimate against the same stencil on
the doubled spacing; disagreement beyond tolerance means the grid cannot
resolve the derivative and the caller should refuse rather than report a
meaningless residual.
"""

from __future__ import annotations

import numpy as np


class ResolutionError(RuntimeError):
    """Difference quotients failed the two-grid convergence check."""


# 4th-order central stencils on uniform grids
_D1 = np.array([1.0, -8.0, 0.0, 8.0, -1.0]) / 12.0
_D2 = np.array([-1.0, 16.0, -30.0, 16.0, -1.0]) / 12.0


def fd_weights(x, x0, m):
    """Derivative weights on arbitrary nodes (Fornberg's recursion).

    Returns an (m+1, len(x)) array whose row k gives the weights of the
    k-th derivative at x0.
    """
    x = np.asarray(x, dtype=float)
    n = x.size
    C = np.zeros((n, m + 1))
    c1 = 1.0
    c4 = x[0] - x0
    C[0, 0] = 1.0
    for i in range(1, n):
        mn = min(i, m)
        c2 = 1.0
        c5 = c4
        c4 = x[i] - x0
        for j in range(i):
            c3 = x[i] - x[j]
            c2 *= c3
            if j == i - 1:
                for k in range(mn, 0, -1):
                    C[i, k] = c1 * (k * C[i - 1, k - 1] - c5 * C[i - 1, k]) / c2
                C[i, 0] = -c1 * c5 * C[i - 1, 0] / c2
            for k in range(mn, 0, -1):
                C[j, k] = (c4 * C[j, k] - k * C[j, k - 1]) / c3
            C[j, 0] = c4 * C[j, 0] / c3
        c1 = c2
    return C.T


def local_derivatives(x, y, i, m=2, width=7):
    """Derivatives of sampled y at node i from a local stencil of ``width``."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    half = width // 2
    lo = max(0, min(i - half, x.size - width))
    sl = slice(lo, lo + width)
    W = fd_weights(x[sl], x[i], m)
    return W @ y[sl]


def _apply_stencil(y, stencil):
    return np.convolve(y, stencil[::-1], mode="valid")


def d1_uniform(y, h):
    """4th-order first derivative at interior nodes [2, len-2)."""
    return _apply_stencil(np.asarray(y, dtype=float), _D1) / h


def d2_uniform(y, h):
    """4th-order second derivative at interior nodes [2, len-2)."""
    return _apply_stencil(np.asarray(y, dtype=float), _D2) / (h * h)


def interior(arr, margin=2):
    """View of arr without ``margin`` samples at each end."""
    return arr[margin:-margin] if margin else arr


def checked_derivatives(y, h, conv_tol=1e-6, min_points=12):
    """(d1, d2, idx) at nodes that pass the two-grid convergence check.

    d1/d2 are 4th-order estimates at interior indices ``idx``; every
    returned node also carries a coarse (2h) estimate that agrees within
    ``conv_tol * (1 + |estimate|)``.  Raises ResolutionError when the grid
    is too short or the estimates do not agree anywhere.
    """
    y = np.asarray(y, dtype=float)
    M = y.size
    if M < min_points:
        raise ResolutionError(f"grid of {M} samples is too coarse to differentiate")
    d1 = d1_uniform(y, h)          # at indices 2 .. M-3
    d2 = d2_uniform(y, h)
    yc = y[::2]                    # spacing 2h, coarse index j <-> fine 2j
    if yc.size < 5:
        raise ResolutionError("grid too coarse for the doubled-spacing check")
    d1c = d1_uniform(yc, 2.0 * h)  # at coarse indices 2 .. len(yc)-3
    d2c = d2_uniform(yc, 2.0 * h)
    idx = []
    out1 = []
    out2 = []
    for j in range(d1c.size):
        i = 2 * (j + 2)            # fine index of this coarse interior node
        fi = i - 2                 # position in the fine interior arrays
        if fi < 0 or fi >= d1.size:
            continue
        a1, a2 = d1[fi], d2[fi]
        g1 = abs(a1 - d1c[j])
        g2 = abs(a2 - d2c[j])
        if g1 > conv_tol * (1.0 + abs(a1)) or g2 > conv_tol * (1.0 + abs(a2)):
            raise ResolutionError(
                f"derivative estimates disagree at node {i}: "
                f"gaps {g1:.3e}, {g2:.3e} exceed tolerance {conv_tol:.1e}"
            )
        idx.append(i)
        out1.append(a1)
        out2.append(a2)
    if not idx:
        raise ResolutionError("no nodes available for the convergence check")
    return np.array(out1), np.array(out2), np.array(idx, dtype=int)
