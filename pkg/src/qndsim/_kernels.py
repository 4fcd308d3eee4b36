"""Hot numeric kernels.

Each kernel has a numba ``@njit`` implementation and a pure-numpy
implementation with identical semantics.  The numba path is used when numba
imports cleanly and ``QND_DISABLE_NUMBA`` is unset (or ``0``); otherwise the
numpy path is used.  Both are always importable so they can be compared in
tests and benchmarks.
"""

import math
import os

import numpy as np

_CHUNK = 2048


def _numba_requested():
    flag = os.environ.get("QND_DISABLE_NUMBA", "").strip().lower()
    return flag in ("", "0", "false", "no")


try:
    import numba

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - numba is a hard dependency in CI
    numba = None
    HAVE_NUMBA = False


# --------------------------------------------------------------------------
# numpy implementations
# --------------------------------------------------------------------------

def trig_eval_numpy(coeffs, wavenumbers, origin, lo, hi, points):
    """Evaluate sum_m coeffs[m] * exp(i k_m (p - origin)) at each point.

    Points outside ``[lo, hi]`` evaluate to zero.
    """
    points = np.asarray(points, dtype=np.float64)
    out = np.zeros(points.shape[0], dtype=np.complex128)
    inside = np.nonzero((points >= lo) & (points <= hi))[0]
    for start in range(0, inside.size, _CHUNK):
        idx = inside[start:start + _CHUNK]
        phase = np.exp(1j * np.outer(points[idx] - origin, wavenumbers))
        out[idx] = phase @ coeffs
    return out


def gaussian_smear_numpy(weights, nodes, targets, variance, dx):
    """out[i] = dx * sum_j weights[j] * N(targets[i]; nodes[j], variance)."""
    norm = dx / math.sqrt(2.0 * math.pi * variance)
    out = np.empty(targets.shape[0], dtype=np.float64)
    for start in range(0, targets.shape[0], _CHUNK):
        t = targets[start:start + _CHUNK]
        diff = t[:, None] - nodes[None, :]
        out[start:start + _CHUNK] = np.exp(-diff * diff / (2.0 * variance)) @ weights
    return out * norm


# --------------------------------------------------------------------------
# numba implementations
# --------------------------------------------------------------------------

if HAVE_NUMBA:

    @numba.njit(cache=True)
    def trig_eval_numba(coeffs, wavenumbers, origin, lo, hi, points):
        n_pts = points.shape[0]
        n_k = wavenumbers.shape[0]
        out = np.zeros(n_pts, dtype=np.complex128)
        for i in range(n_pts):
            p = points[i]
            if p < lo or p > hi:
                continue
            s = p - origin
            acc_re = 0.0
            acc_im = 0.0
            for m in range(n_k):
                arg = wavenumbers[m] * s
                c = math.cos(arg)
                sn = math.sin(arg)
                cr = coeffs[m].real
                ci = coeffs[m].imag
                acc_re += cr * c - ci * sn
                acc_im += cr * sn + ci * c
            out[i] = complex(acc_re, acc_im)
        return out

    @numba.njit(cache=True)
    def gaussian_smear_numba(weights, nodes, targets, variance, dx):
        norm = dx / math.sqrt(2.0 * math.pi * variance)
        inv = 1.0 / (2.0 * variance)
        n_t = targets.shape[0]
        n_y = nodes.shape[0]
        out = np.empty(n_t, dtype=np.float64)
        for i in range(n_t):
            t = targets[i]
            acc = 0.0
            for j in range(n_y):
                d = t - nodes[j]
                acc += weights[j] * math.exp(-d * d * inv)
            out[i] = acc * norm
        return out

else:  # pragma: no cover
    trig_eval_numba = trig_eval_numpy
    gaussian_smear_numba = gaussian_smear_numpy


USE_NUMBA = HAVE_NUMBA and _numba_requested()
BACKEND = "numba" if USE_NUMBA else "numpy"

if USE_NUMBA:
    trig_eval = trig_eval_numba
    gaussian_smear = gaussian_smear_numba
else:
    trig_eval = trig_eval_numpy
    gaussian_smear = gaussian_smear_numpy
