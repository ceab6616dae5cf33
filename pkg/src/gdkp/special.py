"""Branch-safe trigonometric kernels.

cos(q) and sinc(q) = sin(q)/q enter every spectral formula through
w = q**2 = eps**2 - m**2, which changes sign at the mass-gap edges.  Both are
entire functions of w, so evaluating them in terms of w removes all branch
bookkeeping: w > 0 gives circular trig, w < 0 hyperbolic trig, and a short
power series covers w ~ 0 (the band edges).
"""

from __future__ import annotations

import cmath
import math

import numpy as np

# |w| below this is evaluated by series; relative error < 1e-26 there.
_W_SERIES = 1e-8


def cos_sqrt(w: float) -> float:
    """cos(sqrt(w)) for real w of either sign."""
    if abs(w) < _W_SERIES:
        return 1.0 - w / 2.0 + w * w / 24.0
    if w > 0.0:
        return math.cos(math.sqrt(w))
    s = math.sqrt(-w)
    return math.cosh(s)


def sinc_sqrt(w: float) -> float:
    """sin(sqrt(w))/sqrt(w) for real w of either sign."""
    if abs(w) < _W_SERIES:
        return 1.0 - w / 6.0 + w * w / 120.0
    if w > 0.0:
        q = math.sqrt(w)
        return math.sin(q) / q
    s = math.sqrt(-w)
    return math.sinh(s) / s


def cos_sqrt_arr(w: np.ndarray) -> np.ndarray:
    """Vectorized cos_sqrt."""
    w = np.asarray(w, dtype=float)
    out = np.empty_like(w)
    small = np.abs(w) < _W_SERIES
    pos = (w > 0) & ~small
    neg = (w < 0) & ~small
    out[small] = 1.0 - w[small] / 2.0 + w[small] ** 2 / 24.0
    out[pos] = np.cos(np.sqrt(w[pos]))
    out[neg] = np.cosh(np.sqrt(-w[neg]))
    return out


def sinc_sqrt_arr(w: np.ndarray) -> np.ndarray:
    """Vectorized sinc_sqrt."""
    w = np.asarray(w, dtype=float)
    out = np.empty_like(w)
    small = np.abs(w) < _W_SERIES
    pos = (w > 0) & ~small
    neg = (w < 0) & ~small
    out[small] = 1.0 - w[small] / 6.0 + w[small] ** 2 / 120.0
    q = np.sqrt(w[pos])
    out[pos] = np.sin(q) / q
    s = np.sqrt(-w[neg])
    out[neg] = np.sinh(s) / s
    return out


def csinc(z: complex) -> complex:
    """sin(z)/z for complex z, series-stabilized near z = 0."""
    if abs(z) < 1e-4:
        z2 = z * z
        return 1.0 - z2 / 6.0 + z2 * z2 / 120.0 - z2 * z2 * z2 / 5040.0
    return cmath.sin(z) / z


def wrap_momentum(k: float) -> float:
    """Reduce a momentum into the Brillouin zone [-pi, pi)."""
    return (k + math.pi) % (2.0 * math.pi) - math.pi
