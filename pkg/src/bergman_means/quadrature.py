"""Quadrature rules on [0, 1] used by the hypergeometric and radial code.

The tanh-sinh rule works with integrands supplied in logarithmic form so
that factors like ``t**(b-1) * (1-t)**(c-b-1)`` never underflow near the
endpoints; the complement ``1 - t`` is produced directly instead of by
subtraction.
"""

from __future__ import annotations

import math
from functools import lru_cache

import numpy as np
from scipy.special import roots_jacobi


def tanh_sinh_nodes(h: float, u_max: float):
    """Nodes of the tanh-sinh rule mapped to [0, 1].

    Returns ``(log_t, log_1mt, t, one_minus_t, log_w)`` where ``log_w`` is the
    log of ``h * dt/du``.
    """
    k = np.arange(-math.ceil(u_max / h), math.ceil(u_max / h) + 1)
    u = k * h
    s = math.pi * np.sinh(u)
    log_t = -np.logaddexp(0.0, -s)
    log_1mt = -np.logaddexp(0.0, s)
    log_w = math.log(h * math.pi) + np.log(np.cosh(u)) + log_t + log_1mt
    return log_t, log_1mt, np.exp(log_t), np.exp(log_1mt), log_w


def tanh_sinh(log_integrand, exponent_floor=1.0, rtol=1e-13, max_level=9):
    """Integrate over [0, 1] an integrand given as ``(log|f|, sign)``.

    ``log_integrand(log_t, log_1mt, t, one_minus_t)`` must return the log of
    the absolute integrand and its sign (or just the log when positive).
    ``exponent_floor`` is the smallest endpoint exponent + 1 (e.g. ``b`` for
    ``t**(b-1)``); it sets how far out the truncated rule must reach.

    Returns ``(value, error_estimate)`` from successive step halving.
    """
    floor = max(min(exponent_floor, 1.0), 1e-3)
    u_max = math.asinh(60.0 / (math.pi * floor)) + 0.5
    prev = None
    err = math.inf
    h = 0.5
    for _ in range(max_level):
        log_t, log_1mt, t, omt, log_w = tanh_sinh_nodes(h, u_max)
        out = log_integrand(log_t, log_1mt, t, omt)
        if isinstance(out, tuple):
            logf, sign = out
        else:
            logf, sign = out, 1.0
        value = float(np.sum(sign * np.exp(logf + log_w)))
        if prev is not None:
            err = abs(value - prev)
            if err <= rtol * max(abs(value), 1e-300):
                return value, err
        prev = value
        h /= 2
    return value, err


@lru_cache(maxsize=256)
def _jacobi(n: int, alpha: float, beta: float):
    x, w = roots_jacobi(n, alpha, beta)
    x.setflags(write=False)
    w.setflags(write=False)
    return x, w


def gauss_jacobi_interval(n, lo, hi, alpha=0.0, beta=0.0):
    """Rule for ``int_lo^hi g(r) (hi-r)**alpha (r-lo)**beta dr``.

    The weights absorb the two endpoint factors; the caller multiplies by the
    remaining smooth part only.
    """
    x, w = _jacobi(int(n), float(alpha), float(beta))
    half = 0.5 * (hi - lo)
    r = lo + half * (x + 1.0)
    scale = half ** (1.0 + alpha + beta)
    return r, w * scale


def gauss_legendre_interval(n, lo, hi):
    return gauss_jacobi_interval(n, lo, hi, 0.0, 0.0)
