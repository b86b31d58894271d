"""Bergman projection of mode-wise disc functions and its derivatives.

Two independent evaluations are provided: the spectral formula (Taylor
coefficient n from the radial moment of mode n) and tensor-product
quadrature of the reproducing kernel.  The auxiliary boundary operator
``P_r^(n)`` and the layered derivative formula built from it give a third
route to the derivatives.

The spectral coefficient is ``K (n+1) int_0^1 a_n(rho) rho^(n+1) d rho`` with
``K = 2``.  That is the value that makes ``P(1) = 1``; it is recorded on every
result.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import gammaln

from .disc_fn import (
    DEFAULT_ANGULAR,
    AnalyticFunction,
    CircleFunction,
    RadialFourierFunction,
    angular_grid,
    coefficients_to_samples,
    fourier_coefficients,
)
from .errors import ConditioningError, DomainError
from .quadrature import gauss_legendre_interval

NORMALIZATION = 2.0
MAX_KERNEL_RADIUS = 0.95
RADIAL_NODES_PER_PIECE = 64


@dataclass
class ProjectionResult:
    analytic: AnalyticFunction
    normalization_constant_used: float
    radial_integrals: np.ndarray

    @property
    def coefficients(self) -> np.ndarray:
        return self.analytic.coeffs


def project_fourier(f: RadialFourierFunction) -> ProjectionResult:
    """Taylor coefficients of ``P f`` from the radial moments of each mode."""
    top = max((n for n in f.modes if n >= 0), default=0)
    integrals = np.zeros(top + 1, dtype=complex)
    for n, prof in f.modes.items():
        if n < 0:
            continue
        m = prof.moment(n + 1)
        if not np.isfinite(m):
            raise DomainError(f"mode {n} profile is not integrable against rho^{n + 1}")
        integrals[n] += m
    coeffs = NORMALIZATION * np.arange(1, top + 2) * integrals
    return ProjectionResult(AnalyticFunction(coeffs), NORMALIZATION, integrals)


def _radial_rule(f: RadialFourierFunction, nodes: int):
    edges = [0.0, *[b for b in f.breakpoints() if 0 < b < 1], 1.0]
    rs, ws = [], []
    for lo, hi in zip(edges[:-1], edges[1:]):
        r, w = gauss_legendre_interval(nodes, lo, hi)
        rs.append(r)
        ws.append(w)
    return np.concatenate(rs), np.concatenate(ws)


def _polar_samples(f: RadialFourierFunction, rho: np.ndarray, M: int) -> np.ndarray:
    return coefficients_to_samples(f.coefficient_table(rho), M)


def _kernel_integral(f, z, n, angular, radial_nodes):
    z = np.atleast_1d(np.asarray(z, dtype=complex))
    if np.any(np.abs(z) > MAX_KERNEL_RADIUS):
        raise ConditioningError(f"|z| must be <= {MAX_KERNEL_RADIUS} for kernel quadrature")
    M = max(angular, 4 * f.band + 4)
    rho, w = _radial_rule(f, radial_nodes)
    phi = angular_grid(M)
    F = _polar_samples(f, rho, M)
    wbar = rho[:, None] * np.exp(-1j * phi)[None, :]
    # dA = rho d rho d phi; trapezoid weight 2 pi / M in phi
    weight = (w * rho)[:, None] * (2.0 * np.pi / M)
    base = F * weight * wbar**n
    out = np.empty(z.shape, dtype=complex)
    for i, zi in enumerate(z):
        out[i] = np.sum(base / (1.0 - wbar * zi) ** (2 + n))
    return out * math.factorial(n + 1) / math.pi


def project_quadrature(f: RadialFourierFunction, z, angular: int = DEFAULT_ANGULAR,
                       radial_nodes: int = RADIAL_NODES_PER_PIECE):
    """``(1/pi) int_D f(w) / (1 - conj(w) z)^2 dA(w)`` by direct quadrature."""
    out = _kernel_integral(f, z, 0, angular, radial_nodes)
    return out if np.ndim(z) else complex(out[0])


def bp_derivative(f: RadialFourierFunction, n: int, z, angular: int = DEFAULT_ANGULAR,
                  radial_nodes: int = RADIAL_NODES_PER_PIECE):
    """n-th complex derivative of ``P f`` at ``z`` from the differentiated kernel."""
    if n < 0:
        raise DomainError("derivative order must be >= 0")
    out = _kernel_integral(f, z, n, angular, radial_nodes)
    return out if np.ndim(z) else complex(out[0])


def _prn_factors(kmax: int, n: int) -> np.ndarray:
    """``(n+1)! * binom(k+n+1, n+1) = (k+n+1)!/k!`` for ``k = 0..kmax``."""
    k = np.arange(kmax + 1, dtype=float)
    return np.exp(gammaln(k + n + 2) - gammaln(k + 1))


def prn_operator(f: CircleFunction, r: float, n: int) -> CircleFunction:
    """``P_r^(n) f`` as a coefficient-form circle function.

    The kernel ``(1 - r e^{i psi})^{-(2+n)}`` has Fourier coefficients
    ``binom(k+n+1, n+1) r^k`` for ``k >= 0``, so output mode ``k`` is
    ``(n+1)! binom(k+n+1, n+1) r^(n+k) a_{k+n}``.
    """
    if n < 0:
        raise DomainError("n must be >= 0")
    if not (0.0 <= r < 1.0):
        raise DomainError(f"P_r^(n) needs 0 <= r < 1, got {r}")
    if not f.is_coefficients:
        f = fourier_coefficients(f, f.samples.size // 2 - 1)
    N = f.band
    top = N - n
    if top < 0:
        return CircleFunction(coeffs=np.zeros(1, dtype=complex))
    k = np.arange(top + 1)
    src = f.coeffs[N + n : N + n + top + 1]
    vals = _prn_factors(top, n) * r ** (k + n) * src
    return CircleFunction(coeffs=np.concatenate([np.zeros(top, dtype=complex), vals]))


def derivative_via_prn(f: RadialFourierFunction, n: int, z, angular: int = DEFAULT_ANGULAR,
                       radial_nodes: int = RADIAL_NODES_PER_PIECE) -> complex:
    """Layered form ``2 int_0^1 rho r^{-n} P_{r rho}^(n) f_rho(e^{i theta}) d rho``.

    Each circle ``f_rho`` is sampled on the angular grid and transformed; the
    factor ``r^{-n}`` is cancelled against ``(r rho)^n`` analytically so that
    ``z = 0`` is allowed.
    """
    if n < 0:
        raise DomainError("derivative order must be >= 0")
    z = complex(z)
    r, theta = abs(z), math.atan2(z.imag, z.real)
    if r > MAX_KERNEL_RADIUS:
        raise ConditioningError(f"|z| must be <= {MAX_KERNEL_RADIUS}")
    M = max(angular, 4 * f.band + 4)
    rho, w = _radial_rule(f, radial_nodes)
    spec = np.fft.fft(_polar_samples(f, rho, M), axis=-1) / M
    top = M // 2 - 1 - n
    if top < 0:
        return 0.0j
    k = np.arange(top + 1)
    fac = _prn_factors(top, n)
    phase = np.exp(1j * k * theta)
    layer = (spec[:, n : n + top + 1] * (r * rho[:, None]) ** k) @ (fac * phase)
    return complex(2.0 * np.sum(w * rho * rho**n * layer))
