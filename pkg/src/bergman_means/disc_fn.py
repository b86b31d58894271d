"""Functions on circles and on the disc, integral means, radial quadrature.

A function on the disc is stored mode-wise,
``f(r e^{i theta}) = sum_n a_n(r) e^{i n theta}``, with one radial profile per
Fourier mode.  Functions on a single circle are either trigonometric
coefficient vectors or uniform samples; conversion goes through the FFT.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np
from scipy.special import gammaln

from .errors import AliasingError, DomainError
from .quadrature import gauss_jacobi_interval, gauss_legendre_interval

DEFAULT_ANGULAR = 1024
DEFAULT_RADIAL = 400
MIN_PIECE_NODES = 24


def angular_grid(M: int) -> np.ndarray:
    return 2.0 * np.pi * np.arange(M) / M


def _grid_size(band: int, M: int | None = None) -> int:
    need = 4 * band + 4
    if M is None:
        M = DEFAULT_ANGULAR
    if M < need:
        M = 1 << math.ceil(math.log2(need))
    return M


class CircleFunction:
    """A function on the unit circle, in coefficient or sample form.

    Coefficient form keeps a dense vector for modes ``-band..band``; sample
    form keeps values at ``theta_j = 2 pi j / M``.
    """

    def __init__(self, coeffs=None, samples=None):
        if (coeffs is None) == (samples is None):
            raise ValueError("give exactly one of coeffs / samples")
        if coeffs is not None:
            coeffs = np.asarray(coeffs, dtype=complex)
            if coeffs.ndim != 1 or coeffs.size % 2 != 1:
                raise ValueError("coefficient vector must have odd length 2N+1")
        else:
            samples = np.asarray(samples, dtype=complex)
            if samples.ndim != 1:
                raise ValueError("samples must be one-dimensional")
        self.coeffs = coeffs
        self.samples = samples

    @classmethod
    def from_modes(cls, modes: dict) -> CircleFunction:
        band = max((abs(int(n)) for n in modes), default=0)
        c = np.zeros(2 * band + 1, dtype=complex)
        for n, v in modes.items():
            c[int(n) + band] += v
        return cls(coeffs=c)

    @classmethod
    def from_samples(cls, values) -> CircleFunction:
        return cls(samples=values)

    @classmethod
    def from_callable(cls, func, M: int = DEFAULT_ANGULAR) -> CircleFunction:
        return cls(samples=func(angular_grid(M)))

    @property
    def is_coefficients(self) -> bool:
        return self.coeffs is not None

    @property
    def band(self) -> int:
        if self.coeffs is None:
            raise ValueError("sample-form function has no declared band")
        return (self.coeffs.size - 1) // 2

    def coeff(self, n: int) -> complex:
        N = self.band
        return complex(self.coeffs[n + N]) if abs(n) <= N else 0.0j

    def modes(self) -> dict:
        N = self.band
        return {n - N: complex(v) for n, v in enumerate(self.coeffs) if v != 0}

    def to_samples(self, M: int | None = None) -> np.ndarray:
        if self.samples is not None:
            if M is not None and M != self.samples.size:
                raise ValueError("resampling a sample-form function is not supported")
            return self.samples
        return coefficients_to_samples(self.coeffs, _grid_size(self.band, M))

    def evaluate(self, theta) -> np.ndarray:
        N = self.band
        n = np.arange(-N, N + 1)
        theta = np.asarray(theta, dtype=float)
        return np.exp(1j * np.multiply.outer(theta, n)) @ self.coeffs


def coefficients_to_samples(coeffs: np.ndarray, M: int) -> np.ndarray:
    """Samples of ``sum a_n e^{i n theta}`` on the M-point grid (last axis)."""
    coeffs = np.asarray(coeffs, dtype=complex)
    N = (coeffs.shape[-1] - 1) // 2
    if M < 2 * N + 1:
        raise AliasingError(f"M = {M} cannot carry band {N}")
    buf = np.zeros(coeffs.shape[:-1] + (M,), dtype=complex)
    buf[..., : N + 1] = coeffs[..., N:]
    if N:
        buf[..., M - N :] = coeffs[..., :N]
    return np.fft.ifft(buf, axis=-1) * M


def fourier_coefficients(f: CircleFunction, band: int) -> CircleFunction:
    """DFT coefficients ``a_n`` for ``|n| <= band`` of a sampled function."""
    samples = f.to_samples()
    M = samples.size
    if band < 0 or band > M // 2 - 1:
        raise AliasingError(f"band {band} exceeds M/2 - 1 = {M // 2 - 1}")
    spec = np.fft.fft(samples) / M
    idx = np.arange(-band, band + 1) % M
    return CircleFunction(coeffs=spec[idx])


def integral_mean(f: CircleFunction, p: float, M: int | None = None) -> float:
    """``M_p`` of a circle function: normalized L^p mean, or grid max for p = inf."""
    samples = f.to_samples(M) if f.is_coefficients else f.samples
    return _mean_of_samples(np.abs(samples), p)


def _mean_of_samples(mod: np.ndarray, p: float, axis=-1):
    if mod.shape[axis] == 0:
        raise DomainError("empty sample set")
    if not p > 0:
        raise DomainError(f"p must be positive, got {p}")
    if math.isinf(p):
        return mod.max(axis=axis)
    top = mod.max(axis=axis, keepdims=True)
    safe = np.where(top > 0, top, 1.0)
    out = np.mean((mod / safe) ** p, axis=axis) ** (1.0 / p) * np.squeeze(safe, axis=axis)
    return float(out) if np.ndim(out) == 0 else out


def sample_means(samples: np.ndarray, p: float) -> np.ndarray:
    """Row-wise integral means of a stack of sampled circles."""
    return _mean_of_samples(np.abs(samples), p, axis=-1)


def sup_modulus(coeffs, M: int | None = None, steps: int = 6) -> np.ndarray:
    """Row-wise ``max_theta |sum a_n e^{i n theta}|`` for stacked coefficient rows.

    The grid maximum is polished by Newton steps on ``|f|^2`` (step clipped
    to one grid cell), so the result does not depend on grid alignment.
    """
    coeffs = np.atleast_2d(np.asarray(coeffs, dtype=complex))
    N = (coeffs.shape[-1] - 1) // 2
    M = _grid_size(N, M)
    samples = np.abs(coefficients_to_samples(coeffs, M))
    idx = np.argmax(samples, axis=-1)
    best = samples[np.arange(samples.shape[0]), idx]
    theta = 2.0 * np.pi * idx / M
    n = np.arange(-N, N + 1)
    for _ in range(steps):
        E = coeffs * np.exp(1j * np.multiply.outer(theta, n))
        f0 = E.sum(-1)
        f1 = (E * (1j * n)).sum(-1)
        f2 = (E * -(n**2)).sum(-1)
        g1 = 2.0 * np.real(np.conj(f0) * f1)
        g2 = 2.0 * (np.abs(f1) ** 2 + np.real(np.conj(f0) * f2))
        with np.errstate(divide="ignore", invalid="ignore"):
            step = np.where(g2 < 0, -g1 / g2, 0.0)
        theta = theta + np.clip(np.nan_to_num(step), -np.pi / M, np.pi / M)
    final = np.abs((coeffs * np.exp(1j * np.multiply.outer(theta, n))).sum(-1))
    return np.maximum(best, final)


def circle_means(coeffs, p: float, M: int | None = None) -> np.ndarray:
    """Integral means of stacked coefficient rows; p = inf uses ``sup_modulus``."""
    coeffs = np.atleast_2d(np.asarray(coeffs, dtype=complex))
    if math.isinf(p):
        return sup_modulus(coeffs, M)
    N = (coeffs.shape[-1] - 1) // 2
    return np.atleast_1d(sample_means(coefficients_to_samples(coeffs, _grid_size(N, M)), p))


def _as_coefficients(f: CircleFunction) -> CircleFunction:
    if f.is_coefficients:
        return f
    return fourier_coefficients(f, f.samples.size // 2 - 1)


def theta_derivative(f: CircleFunction, k: int) -> CircleFunction:
    """Spectral k-th derivative in theta: ``a_n -> (i n)^k a_n``."""
    if k < 0:
        raise DomainError("derivative order must be >= 0")
    f = _as_coefficients(f)
    if k == 0:
        return f
    N = f.band
    n = np.arange(-N, N + 1)
    return CircleFunction(coeffs=(1j * n) ** k * f.coeffs)


def twist(f: CircleFunction, n: int) -> CircleFunction:
    """Multiply by ``e^{-i n theta}`` (mode m moves to m - n)."""
    f = _as_coefficients(f)
    N = f.band
    out = np.zeros(2 * (N + abs(n)) + 1, dtype=complex)
    off = N + abs(n)
    out[off - N - n : off + N - n + 1] = f.coeffs
    return CircleFunction(coeffs=out)


def twisted_derivative_coeffs(coeffs: np.ndarray, n: int, k: int) -> np.ndarray:
    """Coefficients of ``d^k/dtheta^k (e^{-i n theta} f)`` for stacked rows.

    The result has band ``N + |n|``; mode m carries ``(i m)^k a_{m+n}``.
    """
    coeffs = np.asarray(coeffs, dtype=complex)
    N = (coeffs.shape[-1] - 1) // 2
    band = N + abs(n)
    out = np.zeros(coeffs.shape[:-1] + (2 * band + 1,), dtype=complex)
    out[..., band - N - n : band + N - n + 1] = coeffs
    if k:
        m = np.arange(-band, band + 1)
        out = out * (1j * m) ** k
    return out


# ---------------------------------------------------------------- profiles


class Profile:
    """Radial profile ``a(r)`` on [0, 1)."""

    breakpoints: tuple = ()
    support_end: float = 1.0

    def __call__(self, r):
        raise NotImplementedError

    def moment(self, k: float) -> complex:
        """``int_0^1 a(r) r^k dr``."""
        raise NotImplementedError

    def __mul__(self, alpha):
        return ScaledProfile(alpha, self)

    __rmul__ = __mul__

    def __add__(self, other):
        return SumProfile((self, other))


class PolynomialProfile(Profile):
    def __init__(self, coeffs):
        self.coeffs = np.asarray(coeffs, dtype=complex)

    def __call__(self, r):
        return np.polynomial.polynomial.polyval(np.asarray(r, dtype=float), self.coeffs)

    def moment(self, k):
        i = np.arange(self.coeffs.size)
        return complex(np.sum(self.coeffs / (i + k + 1.0)))

    def __repr__(self):
        return f"PolynomialProfile({self.coeffs.tolist()})"


class MonomialProfile(Profile):
    """``coeff * r**power``; cheap stand-in for a long PolynomialProfile."""

    def __init__(self, coeff, power):
        self.coeff = complex(coeff)
        self.power = float(power)

    def __call__(self, r):
        return self.coeff * np.asarray(r, dtype=float) ** self.power

    def moment(self, k):
        return self.coeff / (self.power + k + 1.0)


class PiecewiseConstantProfile(Profile):
    """``values[i]`` on ``[edges[i], edges[i+1])``, zero elsewhere.

    ``complements`` optionally carries ``1 - edges`` to full relative
    precision; moments then use ``exp(k log1p(-d))`` for edges close to 1.
    """

    def __init__(self, edges, values, complements=None):
        edges = np.asarray(edges, dtype=float)
        values = np.asarray(values, dtype=complex)
        if edges.ndim != 1 or edges.size != values.size + 1:
            raise DomainError("need len(edges) == len(values) + 1")
        if edges[0] < 0 or edges[-1] > 1 or np.any(np.diff(edges) <= 0):
            raise DomainError("edges must increase strictly inside [0, 1]")
        self.edges = edges
        self.values = values
        self.complements = None if complements is None else np.asarray(complements, dtype=float)
        self.breakpoints = tuple(float(e) for e in edges if 0.0 < e < 1.0)
        last = np.nonzero(values)[0]
        self.support_end = float(edges[last[-1] + 1]) if last.size else 0.0

    def __call__(self, r):
        r = np.asarray(r, dtype=float)
        idx = np.searchsorted(self.edges, r, side="right") - 1
        inside = (idx >= 0) & (idx < self.values.size)
        out = np.zeros(r.shape, dtype=complex)
        out[inside] = self.values[idx[inside]]
        return out

    def _powers(self, e):
        if self.complements is None:
            return self.edges**e
        with np.errstate(divide="ignore"):
            return np.exp(e * np.log1p(-self.complements))

    def moment(self, k):
        pw = self._powers(k + 1.0)
        return complex(np.sum(self.values * np.diff(pw)) / (k + 1.0))


def smooth_step(t):
    """C-infinity step: 0 for t <= 0, 1 for t >= 1."""
    t = np.asarray(t, dtype=float)
    out = np.where(t >= 1.0, 1.0, 0.0)
    mid = (t > 0) & (t < 1)
    if np.any(mid):
        tm = t[mid]
        a = np.exp(-1.0 / tm)
        b = np.exp(-1.0 / (1.0 - tm))
        out = out.astype(float)
        out[mid] = a / (a + b)
    return out


class BumpProfile(Profile):
    """Smooth bump supported in ``(lo, hi)``, equal to ``amplitude`` on the
    central ``plateau_fraction`` of the interval."""

    def __init__(self, lo, hi, plateau_fraction=0.9, amplitude=1.0):
        if not (0 <= lo < hi <= 1):
            raise DomainError("need 0 <= lo < hi <= 1")
        if not (0 < plateau_fraction < 1):
            raise DomainError("plateau_fraction must lie in (0, 1)")
        self.lo, self.hi = float(lo), float(hi)
        self.plateau_fraction = float(plateau_fraction)
        self.amplitude = complex(amplitude)
        self.ramp = 0.5 * (1.0 - self.plateau_fraction)
        w = self.hi - self.lo
        self.plateau = (self.lo + self.ramp * w, self.hi - self.ramp * w)
        self.breakpoints = tuple(x for x in (self.lo, *self.plateau, self.hi) if 0 < x < 1)
        self.support_end = self.hi

    def shape(self, s):
        s = np.asarray(s, dtype=float)
        return smooth_step(s / self.ramp) * smooth_step((1.0 - s) / self.ramp)

    def __call__(self, r):
        s = (np.asarray(r, dtype=float) - self.lo) / (self.hi - self.lo)
        return self.amplitude * self.shape(s)

    def moment(self, k, nodes=200):
        p0, p1 = self.plateau
        total = (p1 ** (k + 1) - p0 ** (k + 1)) / (k + 1.0)
        for a, b in ((self.lo, p0), (p1, self.hi)):
            r, w = gauss_legendre_interval(nodes, a, b)
            total += np.sum(w * self.shape((r - self.lo) / (self.hi - self.lo)).real * r**k)
        return self.amplitude * total


class SampledProfile(Profile):
    """Piecewise-linear interpolation through ``(nodes, values)``; zero past
    the last node."""

    def __init__(self, nodes, values):
        nodes = np.asarray(nodes, dtype=float)
        values = np.asarray(values, dtype=complex)
        if nodes.size < 2 or nodes.size != values.size:
            raise DomainError("need matching node/value arrays of length >= 2")
        if nodes[0] < 0 or nodes[-1] > 1 or np.any(np.diff(nodes) <= 0):
            raise DomainError("nodes must increase strictly inside [0, 1]")
        self.nodes, self.values = nodes, values
        self.breakpoints = tuple(float(x) for x in nodes if 0 < x < 1)
        self.support_end = float(nodes[-1])

    def __call__(self, r):
        r = np.asarray(r, dtype=float)
        re = np.interp(r, self.nodes, self.values.real, left=self.values[0].real, right=0.0)
        im = np.interp(r, self.nodes, self.values.imag, left=self.values[0].imag, right=0.0)
        return re + 1j * im

    def moment(self, k):
        x0, x1 = self.nodes[:-1], self.nodes[1:]
        y0, y1 = self.values[:-1], self.values[1:]
        slope = (y1 - y0) / (x1 - x0)
        icpt = y0 - slope * x0
        mom = icpt * (x1 ** (k + 1) - x0 ** (k + 1)) / (k + 1) + slope * (x1 ** (k + 2) - x0 ** (k + 2)) / (k + 2)
        head = 0.0
        if self.nodes[0] > 0:
            head = self.values[0] * self.nodes[0] ** (k + 1) / (k + 1)
        return complex(np.sum(mom) + head)


class ScaledProfile(Profile):
    def __init__(self, alpha, base):
        self.alpha = complex(alpha)
        self.base = base
        self.breakpoints = base.breakpoints
        self.support_end = base.support_end if alpha != 0 else 0.0

    def __call__(self, r):
        return self.alpha * self.base(r)

    def moment(self, k):
        return self.alpha * self.base.moment(k)


class SumProfile(Profile):
    def __init__(self, parts):
        self.parts = tuple(parts)
        self.breakpoints = tuple(sorted({b for p in self.parts for b in p.breakpoints}))
        self.support_end = max(p.support_end for p in self.parts)

    def __call__(self, r):
        return sum(p(r) for p in self.parts)

    def moment(self, k):
        return sum(p.moment(k) for p in self.parts)


@dataclass
class RadialFourierFunction:
    """Finite mode expansion ``f(r e^{i theta}) = sum_n a_n(r) e^{i n theta}``."""

    modes: dict = field(default_factory=dict)

    @property
    def band(self) -> int:
        return max((abs(n) for n in self.modes), default=0)

    def breakpoints(self) -> tuple:
        return tuple(sorted({b for p in self.modes.values() for b in p.breakpoints}))

    def support_end(self) -> float:
        return max((p.support_end for p in self.modes.values()), default=0.0)

    def coefficient_table(self, r) -> np.ndarray:
        """Rows of mode coefficients ``a_n(r_i)``, modes ``-band..band``."""
        r = np.atleast_1d(np.asarray(r, dtype=float))
        N = self.band
        out = np.zeros((r.size, 2 * N + 1), dtype=complex)
        for n, prof in self.modes.items():
            out[:, n + N] += prof(r)
        return out

    def circle(self, rho: float) -> CircleFunction:
        return CircleFunction(coeffs=self.coefficient_table([rho])[0])

    def evaluate(self, z) -> np.ndarray:
        z = np.asarray(z, dtype=complex)
        r, th = np.abs(z), np.angle(z)
        out = np.zeros(z.shape, dtype=complex)
        for n, prof in self.modes.items():
            out = out + prof(r) * np.exp(1j * n * th)
        return out

    def __add__(self, other):
        modes = dict(self.modes)
        for n, p in other.modes.items():
            modes[n] = modes[n] + p if n in modes else p
        return RadialFourierFunction(modes)

    def scale(self, alpha) -> RadialFourierFunction:
        return RadialFourierFunction({n: ScaledProfile(alpha, p) for n, p in self.modes.items()})


def monomial(k: int, coeff=1.0) -> RadialFourierFunction:
    """``coeff * z**k`` written mode-wise."""
    return RadialFourierFunction({k: MonomialProfile(coeff, k)})


# ---------------------------------------------------------------- analytic


class AnalyticFunction:
    """Polynomial ``sum_k c_k z^k`` (Taylor coefficients)."""

    def __init__(self, coeffs):
        self.coeffs = np.atleast_1d(np.asarray(coeffs, dtype=complex))

    def __len__(self):
        return self.coeffs.size

    def derivative(self, n: int = 1) -> AnalyticFunction:
        if n == 0:
            return self
        c = self.coeffs
        if n >= c.size:
            return AnalyticFunction([0.0])
        k = np.arange(c.size - n, dtype=float)
        fall = np.exp(gammaln(k + n + 1) - gammaln(k + 1))
        return AnalyticFunction(c[n:] * fall)

    def evaluate(self, z):
        return np.polynomial.polynomial.polyval(np.asarray(z, dtype=complex), self.coeffs)

    def circle(self, r: float) -> CircleFunction:
        c = self.coeffs * r ** np.arange(self.coeffs.size)
        N = self.coeffs.size - 1
        return CircleFunction(coeffs=np.concatenate([np.zeros(N, dtype=complex), c]))

    def circle_samples(self, r, M: int | None = None) -> np.ndarray:
        """Values on circles of radii ``r`` (rows), M angular samples each."""
        r = np.atleast_1d(np.asarray(r, dtype=float))
        N = self.coeffs.size - 1
        M = _grid_size(N, M)
        k = np.arange(N + 1)
        with np.errstate(divide="ignore", invalid="ignore"):
            rows = self.coeffs * np.where(k == 0, 1.0, r[:, None] ** k)
        buf = np.zeros((r.size, M), dtype=complex)
        buf[:, : N + 1] = rows
        return np.fft.ifft(buf, axis=-1) * M

    def integral_means(self, r, p: float, M: int | None = None) -> np.ndarray:
        return sample_means(self.circle_samples(r, M), p)

    def m2(self, r) -> np.ndarray:
        r = np.asarray(r, dtype=float)
        k = np.arange(self.coeffs.size)
        return np.sqrt(np.sum(np.abs(self.coeffs) ** 2 * np.power.outer(r, 2 * k), axis=-1))


# ---------------------------------------------------------------- radial rule


@dataclass(frozen=True)
class WeightedRadialMeasure:
    """``(1-r)^{-u} r^j dr`` on ``[0, upper]`` split at ``breakpoints``."""

    j: float = 0.0
    u: float = 0.0
    breakpoints: tuple = ()
    upper: float = 1.0
    nodes: int = DEFAULT_RADIAL

    def __post_init__(self):
        if not self.j > -1:
            raise DomainError(f"r^j weight needs j > -1, got {self.j}")
        if self.upper >= 1.0 and not self.u < 1:
            raise DomainError(f"(1-r)^(-u) is not integrable at 1 for u = {self.u}")
        if not (0 < self.upper <= 1):
            raise DomainError("upper limit must lie in (0, 1]")

    @cached_property
    def rule(self):
        edges = [0.0] + sorted(b for b in set(self.breakpoints) if 0 < b < self.upper) + [self.upper]
        pieces = len(edges) - 1
        n = max(MIN_PIECE_NODES, self.nodes // pieces)
        at_one = self.upper >= 1.0
        rs, ws = [], []
        for i, (lo, hi) in enumerate(zip(edges[:-1], edges[1:])):
            first, last = i == 0, i == pieces - 1
            alpha = -self.u if (last and at_one) else 0.0
            beta = self.j if first else 0.0
            r, w = gauss_jacobi_interval(n, lo, hi, alpha, beta)
            if not first:
                w = w * r**self.j
            if not (last and at_one):
                w = w * (1.0 - r) ** (-self.u)
            rs.append(r)
            ws.append(w)
        return np.concatenate(rs), np.concatenate(ws)

    def with_nodes(self, nodes: int) -> WeightedRadialMeasure:
        return WeightedRadialMeasure(self.j, self.u, self.breakpoints, self.upper, nodes)


def radial_integrate(g, measure: WeightedRadialMeasure) -> float:
    """``int g(r) (1-r)^{-u} r^j dr`` with the endpoint factors in the weights."""
    r, w = measure.rule
    vals = g(r) if callable(g) else np.asarray(g)
    if vals.shape != r.shape:
        raise DomainError("g must produce one value per radial node")
    return complex(np.sum(w * vals)) if np.iscomplexobj(vals) else float(np.sum(w * vals))
