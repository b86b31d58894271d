"""A bounded disc function, vanishing at the boundary, whose projection is not in H^2.

Annuli ``[b_{n-1}, b_n)`` carry single Fourier modes ``m_n`` chosen so that
``mu_n = int (m_n+1) r^{m_n+1} dr`` over the annulus equals 1/4.  The radii
approach 1 geometrically in ``1 - b`` (ratio about 0.415 per step), so the
schedule is built in mpmath and radii are carried as complements ``1 - b``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import mpmath as mp
import numpy as np

from .disc_fn import BumpProfile, PiecewiseConstantProfile, RadialFourierFunction, smooth_step
from .errors import CapacityError, ConstructionError, DomainError
from .projection import NORMALIZATION
from .quadrature import gauss_legendre_interval

MIN_COMPLEMENT = 1e-300
MAX_EXPLICIT_MODE = 200_000


def _dps(N: int) -> int:
    # 1 - b_N is about 0.29 * 0.415^(N-1); keep ~25 digits beyond that
    return 30 + math.ceil(0.45 * N)


@dataclass(frozen=True)
class BreakpointSchedule:
    radii: tuple  # mpf b_0..b_N
    complements: tuple  # mpf 1 - b_n
    modes: tuple  # int m_1..m_N
    masses: tuple  # mpf mu_1..mu_N from the closed form
    enforced: tuple  # per step: monotonicity had to be forced
    dps: int

    @property
    def depth(self) -> int:
        return len(self.modes)

    @property
    def complements_float(self) -> np.ndarray:
        return np.array([float(c) for c in self.complements])

    @property
    def radii_float(self) -> np.ndarray:
        return np.array([float(b) for b in self.radii])

    @property
    def ever_enforced(self) -> bool:
        return any(self.enforced)

    def rows(self):
        """``(n, b_n, 1 - b_n, m_n, mu_n)`` for ``n = 1..N`` as floats."""
        return [
            (n, float(self.radii[n]), float(self.complements[n]), self.modes[n - 1], float(self.masses[n - 1]))
            for n in range(1, self.depth + 1)
        ]


def _mass_ratio(b, k):
    """``((k+1)/(k+2)) (1 - b^{k+1})``, increasing in k."""
    return (k + 1) / (k + 2) * (1 - mp.power(b, k + 1))


def _smallest_mode(b, eps):
    """Smallest integer k with ``_mass_ratio(b, k) >= 1/2``."""
    half = mp.mpf(1) / 2
    guess = mp.log(2) / eps
    lo, hi = mp.mpf(0), max(guess, mp.mpf(4))
    while _mass_ratio(b, hi) < half:
        lo, hi = hi, 2 * hi
    root = mp.findroot(lambda k: _mass_ratio(b, k) - half, (lo, hi), solver="illinois")
    k = int(mp.ceil(root))
    while k > 0 and _mass_ratio(b, k - 1) >= half:
        k -= 1
    while _mass_ratio(b, k) < half:
        k += 1
    return k


def build_schedule(N: int) -> BreakpointSchedule:
    if N < 1:
        raise DomainError("schedule depth must be >= 1")
    dps = _dps(N)
    with mp.workdps(dps):
        b1 = 1 / mp.sqrt(2)
        radii = [mp.mpf(0), b1]
        comps = [mp.mpf(1), 1 - b1]
        modes = [0]
        masses = [mp.mpf(1) / 2 * b1**2]
        enforced = [False]
        for n in range(1, N):
            b, eps = radii[-1], comps[-1]
            k = _smallest_mode(b, eps)
            forced = k <= modes[-1]
            if forced:
                k = modes[-1] + 1
            top = mp.power(b, k + 2) + mp.mpf(k + 2) / (4 * (k + 1))
            nb = mp.power(top, mp.mpf(1) / (k + 2))
            # 1 - top^{1/(k+2)} without cancellation
            ne = -mp.expm1(mp.log(top) / (k + 2))
            if float(ne) < MIN_COMPLEMENT:
                raise CapacityError(f"1 - b fell below {MIN_COMPLEMENT} at depth {n}", depth=n)
            radii.append(nb)
            comps.append(ne)
            modes.append(k)
            masses.append(mp.mpf(k + 1) / (k + 2) * (mp.power(nb, k + 2) - mp.power(b, k + 2)))
            enforced.append(forced)
    return BreakpointSchedule(tuple(radii), tuple(comps), tuple(modes), tuple(masses), tuple(enforced), dps)


def _annulus_geometry(schedule: BreakpointSchedule, n: int):
    """``(m+1, 1 - b_{n-1}, b_n - b_{n-1})`` as floats for annulus n."""
    with mp.workdps(schedule.dps):
        width = schedule.complements[n - 1] - schedule.complements[n]
    return float(schedule.modes[n - 1] + 1), float(schedule.complements[n - 1]), float(width)


def _power_on_annulus(e, outer, width, x):
    """``r^e`` at ``r = b_{n-1} + width * x`` computed from ``1 - r``."""
    return np.exp(e * np.log1p(-(outer - width * x)))


def reintegrate_masses(schedule: BreakpointSchedule, nodes: int = 40) -> np.ndarray:
    """``mu_n`` by Gauss-Legendre quadrature of ``(m+1) r^{m+1}`` over each annulus.

    The annulus is rescaled to ``x in [0, 1]`` and ``r^{m+1}`` is evaluated as
    ``exp((m+1) log1p(-(1-r)))``, which stays accurate when ``1 - r`` is far
    below machine epsilon.
    """
    x, w = gauss_legendre_interval(nodes, 0.0, 1.0)
    out = np.empty(schedule.depth)
    for n in range(1, schedule.depth + 1):
        m1, outer, width = _annulus_geometry(schedule, n)
        out[n - 1] = m1 * width * np.sum(w * _power_on_annulus(m1, outer, width, x))
    return out


def minimality_certificate(schedule: BreakpointSchedule) -> list:
    """Per step ``n >= 2``: ``g(m-1) < 1/2 <= g(m)`` with ``g`` from ``b_{n-1}``."""
    out = []
    with mp.workdps(schedule.dps):
        half = mp.mpf(1) / 2
        for n in range(2, schedule.depth + 1):
            b, m = schedule.radii[n - 1], schedule.modes[n - 1]
            below = _mass_ratio(b, m - 1) < half
            above = _mass_ratio(b, m) >= half
            out.append({"n": n, "below": bool(below), "above": bool(above), "enforced": schedule.enforced[n - 1]})
    return out


# ---------------------------------------------------------------- amplitudes


def harmonic_amplitude(n: int) -> float:
    return 1.0 / math.sqrt(n)


def constant_amplitude(n: int) -> float:
    return 1.0


AMPLITUDE_RULES = {"harmonic": harmonic_amplitude, "constant": constant_amplitude}


def square_sum_test(rule, blocks: int = 16) -> dict:
    """Dyadic block sums ``sum_{2^i <= n < 2^{i+1}} |c_n|^2``.

    Blocks bounded away from zero mean the full sum diverges; blocks shrinking
    geometrically mean it converges.  Returns the evidence either way.
    """
    sums, sup = [], 0.0
    for i in range(blocks):
        c = np.abs(np.array([rule(n) for n in range(2**i, 2 ** (i + 1))], dtype=complex))
        sums.append(float(np.sum(c**2)))
        sup = max(sup, float(c.max()))
    tail = sums[-5:]
    ratios = [b / a for a, b in zip(tail, tail[1:]) if a > 0]
    converges = all(t == 0 for t in tail) or (len(ratios) == 4 and max(ratios) < 0.9)
    return {"block_sums": sums, "tail_ratios": ratios, "converges": converges, "sup": sup}


def _resolve_rule(rule):
    if isinstance(rule, str):
        if rule not in AMPLITUDE_RULES:
            raise DomainError(f"unknown amplitude rule {rule!r}")
        return AMPLITUDE_RULES[rule], rule
    if callable(rule):
        return rule, "custom"
    raise DomainError("amplitude rule must be a name or a callable n -> c_n")


# ---------------------------------------------------------------- the function


@dataclass(frozen=True)
class CounterexampleFunction:
    schedule: BreakpointSchedule
    amplitudes: tuple  # c_1..c_N
    rule: str
    kind: str = "indicator"
    plateau_fractions: tuple | None = None
    plateau_ratios: tuple | None = None  # plateau mass / mu_n
    smooth_masses: tuple | None = None  # int bump * (m+1) r^{m+1} dr

    def annulus_index(self, complement) -> np.ndarray:
        """Annulus ``j`` containing ``r = 1 - complement`` (0 past the schedule)."""
        comps = self.schedule.complements_float
        d = np.asarray(complement, dtype=float)
        # b_{j-1} <= r < b_j  <=>  comps[j] < d <= comps[j-1]
        j = np.searchsorted(-comps, -d, side="right")
        return np.where(j > self.schedule.depth, 0, j)

    def sup_profile(self, complement) -> np.ndarray:
        """``M_inf(r, f)`` at ``r = 1 - complement`` (indicator kind)."""
        j = self.annulus_index(complement)
        c = np.abs(np.concatenate([[0.0], np.asarray(self.amplitudes, dtype=complex)]))
        return c[j]

    def to_radial_fourier(self) -> RadialFourierFunction:
        """Explicit mode-wise form; only for schedules with moderate modes."""
        s = self.schedule
        if s.modes[-1] > MAX_EXPLICIT_MODE:
            raise CapacityError(f"mode {s.modes[-1]} too large for an explicit expansion", depth=s.depth)
        comps = s.complements_float
        modes = {}
        for n, m in enumerate(s.modes, start=1):
            lo, hi = float(s.radii[n - 1]), float(s.radii[n])
            if self.kind == "indicator":
                prof = PiecewiseConstantProfile([lo, hi], [self.amplitudes[n - 1]], complements=[comps[n - 1], comps[n]])
            else:
                prof = BumpProfile(lo, hi, self.plateau_fractions[n - 1], self.amplitudes[n - 1])
            modes[m] = prof
        return RadialFourierFunction(modes)


def build_function(schedule: BreakpointSchedule, amplitude_rule="harmonic") -> CounterexampleFunction:
    rule, name = _resolve_rule(amplitude_rule)
    if name == "custom":
        test = square_sum_test(rule)
        if not math.isfinite(test["sup"]):
            raise ConstructionError("amplitudes must be bounded", certificate=test)
        if test["converges"]:
            raise ConstructionError("amplitudes are square summable; the projection would lie in H^2",
                                    certificate=test)
    amps = tuple(rule(n) for n in range(1, schedule.depth + 1))
    return CounterexampleFunction(schedule, amps, name)


@dataclass
class CoefficientReport:
    modes: list
    coefficients: list  # K c_n mu_n
    normalization: float
    consistency_bound: list  # c_n / 2 (equal-mass construction, K = 2)
    printed_bound: list  # c_n / 4
    meets_printed_bound: bool


def projection_coefficients(f: CounterexampleFunction) -> CoefficientReport:
    """Taylor coefficients of ``P f`` at the scheduled modes.

    Mode ``m_n`` carries ``c_n chi`` (or ``c_n`` times a bump), so its
    coefficient is ``K (m_n+1) c_n int r^{m_n+1} dr = K c_n mu_n``.
    """
    s = f.schedule
    masses = f.smooth_masses if f.kind == "smooth-bump" else s.masses
    coeffs = [NORMALIZATION * c * float(mu) for c, mu in zip(f.amplitudes, masses)]
    half = [abs(c) / 2 for c in f.amplitudes]
    quarter = [abs(c) / 4 for c in f.amplitudes]
    ok = all(abs(a) >= q * (1 - 1e-12) for a, q in zip(coeffs, quarter))
    return CoefficientReport(list(s.modes), coeffs, NORMALIZATION, half, quarter, ok)


@dataclass
class DivergenceReport:
    partial_sums: np.ndarray  # S_N
    envelope: np.ndarray  # sum |c_n|^2 / 16
    harmonic_envelope: np.ndarray  # H_N / 16
    dominates: bool  # S_N >= envelope for all N
    dominates_harmonic: bool | None


def divergence_report(f: CounterexampleFunction, N: int | None = None) -> DivergenceReport:
    N = f.schedule.depth if N is None else N
    if not 1 <= N <= f.schedule.depth:
        raise DomainError("N must lie within the schedule depth")
    coef = np.abs(np.array(projection_coefficients(f).coefficients[:N]))
    c = np.abs(np.array(f.amplitudes[:N], dtype=complex))
    S = np.cumsum(coef**2)
    env = np.cumsum(c**2) / 16.0
    H = np.cumsum(1.0 / np.arange(1, N + 1)) / 16.0
    tol = 1e-12
    harm = bool(np.all(S >= H * (1 - tol))) if f.rule == "harmonic" else None
    return DivergenceReport(S, env, H, bool(np.all(S >= env * (1 - tol))), harm)


# ---------------------------------------------------------------- smooth variant


def _bump_masses(m1, outer, width, pf, nodes=200):
    """``(plateau mass, full mass)`` of ``(m+1) r^{m+1}`` against a bump on the annulus."""
    ramp = (1.0 - pf) / 2.0
    x0, x1 = ramp, 1.0 - ramp
    # closed form on the plateau, written through complements
    plateau = m1 / (m1 + 1.0) * (
        _power_on_annulus(m1 + 1.0, outer, width, x1) - _power_on_annulus(m1 + 1.0, outer, width, x0)
    ) / width
    total = plateau
    for lo, hi in ((0.0, x0), (x1, 1.0)):
        x, w = gauss_legendre_interval(nodes, lo, hi)
        shape = smooth_step(x / ramp) * smooth_step((1.0 - x) / ramp)
        total = total + np.sum(w * shape * m1 * _power_on_annulus(m1, outer, width, x))
    return float(plateau * width), float(total * width)


def smooth_variant(schedule: BreakpointSchedule, amplitude_rule="harmonic",
                   plateau_fraction: float = 0.9, max_adjust: int = 60) -> CounterexampleFunction:
    """Indicators replaced by C-infinity bumps whose plateaus carry half of each ``mu_n``.

    If a plateau falls short, its fraction is raised to ``(1 + pf) / 2`` until
    the requirement holds.
    """
    if not 0 < plateau_fraction < 1:
        raise DomainError("plateau_fraction must lie in (0, 1)")
    base = build_function(schedule, amplitude_rule)
    fracs, ratios, masses = [], [], []
    for n in range(1, schedule.depth + 1):
        m1, outer, width = _annulus_geometry(schedule, n)
        mu = float(schedule.masses[n - 1])
        pf = plateau_fraction
        for _ in range(max_adjust):
            plateau, full = _bump_masses(m1, outer, width, pf)
            if plateau / mu >= 0.5:
                break
            pf = (1.0 + pf) / 2.0
        else:
            raise ConstructionError(f"annulus {n}: plateau cannot carry half the mass")
        fracs.append(pf)
        ratios.append(plateau / mu)
        masses.append(full)
    return CounterexampleFunction(schedule, base.amplitudes, base.rule, "smooth-bump",
                                  tuple(fracs), tuple(ratios), tuple(masses))
