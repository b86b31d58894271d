"""Real-argument Gamma and Gauss hypergeometric evaluation.

``hyp2f1`` sums the defining series with the term recurrence.  Close to
``x = 1`` the series is replaced by the ``1 - x`` connection formulas
(the logarithmic variant when ``c - a - b`` is an integer), which converge
geometrically in ``1 - x``.  The Euler integral, Euler transformation and
Kummer's quadratic transformation are exposed separately so that each can
be checked against the others.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import digamma

from .errors import ConvergenceError, DomainError, PoleError
from .quadrature import tanh_sinh

INT_TOL = 1e-12
MAX_TERMS = 10**6
NEAR_ONE = 0.9
# |c-a-b - round(c-a-b)| below this uses the logarithmic connection formula,
# above SAFE_GAP the plain one; in between the direct series is used.
SAFE_GAP = 1e-4


def _near_nonpositive_int(x: float, tol: float = INT_TOL) -> bool:
    return x <= tol and abs(x - round(x)) <= tol


def log_gamma(x: float) -> float:
    """``ln Gamma(x)`` for ``x > 0``."""
    if not x > 0:
        raise DomainError(f"log_gamma needs x > 0, got {x}")
    return math.lgamma(x)


def gamma_sign_log(x: float):
    """``(sign, ln|Gamma(x)|)`` for any real ``x`` off the poles."""
    if _near_nonpositive_int(x):
        raise PoleError(f"Gamma has a pole at {x}")
    if x > 0:
        return 1.0, math.lgamma(x)
    sign = -1.0 if math.floor(x) % 2 else 1.0
    return sign, math.lgamma(x)


def gamma(x: float) -> float:
    s, lg = gamma_sign_log(x)
    return s * math.exp(lg)


def rgamma(x: float) -> float:
    """``1 / Gamma(x)``, zero at the poles."""
    if _near_nonpositive_int(x):
        return 0.0
    s, lg = gamma_sign_log(x)
    return s * math.exp(-lg)


def pochhammer(a: float, n: int) -> float:
    out = 1.0
    for i in range(n):
        out *= a + i
    return out


@dataclass(frozen=True)
class HypergeomArgs:
    a: float
    b: float
    c: float
    x: float

    def __post_init__(self):
        if _near_nonpositive_int(self.c):
            raise PoleError(f"c = {self.c} is a non-positive integer")
        if not (-1.0 < self.x <= 1.0):
            raise DomainError(f"x = {self.x} outside (-1, 1]")

    @property
    def excess(self) -> float:
        return self.c - self.a - self.b


def _series(a, b, c, x, tol=1e-14, max_terms=MAX_TERMS):
    """Partial sums of the Gauss series with a tail estimate stop rule."""
    if x == 0.0:
        return 1.0
    sigma = c - a - b
    n_min = int(abs(a) + abs(b) + abs(c)) + 2
    total, term, peak = 1.0, 1.0, 1.0
    n, chunk = 0, 64
    while n < max_terms:
        chunk = min(chunk, max_terms - n)
        k = np.arange(n, n + chunk, dtype=float)
        ratios = (a + k) * (b + k) / ((c + k) * (k + 1.0)) * x
        terms = term * np.cumprod(ratios)
        partial = total + np.cumsum(terms)
        zero = terms == 0.0
        if zero.any():
            return float(partial[int(np.argmax(zero))])
        if not np.all(np.isfinite(partial)):
            raise ConvergenceError("series overflow", last_term=float(abs(term)), terms=n)
        idx = k + 1.0
        next_ratio = np.abs((a + idx) * (b + idx) / ((c + idx) * (idx + 1.0)) * x)
        rho = np.maximum(next_ratio, abs(x))
        mag = np.abs(terms)
        with np.errstate(divide="ignore", invalid="ignore"):
            est = np.where(rho < 1.0, mag * rho / (1.0 - rho), np.inf)
            if sigma > 0 and x > 0:
                est = np.minimum(est, mag * idx / sigma)
        peak = max(peak, float(mag.max()))
        scale = np.maximum(np.abs(partial), 1e-8 * peak)
        ok = (est <= tol * scale) & (idx >= n_min)
        if ok.any():
            return float(partial[int(np.argmax(ok))])
        total, term = float(partial[-1]), float(terms[-1])
        n += chunk
        chunk = min(2 * chunk, 1 << 16)
    raise ConvergenceError(
        f"2F1({a}, {b}; {c}; {x}) not converged in {max_terms} terms",
        last_term=abs(term),
        terms=n,
    )


def _connection(a, b, c, x, tol):
    """DLMF 15.8.4 style continuation in ``1 - x`` for non-integer ``c-a-b``."""
    s = c - a - b
    y = 1.0 - x
    first = gamma(c) * gamma(s) * rgamma(c - a) * rgamma(c - b)
    second = gamma(c) * gamma(-s) * rgamma(a) * rgamma(b)
    out = 0.0
    if first != 0.0:
        out += first * _series(a, b, 1.0 - s, y, tol)
    if second != 0.0:
        out += second * y**s * _series(c - a, c - b, 1.0 + s, y, tol)
    return out


def _log_case(a, b, m, x, tol, max_terms=2000):
    """``2F1(a, b; a+b+m; x)`` for integer ``m >= 0`` near ``x = 1``."""
    y = 1.0 - x
    c = a + b + m
    log_y = math.log(y)
    head = 0.0
    if m > 0:
        pre = gamma(m) * gamma(c) * rgamma(a + m) * rgamma(b + m)
        t = 1.0
        for n in range(m):
            head += t
            if n < m - 1:
                t *= (a + n) * (b + n) / ((n + 1) * (1 - m + n)) * y
        head *= pre
    pre2 = gamma(c) * rgamma(a) * rgamma(b)
    if pre2 == 0.0:
        return head
    sign = -((-1.0) ** m) if m > 0 else -1.0
    # coefficient of the n-th term without the digamma bracket
    t = 1.0 / math.factorial(m)
    acc = 0.0
    for n in range(max_terms):
        bracket = (
            log_y
            - digamma(n + 1.0)
            - digamma(n + m + 1.0)
            + digamma(a + n + m)
            + digamma(b + n + m)
        )
        contrib = t * bracket
        acc += contrib
        if n > 2 and abs(contrib) <= tol * max(abs(acc), 1e-300) and abs(t) * abs(log_y) <= tol * max(abs(acc), 1e-300):
            break
        t *= (a + m + n) * (b + m + n) / ((n + 1.0) * (n + m + 1.0)) * y
    else:
        raise ConvergenceError("log-case continuation did not converge", last_term=abs(t), terms=max_terms)
    return head + sign * pre2 * y**m * acc


def hyp2f1(a: float, b: float, c: float, x: float, tol: float = 1e-14) -> float:
    """Gauss hypergeometric function for real parameters and ``x`` in (-1, 1]."""
    args = HypergeomArgs(a, b, c, x)
    if not tol > 0:
        raise DomainError("tol must be positive")
    if x == 0.0:
        return 1.0
    if x == 1.0:
        if args.excess <= 0:
            raise ConvergenceError(
                f"series diverges at x=1 when c-a-b = {args.excess} <= 0", last_term=math.inf
            )
        return hyp2f1_at_one(a, b, c)
    terminating = (a <= 0 and a == round(a)) or (b <= 0 and b == round(b))
    if x < 0:
        if x < -0.5 and not terminating:
            # Pfaff: argument x/(x-1) lies in (0, 1/2).
            return (1.0 - x) ** (-a) * _series(a, c - b, c, x / (x - 1.0), tol)
        return _series(a, b, c, x, tol)
    if terminating or x <= NEAR_ONE:
        return _series(a, b, c, x, tol)
    s = args.excess
    m = round(s)
    gap = abs(s - m)
    if gap <= INT_TOL:
        if m >= 0:
            return _log_case(a, b, int(m), x, tol)
        # c-a-b = -|m|: Euler transform gives a positive integer excess
        return (1.0 - x) ** s * _log_case(c - a, c - b, int(-m), x, tol)
    if gap >= SAFE_GAP:
        return _connection(a, b, c, x, tol)
    return _series(a, b, c, x, tol)


def hyp2f1_at_one(a: float, b: float, c: float) -> float:
    """Gauss's value ``Gamma(c)Gamma(c-a-b) / (Gamma(c-a)Gamma(c-b))``."""
    s = c - a - b
    if not s > 0:
        raise DomainError(f"value at 1 needs c - a - b > 0, got {s}")
    if _near_nonpositive_int(c):
        raise PoleError(f"c = {c} is a non-positive integer")
    sc, lc = gamma_sign_log(c)
    ss, ls = gamma_sign_log(s)
    if _near_nonpositive_int(c - a) or _near_nonpositive_int(c - b):
        # 1/Gamma vanishes there; the terminating series sums to 0
        return 0.0
    sa, la = gamma_sign_log(c - a)
    sb, lb = gamma_sign_log(c - b)
    return sc * ss * sa * sb * math.exp(lc + ls - la - lb)


def euler_integral_2f1(a: float, b: float, c: float, x: float, return_error: bool = False):
    """Evaluate ``2F1`` through its Euler integral (tanh-sinh quadrature)."""
    if not (b > 0 and c > b):
        raise DomainError(f"Euler integral needs c > b > 0, got b={b}, c={c}")
    if not (0.0 <= x < 1.0):
        raise DomainError(f"x = {x} outside [0, 1)")
    log_pref = math.lgamma(c) - math.lgamma(b) - math.lgamma(c - b)

    def integrand(log_t, log_1mt, t, omt):
        one_minus_xt = (1.0 - x) + x * omt
        return (b - 1.0) * log_t + (c - b - 1.0) * log_1mt - a * np.log(one_minus_xt) + log_pref

    value, err = tanh_sinh(integrand, exponent_floor=min(b, c - b))
    return (value, err) if return_error else value


def euler_transform(a: float, b: float, c: float, x: float, tol: float = 1e-14) -> float:
    """``(1-x)**(c-a-b) * 2F1(c-a, c-b; c; x)``."""
    if not (0.0 <= x < 1.0):
        raise DomainError(f"x = {x} outside [0, 1)")
    return (1.0 - x) ** (c - a - b) * hyp2f1(c - a, c - b, c, x, tol)


def kummer_quadratic(a: float, b: float, z: float, tol: float = 1e-14):
    """Both sides of Kummer's quadratic transformation, evaluated separately.

    LHS is ``2F1(a, b; 2b; 4z/(1+z)**2)``; RHS is
    ``(1+z)**(2a) * 2F1(a, a+1/2-b; b+1/2; z**2)``.
    """
    if not abs(z) < 1:
        raise DomainError(f"|z| must be < 1, got {z}")
    if _near_nonpositive_int(2 * b) or _near_nonpositive_int(b + 0.5):
        raise PoleError("2b and b+1/2 must not be non-positive integers")
    arg = 4.0 * z / (1.0 + z) ** 2
    if arg >= 1.0:
        raise ConvergenceError(f"4z/(1+z)^2 = {arg!r} reached 1", last_term=math.inf)
    lhs = hyp2f1(a, b, 2.0 * b, arg, tol)
    rhs = (1.0 + z) ** (2.0 * a) * hyp2f1(a, a + 0.5 - b, b + 0.5, z * z, tol)
    return lhs, rhs
