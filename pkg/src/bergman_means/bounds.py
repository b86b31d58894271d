"""Sharp constants and inequality checks for Bergman-projection integral means.

Every check returns a :class:`BoundReport`.  Inequalities pass when
``lhs <= rhs * (1 + eps)``; identities pass when the relative residual is at
most the stated tolerance.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np
from scipy import integrate, optimize
from scipy.special import expit, gammaln, logit

from .disc_fn import (
    AnalyticFunction,
    CircleFunction,
    MonomialProfile,
    PolynomialProfile,
    RadialFourierFunction,
    WeightedRadialMeasure,
    angular_grid,
    circle_means,
    fourier_coefficients,
    radial_integrate,
    twisted_derivative_coeffs,
)
from .errors import ConstraintError, DomainError, FitError
from .projection import prn_operator, project_fourier
from .special_fn import hyp2f1, log_gamma

EPS_REPORT = 1e-7
LEMMA1_QUAD_NODES = 4096

TAGS = (
    "lemma1-identity",
    "lemma1-sharpness",
    "c1-bound",
    "c2-special",
    "c2-lemma",
    "prn-bound",
    "bpn-bound",
    "weighted-norm",
    "sobolev-corollary",
    "second-corollary",
    "lipschitz-probe",
)


def _jsonable(x):
    if isinstance(x, (bool, np.bool_)):
        return bool(x)
    if isinstance(x, (int, np.integer)):
        return int(x)
    if isinstance(x, (float, np.floating)):
        x = float(x)
        return x if math.isfinite(x) else ("inf" if x > 0 else "-inf" if x < 0 else "nan")
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    return x


@dataclass
class BoundReport:
    tag: str
    params: dict
    lhs: float
    rhs: float
    quad_err: float = 0.0
    relation: str = "le"
    eps: float = EPS_REPORT
    notes: dict = field(default_factory=dict)
    side_conditions: dict = field(default_factory=dict)

    @property
    def margin(self) -> float:
        if self.relation == "eq":
            return self.eps * abs(self.rhs) - abs(self.lhs - self.rhs)
        return self.rhs - self.lhs

    @property
    def passed(self) -> bool:
        if not all(self.side_conditions.values()):
            return False
        if self.relation == "eq":
            return bool(abs(self.lhs - self.rhs) <= self.eps * abs(self.rhs))
        return bool(self.lhs <= self.rhs * (1.0 + self.eps))

    def to_record(self) -> dict:
        return _jsonable(
            {
                "tag": self.tag,
                "params": self.params,
                "lhs": self.lhs,
                "rhs": self.rhs,
                "margin": self.margin,
                "pass": self.passed,
                "quad_err": self.quad_err,
                "relation": self.relation,
                "eps": self.eps,
                "notes": self.notes,
                "side_conditions": self.side_conditions,
            }
        )


# ---------------------------------------------------------------- Lemma 1


def lemma1_closed_form(p: float, r: float) -> float:
    """``(1-r^2)^{1-p} 2F1(1-p/2, 1-p/2; 1; r^2)``: the mean of ``|1-re^{it}|^{-p}``."""
    if not p > 1:
        raise DomainError(f"p must exceed 1, got {p}")
    if not (0.0 <= r < 1.0):
        raise DomainError(f"r must lie in [0, 1), got {r}")
    x = r * r
    return (1.0 - x) ** (1.0 - p) * hyp2f1(1.0 - p / 2, 1.0 - p / 2, 1.0, x)


def lemma1_quadrature(p: float, r: float, nodes: int = LEMMA1_QUAD_NODES) -> float:
    t = angular_grid(nodes)
    return float(np.mean(np.abs(1.0 - r * np.exp(1j * t)) ** (-p)))


def lemma1_sharp_constant(p: float) -> float:
    """``Gamma(p-1) / Gamma(p/2)^2``."""
    if not p > 1:
        raise DomainError(f"p must exceed 1, got {p}")
    return math.exp(log_gamma(p - 1.0) - 2.0 * log_gamma(p / 2.0))


def check_lemma1_identity(p: float, r: float, tol: float = 1e-9) -> BoundReport:
    return BoundReport(
        "lemma1-identity",
        {"p": p, "r": r},
        lhs=lemma1_quadrature(p, r),
        rhs=lemma1_closed_form(p, r),
        relation="eq",
        eps=tol,
    )


def check_lemma1_sharpness(p: float, radii, tol: float = 0.02) -> BoundReport:
    """Ratio to ``(1-r^2)^{1-p}`` is nondecreasing and approaches the constant."""
    radii = sorted(float(r) for r in radii)
    ratios = [lemma1_closed_form(p, r) / (1.0 - r * r) ** (1.0 - p) for r in radii]
    const = lemma1_sharp_constant(p)
    monotone = all(b >= a * (1.0 - 1e-14) for a, b in zip(ratios, ratios[1:]))
    r_edge = math.sqrt(1.0 - 1e-6)
    edge = lemma1_closed_form(p, r_edge) / 1e-6 ** (1.0 - p)
    return BoundReport(
        "lemma1-sharpness",
        {"p": p, "radii": radii},
        lhs=edge,
        rhs=const,
        relation="eq",
        eps=tol,
        notes={"max_ratio_on_grid": max(ratios)},
        side_conditions={
            "nondecreasing": monotone,
            "below_constant": max(ratios) <= const * (1.0 + EPS_REPORT),
        },
    )


# ---------------------------------------------------------------- C1


def _check_c1_args(s, m, k):
    if not s < 1:
        raise ConstraintError("s < 1", f"s = {s}")
    if not m + s > 1:
        raise ConstraintError("m + s > 1", f"m + s = {m + s}")
    if not k > -1:
        raise ConstraintError("k > -1", f"k = {k}")


def _log_c1(s, m, k):
    """Vectorized log C1 from its two closed forms.

    With ``A = 2+k-s-m > 0`` the series has positive terms, so the maximum of
    ``2F1(A, 1-s; 2+k-s; x)`` is at ``x = 1``.  With ``A <= 0`` the Euler
    integral (``b = 1-s > 0``, ``c-b = 1+k > 0``) shows the function is
    nonincreasing, so the maximum is its value 1 at ``x = 0``.
    """
    s, m, k = np.broadcast_arrays(np.asarray(s, float), np.asarray(m, float), np.asarray(k, float))
    at_one = gammaln(s + m - 1.0) + gammaln(1.0 - s) - gammaln(m)
    at_zero = gammaln(k + 1.0) + gammaln(1.0 - s) - gammaln(2.0 + k - s)
    return np.where(2.0 + k - s - m > 0, at_one, at_zero)


def c1_branch(s: float, m: float, k: float) -> str:
    return "closed-form-x1" if 2.0 + k - s - m > 0 else "closed-form-x0"


def c1_constant(s: float, m: float, k: float, method: str = "closed", grid: int = 2001) -> float:
    """Smallest C with ``int_0^1 (1-y)^{-s} (1-xy)^{-m} y^k dy <= C (1-x)^{1-s-m}``.

    ``method="grid"`` maximizes the hypergeometric factor over a dense grid in
    ``[0, 1]`` with bounded local refinement; it exists to cross-check the
    closed forms.
    """
    _check_c1_args(s, m, k)
    if method == "closed":
        return float(np.exp(_log_c1(s, m, k)))
    if method != "grid":
        raise DomainError(f"unknown method {method!r}")
    a, b, c = 2.0 + k - s - m, 1.0 - s, 2.0 + k - s
    pref = math.exp(log_gamma(k + 1.0) + log_gamma(1.0 - s) - log_gamma(c))

    def F(x):
        return hyp2f1(a, b, c, x)

    xs = np.linspace(0.0, 1.0, grid)
    vals = np.array([F(x) for x in xs])
    i = int(np.argmax(vals))
    best = vals[i]
    lo, hi = xs[max(i - 1, 0)], xs[min(i + 1, grid - 1)]
    if 0 < i < grid - 1:
        res = optimize.minimize_scalar(lambda x: -F(x), bounds=(lo, hi), method="bounded",
                                       options={"xatol": 1e-12})
        best = max(best, -res.fun)
    return pref * best


def c1_integral(s: float, m: float, k: float, x: float):
    """Direct quadrature of ``int_0^1 (1-y)^{-s} (1-xy)^{-m} y^k dy``.

    Endpoint powers are handled by algebraic weights; the near-singularity at
    ``y = 1`` for ``x`` close to 1 is resolved by geometric splitting.
    Returns ``(value, error_estimate)``.
    """
    _check_c1_args(s, m, k)
    if not (0.0 <= x < 1.0):
        raise DomainError("x must lie in [0, 1)")
    delta = 1.0 - x
    # split points 1 - delta * 2^i inside (1/2, 1)
    cuts = [0.5]
    t = delta
    while t < 0.5:
        cuts.append(1.0 - t)
        t *= 2.0
    cuts = sorted(set(c for c in cuts if 0.5 <= c < 1.0))
    edges = [0.0] + cuts + [1.0]
    with warnings.catch_warnings():
        # roundoff warnings only mean the 1e-13 request was not met; err is returned
        warnings.simplefilter("ignore", integrate.IntegrationWarning)
        return _c1_pieces(s, m, k, x, edges)


def _c1_pieces(s, m, k, x, edges):
    total, err = 0.0, 0.0
    opts = dict(epsabs=0.0, epsrel=1e-13, limit=200)
    for i, (lo, hi) in enumerate(zip(edges[:-1], edges[1:])):
        first, last = i == 0, i == len(edges) - 2
        if first:
            g = lambda y: (1.0 - y) ** (-s) * (1.0 - x * y) ** (-m)
            v, e = integrate.quad(g, lo, hi, weight="alg", wvar=(k, 0.0), **opts)
        elif last:
            g = lambda y: (1.0 - x * y) ** (-m) * y**k
            v, e = integrate.quad(g, lo, hi, weight="alg", wvar=(0.0, -s), **opts)
        else:
            g = lambda y: (1.0 - y) ** (-s) * (1.0 - x * y) ** (-m) * y**k
            v, e = integrate.quad(g, lo, hi, **opts)
        total += v
        err += e
    return total, err


def check_c1_bound(s: float, m: float, k: float, xs) -> BoundReport:
    """Worst ratio ``integral / (1-x)^{1-s-m}`` over ``xs`` against C1."""
    c1 = c1_constant(s, m, k)
    worst, worst_x, err = -math.inf, None, 0.0
    for x in xs:
        v, e = c1_integral(s, m, k, float(x))
        scale = (1.0 - x) ** (1.0 - s - m)
        if v / scale > worst:
            worst, worst_x = v / scale, float(x)
        err = max(err, e / scale)
    return BoundReport(
        "c1-bound",
        {"s": s, "m": m, "k": k, "points": len(xs)},
        lhs=worst,
        rhs=c1,
        quad_err=err,
        notes={"branch": c1_branch(s, m, k), "argmax_x": worst_x, "sharpness_ratio": worst / c1},
    )


# ---------------------------------------------------------------- C2


@dataclass(frozen=True)
class C2Params:
    p: float
    m: float
    k: float
    j: float
    u: float

    def __post_init__(self):
        if not self.p > 1:
            raise ConstraintError("p > 1", f"p = {self.p}")
        if not self.m > 0:
            raise ConstraintError("m > 0", f"m = {self.m}")
        if not self.k > -1:
            raise ConstraintError("k > -1", f"k = {self.k}")
        if not self.j > -1:
            raise ConstraintError("j > -1", f"j = {self.j}")
        if not self.u < 1:
            raise ConstraintError("u < 1", f"u = {self.u}")
        if not self.u > 1 - self.m * self.p:
            raise ConstraintError("u > 1 - m p", f"u = {self.u}, 1 - m p = {1 - self.m * self.p}")

    @property
    def q(self) -> float:
        return self.p / (self.p - 1.0)

    @property
    def w(self) -> float:
        return self.u + (self.m - 1.0) * self.p

    def a_window(self, b):
        """Open interval of admissible ``a`` for a given ``b``."""
        p, q, m, u = self.p, self.q, self.m, self.u
        lo = np.maximum(1.0 - m - u / p, 1.0 / q - (m - b))
        hi = np.minimum(1.0 / q, 1.0 - u / p - m + b)
        return lo, hi

    def violations(self, a: float, b: float) -> list:
        p, q, m, u = self.p, self.q, self.m, self.u
        out = []
        if not 0 < b:
            out.append("0 < b")
        if not b < m:
            out.append("b < m")
        if not 1 - m - u / p < a:
            out.append("1 - m - u/p < a")
        if not 1 / q - (m - b) < a:
            out.append("1/q - (m - b) < a")
        if not a < 1 / q:
            out.append("a < 1/q")
        if not a < 1 - u / p - m + b:
            out.append("a < 1 - u/p - m + b")
        return out

    def recipe(self):
        """``b = 1/p``, ``a = 1/(pq) - (m-1)``; returns None where infeasible."""
        b = 1.0 / self.p
        a = 1.0 / (self.p * self.q) - (self.m - 1.0)
        return (a, b) if not self.violations(a, b) else None


@dataclass(frozen=True)
class C2Result:
    value: float
    a: float
    b: float
    mode: str


def _log_c2_objective(P: C2Params, a, b):
    p, q, m, u, k, j = P.p, P.q, P.m, P.u, P.k, P.j
    first = _log_c1(a * q, (m - b) * q, k)
    second = _log_c1(a * p + (m - b) * p + u - p / q, b * p, j)
    return first / q + second / p


def _c2_fixed(P: C2Params, a: float, b: float) -> float:
    bad = P.violations(a, b)
    if bad:
        raise ConstraintError(bad[0], f"(a, b) = ({a}, {b}) violates {', '.join(bad)}")
    return float(np.exp(_log_c2_objective(P, a, b)))


def _cluster(n: int, spread: float = 14.0) -> np.ndarray:
    """Points in (0, 1) spaced evenly in logit, i.e. geometrically clustered at both ends."""
    return expit(np.linspace(-spread, spread, n))


@lru_cache(maxsize=512)
def _c2_search(P: C2Params, grid: int) -> C2Result:
    tb = _cluster(grid)
    ta = _cluster(grid)
    B = P.m * tb[:, None] * np.ones_like(ta)[None, :]
    lo, hi = P.a_window(B)
    A = lo + (hi - lo) * ta[None, :]
    with np.errstate(invalid="ignore", over="ignore"):
        L = np.where(hi > lo, _log_c2_objective(P, A, B), np.inf)
    L = np.where(np.isfinite(L), L, np.inf)
    i, jx = np.unravel_index(int(np.argmin(L)), L.shape)
    best = (float(L[i, jx]), float(A[i, jx]), float(B[i, jx]))

    def from_unit(x):
        b = P.m * expit(x[0])
        lo_, hi_ = P.a_window(b)
        if not hi_ > lo_:
            return None
        return lo_ + (hi_ - lo_) * expit(x[1]), b

    def obj(x):
        ab = from_unit(x)
        if ab is None:
            return np.inf
        v = float(_log_c2_objective(P, *ab))
        return v if np.isfinite(v) else np.inf

    starts = [np.array([logit(tb[i]), logit(ta[jx])])]
    rec = P.recipe()
    if rec is not None:
        a0, b0 = rec
        lo0, hi0 = P.a_window(b0)
        starts.append(np.array([logit(b0 / P.m), logit((a0 - lo0) / (hi0 - lo0))]))
        v0 = float(_log_c2_objective(P, a0, b0))
        if v0 < best[0]:
            best = (v0, a0, b0)
    for x0 in starts:
        res = optimize.minimize(obj, x0, method="Nelder-Mead",
                                options={"xatol": 1e-10, "fatol": 1e-14, "maxiter": 4000})
        ab = from_unit(res.x)
        if ab is not None and res.fun < best[0] and not P.violations(*ab):
            best = (float(res.fun), float(ab[0]), float(ab[1]))
    return C2Result(math.exp(best[0]), best[1], best[2], "grid")


def c2_constant(P: C2Params, mode: str = "grid", a: float | None = None, b: float | None = None,
                grid: int = 60) -> C2Result:
    """Hoelder-split constant C2 at a fixed ``(a, b)`` or minimized over the feasible set.

    The grid result is the smallest value found, hence an upper bound on the
    infimum; it is never worse than the ``b = 1/p`` recipe when that is feasible.
    """
    if mode == "fixed":
        if a is None or b is None:
            raise DomainError("fixed mode needs a and b")
        return C2Result(_c2_fixed(P, a, b), a, b, "fixed")
    if mode == "recipe":
        rec = P.recipe()
        if rec is None:
            raise ConstraintError("recipe", "b = 1/p, a = 1/(pq) - (m-1) is infeasible here")
        return C2Result(_c2_fixed(P, *rec), rec[0], rec[1], "recipe")
    if mode != "grid":
        raise DomainError(f"unknown mode {mode!r}")
    return _c2_search(P, grid)


def c2_special(p: float) -> float:
    """``pi / sin(pi/p)``, the recipe value at ``m = k = j = 1``, ``u = 0``."""
    if not p > 1:
        raise DomainError("p must exceed 1")
    return math.pi / math.sin(math.pi / p)


def check_c2_special(p: float, grid: int = 60) -> BoundReport:
    P = C2Params(p, 1.0, 1.0, 1.0, 0.0)
    fixed = c2_constant(P, "fixed", a=1.0 / (p * P.q), b=1.0 / p).value
    searched = c2_constant(P, "grid", grid=grid)
    target = c2_special(p)
    return BoundReport(
        "c2-special",
        {"p": p},
        lhs=fixed,
        rhs=target,
        relation="eq",
        eps=1e-10,
        notes={"grid_value": searched.value, "grid_a": searched.a, "grid_b": searched.b,
               "grid_over_special": searched.value / target},
    )


def c2_lemma_sides(P: C2Params, f, nodes: int = 200):
    """Both weighted norms of the C2 lemma for a radial profile ``f`` on [0, 1).

    ``g(x) = int_0^1 |f(y)| (1-xy)^{-m} y^k dy``; returns
    ``(||g||_{L^p(x^j (1-x)^{-u})}, ||f||_{L^p(x^k (1-x)^{-w})})``.
    """
    end = f.support_end
    br = tuple(f.breakpoints)
    if P.w >= 1 and end >= 1.0:
        raise DomainError(f"w = {P.w} >= 1 needs f supported away from 1")
    inner = WeightedRadialMeasure(P.k, 0.0, br, min(end, 1.0), nodes)
    y, wy = inner.rule
    fy = np.abs(f(y))
    outer = WeightedRadialMeasure(P.j, P.u, (), 1.0, nodes)
    x, _ = outer.rule
    g = (fy * wy) @ (1.0 - np.outer(y, x)) ** (-P.m)
    lhs = radial_integrate(g**P.p, outer) ** (1.0 / P.p)
    fw = WeightedRadialMeasure(P.k, P.w, br, min(end, 1.0), nodes)
    rhs = radial_integrate(lambda r: np.abs(f(r)) ** P.p, fw) ** (1.0 / P.p)
    return lhs, rhs


def check_c2_lemma(P: C2Params, f) -> BoundReport:
    c2 = c2_constant(P).value
    lhs, fnorm = c2_lemma_sides(P, f)
    lhs2, fnorm2 = c2_lemma_sides(P, f, nodes=133)
    err = abs(lhs - lhs2) + c2 * abs(fnorm - fnorm2)
    return BoundReport("c2-lemma", _params(P), lhs, c2 * fnorm, quad_err=err, notes={"c2": c2})


def _params(P: C2Params) -> dict:
    return {"p": P.p, "m": P.m, "k": P.k, "j": P.j, "u": P.u}


# ---------------------------------------------------------------- C3


def gamma_ratio(d: int) -> float:
    """``Gamma(d+1) Gamma(d+2) / Gamma((d+2)/2)^2`` for ``d = n - k >= 0``."""
    if d < 0:
        raise DomainError("n - k must be >= 0")
    return math.exp(math.lgamma(d + 1.0) + math.lgamma(d + 2.0) - 2.0 * math.lgamma((d + 2.0) / 2.0))


def c3_constant(s: float, n_minus_k: int, j_minus_k: float, u: float, grid: int = 60) -> float:
    """``2 * gamma_ratio(n-k) * C2(s, n-k+1, n-k+1, j-k, u)``.

    The factor 2 is the one carried by the derivative-mean bound this
    constant is built from; without it the weighted inequality can fail.
    """
    d = int(n_minus_k)
    if not 1 < s < math.inf:
        raise ConstraintError("1 < s < inf", f"s = {s}")
    if not j_minus_k > -1:
        raise ConstraintError("j - k > -1", f"j - k = {j_minus_k}")
    if not (1 - (d + 1) * s < u < 1):
        raise ConstraintError("1-(n+1-k)s < u < 1", f"u = {u}")
    P = C2Params(s, d + 1.0, d + 1.0, float(j_minus_k), float(u))
    return 2.0 * gamma_ratio(d) * c2_constant(P, grid=grid).value


def c3_closing_chain(p: float, n: int) -> float:
    """Closed-form upper bound for ``C3(p, n, 1, 0)`` from the ``b = 1/p`` recipe."""
    q = p / (p - 1.0)
    lg = math.lgamma
    log_val = (
        math.log(2.0) + lg(n + 1.0) + lg(n + 2.0) - 2.0 * lg(1.0 + n / 2.0)
        + lg(1.0 / p) + lg(1.0 / q) / p + (lg(n * q + 1.0 / q) - lg(n * q + 1.0)) / q
    )
    return math.exp(log_val)


# ---------------------------------------------------------------- disc helpers


def _twisted_rows(f: RadialFourierFunction, rho, n: int, k: int) -> np.ndarray:
    return twisted_derivative_coeffs(f.coefficient_table(rho), n, k)


def _analytic_rows(F: AnalyticFunction, radii) -> np.ndarray:
    radii = np.atleast_1d(np.asarray(radii, dtype=float))
    c = F.coeffs
    N = c.size - 1
    kk = np.arange(N + 1)
    with np.errstate(divide="ignore", invalid="ignore"):
        pw = np.where(kk == 0, 1.0, radii[:, None] ** kk)
    return np.concatenate([np.zeros((radii.size, N), dtype=complex), c * pw], axis=1)


def analytic_means(F: AnalyticFunction, radii, p: float) -> np.ndarray:
    return circle_means(_analytic_rows(F, radii), p)


def _support(f: RadialFourierFunction) -> float:
    return min(f.support_end(), 1.0)


def _order_check(n, k):
    if not (0 <= k <= n):
        raise ConstraintError("0 <= k <= n", f"k = {k}, n = {n}")


# ---------------------------------------------------------------- theorem checks


def check_prn_bound(f: CircleFunction, p: float, n: int, k: int, r: float) -> BoundReport:
    """``||P_r^(n) f||_p`` against the Sobolev-type bound on the circle."""
    _order_check(n, k)
    if not (0 < r < 1):
        raise ConstraintError("0 < r < 1", f"r = {r}")
    if not f.is_coefficients:
        f = fourier_coefficients(f, f.samples.size // 2 - 1)
    out = prn_operator(f, r, n)
    lhs = float(circle_means(out.coeffs, p)[0])
    deriv = twisted_derivative_coeffs(f.coeffs, n, k)
    dn = float(circle_means(deriv, p)[0])
    rhs = gamma_ratio(n - k) * r ** (n - k) * (1.0 - r * r) ** (k - n - 1) * dn
    return BoundReport("prn-bound", {"p": p, "n": n, "k": k, "r": r, "band": f.band}, lhs, rhs)


def _bpn_rhs(f, p, n, k, r, nodes):
    measure = WeightedRadialMeasure(n + 1 - k, 0.0, f.breakpoints(), _support(f), nodes)
    rho, _ = measure.rule
    mp = circle_means(_twisted_rows(f, rho, n, k), p)
    integral = radial_integrate(mp * (1.0 - (r * rho) ** 2) ** (k - n - 1), measure)
    return 2.0 * gamma_ratio(n - k) * r ** (-k) * integral


def check_bpn_bound(f: RadialFourierFunction, p: float, n: int, k: int, r: float,
                    nodes: int = 400) -> BoundReport:
    """``M_p(r, (Pf)^(n))`` against the layered radial bound."""
    _order_check(n, k)
    if not (0 < r < 1):
        raise ConstraintError("0 < r < 1", f"r = {r}")
    F = project_fourier(f).analytic.derivative(n)
    lhs = float(analytic_means(F, [r], p)[0])
    if _support(f) == 0.0:
        rhs, err = 0.0, 0.0
    else:
        rhs = _bpn_rhs(f, p, n, k, r, nodes)
        err = abs(rhs - _bpn_rhs(f, p, n, k, r, (2 * nodes) // 3))
    return BoundReport("bpn-bound", {"p": p, "n": n, "k": k, "r": r}, lhs, rhs, quad_err=err)


def _weighted_sides(f, p, s, n, k, j, u, nodes):
    F = project_fourier(f).analytic.derivative(n)
    lm = WeightedRadialMeasure(j, u, (), 1.0, nodes)
    r, _ = lm.rule
    lhs = radial_integrate(analytic_means(F, r, p) ** s, lm) ** (1.0 / s)
    w = u + (n - k) * s
    end = _support(f)
    if end == 0.0:
        return lhs, 0.0
    if end >= 1.0 and w >= 1.0:
        return lhs, math.inf
    rm = WeightedRadialMeasure(n - k + 1, w, f.breakpoints(), end, nodes)
    rho, _ = rm.rule
    rhs = radial_integrate(circle_means(_twisted_rows(f, rho, n, k), p) ** s, rm) ** (1.0 / s)
    return lhs, rhs


def _weighted_report(tag, params, const, f, p, s, n, k, j, u, nodes):
    lhs, base = _weighted_sides(f, p, s, n, k, j, u, nodes)
    lhs2, base2 = _weighted_sides(f, p, s, n, k, j, u, (2 * nodes) // 3)
    rhs = const * base
    err = abs(lhs - lhs2) + (const * abs(base - base2) if math.isfinite(base) else 0.0)
    notes = {"constant": const, "w": u + (n - k) * s}
    if not math.isfinite(base):
        notes["rhs_infinite"] = True
    return BoundReport(tag, params, lhs, rhs, quad_err=err, notes=notes)


def check_weighted_norm(f: RadialFourierFunction, p: float, s: float, n: int, k: int,
                        j: float, u: float, nodes: int = 400) -> BoundReport:
    """Weighted ``L^s`` norm of ``M_p(r, (Pf)^(n))`` against C3 times the twisted-derivative norm."""
    _order_check(n, k)
    if not j - k > -1:
        raise ConstraintError("j - k > -1", f"j - k = {j - k}")
    if not (1 - (n + 1 - k) * s < u < 1):
        raise ConstraintError("1-(n+1-k)s < u < 1", f"u = {u}, s = {s}")
    const = c3_constant(s, n - k, j - k, u)
    params = {"p": p, "s": s, "n": n, "k": k, "j": j, "u": u}
    return _weighted_report("weighted-norm", params, const, f, p, s, n, k, j, u, nodes)


def check_sobolev_corollary(f: RadialFourierFunction, p: float, n: int, nodes: int = 400) -> BoundReport:
    """``||P(f)^(n)||_{L^p(r^n dA)} <= (2 pi / sin(pi/p)) ||d^n/dtheta^n(e^{-in theta} f)||_{L^p(dA)}``."""
    if not 1 < p < math.inf:
        raise ConstraintError("1 < p < inf", f"p = {p}")
    const = 2.0 * c2_special(p)
    params = {"p": p, "n": n}
    return _weighted_report("sobolev-corollary", params, const, f, p, p, n, n, n + 1, 0.0, nodes)


def check_second_corollary(f: RadialFourierFunction, p: float, n: int, k: int,
                           nodes: int = 400) -> BoundReport:
    """Derivative order ``n+k`` with weights ``r^k dA`` and ``r^n (1-r)^{-np} dA``."""
    if not 1 < p < math.inf:
        raise ConstraintError("1 < p < inf", f"p = {p}")
    const = c3_constant(p, n, 1.0, 0.0)
    params = {"p": p, "n": n, "k": k}
    rep = _weighted_report("second-corollary", params, const, f, p, p, n + k, k, k + 1, 0.0, nodes)
    rep.notes["closing_chain"] = c3_closing_chain(p, n)
    return rep


# ---------------------------------------------------------------- growth probe


PROBE_RADII = 1.0 - np.logspace(-1, -3, 25)


@dataclass
class GrowthReport:
    beta: float
    predicted_ceiling: float
    radii: np.ndarray
    means: np.ndarray
    residual: float
    heuristic: bool = True

    def to_record(self) -> dict:
        return _jsonable(
            {
                "tag": "lipschitz-probe",
                "beta": self.beta,
                "predicted_ceiling": self.predicted_ceiling,
                "consistent": self.beta <= self.predicted_ceiling + 0.1,
                "residual": self.residual,
                "heuristic": self.heuristic,
            }
        )


def fit_growth_exponent(radii, means):
    """Least-squares ``beta`` in ``means ~ C (1-r)^{-beta}``; returns ``(beta, rms residual)``."""
    radii = np.asarray(radii, dtype=float)
    means = np.asarray(means, dtype=float)
    if np.any(~np.isfinite(means)) or np.any(means <= 0):
        raise FitError("integral means must be positive and finite for a log-log fit")
    X = -np.log1p(-radii)
    Y = np.log(means)
    A = np.vstack([X, np.ones_like(X)]).T
    (beta, _), res, *_ = np.linalg.lstsq(A, Y, rcond=None)
    rms = float(np.sqrt(res[0] / X.size)) if res.size else 0.0
    return float(beta), rms


def lipschitz_growth_probe(f: RadialFourierFunction, p: float, n: int, alpha: float,
                           radii=None) -> GrowthReport:
    """Slope of ``log M_p(r, (Pf)^(n))`` against ``-log(1-r)`` near the boundary."""
    if not 0 < alpha < 1:
        raise DomainError("alpha must lie in (0, 1)")
    radii = PROBE_RADII if radii is None else np.asarray(radii, dtype=float)
    F = project_fourier(f).analytic.derivative(n)
    means = analytic_means(F, radii, p)
    beta, rms = fit_growth_exponent(radii, means)
    return GrowthReport(beta, 1.0 - alpha, radii, means, rms)


def power_model(gamma: float, terms: int = 40000) -> RadialFourierFunction:
    """Taylor truncation of ``(1-z)^gamma`` written mode-wise."""
    c = power_model_coefficients(gamma, terms)
    return RadialFourierFunction({int(i): MonomialProfile(v, int(i)) for i, v in enumerate(c) if v != 0})


def power_model_coefficients(gamma: float, terms: int) -> np.ndarray:
    c = np.empty(terms)
    c[0] = 1.0
    k = np.arange(terms - 1)
    c[1:] = np.cumprod((k - gamma) / (k + 1.0))
    return c


def extremal_density(F_coeffs, p: int) -> RadialFourierFunction:
    """``|F|^{p-2} F`` for a polynomial ``F`` and even ``p``, mode-wise and exact.

    With ``h = p/2``, ``|F|^{p-2} F = F^h * conj(F)^{h-1}``; the product of
    ``z^a`` and ``conj(z)^c`` is ``r^{a+c} e^{i(a-c) theta}``.
    """
    if p < 2 or p % 2:
        raise DomainError("exact extremal densities need an even integer p >= 2")
    F = np.asarray(F_coeffs, dtype=complex)
    h = p // 2
    A = np.array([1.0 + 0j])
    for _ in range(h):
        A = np.convolve(A, F)
    C = np.array([1.0 + 0j])
    for _ in range(h - 1):
        C = np.convolve(C, np.conj(F))
    top = A.size + C.size
    modes: dict = {}
    for c_idx, cv in enumerate(C):
        if cv == 0:
            continue
        for a_idx in np.nonzero(A)[0]:
            mode = int(a_idx) - c_idx
            power = int(a_idx) + c_idx
            arr = modes.setdefault(mode, np.zeros(top, dtype=complex))
            arr[power] += A[a_idx] * cv
    return RadialFourierFunction({n: PolynomialProfile(v) for n, v in sorted(modes.items())})
