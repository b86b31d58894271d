"""Acceptance criteria 1-12, one reported PASS/FAIL line each.

Criteria 7 and 8 are reported as FAIL: the derivative bounds are false for
k >= 1 (see ``test_bounds.py::test_prn_fails_for_single_mode_k2``).  Those
tests assert the exact shape of the failure and then xfail.
"""

import math
import subprocess
import sys
import time
from pathlib import Path

import numpy as np
import pytest

from bergman_means import bounds, counterexample
from bergman_means.bounds import C2Params, c1_constant, c2_constant, c2_special
from bergman_means.projection import project_fourier
from bergman_means.specs import build
from bergman_means.suites import SuiteConfig, run_suite

ROOT = Path(__file__).resolve().parents[1]
SEED = 7


def _suite(name, **kw):
    return run_suite(SuiteConfig(suite=name, seed=SEED, **kw))


def _by_tag(records, tag):
    return [r for r in records if r["tag"] == tag]


def _rel(r):
    return abs(r["lhs"] - r["rhs"]) / abs(r["rhs"])


def test_criterion_01_hypergeometric(acceptance):
    t0 = time.perf_counter()
    recs = _suite("hypergeometric", cases=200)
    elapsed = time.perf_counter() - t0
    worst = {}
    for tag in ("euler-transform", "euler-integral", "kummer-quadratic"):
        rows = _by_tag(recs, tag)
        assert len(rows) == 200
        worst[tag] = max(_rel(r) for r in rows)
    ok = max(worst.values()) <= 1e-8 and elapsed < 10.0
    acceptance(1, ok, f"max rel residual {max(worst.values()):.2e}, {elapsed:.1f} s")
    assert ok, (worst, elapsed)


RADII = np.round(np.arange(0.1, 0.951, 0.05), 2)


def test_criterion_02_lemma1_identity(acceptance):
    worst = 0.0
    for p in (1.5, 2.0, 3.0, 4.0, 6.0):
        for r in RADII:
            rep = bounds.check_lemma1_identity(p, float(r))
            worst = max(worst, abs(rep.lhs - rep.rhs) / rep.rhs)
    p2 = max(abs(bounds.lemma1_closed_form(2.0, r) * (1 - r * r) - 1.0) for r in RADII)
    ok = worst <= 1e-9 and p2 <= 1e-12
    acceptance(2, ok, f"max rel residual {worst:.2e}; p=2 deviation {p2:.1e}")
    assert ok


def test_criterion_03_lemma1_sharpness(acceptance):
    details, ok = [], True
    for p in (2.0, 3.0, 4.0):
        rep = bounds.check_lemma1_sharpness(p, RADII)
        rel = abs(rep.lhs / rep.rhs - 1.0)
        ok &= rep.side_conditions["nondecreasing"] and rel <= 0.02
        details.append(f"p={p:g}: {rel:.1e}")
    acceptance(3, ok, "edge gap " + ", ".join(details))
    assert ok


def test_criterion_04_c1(acceptance):
    closed = abs(c1_constant(0.5, 1.0, 1.0) - math.pi)
    recs = _by_tag(_suite("c1", cases=50), "c1-bound")
    draws = [r for r in recs if r["params"].get("points") == 50]
    ok = closed <= 1e-12 and len(draws) == 50 and all(r["pass"] for r in draws)
    worst = max(r["notes"]["sharpness_ratio"] for r in draws)
    acceptance(4, ok, f"|C1 - pi| = {closed:.1e}; 50 draws, worst ratio {worst:.9f}")
    assert ok


def test_criterion_05_c2_special(acceptance):
    worst_fixed, worst_grid = 0.0, -math.inf
    for p in (1.5, 2.0, 4.0):
        P = C2Params(p, 1.0, 1.0, 1.0, 0.0)
        fixed = c2_constant(P, "fixed", a=1.0 / (p * P.q), b=1.0 / p).value
        target = c2_special(p)
        worst_fixed = max(worst_fixed, abs(fixed - target) / target)
        worst_grid = max(worst_grid, c2_constant(P, "grid").value / target - 1.0)
    ok = worst_fixed <= 1e-10 and worst_grid <= 1e-6
    acceptance(5, ok, f"recipe rel err {worst_fixed:.1e}; grid excess {worst_grid:.1e}")
    assert ok


def test_criterion_06_projection(acceptance):
    recs = _suite("projection", cases=50)
    oracle = _by_tag(recs, "projection-oracle")
    mono = max(r["lhs"] for r in _by_tag(recs, "projection-monomial"))
    unit = abs(project_fourier(build({"kind": "taylor", "coefficients": [1]})).coefficients[0] - 1.0)
    disagree = max(r["lhs"] for r in oracle)
    ok = (len(oracle) == 50 and all(r["params"]["points"] == 20 for r in oracle)
          and disagree <= 1e-7 and mono <= 1e-10 and unit <= 1e-12)
    acceptance(6, ok, f"oracle gap {disagree:.1e}; monomials {mono:.1e}; P(1)-1 {unit:.1e}")
    assert ok


def _failure_shape(records, order_key):
    """Failures must be genuine (beyond quadrature error) and confined to order >= 1."""
    assert not [r for r in records if r["status"] == "error"]
    fails = [r for r in records if not r["pass"]]
    assert all(r["params"][order_key] >= 1 for r in fails)
    assert all(r["failure_analysis"] == "exceeds-quadrature-error" for r in fails)
    assert all(r["pass"] for r in records if r["params"][order_key] == 0)
    return fails


def test_criterion_07_theorem_suites(acceptance):
    t0 = time.perf_counter()
    counts, fails = {}, []
    for suite, tag in (("prn", "prn-bound"), ("bpn", "bpn-bound"), ("weighted", "weighted-norm")):
        recs = _by_tag(_suite(suite, cases=100), tag)
        assert len(recs) == 100
        bad = _failure_shape(recs, "k")
        counts[suite] = 100 - len(bad)
        fails += bad
    elapsed = time.perf_counter() - t0
    assert elapsed < 300
    ok = not fails
    detail = ", ".join(f"{k} {v}/100" for k, v in counts.items()) + f", {elapsed:.0f} s"
    if fails:
        detail += "; every failure has k >= 1 (single-mode witnesses, see README)"
    acceptance(7, ok, detail)
    if fails:
        pytest.xfail("derivative bounds fail for k >= 1; k = 0 cases all pass")


def test_criterion_08_sobolev(acceptance):
    recs = _suite("sobolev")
    grid = {(r["params"]["p"], r["params"]["n"]) for r in recs}
    assert grid == {(p, n) for p in (1.5, 2.0, 3.0) for n in (0, 1, 2)}
    fails = _failure_shape(recs, "n")
    ok = not fails
    detail = f"{len(recs) - len(fails)}/{len(recs)} pass"
    if fails:
        where = sorted({(r["params"]["p"], r["params"]["n"]) for r in fails})
        detail += f"; failures at (p, n) = {where}, all with n >= 1"
    acceptance(8, ok, detail)
    if fails:
        pytest.xfail("corollary inherits the k >= 1 failure; n = 0 cases all pass")


def test_criterion_09_counterexample(acceptance):
    s = counterexample.build_schedule(200)
    f = counterexample.build_function(s)
    rows = s.rows()
    b2_closed = (5.0 / 16.0 + 2 ** -2.5) ** 0.2
    base = (abs(rows[0][1] - 2 ** -0.5) < 1e-15 and rows[0][3] == 0 and rows[1][3] == 3
            and abs(rows[1][1] - b2_closed) <= 1e-4 and abs(rows[1][1] - 0.8668) <= 1e-4)
    mu = counterexample.reintegrate_masses(s)
    mass = float(np.max(np.abs(mu - 0.25)))
    coef = np.abs(2.0 * np.asarray(f.amplitudes) * mu)
    coef_err = float(np.max(np.abs(coef - np.abs(f.amplitudes) / 2)))
    div = counterexample.divergence_report(f)
    prof = f.sup_profile(np.logspace(0, math.log10(float(s.complements[-1])) + 1e-9, 400))
    sup_ok = bool(np.all(np.diff(prof) <= 0)) and prof[-1] < 0.1
    ok = base and mass <= 1e-12 and coef_err <= 1e-12 and div.dominates_harmonic and sup_ok
    acceptance(9, ok, f"depth 200; mass err {mass:.1e}; coef err {coef_err:.1e}; "
                      f"S_200 {div.partial_sums[-1]:.3f} >= H_200/16 {div.harmonic_envelope[-1]:.3f}; "
                      f"M_inf tail {prof[-1]:.3f}")
    assert ok


def test_criterion_10_smooth(acceptance):
    f = counterexample.smooth_variant(counterexample.build_schedule(50))
    rep = counterexample.projection_coefficients(f)
    ratio = min(f.plateau_ratios)
    ok = ratio >= 0.5 and rep.meets_printed_bound
    worst = min(abs(c) / q for c, q in zip(rep.coefficients, rep.printed_bound))
    acceptance(10, ok, f"min plateau ratio {ratio:.4f}; min |coef| / (c_n/4) {worst:.3f}")
    assert ok


def test_criterion_11_lipschitz(acceptance):
    recs = _by_tag(_suite("lipschitz"), "lipschitz-probe")
    model = [r for r in recs if "alpha" in r["params"]]
    worst = max(r["lhs"] for r in model)
    ok = bool(model) and all(r["pass"] for r in model) and worst <= 0.1
    acceptance(11, ok, f"{len(model)} model fits, worst |beta - exponent| {worst:.3f}")
    assert ok


def _cli(*args):
    return subprocess.run([sys.executable, "-m", "bergman_means", *args], cwd=ROOT,
                          capture_output=True, timeout=1200)


def test_criterion_12_cli_determinism(acceptance):
    runs = [_cli("verify", "--suite", "all", "--seed", str(SEED), "--jobs", str(j)) for j in (1, 8, 8)]
    identical = all(r.stdout == runs[0].stdout for r in runs) and runs[0].stdout
    codes = [r.returncode for r in runs]
    golden = [
        (("verify", "--suite", "hypergeometric", "--seed", str(SEED)), 0),
        (("sweep", "--check", "prn", "--spec", "tests/data/mode5.json", "--p", "2", "--n", "2",
          "--k", "2", "--r", "0.7"), 1),
        (("verify", "--suite", "no-such-suite"), 2),
    ]
    got = [_cli(*argv).returncode for argv, _ in golden]
    ok = bool(identical) and len(set(codes)) == 1 and got == [c for _, c in golden]
    acceptance(12, ok, f"{len(runs[0].stdout.splitlines())} records identical at jobs 1/8/8 "
                       f"(exit {codes[0]}); golden exits {got}")
    assert ok
