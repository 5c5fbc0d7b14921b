"""Acceptance checklist: twelve self-timed checks over the whole package.

Each criterion function runs one end-to-end check with its tolerances and
time budget baked in and returns a CriterionResult; run_all executes the
list in order.  The test suite and the command-line `accept` verb both
drive these, so the pass/fail lines printed there come from one place.
"""

from __future__ import annotations

import cmath
import itertools
import math
import time
from dataclasses import dataclass
from fractions import Fraction

import numpy as np
from mpmath import mp, mpf

from .angles import Angle
from .cardioid import external_angle, find_orbit, landing_pair, scan_orbits
from .cfrac import CFExpansion, brjuno_partial_sums
from .cantor import semiconjugacy_check
from .combdomain import (
    OmegaDomain,
    build_gamma_n,
    chain_midpoint,
    crosscut_chain,
    gamma_hausdorff,
    impression_segments,
    toy_sequences,
)
from .dynamics import (
    cardioid_parameter,
    hausdorff_distance,
    lavrentiev_monte_carlo,
    render_julia,
    trace_ray,
)
from .linearize import (
    conformal_radius_estimate,
    functional_residual,
    inner_radius_probe,
    linearization_coeffs,
    radius_ratio_experiment,
)

GOLDEN = CFExpansion((), (1,))
SILVER = CFExpansion((), (2,))
ALTERNATING = CFExpansion((), (1, 2))


@dataclass(frozen=True)
class CriterionResult:
    ident: str
    title: str
    passed: bool
    detail: str
    seconds: float
    budget_seconds: float

    @property
    def line(self) -> str:
        verdict = "PASS" if self.passed else "FAIL"
        return (
            f"{verdict} {self.ident} {self.title} "
            f"[{self.seconds:.2f}s/{self.budget_seconds:.0f}s] {self.detail}"
        )


def _finish(
    ident: str,
    title: str,
    started: float,
    budget: float,
    passed: bool,
    detail: str,
) -> CriterionResult:
    elapsed = time.perf_counter() - started
    return CriterionResult(
        ident=ident,
        title=title,
        passed=passed and elapsed < budget,
        detail=detail,
        seconds=elapsed,
        budget_seconds=budget,
    )


def criterion_exact_landing_pairs() -> CriterionResult:
    t0 = time.perf_counter()
    cases = {
        (1, 2): (Fraction(1, 3), Fraction(2, 3)),
        (2, 3): (Fraction(5, 7), Fraction(6, 7)),
        (3, 5): (Fraction(21, 31), Fraction(22, 31)),
    }
    bad = []
    for (p, q), want in cases.items():
        lo, hi = landing_pair(p, q)
        if (lo.fraction, hi.fraction) != want:
            bad.append(f"{p}/{q} -> {lo.fraction},{hi.fraction}")
    detail = "three rotation numbers exact" if not bad else "; ".join(bad)
    return _finish("C01", "landing pairs", t0, 1.0, not bad, detail)


def criterion_orbit_uniqueness() -> CriterionResult:
    t0 = time.perf_counter()
    failures = []
    total = 0
    for q in range(2, 13):
        by_rotation = scan_orbits(q)
        for p in range(1, q):
            if math.gcd(p, q) != 1:
                continue
            total += 1
            found = by_rotation.get(Fraction(p, q), [])
            if len(found) != 1:
                failures.append(f"{p}/{q}: {len(found)} orbits")
            elif tuple(sorted(find_orbit(p, q).angles)) != tuple(
                sorted(Angle(Fraction(k, 2**q - 1)) for k in found[0])
            ):
                failures.append(f"{p}/{q}: direct orbit differs from scan")
    detail = f"{total} coprime pairs, each a unique scanned orbit"
    if failures:
        detail = "; ".join(failures[:4])
    return _finish("C02", "orbit uniqueness q<=12", t0, 10.0, not failures, detail)


def criterion_external_angle_stability() -> CriterionResult:
    t0 = time.perf_counter()
    coarse = external_angle(GOLDEN, 16)
    fine = external_angle(GOLDEN, 24)
    gap = abs(coarse.approx.fraction - fine.approx.fraction)
    gap = min(gap, 1 - gap)
    prefix = tuple(a.fraction for a in fine.iterates[:3])
    want = (Fraction(1, 3), Fraction(5, 7), Fraction(21, 31))
    ok = gap < Fraction(1, 2**15) and prefix == want
    detail = f"|a16 - a24| = {float(gap):.3e}, first iterates {prefix == want}"
    return _finish("C03", "external angle stability", t0, 30.0, ok, detail)


def criterion_semiconjugacy() -> CriterionResult:
    t0 = time.perf_counter()
    details = []
    ok = True
    for name, cf in (("golden", GOLDEN), ("silver", SILVER)):
        report = semiconjugacy_check(cf, 200, min_prec=240)
        good = report.passed and report.undecided_pairs == 0
        good = good and report.alpha_exponent >= 240
        ok = ok and good
        details.append(f"{name}: exp {report.alpha_exponent}, ok {report.passed}")
    return _finish("C04", "semiconjugacy order N=200", t0, 60.0, ok, "; ".join(details))


def criterion_brjuno_closed_form() -> CriterionResult:
    t0 = time.perf_counter()
    sums = brjuno_partial_sums(GOLDEN, 50, prec_bits=128)
    nondecreasing = all(b >= a for a, b in zip(sums, sums[1:]))
    with mp.workprec(128):
        theta = (mp.sqrt(5) - 1) / 2
        closed = mp.log(1 / theta) / (1 - theta)
        err = abs(sums[-1] - closed)
    ok = nondecreasing and err < mpf("1e-6")
    detail = f"|S_50 - closed form| = {float(err):.2e}, nondecreasing {nondecreasing}"
    return _finish("C05", "Brjuno closed form", t0, 1.0, ok, detail)


def criterion_linearization_identities() -> CriterionResult:
    t0 = time.perf_counter()
    series = linearization_coeffs(GOLDEN, 200, prec=256)
    with mp.workprec(256):
        lam = series.lam
        b2_err = abs(series.coeffs[1] - 1 / (lam * lam - lam))
    est = conformal_radius_estimate(series)
    residual = functional_residual(series, est.r_hat, factor=0.5, samples=200)
    ok = b2_err < mpf("1e-60") and residual < mpf("1e-10")
    detail = f"b2 err {float(b2_err):.1e}, residual {float(residual):.1e}"
    return _finish("C06", "linearization identities", t0, 10.0, ok, detail)


def criterion_koebe_sandwich() -> CriterionResult:
    t0 = time.perf_counter()
    details = []
    ok = True
    for name, cf in (("golden", GOLDEN), ("silver", SILVER), ("alt", ALTERNATING)):
        series = linearization_coeffs(cf, 512, prec=256)
        est = conformal_radius_estimate(series)
        probe = inner_radius_probe(series, est.r_hat)
        lo = mpf("0.99") * est.r_hat / 4
        hi = mpf("1.01") * est.r_hat
        good = lo <= probe.value <= hi and not probe.tail_flagged
        ok = ok and good
        details.append(f"{name}: rho/r = {float(probe.value / est.r_hat):.3f}")
    return _finish("C07", "Koebe sandwich", t0, 30.0, ok, "; ".join(details))


def criterion_radius_ratio_trend() -> CriterionResult:
    t0 = time.perf_counter()
    exp = radius_ratio_experiment((1, 1, 1, 1, 1, 1), 2, range(3, 7), order=256)
    devs = {row.n: float(row.deviation) for row in exp.rows}
    ok = exp.trend_ok and exp.reliable
    detail = ", ".join(f"n={n}: {devs[n]:.3f}" for n in sorted(devs))
    return _finish("C08", "radius ratio trend A=2", t0, 300.0, ok, detail)


def criterion_rendering_oracles() -> CriterionResult:
    t0 = time.perf_counter()
    bound = 2 * 2.0**-8

    grid_circle = render_julia(0j, 8)
    near = grid_circle.near_points()
    ts = np.linspace(0.0, 2 * math.pi, 4096, endpoint=False)
    circle = np.cos(ts) + 1j * np.sin(ts)
    hd_circle = hausdorff_distance(near, circle)

    grid_seg = render_julia(-2 + 0j, 8)
    xs = np.linspace(-2.0, 2.0, 8192)
    segment = xs + 0j
    hd_segment = hausdorff_distance(grid_seg.near_points(), segment)

    ok = hd_circle <= bound and hd_segment <= bound
    detail = f"circle {hd_circle:.4f}, segment {hd_segment:.4f}, bound {bound:.4f}"
    return _finish("C09", "rendering oracles res 8", t0, 60.0, ok, detail)


def criterion_ray_landing_oracles() -> CriterionResult:
    t0 = time.perf_counter()
    plus = trace_ray(-2 + 0j, Fraction(0, 1), t_min=1e-6).points[-1]
    minus = trace_ray(-2 + 0j, Fraction(1, 2), t_min=1e-6).points[-1]
    cheb_ok = abs(plus - 2) < 1e-3 and abs(minus + 2) < 1e-3

    radial_dev = 0.0
    for num, den in ((1, 7), (1, 3), (3, 8)):
        ray = trace_ray(0j, Fraction(num, den), t_min=1e-6)
        direction = cmath.exp(2j * math.pi * num / den)
        for z in ray.points:
            radial_dev = max(radial_dev, abs(z - abs(z) * direction))
    ok = cheb_ok and radial_dev < 1e-9
    detail = f"end gaps {abs(plus - 2):.1e}/{abs(minus + 2):.1e}, radial {radial_dev:.1e}"
    return _finish("C10", "ray landing oracles", t0, 30.0, ok, detail)


def criterion_lavrentiev_monte_carlo() -> CriterionResult:
    t0 = time.perf_counter()
    results = lavrentiev_monte_carlo(100)
    violations = [r for r in results if not r.holds]
    worst = max(r.image_diam / r.bound for r in results)
    ok = len(results) == 100 and not violations
    detail = f"{len(results)} crosscuts, worst image/bound {worst:.3f}"
    return _finish("C11", "Lavrentiev Monte Carlo", t0, 60.0, ok, detail)


def criterion_omega_gallery() -> CriterionResult:
    t0 = time.perf_counter()
    a_seq, b_seq = toy_sequences()
    dom = OmegaDomain(a_seq, b_seq)

    cauchy_ok = True
    for n in (2, 3, 4):
        if gamma_hausdorff(dom, n, n + 2) > 2 * 3.0**-n:
            cauchy_ok = False

    chain_ok = True
    for n in range(1, 9):
        seg = crosscut_chain(n)
        if seg.diameter != Fraction(2, 3 ** (n + 1)):
            chain_ok = False
        if not seg.contains_point(chain_midpoint(n)):
            chain_ok = False

    prev_inner, prev_outer = impression_segments(dom, 1)
    sandwich_ok = True
    for k in range(2, 9):
        inner, outer = impression_segments(dom, k)
        if inner.diameter < prev_inner.diameter or outer.diameter > prev_outer.diameter:
            sandwich_ok = False
        prev_inner, prev_outer = inner, outer

    ok = cauchy_ok and chain_ok and sandwich_ok
    detail = f"cauchy {cauchy_ok}, chain {chain_ok}, sandwich {sandwich_ok}"
    return _finish("C12", "omega gallery toy family", t0, 30.0, ok, detail)


ALL_CRITERIA = (
    criterion_exact_landing_pairs,
    criterion_orbit_uniqueness,
    criterion_external_angle_stability,
    criterion_semiconjugacy,
    criterion_brjuno_closed_form,
    criterion_linearization_identities,
    criterion_koebe_sandwich,
    criterion_radius_ratio_trend,
    criterion_rendering_oracles,
    criterion_ray_landing_oracles,
    criterion_lavrentiev_monte_carlo,
    criterion_omega_gallery,
)


def run_all() -> list[CriterionResult]:
    return [fn() for fn in ALL_CRITERIA]
