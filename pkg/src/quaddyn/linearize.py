"""Power-series linearization of z -> lam*z + z^2 at an irrational rotation.

For lam = exp(2*pi*i*theta) the formal change of variable phi with phi(0) = 0
and phi'(0) = 1 conjugating multiplication by lam to the quadratic map has
coefficients given by a convolution recursion divided by the small
denominators lam^n - lam.  The radius of convergence of that series is the
conformal radius of the linearization domain; everything returned here is an
estimate read off finitely many coefficients, never a certified value, and
the diagnostics say how much to trust it.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from mpmath import mp, mpc, mpf

from .cfrac import CFExpansion, perturbed_cf
from .errors import InvariantError, PrecisionError

__all__ = [
    "LinearizationSeries",
    "RadiusEstimate",
    "InnerProbe",
    "RatioRow",
    "RatioExperiment",
    "linearization_coeffs",
    "conformal_radius_estimate",
    "inner_radius_probe",
    "functional_residual",
    "koebe_bound_F",
    "radius_ratio_experiment",
]


@dataclass(frozen=True)
class LinearizationSeries:
    """Truncated linearization series: multiplier and coefficients b_1..b_N."""

    lam: mpc
    coeffs: tuple[mpc, ...]
    prec: int

    @property
    def order(self) -> int:
        return len(self.coeffs)

    def evaluate(self, w: complex) -> mpc:
        """Truncated series value by Horner evaluation from the top."""
        with mp.workprec(self.prec):
            acc = mpc(0)
            for b in reversed(self.coeffs):
                acc = acc * w + b
            return acc * w

    def residual(self, w: complex) -> mpc:
        """Functional-equation defect phi(lam*w) - lam*phi(w) - phi(w)^2."""
        with mp.workprec(self.prec):
            left = self.evaluate(self.lam * w)
            right = self.evaluate(w)
            return left - self.lam * right - right * right


def linearization_coeffs(
    cf: CFExpansion, order: int, prec: int = 256
) -> LinearizationSeries:
    """Coefficients of the linearization series up to the given order.

    b_1 = 1 and b_n * (lam^n - lam) is the full convolution of lower
    coefficients.  A small denominator indistinguishable from zero at the
    working precision aborts with the offending index, since every later
    coefficient would be garbage.
    """
    if cf.is_rational:
        raise InvariantError("linearization needs an irrational rotation number")
    if order < 2:
        raise InvariantError("need order >= 2")
    with mp.workprec(prec):
        theta = cf.value_mpf(prec)
        lam = mp.expjpi(2 * theta)
        floor = mpf(2) ** (-(prec - 8))
        b: list[mpc] = [mpc(0), mpc(1)]
        lam_pow = lam
        for n in range(2, order + 1):
            lam_pow *= lam
            denom = lam_pow - lam
            if abs(denom) < floor:
                raise PrecisionError(
                    f"small denominator at n={n} is below working precision"
                )
            total = mpc(0)
            for i in range(1, n):
                total += b[i] * b[n - i]
            b.append(total / denom)
        return LinearizationSeries(lam=lam, coeffs=tuple(b[1:]), prec=prec)


@dataclass(frozen=True)
class RadiusEstimate:
    """Root-test estimate of the series' radius of convergence.

    half_order is the same estimator run on the first half of the series;
    reliable means the two agree within 25%, which filters out coefficient
    blow-ups that have not yet settled into geometric growth.
    """

    r_hat: mpf
    half_order: mpf
    reliable: bool
    window: tuple[int, int]


def _root_test(coeffs: Sequence[mpc], lo: int, hi: int) -> mpf:
    worst = mpf(0)
    for n in range(lo, hi + 1):
        mag = abs(coeffs[n - 1]) ** (mpf(1) / n)
        if mag > worst:
            worst = mag
    if worst == 0:
        raise PrecisionError("all coefficients in the root-test window vanish")
    return 1 / worst


def conformal_radius_estimate(series: LinearizationSeries) -> RadiusEstimate:
    """Estimate the conformal radius as 1 over the tail max of |b_n|^(1/n).

    The max runs over the top half of the computed coefficients, which damps
    the oscillation caused by near-resonant indices.
    """
    n = series.order
    if n < 32:
        raise InvariantError("radius estimation needs order >= 32")
    with mp.workprec(series.prec):
        full = _root_test(series.coeffs, n // 2, n)
        half = _root_test(series.coeffs, n // 4, n // 2)
        agree = abs(full - half) <= mpf("0.25") * full
    return RadiusEstimate(
        r_hat=full, half_order=half, reliable=bool(agree), window=(n // 2, n)
    )


@dataclass(frozen=True)
class InnerProbe:
    """Minimum of |phi| on a circle just inside the estimated radius.

    tail_flagged is set when the crude geometric tail estimate of the
    truncation error exceeds 1% of the reported value, in which case the
    probe says more about the truncation than about the disk.
    """

    value: mpf
    tail_flagged: bool
    samples: int


def inner_radius_probe(
    series: LinearizationSeries, r_hat: mpf, samples: int = 512
) -> InnerProbe:
    """Probe min |phi(w)| over equispaced w on the circle |w| = 0.98 * r_hat.

    The result is a sampled proxy for the distance from the fixed point to
    the boundary of the linearization domain.
    """
    if samples < 8:
        raise InvariantError("need at least 8 samples")
    with mp.workprec(series.prec):
        radius = mpf("0.98") * mpf(r_hat)
        best = None
        for k in range(samples):
            w = radius * mp.expjpi(mpf(2 * k) / samples)
            value = abs(series.evaluate(w))
            if best is None or value < best:
                best = value
        top = abs(series.coeffs[-1]) * radius ** series.order
        tail = top * mpf("0.98") / (1 - mpf("0.98"))
        flagged = bool(tail > mpf("0.01") * best)
    return InnerProbe(value=best, tail_flagged=flagged, samples=samples)


def functional_residual(
    series: LinearizationSeries, r_hat: mpf, factor: float = 0.5, samples: int = 64
) -> mpf:
    """Max |phi(lam w) - lam phi(w) - phi(w)^2| over a sampled circle.

    Sampling happens on |w| = factor * r_hat, well inside the estimated
    convergence disk so the truncated series is trustworthy there.
    """
    with mp.workprec(series.prec):
        radius = mpf(factor) * mpf(r_hat)
        worst = mpf(0)
        for k in range(samples):
            w = radius * mp.expjpi(mpf(2 * k) / samples)
            value = abs(series.residual(w))
            if value > worst:
                worst = value
        return worst


def koebe_bound_F(x: "Fraction | float") -> "Fraction | float":
    """The distortion bound 4x/(1+x)^2, exact on rational input."""
    if not 0 <= x <= 1:
        raise InvariantError("argument must lie in [0, 1]")
    return 4 * x / (1 + x) ** 2


@dataclass(frozen=True)
class RatioRow:
    n: int
    scaled: mpf
    deviation: mpf
    reliable: bool


@dataclass(frozen=True)
class RatioExperiment:
    """Scaled radius estimates for a family of step perturbations.

    Inserting a huge quotient after n terms of the base angle drops the
    conformal radius by roughly the amplitude factor; rows record the
    rescaled estimates and their deviation from the base radius, and
    trend_ok says whether the deviation at the deepest n beats the one at
    the shallowest.
    """

    base_r_hat: mpf
    rows: tuple[RatioRow, ...]
    trend_ok: bool
    reliable: bool


def radius_ratio_experiment(
    prefix: Iterable[int],
    amplitude: "Fraction | int",
    n_range: Iterable[int],
    order: int = 256,
    prec: int = 256,
) -> RatioExperiment:
    """Compare r-hat of step-perturbed angles, rescaled, against the base.

    The base angle is the prefix continued with an all-ones tail; for each n
    the perturbed angle keeps the first n quotients, inserts the floor of
    amplitude^(q_n), and continues with ones.  Unreliable member estimates
    poison the verdict rather than being dropped.
    """
    amp = Fraction(amplitude)
    if amp <= 1:
        raise InvariantError("amplitude must exceed 1")
    ns = sorted(set(int(n) for n in n_range))
    if not ns:
        raise InvariantError("empty n range")
    base = CFExpansion(quotients=tuple(prefix), tail=(1,))
    base_series = linearization_coeffs(base, order, prec)
    base_est = conformal_radius_estimate(base_series)
    rows: list[RatioRow] = []
    all_reliable = base_est.reliable
    with mp.workprec(prec):
        amp_mpf = mpf(amp.numerator) / mpf(amp.denominator)
        for n in ns:
            cf_n = perturbed_cf(base.prefix(n), amp)
            series = linearization_coeffs(cf_n, order, prec)
            est = conformal_radius_estimate(series)
            scaled = est.r_hat * amp_mpf
            rows.append(
                RatioRow(
                    n=n,
                    scaled=scaled,
                    deviation=abs(scaled - base_est.r_hat),
                    reliable=est.reliable,
                )
            )
            all_reliable = all_reliable and est.reliable
    trend = bool(rows[-1].deviation < rows[0].deviation)
    return RatioExperiment(
        base_r_hat=base_est.r_hat,
        rows=tuple(rows),
        trend_ok=trend,
        reliable=all_reliable,
    )
