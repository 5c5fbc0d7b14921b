"""Quadratic dynamics in the plane: escape orbits, pixel renders, ray traces.

The renderer classifies dyadic pixels as near/far/borderline with respect to
the Julia set of z -> z^2 + c using escape counts plus the exterior
distance-estimate heuristic; the annulus semantics (a cell within one pixel
of the set must be near, beyond two pixels must be far) are honored up to a
configurable safety factor because the distance estimate carries an unproven
constant.  Ray tracing walks external rays down a geometric potential ladder
with damped Newton corrections.  The crosscut check exercises an explicit
slit-plane model whose Riemann map is known in closed form.
"""

from __future__ import annotations

import cmath
import math
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np
from scipy.spatial import cKDTree

from .angles import Angle
from .cfrac import CFExpansion
from .errors import InvariantError, PrecisionError

__all__ = [
    "EscapeResult",
    "PixelGrid",
    "RayTrace",
    "LavrentievResult",
    "FAR",
    "NEAR",
    "BORDERLINE",
    "iterate",
    "cardioid_parameter",
    "render_julia",
    "hausdorff_distance",
    "trace_ray",
    "lavrentiev_check",
    "lavrentiev_monte_carlo",
    "disk_to_slit",
    "slit_to_disk",
]

FAR = 0
NEAR = 1
BORDERLINE = 2


@dataclass(frozen=True)
class EscapeResult:
    """Outcome of iterating z -> z^2 + c against an escape radius."""

    escaped: bool
    steps: int | None

    def __bool__(self) -> bool:
        return self.escaped


def iterate(
    c: complex, z: complex, max_iter: int = 256, escape_radius: float | None = None
) -> EscapeResult:
    """Iterate until |z| exceeds the escape radius or the budget runs out.

    The radius must be at least 2 + |c| so that crossing it certifies escape
    to infinity; steps is the first index k with |f^k(z)| beyond the radius.
    """
    if escape_radius is None:
        escape_radius = 2 + abs(c) + 0.5
    if escape_radius < 2 + abs(c):
        raise InvariantError("escape radius below 2 + |c| cannot certify escape")
    if max_iter < 1:
        raise InvariantError("need at least one iteration")
    w = complex(z)
    if abs(w) > escape_radius:
        return EscapeResult(escaped=True, steps=0)
    for k in range(1, max_iter + 1):
        w = w * w + c
        if abs(w) > escape_radius:
            return EscapeResult(escaped=True, steps=k)
    return EscapeResult(escaped=False, steps=None)


def cardioid_parameter(theta: "Fraction | float | CFExpansion") -> complex:
    """Parameter c on the main cardioid with the given internal angle."""
    if isinstance(theta, CFExpansion):
        value = float(theta.value_mpf(64))
    else:
        value = float(theta)
    lam = cmath.exp(2j * math.pi * value)
    return lam / 2 - lam * lam / 4


@dataclass(frozen=True, eq=False)
class PixelGrid:
    """Square grid of side-2^-n cells classified against a Julia set.

    cells[row, col] is one of FAR, NEAR, BORDERLINE; row indexes imaginary
    parts bottom-up.  Cells that cannot be resolved either way stay
    borderline, including bounded cells deep inside the filled set, where
    escape data says nothing trustworthy.
    """

    resolution_exponent: int
    origin: complex
    extent: float
    cells: np.ndarray

    @property
    def cell_side(self) -> float:
        return 2.0 ** (-self.resolution_exponent)

    def centers(self) -> np.ndarray:
        side = self.cells.shape[0]
        h = self.cell_side
        xs = self.origin.real + (np.arange(side) + 0.5) * h
        ys = self.origin.imag + (np.arange(side) + 0.5) * h
        return xs[None, :] + 1j * ys[:, None]

    def near_points(self) -> np.ndarray:
        return self.centers()[self.cells == NEAR]

    def counts(self) -> dict[str, int]:
        return {
            "near": int(np.count_nonzero(self.cells == NEAR)),
            "far": int(np.count_nonzero(self.cells == FAR)),
            "borderline": int(np.count_nonzero(self.cells == BORDERLINE)),
        }


def render_julia(
    c: complex,
    n: int,
    max_iter: int = 128,
    half_width: float = 2.5,
    safety: float = 4.0,
    near_factor: float = 1.0,
) -> PixelGrid:
    """Classify a dyadic pixel grid against the Julia set of z^2 + c.

    Escaped cells get the distance estimate |z| log|z| / |z'|: within
    near_factor pixels is near, beyond 2*safety pixels is far, else
    borderline.  Bounded cells with an escaped 4-neighbor toggle to near
    (the boundary passes between the centers if the bounded side is honest);
    all other bounded cells stay borderline.
    """
    if n < 1 or n > 14:
        raise InvariantError("resolution exponent must be in 1..14")
    if safety < 1:
        raise InvariantError("safety factor below 1 breaks the far guarantee")
    h = 2.0**-n
    side = int(round(2 * half_width / h))
    xs = -half_width + (np.arange(side) + 0.5) * h
    z = (xs[None, :] + 1j * xs[:, None]).astype(np.complex128)
    dz = np.ones_like(z)
    alive = np.ones(z.shape, dtype=bool)
    big = 1e10
    for _ in range(max_iter):
        zz = z[alive]
        dz[alive] *= 2 * zz
        z[alive] = zz * zz + c
        alive[alive] = np.abs(z[alive]) <= big
        if not alive.any():
            break
    escaped = ~alive
    cells = np.full(z.shape, BORDERLINE, dtype=np.int8)
    mag = np.abs(z[escaped])
    grad = np.abs(dz[escaped])
    with np.errstate(divide="ignore", over="ignore", invalid="ignore"):
        d_est = mag * np.log(mag) / np.maximum(grad, 1e-300)
    esc_class = np.full(d_est.shape, BORDERLINE, dtype=np.int8)
    esc_class[d_est >= 2 * safety * h] = FAR
    esc_class[d_est <= near_factor * h] = NEAR
    cells[escaped] = esc_class
    bounded = alive
    neighbor_escaped = np.zeros_like(bounded)
    neighbor_escaped[1:, :] |= escaped[:-1, :]
    neighbor_escaped[:-1, :] |= escaped[1:, :]
    neighbor_escaped[:, 1:] |= escaped[:, :-1]
    neighbor_escaped[:, :-1] |= escaped[:, 1:]
    cells[bounded & neighbor_escaped] = NEAR
    return PixelGrid(
        resolution_exponent=n,
        origin=complex(-half_width, -half_width),
        extent=2 * half_width,
        cells=cells,
    )


def _as_points(points: "Sequence[complex] | np.ndarray") -> np.ndarray:
    arr = np.asarray(points)
    if arr.size == 0:
        raise InvariantError("empty point set")
    if np.iscomplexobj(arr) or arr.ndim == 1:
        arr = np.column_stack([np.real(arr).ravel(), np.imag(arr).ravel()])
    return arr.astype(np.float64)


def hausdorff_distance(
    a: "Sequence[complex] | np.ndarray", b: "Sequence[complex] | np.ndarray"
) -> float:
    """Hausdorff distance between finite point sets (complex or Nx2)."""
    pa, pb = _as_points(a), _as_points(b)
    d_ab = cKDTree(pb).query(pa)[0].max()
    d_ba = cKDTree(pa).query(pb)[0].max()
    return float(max(d_ab, d_ba))


@dataclass(frozen=True)
class RayTrace:
    """External-ray polyline ordered by strictly decreasing potential.

    landing_estimate equals the terminal point, except for angles that are
    exactly periodic under doubling (odd denominator), where the terminus is
    polished by Newton on the periodicity equation of the landing orbit.
    That matters at parabolic parameters, where the raw polyline approaches
    its landing point only at a cube-root-of-log rate.
    """

    angle: Fraction | float
    points: tuple[complex, ...]
    potentials: tuple[float, ...]
    landing_estimate: complex = 0j


def _ray_target(c: complex, t: float, beta: float) -> complex:
    w = cmath.exp(t + 2j * math.pi * beta)
    return w - c / (2 * w)


def _newton_forward(c: complex, seed: complex, m: int, target: complex) -> complex:
    """Solve f^m(z) = target by damped Newton from the seed."""
    z = seed
    for _ in range(60):
        value, deriv = z, complex(1.0)
        for _ in range(m):
            deriv = 2 * value * deriv
            value = value * value + c
        err = value - target
        if abs(err) < 1e-13 * (1 + abs(target)):
            return z
        if deriv == 0:
            break
        step = err / deriv
        scale = 1.0
        base = abs(err)
        while scale > 2.0**-8:
            cand = z - scale * step
            value2 = cand
            for _ in range(m):
                value2 = value2 * value2 + c
            if abs(value2 - target) < base:
                break
            scale /= 2
        else:
            break
        z = z - scale * step
        if abs(scale * step) < 1e-14 * (1 + abs(z)):
            return z
    raise PrecisionError("ray correction did not converge")


def _doubled_angle(angle: "Fraction | float", m: int) -> float:
    if isinstance(angle, Fraction):
        return float((angle * 2**m) % 1)
    return math.fmod(float(angle) * 2.0**m, 1.0)


def trace_ray(
    c: complex,
    angle: "Angle | Fraction | float",
    t_min: float = 1e-6,
    steps_per_halving: int = 8,
    start_potential: float | None = None,
) -> RayTrace:
    """Trace the external ray of the given angle down to potential t_min.

    Starts on the Boettcher-asymptotic circle at the start potential and
    descends a geometric ladder, correcting each point by Newton on the
    appropriate forward iterate so magnitudes stay bounded.  A failed
    correction bisects the ladder step (in log potential) before giving up.
    Meaningful for connected Julia sets; disconnectedness is not detected.
    """
    if t_min <= 0:
        raise InvariantError("t_min must be positive")
    if steps_per_halving < 1:
        raise InvariantError("steps_per_halving must be >= 1")
    alpha = angle.fraction if isinstance(angle, Angle) else angle
    t0 = start_potential if start_potential is not None else math.log(1e4)
    if t0 <= t_min:
        raise InvariantError("start potential must exceed t_min")

    def point_at(t: float, seed: complex | None) -> complex:
        m = max(0, math.ceil(math.log2(t0 / t) - 1e-12))
        target = _ray_target(c, (2.0**m) * t, _doubled_angle(alpha, m))
        if seed is None:
            return target
        return _newton_forward(c, seed, m, target)

    def advance(z_from: complex, t_from: float, t_to: float, depth: int) -> complex:
        try:
            return point_at(t_to, z_from)
        except PrecisionError:
            if depth <= 0:
                raise PrecisionError(
                    f"ray stalled near potential {t_to:.3e}; "
                    "precision exhausted approaching the landing point"
                ) from None
            t_mid = math.sqrt(t_from * t_to)
            z_mid = advance(z_from, t_from, t_mid, depth - 1)
            return advance(z_mid, t_mid, t_to, depth - 1)

    ratio = 2.0 ** (-1.0 / steps_per_halving)
    points = [point_at(t0, None)]
    potentials = [t0]
    t = t0
    while t > t_min:
        t_next = max(t * ratio, t_min * (1 - 1e-12))
        z_next = advance(points[-1], t, t_next, depth=16)
        points.append(z_next)
        potentials.append(t_next)
        t = t_next

    landing = points[-1]
    if isinstance(alpha, Fraction):
        period = _angle_period(alpha)
        if period is not None:
            refined = _refine_periodic_landing(c, landing, period)
            if refined is not None:
                landing = refined
    return RayTrace(
        angle=alpha,
        points=tuple(points),
        potentials=tuple(potentials),
        landing_estimate=landing,
    )


def _angle_period(alpha: Fraction) -> int | None:
    """Period of alpha under doubling, or None if it is not purely periodic.

    An angle is purely periodic exactly when its reduced denominator is odd;
    the period is then the multiplicative order of 2 modulo the denominator.
    """
    den = alpha.denominator
    if den % 2 == 0:
        return None
    if den == 1:
        return 1
    power = 2 % den
    for p in range(1, 65):
        if power == 1:
            return p
        power = (2 * power) % den
    return None


def _refine_periodic_landing(
    c: complex, seed: complex, period: int
) -> complex | None:
    """Newton-polish a periodic ray terminus on f^p(z) = z.

    Converges linearly even when the landing orbit is parabolic (the root
    is then multiple), so a couple hundred iterations suffice.  Returns
    None when the iteration escapes or stalls far from a root, in which
    case the caller keeps the raw terminus.
    """
    z = seed
    best: complex | None = None
    best_res = math.inf
    for _ in range(240):
        w = z
        deriv = complex(1.0)
        for _ in range(period):
            deriv *= 2 * w
            w = w * w + c
        g = w - z
        if abs(g) < best_res:
            best, best_res = z, abs(g)
        gprime = deriv - 1
        if abs(gprime) < 1e-300:
            break
        step = g / gprime
        z -= step
        if abs(z) > 1e6 or abs(z - seed) > 1.0:
            return None
        if abs(step) < 1e-12 * (1 + abs(z)):
            return z
    # Multiple roots stall on evaluation noise before the step test fires;
    # the smallest-residual iterate is then the honest answer.
    if best is not None and best_res < 1e-9:
        return best
    return None


def disk_to_slit(u: complex) -> complex:
    """Riemann map of the unit disk onto the plane slit along |x| >= 1/2."""
    return u / (1 + u * u)


def slit_to_disk(v: complex) -> complex:
    """Inverse Riemann map of the doubly slit plane, vanishing at 0."""
    if v == 0:
        return 0j
    return (1 - cmath.sqrt(1 - 4 * v * v)) / (2 * v)


def _slit_edge_to_disk(x: float, upper: bool) -> complex:
    """Boundary value of the disk map on the slit edge approached from
    above (upper) or below.  The branch flips across zero because the
    principal square root is approached from opposite imaginary sides."""
    root = math.sqrt(4 * x * x - 1)
    sign = (1.0 if upper else -1.0) * (1.0 if x > 0 else -1.0)
    return (1 + sign * 1j * root) / (2 * x)


@dataclass(frozen=True)
class LavrentievResult:
    """One crosscut-diameter experiment on the slit-plane model."""

    center: float
    radius: float
    crosscut_diam: float
    image_diam: float
    bound: float
    distance: float
    holds: bool
    margin: float


def lavrentiev_check(
    endpoints: tuple[float, float], distance: float, samples: int = 200
) -> LavrentievResult:
    """Check the crosscut-diameter inequality on one semicircular crosscut.

    The crosscut is the upper semicircle joining the two real endpoints,
    which must sit on one slit of the model domain; the region it cuts off
    is the open upper half-disk.  distance is the caller's lower bound M for
    the gap between the crosscut and the base point 0; with eps^2 the
    crosscut diameter, the precondition eps^2 < M/4 must hold and the image
    diameter is compared against 30*eps/sqrt(M).
    """
    x1, x2 = sorted(endpoints)
    if x1 * x2 <= 0 or min(abs(x1), abs(x2)) < 0.5:
        raise InvariantError("endpoints must lie on a single slit, |x| >= 1/2")
    center = (x1 + x2) / 2
    radius = (x2 - x1) / 2
    if radius <= 0:
        raise InvariantError("degenerate crosscut")
    true_gap = abs(center) - radius
    if distance <= 0 or distance > true_gap:
        raise InvariantError(
            f"distance {distance} is not a lower bound for the true gap {true_gap}"
        )
    diam = 2 * radius
    eps = math.sqrt(diam)
    if eps * eps >= distance / 4:
        raise InvariantError("precondition requires diam(crosscut) < distance/4")
    if samples < 16:
        raise InvariantError("need at least 16 boundary samples")

    image: list[complex] = []
    # Open arc only: at psi = 0 or pi the point is exactly real, where the
    # principal square root jumps to the lower edge.  The endpoint values
    # come from the explicit upper-edge formula below instead.
    for k in range(1, samples):
        psi = math.pi * k / samples
        image.append(slit_to_disk(center + radius * cmath.exp(1j * psi)))
    for k in range(samples + 1):
        x = x1 + (x2 - x1) * k / samples
        image.append(_slit_edge_to_disk(x, upper=True))
    pts = np.array(image)
    diffs = np.abs(pts[None, :] - pts[:, None])
    image_diam = float(diffs.max())
    bound = 30 * eps / math.sqrt(distance)
    return LavrentievResult(
        center=center,
        radius=radius,
        crosscut_diam=diam,
        image_diam=image_diam,
        bound=bound,
        distance=distance,
        holds=image_diam <= bound,
        margin=bound - image_diam,
    )


def lavrentiev_monte_carlo(
    count: int = 100, seed: int = 20240801, samples: int = 200
) -> list[LavrentievResult]:
    """Run the crosscut check on random admissible semicircular crosscuts.

    Crosscut centers and diameters are drawn log-uniformly, mirrored onto
    both slits, and rejected until the precondition and slit constraints
    hold; the draw is deterministic for a given seed.
    """
    if count < 1:
        raise InvariantError("need at least one crosscut")
    rng = random.Random(seed)
    results: list[LavrentievResult] = []
    while len(results) < count:
        s = 0.5 + 10 ** rng.uniform(-1.5, 0.5)
        eps = 10 ** rng.uniform(-3.0, -0.7)
        radius = eps * eps / 2
        distance = s - eps
        if distance <= 0 or eps * eps >= distance / 4:
            continue
        if s - radius < 0.5:
            continue
        if rng.random() < 0.5:
            pair = (-(s + radius), -(s - radius))
        else:
            pair = (s - radius, s + radius)
        results.append(lavrentiev_check(pair, distance, samples=samples))
    return results
