"""Rotation cycles of the doubling map and the external angles they pin down.

A q-periodic angle of x -> 2x mod 1 is k/(2^q - 1), and doubling acts on the
q-bit numerator as a cyclic shift.  For each reduced p/q in (0, 1) exactly one
such cycle has combinatorial rotation number p/q; its two closest elements
form the landing pair used to approximate external angles of irrational
internal angles.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Iterator

from .angles import Angle, circle_distance, cyclic_sort, double
from .cfrac import CFExpansion
from .errors import InvariantError, PrecisionError

__all__ = [
    "PeriodicOrbit",
    "find_orbit",
    "scan_orbits",
    "rotation_number",
    "landing_pair",
    "external_angle",
    "ExternalAngle",
]


@dataclass(frozen=True)
class PeriodicOrbit:
    """A doubling-map cycle in circle order together with its rotation number."""

    angles: tuple[Angle, ...]
    rotation: Fraction

    @property
    def period(self) -> int:
        return len(self.angles)

    def __iter__(self) -> Iterator[Angle]:
        return iter(self.angles)


def _validate_pq(p: int, q: int) -> None:
    if q < 2 or not 0 < p < q:
        raise InvariantError(f"rotation number must satisfy 0 < p < q, got {p}/{q}")
    if Fraction(p, q).denominator != q:
        raise InvariantError(f"rotation number {p}/{q} is not in lowest terms")


def _rotation_word(p: int, q: int) -> int:
    """Numerator of one cycle element, as a q-bit word.

    Bit k (most significant first) records whether the rigid rotation orbit
    point {k*p/q} lies in the wrap arc [1 - p/q, 1); the resulting word over
    2^q - 1 is an element of the unique cycle with rotation number p/q.
    """
    word = 0
    for k in range(q):
        word <<= 1
        if (k * p) % q >= q - p:
            word |= 1
    return word


def _shift_of(sorted_nums: list[int], modulus: int, q: int) -> int | None:
    """Constant index shift of doubling on a sorted cycle, or None."""
    index = {v: i for i, v in enumerate(sorted_nums)}
    shift = None
    for i, v in enumerate(sorted_nums):
        j = index.get((2 * v) % modulus)
        if j is None:
            return None
        s = (j - i) % q
        if shift is None:
            shift = s
        elif s != shift:
            return None
    return shift


def find_orbit(p: int, q: int) -> PeriodicOrbit:
    """The unique doubling cycle with rotation number p/q.

    Built directly from the rotation word, so large periods stay cheap; the
    exhaustive search over all k/(2^q - 1) lives in scan_orbits and the test
    suite cross-checks the two for every q up to 12.
    """
    _validate_pq(p, q)
    modulus = (1 << q) - 1
    word = _rotation_word(p, q)
    nums = sorted(((word << k) | (word >> (q - k))) & modulus for k in range(q))
    if len(set(nums)) != q:
        raise InvariantError(f"rotation word for {p}/{q} is not primitive")
    shift = _shift_of(nums, modulus, q)
    if shift is None or Fraction(shift, q) != Fraction(p, q):
        raise InvariantError(f"constructed cycle fails rotation check for {p}/{q}")
    return PeriodicOrbit(tuple(Angle(v, modulus) for v in nums), Fraction(p, q))


def scan_orbits(q: int) -> dict[Fraction, list[tuple[int, ...]]]:
    """Exhaustive scan of all k/(2^q - 1): rotation number -> sorted cycles.

    Cycles are returned as sorted numerator tuples over 2^q - 1.  Cycles of
    period strictly less than q and cycles without a coherent rotation number
    are skipped.  Cost grows like 2^q; keep q modest.
    """
    if q < 2:
        raise InvariantError("need q >= 2")
    modulus = (1 << q) - 1
    seen = bytearray(modulus)
    found: dict[Fraction, list[tuple[int, ...]]] = {}
    for k in range(1, modulus):
        if seen[k]:
            continue
        orbit = []
        v = k
        while not seen[v]:
            seen[v] = 1
            orbit.append(v)
            v = (2 * v) % modulus
        if v != k or len(orbit) != q:
            continue
        nums = sorted(orbit)
        shift = _shift_of(nums, modulus, q)
        if shift is None or shift == 0:
            continue
        rot = Fraction(shift, q)
        if rot.denominator != q:
            # Coherent shift but not a primitive rotation number for this q.
            continue
        found.setdefault(rot, []).append(tuple(nums))
    return found


def rotation_number(angles: list[Angle]) -> Fraction:
    """Rotation number of a doubling cycle given in any order.

    Rejects inputs that are not a single doubling cycle acting by a constant
    shift in circle order.
    """
    if len(angles) < 2:
        raise InvariantError("need at least two angles")
    ordered = cyclic_sort(angles)
    q = len(ordered)
    index = {a: i for i, a in enumerate(ordered)}
    shift = None
    for i, a in enumerate(ordered):
        img = double(a)
        j = index.get(img)
        if j is None:
            raise InvariantError(f"not closed under doubling: 2*{a} = {img} missing")
        s = (j - i) % q
        if shift is None:
            shift = s
        elif s != shift:
            raise InvariantError(
                f"inconsistent shift: {a} moves by {s}, expected {shift}"
            )
    if shift == 0 or gcd(shift, q) != 1:
        raise InvariantError(f"shift {shift} over {q} points is not a single cycle")
    return Fraction(shift, q)


def landing_pair(p: int, q: int) -> tuple[Angle, Angle]:
    """The two cycle elements realizing the minimal gap, in wake order.

    For q >= 3 the minimal gap is unique; for q = 2 both gaps tie and the
    numerically smaller representative comes first.
    """
    _validate_pq(p, q)
    orbit = find_orbit(p, q)
    nums = [a.fraction for a in orbit.angles]
    best = None
    for i in range(len(nums)):
        a, b = nums[i], nums[(i + 1) % len(nums)]
        gap = (b - a) % 1
        if best is None or gap < best[0]:
            best = (gap, a, b)
    gap, a, b = best
    if gap > Fraction(1, 2):
        raise InvariantError("minimal gap exceeds a half circle; bad cycle")
    return Angle(a), Angle(b)


@dataclass(frozen=True)
class ExternalAngle:
    """Result of the external-angle computation at a cardioid internal angle.

    The approximation error is at most 2^(1-n) once the stopping rule fires
    at accuracy exponent n.  Rational internal angles are exact: both wake
    boundary angles are reported and the bound is zero.
    """

    approx: Angle
    bound: Fraction
    iterates: tuple[Angle, ...]
    exact_pair: tuple[Angle, Angle] | None = None


def external_angle(cf: CFExpansion, n: int, max_convergents: int = 600) -> ExternalAngle:
    """External angle of the cardioid point with internal angle given by cf.

    Runs landing pairs along the convergents of the internal angle until two
    successive minus-angles agree to within 2^-n, then reports the last one
    with the certified bound 2^(1-n).
    """
    if n < 1:
        raise InvariantError("accuracy exponent must be >= 1")
    if cf.is_rational:
        value = cf.as_fraction()
        lo, hi = landing_pair(value.numerator, value.denominator)
        return ExternalAngle(
            approx=lo,
            bound=Fraction(0),
            iterates=(lo,),
            exact_pair=(lo, hi),
        )
    threshold = Fraction(1, 2**n)
    iterates: list[Angle] = []
    prev: Angle | None = None
    k = 0
    prev_p, prev_q = 1, 0
    pp, qq = 0, 1
    while k < max_convergents:
        r = cf.quotient(k)
        pp, prev_p = r * pp + prev_p, pp
        qq, prev_q = r * qq + prev_q, qq
        k += 1
        if pp >= qq:
            # Only the first convergent 1/1 can do this; it is not a valid
            # rotation number, so skip it.
            continue
        current = landing_pair(pp, qq)[0]
        iterates.append(current)
        if prev is not None and circle_distance(current, prev) < threshold:
            return ExternalAngle(
                approx=current,
                bound=Fraction(1, 2 ** (n - 1)),
                iterates=tuple(iterates),
            )
        prev = current
    raise PrecisionError(
        f"stopping rule did not fire within {max_convergents} convergents"
    )
