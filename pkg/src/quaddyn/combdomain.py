"""Slit-rectangle domain gallery: a square with a descending chimney.

The domain is the complement of the unit square [-1,1]^2 together with a
stack of carved slabs converging to a segment of the real axis.  Slab n
occupies heights (3^-n, 3^(1-n)] and is a rectangle of half-width b_n with
two closed slats removed, one hanging from the top attached to the left
wall, one in the middle attached to the right wall.  The half-widths b_n
decrease and the slat lengths are governed by an increasing sequence a_n,
both supplied as exact rational sequences.  Everything here is rectilinear
and computed in exact rational arithmetic; floating point only enters the
sampling helpers.
"""

from __future__ import annotations

import enum
import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable

from .errors import InvariantError

Point = tuple[Fraction, Fraction]

_RAT = r"[+-]?\d+(?:/\d+)?"
_EXPR_RE = re.compile(
    rf"^\s*({_RAT})\s*([+-])\s*(\d+)\s*\^\s*(-?)\s*k\s*$"
)
_CONST_RE = re.compile(rf"^\s*({_RAT})\s*$")


class SequenceDirection(enum.Enum):
    INCREASING = "increasing"
    DECREASING = "decreasing"


@dataclass
class MonotoneRationalSequence:
    """Exact rational sequence checked lazily for monotonicity.

    The term function is evaluated on demand; every prefix that has been
    queried is kept and re-checked, so a violation surfaces on the first
    query that exposes it.  An optional limit bracket declares an interval
    the limit is known to lie in; queried terms must stay on the approach
    side of it.
    """

    direction: SequenceDirection
    term_fn: Callable[[int], Fraction]
    limit_bracket: tuple[Fraction, Fraction] | None = None
    _terms: list[Fraction] = field(default_factory=list, repr=False)

    def term(self, k: int) -> Fraction:
        if k < 1:
            raise InvariantError("sequence index starts at 1")
        while len(self._terms) < k:
            idx = len(self._terms) + 1
            value = Fraction(self.term_fn(idx))
            if self._terms:
                prev = self._terms[-1]
                if self.direction is SequenceDirection.INCREASING:
                    ok = value >= prev
                else:
                    ok = value <= prev
                if not ok:
                    raise InvariantError(
                        f"term {idx} = {value} breaks "
                        f"{self.direction.value} monotonicity after {prev}"
                    )
            if self.limit_bracket is not None:
                lo, hi = self.limit_bracket
                if self.direction is SequenceDirection.INCREASING and value > hi:
                    raise InvariantError(
                        f"term {idx} = {value} overshoots the limit bracket"
                    )
                if self.direction is SequenceDirection.DECREASING and value < lo:
                    raise InvariantError(
                        f"term {idx} = {value} undershoots the limit bracket"
                    )
            self._terms.append(value)
        return self._terms[k - 1]


def parse_sequence_expr(
    text: str, direction: SequenceDirection | None = None
) -> MonotoneRationalSequence:
    """Build a sequence from a compact expression such as "1/4-4^-k".

    Supported forms: a bare rational constant, or constant +/- base^k and
    constant +/- base^-k with an integer base.  For the decaying forms the
    constant is the limit, so it doubles as a degenerate limit bracket.
    The inferred direction can be overridden, which matters only for
    constants (monotone either way).
    """
    m = _CONST_RE.match(text)
    if m:
        value = Fraction(m.group(1))
        return MonotoneRationalSequence(
            direction=direction or SequenceDirection.INCREASING,
            term_fn=lambda k: value,
            limit_bracket=(value, value),
        )
    m = _EXPR_RE.match(text)
    if m is None:
        raise InvariantError(f"cannot parse sequence expression {text!r}")
    const = Fraction(m.group(1))
    sign = 1 if m.group(2) == "+" else -1
    base = int(m.group(3))
    decaying = m.group(4) == "-"
    if base < 1:
        raise InvariantError("exponential base must be at least 1")

    if decaying:
        def term_fn(k: int) -> Fraction:
            return const + sign * Fraction(1, base**k)

        inferred = (
            SequenceDirection.DECREASING if sign > 0 else SequenceDirection.INCREASING
        )
        bracket = (const, const)
    else:
        def term_fn(k: int) -> Fraction:
            return const + sign * Fraction(base**k)

        inferred = (
            SequenceDirection.INCREASING if sign > 0 else SequenceDirection.DECREASING
        )
        bracket = None
    return MonotoneRationalSequence(
        direction=direction or inferred, term_fn=term_fn, limit_bracket=bracket
    )


def toy_sequences() -> tuple[MonotoneRationalSequence, MonotoneRationalSequence]:
    """The stock example pair a_k = 1/4 - 4^-k (up), b_k = 1/3 + 4^-k (down)."""
    return parse_sequence_expr("1/4-4^-k"), parse_sequence_expr("1/3+4^-k")


@dataclass(frozen=True)
class Rect:
    """Axis-parallel rectangle with per-side closedness flags."""

    x_lo: Fraction
    x_hi: Fraction
    y_lo: Fraction
    y_hi: Fraction
    left_closed: bool = True
    right_closed: bool = True
    bottom_closed: bool = True
    top_closed: bool = True

    @property
    def width(self) -> Fraction:
        return self.x_hi - self.x_lo

    @property
    def height(self) -> Fraction:
        return self.y_hi - self.y_lo

    def contains(self, x: Fraction, y: Fraction) -> bool:
        if not (self.x_lo <= x if self.left_closed else self.x_lo < x):
            return False
        if not (x <= self.x_hi if self.right_closed else x < self.x_hi):
            return False
        if not (self.y_lo <= y if self.bottom_closed else self.y_lo < y):
            return False
        if not (y <= self.y_hi if self.top_closed else y < self.y_hi):
            return False
        return True


@dataclass(frozen=True)
class Segment:
    """Axis-parallel segment with exact rational endpoints."""

    start: Point
    end: Point

    def __post_init__(self) -> None:
        if self.start[0] != self.end[0] and self.start[1] != self.end[1]:
            raise InvariantError("segment must be axis-parallel")

    @property
    def diameter(self) -> Fraction:
        return abs(self.end[0] - self.start[0]) + abs(self.end[1] - self.start[1])

    def contains_point(self, p: Point) -> bool:
        x, y = p
        xs = sorted((self.start[0], self.end[0]))
        ys = sorted((self.start[1], self.end[1]))
        if self.start[0] == self.end[0]:
            return x == self.start[0] and ys[0] <= y <= ys[1]
        return y == self.start[1] and xs[0] <= x <= xs[1]


class OmegaDomain:
    """The carved-square domain driven by two monotone rational sequences.

    a_seq increases, b_seq decreases, and for every queried index the terms
    must satisfy 0 <= a_n < b_n < 1 so each slab fits inside the square and
    keeps a nonempty gap next to each slat.  The classical picture pins the
    limits below 1/2; early terms of natural approximating sequences can
    overshoot that, so only the geometric constraints are enforced per term.
    """

    def __init__(
        self,
        a_seq: MonotoneRationalSequence,
        b_seq: MonotoneRationalSequence,
    ) -> None:
        if a_seq.direction is not SequenceDirection.INCREASING:
            raise InvariantError("a-sequence must be increasing")
        if b_seq.direction is not SequenceDirection.DECREASING:
            raise InvariantError("b-sequence must be decreasing")
        self.a_seq = a_seq
        self.b_seq = b_seq

    def a(self, n: int) -> Fraction:
        value = self.a_seq.term(n)
        self._check_pair(value, self.b_seq.term(n), n)
        return value

    def b(self, n: int) -> Fraction:
        value = self.b_seq.term(n)
        self._check_pair(self.a_seq.term(n), value, n)
        return value

    @staticmethod
    def _check_pair(a_n: Fraction, b_n: Fraction, n: int) -> None:
        if not (0 <= a_n < b_n < 1):
            raise InvariantError(
                f"need 0 <= a_{n} < b_{n} < 1, got a={a_n}, b={b_n}"
            )


def _pow3(exponent: int) -> Fraction:
    if exponent >= 0:
        return Fraction(3**exponent)
    return Fraction(1, 3**-exponent)


def rectangles(dom: OmegaDomain, n: int) -> tuple[Rect, Rect, Rect]:
    """The slab S_n and its two carved slats (L_n, R_n) at depth n.

    S_n is open on the sides and the bottom, closed on top, so adjacent
    slabs tile without overlap; the slats are closed rectangles of height
    one third of the slab below their tops.
    """
    if n < 1:
        raise InvariantError("depth starts at 1")
    a_n, b_n = dom.a(n), dom.b(n)
    unit = _pow3(-n - 1)
    slab = Rect(
        x_lo=-b_n, x_hi=b_n, y_lo=3 * unit, y_hi=9 * unit,
        left_closed=False, right_closed=False, bottom_closed=False,
    )
    left_slat = Rect(x_lo=-b_n, x_hi=a_n, y_lo=8 * unit, y_hi=9 * unit)
    right_slat = Rect(x_lo=-a_n, x_hi=b_n, y_lo=5 * unit, y_hi=6 * unit)
    return slab, left_slat, right_slat


def build_gamma_n(dom: OmegaDomain, n: int) -> tuple[Point, ...]:
    """Boundary polygon of the depth-n truncation, as one closed vertex loop.

    The loop starts at the square's top-left corner, descends the chimney
    carved by the first n slabs along its left features, crosses the flat
    floor at height 3^-n, climbs back along the right features, and finishes
    around the outside of the square.  The floor segment is part of the
    returned curve.  Consecutive duplicate vertices (possible when the
    b-sequence stalls) are merged; the final vertex connects back to the
    first.
    """
    if n < 1:
        raise InvariantError("depth starts at 1")
    one = Fraction(1)
    verts: list[Point] = [(-one, one)]
    for k in range(1, n + 1):
        a_k, b_k = dom.a(k), dom.b(k)
        unit = _pow3(-k - 1)
        verts += [
            (a_k, 9 * unit),
            (a_k, 8 * unit),
            (-b_k, 8 * unit),
            (-b_k, 3 * unit),
        ]
    for k in range(n, 0, -1):
        a_k, b_k = dom.a(k), dom.b(k)
        unit = _pow3(-k - 1)
        verts += [
            (b_k, 3 * unit),
            (b_k, 5 * unit),
            (-a_k, 5 * unit),
            (-a_k, 6 * unit),
            (b_k, 6 * unit),
            (b_k, 9 * unit),
        ]
    verts += [(one, one), (one, -one), (-one, -one)]

    cleaned: list[Point] = []
    for v in verts:
        if not cleaned or cleaned[-1] != v:
            cleaned.append(v)
    if cleaned[-1] == cleaned[0]:
        cleaned.pop()
    for p, q in zip(cleaned, cleaned[1:] + cleaned[:1]):
        if p[0] != q[0] and p[1] != q[1]:
            raise InvariantError("boundary polygon lost rectilinearity")
    return tuple(cleaned)


def crosscut_chain(n: int) -> Segment:
    """The nth fundamental-chain crosscut, a vertical segment on x = 0.

    Runs from height 2*3^-n up to 8*3^(-n-1), which is the gap between the
    right slat's top edge and the left slat's bottom edge of slab n; its
    diameter is exactly 2*3^(-n-1).
    """
    if n < 1:
        raise InvariantError("depth starts at 1")
    unit = _pow3(-n - 1)
    zero = Fraction(0)
    return Segment((zero, 6 * unit), (zero, 8 * unit))


def chain_midpoint(n: int) -> Point:
    """Marked interior point of the nth crosscut, at height 7*3^(-n-1)."""
    if n < 1:
        raise InvariantError("depth starts at 1")
    return (Fraction(0), 7 * _pow3(-n - 1))


@dataclass(frozen=True)
class ChainIncidence:
    """Exact endpoint incidence of a crosscut on the carved boundary."""

    bottom_on_right_slat_top: bool
    top_on_left_slat_bottom: bool


def chain_incidence(dom: OmegaDomain, n: int) -> ChainIncidence:
    """Check which slat edges the nth crosscut's endpoints touch.

    The bottom endpoint should sit on the top edge of the right slat and
    the top endpoint on the bottom edge of the left slat; this is verified
    by exact comparisons rather than assumed, since it constrains the
    sequences only through the signs of a_n and b_n.
    """
    seg = crosscut_chain(n)
    a_n, b_n = dom.a(n), dom.b(n)
    unit = _pow3(-n - 1)
    bottom, top = seg.start, seg.end
    on_right_top = bottom[1] == 6 * unit and -a_n <= bottom[0] <= b_n
    on_left_bottom = top[1] == 8 * unit and -b_n <= top[0] <= a_n
    return ChainIncidence(on_right_top, on_left_bottom)


def impression_segments(dom: OmegaDomain, k: int) -> tuple[Segment, Segment]:
    """Inner and outer sandwich segments on the real axis at depth k.

    The inner segment [-a_k, a_k] x {0} grows toward the principal part and
    the outer segment [-b_k, b_k] x {0} shrinks toward the full impression;
    a_k = 0 degenerates the inner segment to the single point at the origin.
    """
    if k < 1:
        raise InvariantError("depth starts at 1")
    a_k, b_k = dom.a(k), dom.b(k)
    zero = Fraction(0)
    inner = Segment((-a_k, zero), (a_k, zero))
    outer = Segment((-b_k, zero), (b_k, zero))
    return inner, outer


class PointLocation(enum.Enum):
    INSIDE = "inside"
    OUTSIDE = "outside"
    UNDECIDED = "undecided-at-depth"


def in_domain(dom: OmegaDomain, depth: int, point: Point) -> PointLocation:
    """Exact membership of a rational point in the depth-limited domain.

    Points outside the closed square are inside the domain outright.  Points
    in the square above height 3^-depth are settled by locating their slab
    and testing the slat carve-outs; points at or below that height but
    above the real axis could belong to deeper slabs, so they report as
    undecided at this depth.  Heights at or below zero inside the square
    are never carved.
    """
    if depth < 1:
        raise InvariantError("depth starts at 1")
    x, y = Fraction(point[0]), Fraction(point[1])
    if abs(x) > 1 or abs(y) > 1:
        return PointLocation.INSIDE
    if y <= 0:
        return PointLocation.OUTSIDE
    if y <= _pow3(-depth):
        return PointLocation.UNDECIDED
    k = 1
    while _pow3(-k) >= y:
        k += 1
    slab, left_slat, right_slat = rectangles(dom, k)
    if not slab.contains(x, y):
        return PointLocation.OUTSIDE
    if left_slat.contains(x, y) or right_slat.contains(x, y):
        return PointLocation.OUTSIDE
    return PointLocation.INSIDE


def sample_polyline(
    vertices: Iterable[Point], spacing: float, closed: bool = True
) -> list[complex]:
    """Sample a rectilinear polygon at roughly the given spacing.

    Returns complex points including every vertex, for feeding the
    point-cloud Hausdorff distance.
    """
    pts = [(float(x), float(y)) for x, y in vertices]
    if len(pts) < 2:
        return [complex(*p) for p in pts]
    if spacing <= 0:
        raise InvariantError("spacing must be positive")
    edges = list(zip(pts, pts[1:] + (pts[:1] if closed else [])))
    out: list[complex] = []
    for (x1, y1), (x2, y2) in edges:
        length = abs(x2 - x1) + abs(y2 - y1)
        steps = max(1, int(length / spacing) + 1)
        for i in range(steps):
            t = i / steps
            out.append(complex(x1 + t * (x2 - x1), y1 + t * (y2 - y1)))
    if not closed:
        out.append(complex(*pts[-1]))
    return out


def gamma_hausdorff(dom: OmegaDomain, n: int, m: int, spacing: float | None = None) -> float:
    """Sampled Hausdorff distance between two boundary approximants."""
    from .dynamics import hausdorff_distance

    if spacing is None:
        spacing = float(_pow3(-max(n, m))) / 4
    first = sample_polyline(build_gamma_n(dom, n), spacing)
    second = sample_polyline(build_gamma_n(dom, m), spacing)
    return hausdorff_distance(first, second)
