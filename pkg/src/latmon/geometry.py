"""Exact plane geometry: lines, cones, projection frames, near-line points.

Points are plain tuples of Python ints (arbitrary precision).  Directions
and normals carry Scalar entries; distances and projection norms come back
as Norm values so comparisons against rational tolerances stay exact.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .exact import Scalar, Norm, ZERO, ONE

Point = tuple  # tuple of ints, length 1..3


def check_point(x, dim=None) -> tuple:
    pt = tuple(int(c) for c in x)
    if not 1 <= len(pt) <= 3:
        raise ValueError(f"dimension {len(pt)} unsupported")
    if dim is not None and len(pt) != dim:
        raise ValueError(f"dimension mismatch: expected {dim}, got {len(pt)}")
    return pt


def padd(a: Point, b: Point) -> Point:
    return tuple(x + y for x, y in zip(a, b, strict=True))


def psub(a: Point, b: Point) -> Point:
    return tuple(x - y for x, y in zip(a, b, strict=True))


def pneg(a: Point) -> Point:
    return tuple(-x for x in a)


def pscale(k: int, a: Point) -> Point:
    return tuple(k * x for x in a)


def inner(a: Point, b: Point) -> int:
    """Standard inner product of integer points; exact."""
    if len(a) != len(b):
        raise ValueError(f"dimension mismatch: {len(a)} vs {len(b)}")
    return sum(x * y for x, y in zip(a, b))


def inner_scalar(x: Point, vec) -> Scalar:
    """Inner product of an integer point with a pair of Scalars."""
    if len(x) != len(vec):
        raise ValueError("dimension mismatch")
    acc = ZERO
    for c, s in zip(x, vec):
        acc = acc + Scalar.coerce(s) * c
    return acc


def norm1(a: Point) -> int:
    return sum(abs(x) for x in a)


@dataclass(frozen=True)
class Line:
    """A line in R^2: canonical direction (1, slope) or (0, 1), plus offset.

    slope None means vertical.  offset None means through the origin.
    The slope is classified exactly as rational or irrational.
    """

    slope: Scalar | None
    offset: Point | None = None

    @staticmethod
    def through_origin(slope) -> "Line":
        return Line(None if slope is None else Scalar.coerce(slope), None)

    @staticmethod
    def from_direction(dx, dy, offset=None) -> "Line":
        dx, dy = Scalar.coerce(dx), Scalar.coerce(dy)
        if dx.is_zero and dy.is_zero:
            raise ValueError("zero direction")
        off = check_point(offset, 2) if offset is not None else None
        if dx.is_zero:
            return Line(None, off)
        return Line(dy / dx, off)

    def translated(self, w: Point) -> "Line":
        base = self.offset if self.offset is not None else (0, 0)
        return Line(self.slope, padd(base, check_point(w, 2)))

    def direction(self):
        """Canonical direction pair: positive first nonzero component."""
        if self.slope is None:
            return (ZERO, ONE)
        return (ONE, self.slope)

    def normal(self):
        """Direction rotated +90 degrees: (-slope, 1), or (-1, 0) if vertical."""
        if self.slope is None:
            return (Scalar.from_int(-1), ZERO)
        return (-self.slope, ONE)

    @property
    def is_rational_direction(self) -> bool:
        return self.slope is None or self.slope.is_rational

    def direction_primitive(self) -> Point:
        """Primitive integer direction for rational-direction lines.

        Sign rule: positive second coordinate, else positive first.
        """
        if self.slope is None:
            return (0, 1)
        fr = self.slope.to_fraction()
        b, a = fr.denominator, fr.numerator
        g = math.gcd(abs(a), abs(b))
        b, a = b // g, a // g
        if a < 0 or (a == 0 and b < 0):
            b, a = -b, -a
        if a == 0:
            b = abs(b)
        return (b, a)

    def norm_sq(self) -> Scalar:
        if self.slope is None:
            return ONE
        return ONE + self.slope * self.slope

    def signed_offset(self, x: Point) -> Scalar:
        """<x, normal> - c where c places the line; zero iff x on the line."""
        v = inner_scalar(check_point(x, 2), self.normal())
        if self.offset is not None:
            v = v - inner_scalar(self.offset, self.normal())
        return v

    def contains_point(self, x: Point) -> bool:
        return self.signed_offset(x).is_zero

    def dist_to(self, x: Point) -> Norm:
        """Exact Euclidean distance from x to the line."""
        return Norm.of(abs(self.signed_offset(x)), self.norm_sq())

    def same_line(self, other: "Line") -> bool:
        if (self.slope is None) != (other.slope is None):
            return False
        if self.slope is not None and self.slope != other.slope:
            return False
        a = self.offset if self.offset is not None else (0, 0)
        return other.signed_offset(a).is_zero

    def to_json(self):
        return {
            "slope": None if self.slope is None else self.slope.to_json(),
            "offset": list(self.offset) if self.offset is not None else None,
        }

    @staticmethod
    def from_json(obj) -> "Line":
        slope = obj.get("slope")
        off = obj.get("offset")
        return Line(None if slope is None else Scalar.from_json(slope),
                    tuple(off) if off is not None else None)

    def __str__(self):
        s = "vertical" if self.slope is None else f"slope {self.slope}"
        if self.offset is not None:
            return f"line({s}, through {self.offset})"
        return f"line({s}, through origin)"


def dist_to_line(x: Point, line: Line) -> Norm:
    return line.dist_to(x)


@dataclass(frozen=True)
class ConeSpec:
    """cone(r1, r2) in R^2 with per-boundary openness flags.

    Membership solves x = alpha*r1 + beta*r2 exactly; closed_r1 governs
    whether the boundary ray through r1 belongs to the cone.
    """

    r1: tuple
    r2: tuple
    closed_r1: bool = True
    closed_r2: bool = True

    @staticmethod
    def of(r1, r2, closed_r1=True, closed_r2=True) -> "ConeSpec":
        c1 = tuple(Scalar.coerce(c) for c in r1)
        c2 = tuple(Scalar.coerce(c) for c in r2)
        if all(c.is_zero for c in c1) or all(c.is_zero for c in c2):
            raise ValueError("zero boundary ray")
        return ConeSpec(c1, c2, closed_r1, closed_r2)

    def _det(self) -> Scalar:
        return self.r1[0] * self.r2[1] - self.r1[1] * self.r2[0]

    @property
    def is_pointed(self) -> bool:
        det = self._det()
        if not det.is_zero:
            return True
        # parallel rays: pointed iff same direction
        s = self.r1[0] * self.r2[0] + self.r1[1] * self.r2[1]
        return s.sign() > 0

    def contains(self, x: Point) -> bool:
        x = check_point(x, 2)
        det = self._det()
        if det.is_zero:
            return self._contains_degenerate(x)
        alpha = (x[0] * self.r2[1] - x[1] * self.r2[0]) / det
        beta = (self.r1[0] * x[1] - self.r1[1] * x[0]) / det
        sa, sb = alpha.sign(), beta.sign()
        if sa < 0 or sb < 0:
            return False
        if sb == 0 and not self.closed_r1:
            return False
        if sa == 0 and not self.closed_r2:
            return False
        return True

    def _contains_degenerate(self, x) -> bool:
        # r1, r2 parallel: cone is a ray or a full line
        cross = x[1] * self.r1[0] - x[0] * self.r1[1]
        if not cross.is_zero:
            return False
        if x == (0, 0):
            return self.closed_r1 and self.closed_r2
        along = x[0] * self.r1[0] + x[1] * self.r1[1]
        same_dir = self.r1[0] * self.r2[0] + self.r1[1] * self.r2[1]
        if same_dir.sign() > 0:
            return along.sign() > 0 or (along.sign() == 0)
        return True  # opposite rays: the whole line

    def interior_contains(self, x: Point) -> bool:
        det = self._det()
        if det.is_zero:
            return False
        x = check_point(x, 2)
        alpha = (x[0] * self.r2[1] - x[1] * self.r2[0]) / det
        beta = (self.r1[0] * x[1] - self.r1[1] * x[0]) / det
        return alpha.sign() > 0 and beta.sign() > 0


@dataclass(frozen=True)
class ProjectionFrame:
    """Orthogonal direction pair (u, v), norms tracked symbolically.

    u and v are unnormalized Scalar pairs with <u, v> = 0; projection
    norms divide by sqrt(<u,u>) symbolically via Norm, so all comparisons
    within a frame share the cancelling factor.
    """

    u: tuple
    v: tuple

    @staticmethod
    def of(u, v) -> "ProjectionFrame":
        uu = tuple(Scalar.coerce(c) for c in u)
        vv = tuple(Scalar.coerce(c) for c in v)
        dot = uu[0] * vv[0] + uu[1] * vv[1]
        if not dot.is_zero:
            raise ValueError("frame directions are not orthogonal")
        return ProjectionFrame(uu, vv)

    @staticmethod
    def for_line(line: Line) -> "ProjectionFrame":
        """u normal to the line, v along it."""
        return ProjectionFrame.of(line.normal(), line.direction())

    def _vec(self, axis: str):
        if axis == "u":
            return self.u
        if axis in ("L", "v"):
            return self.v
        raise ValueError("axis must be 'u' or 'L'")

    def component(self, x: Point, axis: str) -> Scalar:
        """Signed inner product <x, axis vector> (unnormalized)."""
        return inner_scalar(check_point(x, 2), self._vec(axis))

    def proj_norm(self, x: Point, axis: str) -> Norm:
        vec = self._vec(axis)
        nsq = vec[0] * vec[0] + vec[1] * vec[1]
        return Norm.of(abs(self.component(x, axis)), nsq)


def proj_norm(frame: ProjectionFrame, x: Point, axis: str) -> Norm:
    return frame.proj_norm(x, axis)


@dataclass(frozen=True)
class NearLineResult:
    point: Point
    m: int | None      # multiplier from the fractional-part scan, if used
    distance: Norm


_SCAN_LIMIT = 10**7


def lattice_near_line(line: Line, eps) -> NearLineResult:
    """Nonzero v in Z^2 with d(v, line) < eps, line through the origin.

    Rational directions return the primitive vector on the line.  For an
    irrational slope s the scan takes w = (1/s, 1) on the line and returns
    (floor(m/s), m) for the smallest m whose fractional part beats eps;
    the returned distance is verified exactly.
    """
    eps = Fraction(eps)
    if eps <= 0:
        raise ValueError("eps must be positive")
    if line.offset is not None and not line.contains_point((0, 0)):
        raise ValueError("line must pass through the origin")
    if line.is_rational_direction:
        v = line.direction_primitive()
        return NearLineResult(v, None, line.dist_to(v))
    x_param = ONE / line.slope  # (x_param, 1) lies on the line
    m = 0
    while m < _SCAN_LIMIT:
        m += 1
        t = x_param * m
        fl = t.floor()
        if (t - fl) < Fraction(eps):
            v = (fl, m)
            d = line.dist_to(v)
            assert d < eps
            return NearLineResult(v, m, d)
    raise RuntimeError("near-line scan exceeded limit")


def _near_affine_even(line: Line, eps: Fraction) -> Point:
    """Even-coordinate lattice point within eps of an affine irrational line."""
    base = Line(line.slope, None)
    n = base.normal()
    nsq = base.norm_sq()
    c = line.signed_offset((0, 0))  # <x, n> = -c on the line... adjust below
    c = -c
    # signed level of the line: points x on the line have <x, n> = c
    if c.is_zero:
        # line through origin: double a nearby point at half tolerance
        half = lattice_near_line(base, eps / 2)
        return (2 * half.point[0], 2 * half.point[1])
    if c.sign() < 0:
        n = (-n[0], -n[1])
        c = -c
    # target level for the half-distance line
    c_half = c / 2
    # step vector along the base line with small positive <., n>
    step = lattice_near_line(base, eps / 2).point
    sval = inner_scalar(step, n)
    if sval.sign() < 0:
        step = pneg(step)
        sval = -sval
    # start above the half line on the y-axis; n = +-(-slope, 1) here, so
    # <(0, y), n> = +-y and a large |y| of the right sign works
    if n[1].sign() > 0:
        v0 = (0, (c_half / n[1]).ceil() + 1)
    else:
        v0 = (0, (c_half / n[1]).floor() - 1)
    excess = inner_scalar(v0, n) - c_half
    k = (excess / sval).floor()
    v = psub(v0, pscale(k, step))
    # now 0 <= <v, n> - c_half < sval, so the doubled point lands within eps of the line
    v2 = (2 * v[0], 2 * v[1])
    d = Norm.of(abs(inner_scalar(v2, n) - c), nsq)
    assert d < eps, "even-point construction out of tolerance"
    return v2


def lattice_near_line_parity(line: Line, eps, parity: str) -> NearLineResult:
    """Near-line point with both coordinates even or both odd.

    Requires an irrational slope (the parity construction needs the line
    to avoid all lattice points).  Affine offsets are allowed.
    """
    eps = Fraction(eps)
    if eps <= 0:
        raise ValueError("eps must be positive")
    if parity not in ("even", "odd"):
        raise ValueError("parity must be 'even' or 'odd'")
    if line.is_rational_direction:
        raise ValueError("parity variant requires an irrational slope")
    if parity == "even":
        v = _near_affine_even(line, eps)
    else:
        shifted = line.translated((-1, -1))
        v1 = _near_affine_even(shifted, eps)
        v = padd(v1, (1, 1))
    d = line.dist_to(v)
    assert d < eps
    assert v != (0, 0)
    assert all(c % 2 == (0 if parity == "even" else 1) for c in v)
    return NearLineResult(v, None, d)
