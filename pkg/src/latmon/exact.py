"""Exact scalars: rationals and quadratic surds (p + q*sqrt(d))/r.

Every comparison in the library goes through this module; nothing here
touches floating point.  Values outside Q(sqrt(d)) for a single squarefree
d are rejected rather than approximated.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction


class ExactError(ArithmeticError):
    """Operation would leave the supported field (e.g. nested radicals)."""


def squarefree_split(n: int) -> tuple[int, int]:
    """Split n >= 1 as s*s*f with f squarefree; returns (s, f)."""
    if n < 1:
        raise ValueError("need n >= 1")
    s, f = 1, 1
    m = n
    i = 2
    while i * i <= m:
        if m % i == 0:
            e = 0
            while m % i == 0:
                m //= i
                e += 1
            s *= i ** (e // 2)
            if e % 2:
                f *= i
        i += 1
    return s, f * m


@dataclass(frozen=True)
class Scalar:
    """(p + q*sqrt(d)) / r with d squarefree, r > 0, gcd(p, q, r) = 1.

    Rationals are the q = 0, d = 1 case.  All arithmetic and comparisons
    are exact; mixing two different irrationalities raises ExactError
    unless the product happens to stay quadratic (pure root * pure root).
    """

    p: int
    q: int
    d: int
    r: int

    # -- construction ------------------------------------------------

    @staticmethod
    def make(p: int, q: int, d: int, r: int) -> "Scalar":
        if r == 0:
            raise ZeroDivisionError("zero denominator")
        if q == 0:
            d = 1
        else:
            if d < 0:
                raise ExactError("negative discriminant")
            s, f = squarefree_split(d)
            q *= s
            d = f
            if d == 1:
                p += q
                q = 0
        if r < 0:
            p, q, r = -p, -q, -r
        g = math.gcd(math.gcd(abs(p), abs(q)), r)
        if g > 1:
            p, q, r = p // g, q // g, r // g
        if p == 0 and q == 0:
            r = 1
            d = 1
        return Scalar(p, q, d, r)

    @staticmethod
    def from_int(n: int) -> "Scalar":
        return Scalar.make(n, 0, 1, 1)

    @staticmethod
    def from_fraction(x) -> "Scalar":
        fr = Fraction(x)
        return Scalar.make(fr.numerator, 0, 1, fr.denominator)

    @staticmethod
    def sqrt_of(x) -> "Scalar":
        """Exact square root of a nonnegative rational."""
        fr = Fraction(x)
        if fr < 0:
            raise ExactError("sqrt of negative rational")
        # sqrt(a/b) = sqrt(a*b) / b
        return Scalar.make(0, 1, fr.numerator * fr.denominator, fr.denominator)

    @staticmethod
    def coerce(x) -> "Scalar":
        if isinstance(x, Scalar):
            return x
        if isinstance(x, int):
            return Scalar.from_int(x)
        if isinstance(x, Fraction):
            return Scalar.from_fraction(x)
        raise TypeError(f"cannot coerce {x!r} to Scalar")

    # -- queries -----------------------------------------------------

    @property
    def is_rational(self) -> bool:
        return self.q == 0

    @property
    def is_zero(self) -> bool:
        return self.p == 0 and self.q == 0

    def to_fraction(self) -> Fraction:
        if not self.is_rational:
            raise ExactError(f"{self} is irrational")
        return Fraction(self.p, self.r)

    def sign(self) -> int:
        """Exact sign of (p + q*sqrt(d))/r."""
        p, q, d = self.p, self.q, self.d
        if q == 0:
            return (p > 0) - (p < 0)
        if p == 0:
            return (q > 0) - (q < 0)
        if p > 0 and q > 0:
            return 1
        if p < 0 and q < 0:
            return -1
        # opposite signs: compare p*p against q*q*d (never equal, d squarefree > 1)
        return (p > 0) - (p < 0) if p * p > q * q * d else (q > 0) - (q < 0)

    # -- arithmetic --------------------------------------------------

    def _aligned(self, other: "Scalar") -> int:
        """Common discriminant for addition, or raise."""
        if self.q == 0:
            return other.d
        if other.q == 0:
            return self.d
        if self.d != other.d:
            raise ExactError(f"incompatible surds: sqrt({self.d}) vs sqrt({other.d})")
        return self.d

    def __add__(self, other):
        o = Scalar.coerce(other)
        d = self._aligned(o)
        return Scalar.make(self.p * o.r + o.p * self.r,
                           self.q * o.r + o.q * self.r, d, self.r * o.r)

    def __radd__(self, other):
        return self.__add__(other)

    def __neg__(self):
        return Scalar.make(-self.p, -self.q, self.d, self.r)

    def __sub__(self, other):
        return self.__add__(-Scalar.coerce(other))

    def __rsub__(self, other):
        return (-self).__add__(other)

    def __mul__(self, other):
        o = Scalar.coerce(other)
        if self.q == 0 or o.q == 0 or self.d == o.d:
            d = self._aligned(o)
            return Scalar.make(self.p * o.p + self.q * o.q * d,
                               self.p * o.q + self.q * o.p, d, self.r * o.r)
        if self.p == 0 and o.p == 0:
            # pure roots: q1*sqrt(d1) * q2*sqrt(d2) = q1*q2*sqrt(d1*d2)
            return Scalar.make(0, self.q * o.q, self.d * o.d, self.r * o.r)
        raise ExactError("product leaves the quadratic field")

    def __rmul__(self, other):
        return self.__mul__(other)

    def inverse(self) -> "Scalar":
        if self.is_zero:
            raise ZeroDivisionError("inverse of zero")
        den = self.p * self.p - self.q * self.q * self.d
        return Scalar.make(self.r * self.p, -self.r * self.q, self.d, den)

    def __truediv__(self, other):
        return self.__mul__(Scalar.coerce(other).inverse())

    def __rtruediv__(self, other):
        return Scalar.coerce(other).__mul__(self.inverse())

    def __abs__(self):
        return -self if self.sign() < 0 else self

    # -- comparisons -------------------------------------------------

    def cmp(self, other) -> int:
        return (self - Scalar.coerce(other)).sign()

    def __lt__(self, other):
        return self.cmp(other) < 0

    def __le__(self, other):
        return self.cmp(other) <= 0

    def __gt__(self, other):
        return self.cmp(other) > 0

    def __ge__(self, other):
        return self.cmp(other) >= 0

    def __eq__(self, other):
        if isinstance(other, (Scalar, int, Fraction)):
            return self.cmp(other) == 0
        return NotImplemented

    def __hash__(self):
        return hash((self.p, self.q, self.d, self.r))

    # -- floor / float -----------------------------------------------

    def floor(self) -> int:
        root = math.isqrt(self.q * self.q * self.d)
        if self.q < 0:
            root = -(root + 1)  # lower bound of q*sqrt(d)
        n = (self.p + root) // self.r
        while self.cmp(n + 1) >= 0:
            n += 1
        while self.cmp(n) < 0:
            n -= 1
        return n

    def ceil(self) -> int:
        return -((-self).floor())

    def __float__(self):
        if self.q == 0:
            return self.p / self.r
        # rational approximation of sqrt(d) good to ~1e-30, then one division
        scale = 10 ** 30
        root = Fraction(math.isqrt(self.d * scale * scale), scale)
        return float((Fraction(self.p) + Fraction(self.q) * root) / self.r)

    # -- presentation / serialization ---------------------------------

    def __repr__(self):
        return f"Scalar({self})"

    def __str__(self):
        if self.q == 0:
            return str(self.p) if self.r == 1 else f"{self.p}/{self.r}"
        qpart = f"{'-' if self.q < 0 else ''}{'' if abs(self.q) == 1 else abs(self.q)}" + f"√{self.d}"
        if self.p == 0:
            body = qpart
        else:
            body = f"{self.p}{'+' if self.q > 0 else '-'}{'' if abs(self.q) == 1 else abs(self.q)}√{self.d}"
        return body if self.r == 1 else f"({body})/{self.r}"

    def to_json(self):
        if self.q == 0 and self.r == 1:
            return self.p
        return [self.p, self.q, self.d, self.r]

    @staticmethod
    def from_json(obj) -> "Scalar":
        if isinstance(obj, int):
            return Scalar.from_int(obj)
        if isinstance(obj, str):
            return Scalar.from_int(int(obj))
        if isinstance(obj, (list, tuple)) and len(obj) == 4:
            return Scalar.make(*(int(v) for v in obj))
        if isinstance(obj, (list, tuple)) and len(obj) == 2:
            return Scalar.make(int(obj[0]), 0, 1, int(obj[1]))
        raise ValueError(f"bad scalar spec: {obj!r}")


ZERO = Scalar.from_int(0)
ONE = Scalar.from_int(1)


@dataclass(frozen=True)
class Norm:
    """Nonnegative quantity num / sqrt(den_sq).

    Projection norms and point-line distances take this shape; a single
    squaring turns any comparison into a Scalar sign test, so no nested
    radicals ever appear.
    """

    num: Scalar      # >= 0
    den_sq: Scalar   # > 0

    @staticmethod
    def of(num, den_sq=ONE) -> "Norm":
        n = abs(Scalar.coerce(num))
        dsq = Scalar.coerce(den_sq)
        if dsq.sign() <= 0:
            raise ValueError("den_sq must be positive")
        return Norm(n, dsq)

    def square(self) -> Scalar:
        return self.num * self.num / self.den_sq

    @property
    def is_zero(self) -> bool:
        return self.num.is_zero

    def scaled(self, k) -> "Norm":
        fr = Fraction(k)
        if fr < 0:
            raise ValueError("scale must be nonnegative")
        return Norm.of(self.num * Scalar.from_fraction(fr), self.den_sq)

    def cmp(self, other) -> int:
        if isinstance(other, Norm):
            lhs = self.num * self.num * other.den_sq
            rhs = other.num * other.num * self.den_sq
            return lhs.cmp(rhs)
        s = Scalar.coerce(other)
        if s.sign() < 0:
            return 1
        return (self.num * self.num).cmp(s * s * self.den_sq)

    def __lt__(self, other):
        return self.cmp(other) < 0

    def __le__(self, other):
        return self.cmp(other) <= 0

    def __gt__(self, other):
        return self.cmp(other) > 0

    def __ge__(self, other):
        return self.cmp(other) >= 0

    def __eq__(self, other):
        if isinstance(other, (Norm, Scalar, int, Fraction)):
            return self.cmp(other) == 0
        return NotImplemented

    def __hash__(self):
        return hash(("norm", self.square()))

    def as_scalar(self):
        """Exact Scalar form when one exists, else None."""
        if self.den_sq.is_rational:
            dfr = self.den_sq.to_fraction()
            root = Scalar.sqrt_of(dfr)
            if root.is_rational:
                return self.num / root
            if self.num.is_rational or self.num.p == 0:
                return self.num / root  # stays quadratic in both cases
        return None

    def __float__(self):
        return math.sqrt(float(self.square()))

    def __str__(self):
        s = self.as_scalar()
        if s is not None:
            return str(s)
        return f"{self.num}/√({self.den_sq})"

    def __repr__(self):
        return f"Norm({self})"


# -- continued fractions ---------------------------------------------


@dataclass(frozen=True)
class CFExpansion:
    quotients: tuple
    terminated: bool          # rational input, full expansion listed
    period_start: int | None  # index into quotients where the period begins
    period: tuple | None


def cf_expansion(x: Scalar, n: int) -> CFExpansion:
    """First n partial quotients of x; exact, with period detection for surds."""
    if n < 0:
        raise ValueError("n must be >= 0")
    if x.is_rational:
        quotients = []
        a, b = x.p, x.r
        while b and len(quotients) < n:
            quotients.append(a // b)
            a, b = b, a - (a // b) * b
        return CFExpansion(tuple(quotients), terminated=(b == 0),
                           period_start=None, period=None)

    # write x = (P + sqrt(N)) / Q with Q | N - P^2
    if x.q > 0:
        pp, qq = x.p, x.r
    else:
        pp, qq = -x.p, -x.r
    nn = x.q * x.q * x.d
    if (nn - pp * pp) % qq:
        pp *= abs(qq)
        nn *= qq * qq
        qq *= abs(qq)

    quotients = []
    seen = {}
    period_start = None
    period = None
    for i in range(n):
        if (pp, qq) in seen and period_start is None:
            period_start = seen[(pp, qq)]
            period = tuple(quotients[period_start:i])
        seen.setdefault((pp, qq), i)
        a = Scalar.make(pp, 1, nn, qq).floor()
        quotients.append(a)
        pp = a * qq - pp
        qq = (nn - pp * pp) // qq
    if period_start is None and (pp, qq) in seen:
        period_start = seen[(pp, qq)]
        period = tuple(quotients[period_start:])
    return CFExpansion(tuple(quotients), terminated=False,
                       period_start=period_start, period=period)


def convergents(quotients) -> list[Fraction]:
    """Convergents p/q of a partial-quotient sequence."""
    out = []
    p0, q0, p1, q1 = 1, 0, 0, 1
    for a in quotients:
        p0, q0, p1, q1 = a * p0 + p1, a * q0 + q1, p0, q0
        out.append(Fraction(p0, q0))
    return out
