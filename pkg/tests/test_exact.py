"""Scalar / Norm arithmetic and continued fractions."""

from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, settings, strategies as st

from latmon.exact import (
    Scalar, Norm, ExactError, cf_expansion, convergents, squarefree_split,
)


def S(*args):
    if len(args) == 1:
        return Scalar.coerce(args[0])
    return Scalar.make(*args)


SQRT2 = Scalar.sqrt_of(2)
SQRT3 = Scalar.sqrt_of(3)
GOLDEN = Scalar.make(1, 1, 5, 2)  # (1 + sqrt 5)/2


class TestScalar:
    def test_normalization(self):
        assert Scalar.make(2, 0, 1, 4) == Scalar.make(1, 0, 1, 2)
        assert Scalar.make(0, 1, 8, 2) == SQRT2  # sqrt(8)/2 = sqrt(2)
        assert Scalar.make(0, 2, 9, 3) == 2      # 2*sqrt(9)/3
        assert Scalar.make(1, 1, 1, 1) == 2

    def test_arith(self):
        assert SQRT2 * SQRT2 == 2
        assert (1 + SQRT2) * (1 - SQRT2) == -1
        assert (SQRT2 + SQRT2) / 2 == SQRT2
        assert SQRT2 * SQRT3 == Scalar.sqrt_of(6)
        assert 1 / SQRT2 == SQRT2 / 2
        assert GOLDEN * GOLDEN == GOLDEN + 1  # golden ratio identity

    def test_mixed_field_rejected(self):
        with pytest.raises(ExactError):
            _ = SQRT2 + SQRT3
        with pytest.raises(ExactError):
            _ = (1 + SQRT2) * (1 + SQRT3)

    def test_sign_and_cmp(self):
        assert (SQRT2 - 1).sign() == 1
        assert (SQRT2 - 2).sign() == -1
        assert (3 - 2 * SQRT2).sign() == 1   # 3 > 2.828
        assert (2 * SQRT2 - 3).sign() == -1
        assert SQRT2 > Fraction(7, 5)
        assert SQRT2 < Fraction(3, 2)
        assert GOLDEN > Fraction(8, 5)
        assert GOLDEN < Fraction(13, 8)

    def test_floor(self):
        assert SQRT2.floor() == 1
        assert (-SQRT2).floor() == -2
        assert (5 * SQRT2).floor() == 7
        assert S(7, 0, 1, 3).floor() == 2
        assert S(-7, 0, 1, 3).floor() == -3
        assert (GOLDEN * 100).floor() == 161

    def test_squarefree(self):
        assert squarefree_split(1) == (1, 1)
        assert squarefree_split(8) == (2, 2)
        assert squarefree_split(360) == (6, 10)


@settings(max_examples=300, deadline=None)
@given(p=st.integers(-50, 50), q=st.integers(-50, 50),
       d=st.sampled_from([2, 3, 5, 6, 7, 10, 11, 13]),
       r=st.integers(1, 30), target=st.fractions(min_value=-100, max_value=100))
def test_cmp_matches_high_precision_floats(p, q, d, r, target):
    """Exact comparisons agree with 200-bit evaluation (differential check)."""
    x = Scalar.make(p, q, d, r)
    with mpmath.workprec(200):
        approx = (mpmath.mpf(p) + mpmath.mpf(q) * mpmath.sqrt(d)) / r
        t = mpmath.mpf(target.numerator) / target.denominator
        if abs(approx - t) > mpmath.mpf(2) ** -150:
            assert x.cmp(target) == (1 if approx > t else -1)


@settings(max_examples=200, deadline=None)
@given(p=st.integers(-30, 30), q=st.integers(-30, 30),
       d=st.sampled_from([2, 3, 5, 7]), r=st.integers(1, 20))
def test_floor_property(p, q, d, r):
    x = Scalar.make(p, q, d, r)
    n = x.floor()
    assert x.cmp(n) >= 0
    assert x.cmp(n + 1) < 0


class TestNorm:
    def test_axis_projection(self):
        n = Norm.of(3, 1)
        assert n == 3
        assert n > Fraction(5, 2)

    def test_two_over_sqrt3(self):
        n = Norm.of(2, 3)  # 2/sqrt(3)
        assert abs(float(n) - 1.1547005) < 1e-6
        s = n.as_scalar()
        assert s is not None and s == 2 * SQRT3 / 3

    def test_cross_comparison(self):
        # |7 - 5*sqrt(2)| / sqrt(3) ~ 0.0410
        a = Norm.of(7 - 5 * SQRT2, 3)
        assert a < Fraction(1, 24)
        assert a > Fraction(1, 25)
        b = Norm.of(1, 4)  # = 1/2
        assert a < b
        assert b == Fraction(1, 2)

    def test_scaled(self):
        n = Norm.of(2, 3)
        assert n.scaled(3) == Norm.of(6, 3)


class TestCF:
    def test_sqrt2(self):
        cf = cf_expansion(SQRT2, 5)
        assert cf.quotients == (1, 2, 2, 2, 2)
        assert cf.period == (2,)

    def test_golden(self):
        cf = cf_expansion(GOLDEN, 5)
        assert cf.quotients == (1, 1, 1, 1, 1)
        assert cf.period == (1,)

    def test_rational(self):
        cf = cf_expansion(S(7, 0, 1, 3), 5)
        assert cf.quotients == (2, 3)
        assert cf.terminated

    def test_sqrt23_period(self):
        cf = cf_expansion(Scalar.sqrt_of(23), 12)
        assert cf.quotients[:5] == (4, 1, 3, 1, 8)
        assert cf.period == (1, 3, 1, 8)

    @pytest.mark.parametrize("x", [SQRT2, SQRT3, GOLDEN, Scalar.sqrt_of(7),
                                   Scalar.make(3, 2, 11, 7)])
    def test_convergents_are_good_approximations(self, x):
        cf = cf_expansion(x, 10)
        for pq in convergents(cf.quotients)[1:]:
            err = abs(x - Scalar.from_fraction(pq))
            bound = Fraction(1, pq.denominator ** 2)
            assert err < bound
