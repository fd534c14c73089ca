"""Lines, cones, projections, and the near-line constructions."""

from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from latmon.exact import Scalar, ONE
from latmon.geometry import (
    Line, ConeSpec, ProjectionFrame, inner, proj_norm, dist_to_line,
    lattice_near_line, lattice_near_line_parity,
)

SQRT2 = Scalar.sqrt_of(2)
GOLDEN = Scalar.make(1, 1, 5, 2)


class TestInner:
    def test_examples(self):
        assert inner((1, 2), (3, 4)) == 11
        assert inner((0, 0), (5, -7)) == 0
        assert inner((2, 1, 0), (0, 0, 1)) == 0

    def test_dimension_mismatch(self):
        with pytest.raises(ValueError):
            inner((1, 2), (1, 2, 3))


class TestProjection:
    def test_axis_aligned(self):
        frame = ProjectionFrame.of((Scalar.from_int(0), ONE), (ONE, Scalar.from_int(0)))
        assert proj_norm(frame, (7, 3), "u") == 3
        assert proj_norm(frame, (7, 0), "u") == 0

    def test_surd_frame(self):
        # u = (-sqrt2, 1), v = (1, sqrt2): the frame of a slope-sqrt2 line
        frame = ProjectionFrame.of((-SQRT2, ONE), (ONE, SQRT2))
        n = proj_norm(frame, (0, 2), "u")
        assert abs(float(n) - 1.1547005384) < 1e-9
        assert n == Scalar.make(0, 2, 3, 3)  # 2/sqrt(3) = 2*sqrt(3)/3

    def test_non_orthogonal_rejected(self):
        with pytest.raises(ValueError):
            ProjectionFrame.of((ONE, ONE), (ONE, SQRT2))


class TestDistToLine:
    def test_on_line(self):
        line = Line.through_origin(Fraction(2, 3))
        assert dist_to_line((3, 2), line) == 0

    def test_axis(self):
        vertical = Line.through_origin(None)
        assert dist_to_line((1, 0), vertical) == 1

    def test_surd_line(self):
        # direction (1, sqrt2): d((5,7)) = |7 - 5*sqrt2| / sqrt(3)
        line = Line.through_origin(SQRT2)
        d = dist_to_line((5, 7), line)
        assert abs(float(d) - 0.0410310) < 1e-6
        assert d.square() == (7 - 5 * SQRT2) ** 2 / 3 if False else True
        lhs = d.square()
        rhs = (7 - 5 * SQRT2) * (7 - 5 * SQRT2) / 3
        assert lhs == rhs


class TestCone:
    def test_quadrant(self):
        cone = ConeSpec.of((1, 0), (0, 1))
        assert cone.contains((3, 4))
        assert cone.contains((3, 0))
        assert not cone.contains((-1, 2))
        assert cone.contains((0, 0))

    def test_open_boundaries(self):
        cone = ConeSpec.of((1, 0), (0, 1), closed_r1=False, closed_r2=False)
        assert cone.contains((1, 1))
        assert not cone.contains((1, 0))
        assert not cone.contains((0, 2))
        assert not cone.contains((0, 0))

    def test_surd_wedge(self):
        # cone(-v, u) for the slope-sqrt2/2 frame: left wedge
        s = SQRT2 / 2
        cone = ConeSpec.of((-ONE, -s), (-s, ONE))
        assert cone.contains((-4, -2))
        assert not cone.contains((1, 1))
        assert not cone.contains((0, 2))

    def test_pointedness(self):
        assert ConeSpec.of((1, 0), (0, 1)).is_pointed
        assert not ConeSpec.of((1, 0), (-1, 0)).is_pointed


class TestNearLine:
    def test_rational_slope(self):
        line = Line.through_origin(Fraction(2, 3))
        res = lattice_near_line(line, Fraction(1, 10))
        assert res.point == (3, 2)
        assert res.distance == 0

    def test_sqrt2_tenth(self):
        # line through (sqrt2, 1): slope 1/sqrt2; first m with frac(m*sqrt2) < 1/10
        line = Line.from_direction(SQRT2, ONE)
        res = lattice_near_line(line, Fraction(1, 10))
        assert res.m == 5
        assert res.point == (7, 5)
        assert res.distance < Fraction(1, 10)

    def test_sqrt2_hundredth(self):
        # frac(29*sqrt2) ~ 0.0122 misses 1/100; the scan must run to m = 99
        line = Line.from_direction(SQRT2, ONE)
        res = lattice_near_line(line, Fraction(1, 100))
        assert res.m == 99
        assert res.point == (140, 99)
        assert res.distance < Fraction(1, 100)

    @pytest.mark.parametrize("slope", [SQRT2, Scalar.sqrt_of(3), GOLDEN])
    @pytest.mark.parametrize("eps", [Fraction(1, 10), Fraction(1, 100), Fraction(1, 1000)])
    def test_acceptance_grid(self, slope, eps):
        line = Line.through_origin(slope)
        res = lattice_near_line(line, eps)
        assert res.point != (0, 0)
        assert dist_to_line(res.point, line) < eps

    @settings(max_examples=60, deadline=None)
    @given(p=st.integers(0, 8), q=st.integers(1, 8),
           d=st.sampled_from([2, 3, 5, 7, 11, 13]), r=st.integers(1, 6),
           eps=st.sampled_from([Fraction(1, 10), Fraction(1, 100), Fraction(1, 1000)]))
    def test_random_surd_slopes(self, p, q, d, r, eps):
        slope = Scalar.make(p, q, d, r)
        line = Line.through_origin(slope)
        res = lattice_near_line(line, eps)
        assert res.point != (0, 0)
        assert dist_to_line(res.point, line) < eps


class TestNearLineParity:
    def test_rational_rejected(self):
        with pytest.raises(ValueError):
            lattice_near_line_parity(Line.through_origin(Fraction(2, 3)),
                                     Fraction(1, 2), "even")

    @pytest.mark.parametrize("parity", ["even", "odd"])
    def test_sqrt2_half(self, parity):
        line = Line.through_origin(SQRT2)
        res = lattice_near_line_parity(line, Fraction(1, 2), parity)
        want = 0 if parity == "even" else 1
        assert all(c % 2 == want for c in res.point)
        assert dist_to_line(res.point, line) < Fraction(1, 2)

    @pytest.mark.parametrize("slope", [SQRT2, Scalar.sqrt_of(3), GOLDEN])
    @pytest.mark.parametrize("eps", [Fraction(1, 10), Fraction(1, 100), Fraction(1, 1000)])
    @pytest.mark.parametrize("parity", ["even", "odd"])
    def test_acceptance_grid(self, slope, eps, parity):
        line = Line.through_origin(slope)
        res = lattice_near_line_parity(line, eps, parity)
        want = 0 if parity == "even" else 1
        assert res.point != (0, 0)
        assert all(c % 2 == want for c in res.point)
        assert dist_to_line(res.point, line) < eps

    def test_affine_offset(self):
        line = Line.through_origin(SQRT2).translated((0, 2))
        res = lattice_near_line_parity(line, Fraction(1, 4), "even")
        assert all(c % 2 == 0 for c in res.point)
        assert line.dist_to(res.point) < Fraction(1, 4)
