"""Monoid model: membership, units, divisibility, support, embedding."""

from fractions import Fraction

import pytest

from latmon.exact import Scalar
from latmon.geometry import Line, padd, pneg
from latmon.monoid import (
    FinGen, RegionUnion, HalfPlane, Band, ProductRegion, Window, Verdict,
    engine_for, contains, divides, units, monoid_points, supporting_lines,
    embed_ZxN0, spec_to_json, spec_from_json, validate_region_union, SpecError,
)
from latmon.oracle import naive_contains, random_fingen_spec

SQRT2 = Scalar.sqrt_of(2)

EX47 = RegionUnion(FinGen.of([(1, 0), (1, 1)]), (Band(1, 2),))
EX48 = RegionUnion(FinGen.of([(1, 0), (0, 2)]), (Band(1, 3),))
BAND31 = HalfPlane((Scalar.from_int(0), Scalar.from_int(1)), closed=False)
UPPER31 = HalfPlane((Scalar.from_int(0), Scalar.from_int(1)), closed=True)
EX53 = HalfPlane((SQRT2, Scalar.from_int(1)), closed=True)


def prop51(k):
    return RegionUnion(FinGen.of([(k + i, 0) for i in range(k)]), (Band(1, 1),))


class TestContains:
    def test_identity_everywhere(self):
        for spec in (EX47, EX48, BAND31, UPPER31, EX53, prop51(3)):
            assert contains(spec, (0, 0)).is_proven

    def test_ex47_examples(self):
        assert contains(EX47, (5, 2)).is_proven
        v = contains(EX47, (0, 1))
        assert v.is_refuted

    def test_certificate_replay(self):
        v = contains(EX47, (3, 1))
        assert v.is_proven
        kind, parts = v.certificate[0], v.certificate[1]
        if kind == "combination":
            total = (0, 0)
            for g, c in parts:
                total = padd(total, tuple(ci * c for ci in g))
            assert total == (3, 1)

    def test_dimension_mismatch(self):
        with pytest.raises(ValueError):
            contains(EX47, (1, 2, 3))

    def test_ex53_membership(self):
        assert contains(EX53, (1, 0)).is_proven
        assert contains(EX53, (-1, 0)).is_refuted
        assert contains(EX53, (-1, 2)).is_proven  # 2 - sqrt2 > 0


class TestUnits:
    def test_upper_halfplane(self):
        res = units(UPPER31, Window.of((-3, 3), (-3, 3)))
        assert res.units == tuple((a, 0) for a in range(-3, 4))
        assert res.complete

    def test_ex47_reduced(self):
        res = units(EX47, Window.of((-5, 5), (-5, 5)))
        assert res.units == ((0, 0),)

    def test_band_reduced(self):
        res = units(BAND31, Window.of((-4, 4), (-4, 4)))
        assert res.units == ((0, 0),)


class TestDivides:
    def test_prop51_example(self):
        assert divides(prop51(2), (2, 0), (-4, 1)).is_proven

    def test_zero_divides_everything(self):
        assert divides(EX47, (0, 0), (5, 2)).is_proven

    def test_preorder_on_window(self):
        spec = EX47
        w = Window.of((0, 4), (0, 4))
        members = [p for p in w.points() if contains(spec, p).is_proven]
        for p in members:
            assert divides(spec, p, p).is_proven  # reflexive
        import itertools
        for a, b, c in itertools.islice(itertools.product(members, repeat=3), 800):
            if divides(spec, a, b).is_proven and divides(spec, b, c).is_proven:
                assert divides(spec, a, c).is_proven  # transitive


class TestMonoidPoints:
    def test_ex31_band_window(self):
        res = monoid_points(BAND31, Window.of((-2, 2), (0, 2)))
        expect = {(0, 0)} | {(x, y) for x in range(-2, 3) for y in (1, 2)}
        assert set(res.points) == expect
        assert res.complete

    def test_ex48_window(self):
        res = monoid_points(EX48, Window.of((0, 3), (0, 3)))
        expect = {(x, 0) for x in range(4)} | {(x, 2) for x in range(4)} \
            | {(x, 3) for x in range(4)}
        assert set(res.points) == expect
        assert (1, 1) not in res.points

    def test_closure_in_window(self):
        for spec in (EX47, EX48, prop51(2), BAND31):
            w = Window.of((-6, 6), (-6, 6))
            res = monoid_points(spec, w)
            pts = set(res.points)
            for a in list(pts)[:80]:
                for b in list(pts)[:80]:
                    s = padd(a, b)
                    if w.contains(s):
                        assert contains(spec, s).is_proven, (spec, a, b)


class TestSupport:
    def test_ex47_unique_rational(self):
        sup = supporting_lines(EX47)
        assert sup.kind == "unique"
        assert sup.rationally_supported
        assert sup.lines[0].slope == 0

    def test_ex53_unique_irrational(self):
        sup = supporting_lines(EX53)
        assert sup.kind == "unique"
        assert not sup.rationally_supported
        assert sup.lines[0].slope == -SQRT2

    def test_group_has_none(self):
        spec = FinGen.of([(1, 0), (-1, 0), (0, 1), (0, -1)])
        assert supporting_lines(spec).kind == "none"

    def test_fingen_pencil(self):
        sup = supporting_lines(FinGen.of([(1, 0), (1, 1)]))
        assert sup.kind == "pencil"
        assert sup.rationally_supported


class TestEmbed:
    def test_slope_one(self):
        spec = FinGen.of([(1, 1), (0, 1)], declared_support=Line.through_origin(1))
        emb = embed_ZxN0(spec)
        assert emb.forward((2, 3)) == (5, 1)
        assert emb.forward((0, 0)) == (0, 0)

    def test_slope_half(self):
        spec = FinGen.of([(2, 1), (1, 1)],
                         declared_support=Line.through_origin(Fraction(1, 2)))
        emb = embed_ZxN0(spec)
        assert emb.forward((2, 1)) == (5, 0)

    def test_not_supported_rejected(self):
        spec = FinGen.of([(1, 0), (-1, 0), (0, 1), (0, -1)])
        with pytest.raises(SpecError):
            embed_ZxN0(spec)

    def test_additive_injective_nonneg(self):
        for seed in range(1, 31):
            spec = random_fingen_spec(seed)
            emb = embed_ZxN0(spec)
            w = Window.of((-6, 6), (-6, 6))
            pts = list(w.points())
            f = emb.forward
            seen = {}
            for p in pts[::7]:
                for q in pts[::11]:
                    assert f(padd(p, q)) == padd(f(p), f(q))
            for p in pts:
                assert f(p) not in seen or seen[f(p)] == p
                seen[f(p)] = p
            for g in spec.gens:
                assert f(g)[1] >= 0


class TestOracleAgreement:
    def test_membership_against_bfs(self):
        w = Window.of((-10, 15), (-10, 15))
        for seed in range(1, 26):
            spec = random_fingen_spec(seed)
            eng = engine_for(spec)
            for p in list(w.points())[::13]:
                mine = eng.contains(p)
                ref = naive_contains(spec.gens, p)
                if ref.is_unknown or mine.is_unknown:
                    continue
                assert mine.status == ref.status, (spec.gens, p)

    def test_parity_obstruction(self):
        assert naive_contains([(2, 0)], (3, 0)).is_refuted
        assert engine_for(FinGen.of([(2, 0)])).contains((3, 0)).is_refuted


class TestSpecIO:
    def test_roundtrip(self):
        for spec in (EX47, EX48, BAND31, UPPER31, EX53, prop51(4),
                     FinGen.of([(1, 2), (3, 4)])):
            blob = spec_to_json(spec)
            back = spec_from_json(blob)
            assert spec_to_json(back) == blob

    def test_bad_kind(self):
        with pytest.raises(SpecError):
            spec_from_json({"kind": "nope"})

    def test_union_validation_rejects_open_union(self):
        # {y >= 1} union a stray generator (1, -1) is not closed under +
        bad = RegionUnion(FinGen.of([(1, -1)]), (Band(1, 1),))
        with pytest.raises(SpecError):
            validate_region_union(bad)
