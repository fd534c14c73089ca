"""The sequence-generated monoid near an irrational line.

Generators: the even sublattice of the left wedge cone(-v, u) (a region A),
an increasing sequence a_n of odd points squeezing up to the translated
line level, a decreasing sequence d_n squeezing down to it from above,
and the anchor point w = (0, 2).  The monoid is nearly atomic but not
atomic; every query here is decided exactly.

Sequences are conceptually infinite.  They are generated on demand inside
halving bands: the n-th term's level distance to the anchor line is at
most half the previous one, which certifies the limit and makes the
"some deep enough term works" questions decidable.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .exact import Scalar, Norm, ZERO, ONE
from .geometry import (
    Point, check_point, padd, psub, pneg, pscale, norm1, inner_scalar,
    Line, ProjectionFrame,
)
from .monoid import Verdict, Window, SupportDescription, SpecError

_SCAN_X_LIMIT = 5_000_000


@dataclass(frozen=True)
class SequencePair:
    a_seq: tuple
    d_seq: tuple
    w: Point
    frame: ProjectionFrame
    ell: Norm
    slope: Scalar


def _band_scan(slope: Scalar, parity: int, lo: Scalar, hi: Scalar,
               lo_strict: bool, hi_strict: bool, below_ray=None, start_x=None):
    """Least-|.|_1 lattice point (x, y), x > 0, with y - slope*x in the band.

    parity 0 scans even/even points, parity 1 odd/odd.  The band must be
    narrower than 2 so at most one matching y exists per x.  below_ray,
    when given as a point p, additionally requires y * p.x < x * p.y.
    """
    assert (hi - lo).cmp(2) < 0
    x = start_x if start_x is not None else (2 if parity == 0 else 1)
    while x < _SCAN_X_LIMIT:
        base = slope * x
        y_lo_s = base + lo
        y_hi_s = base + hi
        y = y_lo_s.floor() + 1 if lo_strict else (-((-y_lo_s).floor()))
        if y % 2 != parity:
            y += 1
        ok_hi = (y_hi_s.cmp(y) > 0) if hi_strict else (y_hi_s.cmp(y) >= 0)
        if ok_hi and (y > base or (lo.sign() >= 0 and not lo_strict)):
            cand = (x, y)
            if below_ray is None or cand[1] * below_ray[0] < cand[0] * below_ray[1]:
                lov = (y - base)
                ok_lo = lov.cmp(lo) > 0 if lo_strict else lov.cmp(lo) >= 0
                if ok_lo:
                    return cand
        x += 2
    raise RuntimeError("band scan exceeded the x limit")


class Ex46Engine:
    """Exact membership / atom / atomicity decisions for the construction."""

    dim = 2

    def __init__(self, slope: Scalar, depth: int = 10):
        if slope.is_rational or slope.sign() <= 0:
            raise SpecError("construction needs a positive irrational slope")
        if depth < 2:
            raise SpecError("depth must be at least 2")
        self.slope = slope
        self.depth = depth
        self.w = (0, 2)
        self.ell = Scalar.from_int(2)          # raw <w, u> with u = (-s, 1)
        self.u = (-slope, ONE)
        self.v = (ONE, slope)
        self._a: list = []
        self._d: list = []
        self._ensure_a(depth - 1)
        self._ensure_d(depth - 1)
        self.spec = None

    # -- raw functionals ----------------------------------------------

    def phi(self, x: Point) -> Scalar:
        """<x, u> raw: y - slope * x (level above the support line)."""
        return Scalar.from_int(x[1]) - self.slope * x[0]

    def vcomp(self, x: Point) -> Scalar:
        """<x, v> raw: x + slope * y (position along the line)."""
        return Scalar.from_int(x[0]) + self.slope * x[1]

    def in_A(self, x: Point) -> bool:
        """Even points of the left wedge: phi >= 0 and vcomp <= 0."""
        return (x[0] % 2 == 0 and x[1] % 2 == 0
                and self.phi(x).sign() >= 0 and self.vcomp(x).sign() <= 0)

    # -- sequence construction ----------------------------------------

    def _ensure_a(self, n: int):
        while len(self._a) <= n:
            if not self._a:
                pt = _band_scan(self.slope, 1, self.ell / 2, self.ell, True, True)
            else:
                prev = self._a[-1]
                delta = self.ell - self.phi(prev)
                pt = _band_scan(self.slope, 1, self.ell - delta / 2, self.ell,
                                False, True, below_ray=prev)
            if self._a:
                assert self.phi(pt) > self.phi(self._a[-1])
                assert self.vcomp(pt) > self.vcomp(self._a[-1])
            self._a.append(pt)
        assert self.phi(self._a[0]) > self.ell / 2

    def _ensure_d(self, n: int):
        self._ensure_a(0)
        while len(self._d) <= n:
            if not self._d:
                hi = 2 * self.phi(self._a[0])
                pt = _band_scan(self.slope, 0, self.ell, hi, True, True)
            else:
                prev = self._d[-1]
                delta = self.phi(prev) - self.ell
                pt = _band_scan(self.slope, 0, self.ell, self.ell + delta / 2,
                                True, False, below_ray=prev)
            if self._d:
                assert self.phi(pt) < self.phi(self._d[-1])
                assert self.vcomp(pt) > self.vcomp(self._d[-1])
            self._d.append(pt)

    def a(self, n: int) -> Point:
        self._ensure_a(n)
        return self._a[n]

    def d(self, n: int) -> Point:
        self._ensure_d(n)
        return self._d[n]

    def sequence_pair(self) -> SequencePair:
        frame = ProjectionFrame.of(self.u, self.v)
        nsq = self.u[0] * self.u[0] + self.u[1] * self.u[1]
        return SequencePair(tuple(self._a[:self.depth]), tuple(self._d[:self.depth]),
                            self.w, frame, Norm.of(self.ell, nsq), self.slope)

    # -- deep-term selectors --------------------------------------------

    def _a_deep(self, v_need: Scalar, phi_cap: Scalar | None = None) -> int:
        """Index k with vcomp(a_k) >= v_need (and phi(a_k) <= phi_cap if given)."""
        k = 0
        while True:
            ak = self.a(k)
            if (phi_cap is None or self.phi(ak).cmp(phi_cap) <= 0) \
                    and self.vcomp(ak).cmp(v_need) >= 0:
                return k
            k += 1

    def _d_deep(self, phi_cap: Scalar, v_need: Scalar) -> int:
        """Index k with phi(d_k) <= phi_cap (needs phi_cap > ell) and big vcomp."""
        assert phi_cap.cmp(self.ell) > 0
        k = 0
        while True:
            dk = self.d(k)
            if self.phi(dk).cmp(phi_cap) <= 0 and self.vcomp(dk).cmp(v_need) >= 0:
                return k
            k += 1

    # -- representation search ------------------------------------------

    def _a_multiset(self, slots: int, budget: Scalar, v_need: Scalar, min_k=0,
                    forbid_index=None):
        """Indices k_1 <= ... <= k_slots with sum phi <= budget, sum vcomp >= v_need.

        Returns an index list or None.  The level values phi(a_k) increase
        strictly below 2 and the along-line components grow without bound,
        which makes both the bounded branch and the deep branch terminate.
        forbid_index excludes the one-slot solution using exactly that index.
        """
        if slots == 0:
            return [] if budget.sign() >= 0 and v_need.sign() <= 0 else None
        if budget.cmp(2 * slots) >= 0:
            # every index choice fits the budget (phi(a_k) < 2); go deep for v
            k = min_k
            if forbid_index is not None and slots == 1 and k == forbid_index:
                k += 1
            while True:
                tot_v = self.vcomp(self.a(k)) * slots
                if tot_v.cmp(v_need) >= 0:
                    return [k] * slots
                k += 1
                if forbid_index is not None and slots == 1 and k == forbid_index:
                    k += 1
        k = min_k
        while True:
            ak = self.a(k)
            pk = self.phi(ak)
            if (pk * slots).cmp(budget) > 0:
                return None  # smallest index must fit phi-wise; later ones larger
            if not (forbid_index is not None and slots == 1 and k == forbid_index):
                sub = self._a_multiset(slots - 1, budget - pk,
                                       v_need - self.vcomp(ak), k)
                if sub is not None:
                    return [k] + sub
            k += 1

    def _materialize(self, x, ks, ds, c):
        parts = [self.a(k) for k in ks] + [self.d(m) for m in ds] + [self.w] * c
        rest = x
        for p in parts:
            rest = psub(rest, p)
        assert self.in_A(rest), "materialized remainder escapes the wedge region"
        return tuple(parts), rest

    def _rep_decision(self, x, allow_d=True, need_weight=0, forbid_trivial=False):
        """Search a representation x = sum(a's) + sum(d's) + c*w + rest (rest in A).

        need_weight: minimum count of parts, a nonzero rest counting as one.
        forbid_trivial: reject the representation whose single part is x itself.
        Returns (parts, rest) or None; the decision is exact, not bounded.
        """
        x = check_point(x, 2)
        if (x[0] - x[1]) % 2:
            return None
        phix = self.phi(x)
        if phix.sign() < 0:
            return None
        p0 = x[0] % 2
        vx = self.vcomp(x)
        vw = self.vcomp(self.w)
        phia0 = self.phi(self.a(0))
        va0 = self.vcomp(self.a(0))
        c = 0
        while phix.cmp(2 * c) >= 0:
            rem = phix - 2 * c
            vrem = vx - vw * c
            # d-pattern (p0 copies of a_0, one deep d, c anchors): feasible
            # exactly when the budget exceeds p0*phi(a_0) + ell strictly; the
            # slack forces a nonzero remainder, so the weight is >= 2 always
            if allow_d and rem.cmp(Scalar.from_int(2) + phia0 * p0) > 0:
                used = phia0 * p0 + Scalar.from_int(2 * c)
                m = self._d_deep(phix - used, vrem - va0 * p0)
                parts, rest = self._materialize(x, [0] * p0, [m], c)
                if any(rest) and len(parts) + 1 >= need_weight:
                    return parts, rest
            # pure a/w patterns
            p = p0
            while (phia0 * p).cmp(rem) <= 0:
                base_weight = p + c
                if base_weight + 1 >= need_weight:
                    require_rest = base_weight < need_weight
                    forbid = None
                    if p == 1 and c == 0 and (forbid_trivial or require_rest):
                        forbid = self._self_index(x)
                    if p == 0 and require_rest and x == pscale(c, self.w):
                        pass  # rest would be zero; no other choice exists
                    else:
                        ks = self._a_multiset(p, rem, vrem, forbid_index=forbid)
                        if ks is not None:
                            parts, rest = self._materialize(x, ks, [], c)
                            weight = len(parts) + (1 if any(rest) else 0)
                            trivial = (len(parts) == 1 and not any(rest))
                            if weight >= need_weight and not (forbid_trivial and trivial):
                                return parts, rest
                p += 2
            c += 1
        return None

    def _self_index(self, x):
        """Index of x inside the a-sequence when phi(x) < ell, else None."""
        phix = self.phi(x)
        if phix.cmp(self.ell) >= 0:
            return None
        k = 0
        while True:
            ak = self.a(k)
            pk = self.phi(ak)
            if ak == x:
                return k
            if pk.cmp(phix) > 0:
                return None
            k += 1

    # -- public queries --------------------------------------------------

    def contains(self, x: Point) -> Verdict:
        x = check_point(x, 2)
        if not any(x):
            return Verdict.proven("identity")
        if (x[0] - x[1]) % 2:
            return Verdict.refuted("mixed-parity")
        if self.phi(x).sign() < 0:
            return Verdict.refuted("below-support-line")
        got = self._rep_decision(x)
        if got is None:
            return Verdict.refuted("pattern-exhaustion")
        parts, rest = got
        return Verdict.proven("generator-sum",
                              tuple(p for p, _ in parts), rest)

    def is_unit(self, x: Point) -> Verdict:
        x = check_point(x, 2)
        if not any(x):
            return Verdict.proven("identity")
        cx = self.contains(x)
        if not cx.is_proven:
            return Verdict.refuted("not-member") if cx.is_refuted else cx
        return Verdict.refuted("positive-level")

    def unit_lattice(self):
        return ()

    def _a2_split(self, x):
        """Split of x into two nonzero wedge-region points, or None."""
        if not self.in_A(x):
            return None
        s = self.slope
        lo_x = x[0]
        for r1 in range(lo_x, 1):
            if r1 % 2:
                continue
            # phi(r) >= 0:  r2 >= s*r1 ; vcomp(r) <= 0: r2 <= -r1/s
            # phi(x-r) >= 0: r2 <= x2 - s*(x1-r1); vcomp(x-r) <= 0: r2 >= x2 + (x1-r1)/s
            lo1 = (s * r1).ceil()
            lo2 = (Scalar.from_int(x[1]) + Scalar.from_int(x[0] - r1) / s).ceil()
            hi1 = (Scalar.from_int(-r1) / s).floor()
            hi2 = (Scalar.from_int(x[1]) - s * (x[0] - r1)).floor()
            lo = max(lo1, lo2)
            hi = min(hi1, hi2)
            for r2 in range(lo, hi + 1):
                if r2 % 2:
                    continue
                r = (r1, r2)
                if not any(r) or r == x:
                    continue
                rest = psub(x, r)
                if self.in_A(r) and self.in_A(rest):
                    return r, rest
        return None

    def atom_verdict(self, x: Point) -> Verdict:
        x = check_point(x, 2)
        cx = self.contains(x)
        if not cx.is_proven:
            return Verdict.refuted("not-member") if cx.is_refuted else cx
        if not any(x):
            return Verdict.refuted("unit")
        got = self._rep_decision(x, need_weight=2, forbid_trivial=True)
        if got is not None:
            parts, rest = got
            pieces = [p for p, _ in parts] + ([rest] if any(rest) else [])
            return Verdict.refuted("split", pieces[0],
                                   tuple(psub(x, pieces[0])))
        a2 = self._a2_split(x)
        if a2 is not None:
            return Verdict.refuted("split", a2[0], a2[1])
        return Verdict.proven("band-interval-analysis")

    def atomic_element(self, x: Point) -> Verdict:
        """x is a sum of atoms iff it has a representation avoiding the d's."""
        x = check_point(x, 2)
        cx = self.contains(x)
        if not cx.is_proven:
            return Verdict.refuted("not-member") if cx.is_refuted else cx
        if not any(x):
            return Verdict.refuted("unit")
        got = self._rep_decision(x, allow_d=False)
        if got is not None:
            return Verdict.proven("d-free-representation",
                                  tuple(p for p, _ in got[0]), got[1])
        return Verdict.refuted("every-representation-uses-the-d-sequence")

    def hull_contains(self, x: Point) -> Verdict:
        if not any(check_point(x, 2)):
            return Verdict.proven("identity")
        return self.atomic_element(x)

    def atom_structure(self):
        return None  # infinitely many atoms; windows stay honest

    def atom_invariants(self):
        return ()

    def decompose_region_element(self, x: Point, _depth=0):
        """Concrete atom multiset for a wedge-region element (descent)."""
        if not self.in_A(x):
            raise SpecError(f"{x} is not in the even wedge region")
        if not any(x):
            return []
        if self.atom_verdict(x).is_proven:
            return [x]
        got = self._rep_decision(x, need_weight=2, forbid_trivial=True)
        if got is not None:
            parts, rest = got
            out = [p for p, _ in parts]
            tail = self.decompose_region_element(rest) if any(rest) else []
            # parts other than region elements are atoms only if a_k or w
            final = []
            for p in out:
                if p == self.w or p in self._a:
                    final.append(p)
                else:
                    final.extend(self.decompose_region_element(p))
            return final + tail
        a2 = self._a2_split(x)
        r, s = a2
        return (self.decompose_region_element(r)
                + self.decompose_region_element(s))

    def atom_divisor(self, x: Point):
        """Some atom dividing the nonunit member x, with replay data."""
        got = self._rep_decision(x)
        if got is None:
            return None
        parts, rest = got
        kinds = [p for p, _ in parts]
        for p in kinds:
            if p == self.w or (self.phi(p).cmp(self.ell) < 0 and p[0] % 2):
                return p          # an a_k or w used directly
        if any(rest):
            return self.decompose_region_element(rest)[0]
        # pure d-representation: d_i - d_{i+1} lies in the region
        d_i = kinds[0]
        idx = self._d.index(d_i)
        diff = psub(d_i, self.d(idx + 1))
        assert self.in_A(diff)
        return self.decompose_region_element(diff)[0]

    def factorization_set(self, x, length_bound=None):
        from .factorization import Factorization, FactorizationSet
        x = check_point(x, 2)
        at = self.atomic_element(x)
        if at.is_refuted and at.certificate[0] != "unit":
            return FactorizationSet(x, (), True,
                                    "no atom combination reaches the target")
        if self.atom_verdict(x).is_proven:
            return FactorizationSet(
                x, (Factorization.of([(x, 1)]),), True, "target is an atom")
        got = self._rep_decision(x, allow_d=False)
        parts, rest = got
        atoms = [p for p, _ in parts]
        if any(rest):
            atoms.extend(self.decompose_region_element(rest))
        f = Factorization.of((a, 1) for a in atoms)
        return FactorizationSet(
            x, (f,), False, "atom set is infinite; one factorization shown")

    def support(self) -> SupportDescription:
        ln = Line.through_origin(self.slope)
        return SupportDescription("unique", (ln,), False, None)


def build_sequences(slope, depth: int) -> SequencePair:
    """Deterministic a/d sequences for a given positive irrational slope.

    Terms are least-|.|_1 lattice points in halving level bands, which
    pins the construction and certifies both level limits.
    """
    eng = Ex46Engine(Scalar.coerce(slope), depth)
    pair = eng.sequence_pair()
    _validate_pair(eng, pair)
    return pair


def _validate_pair(eng, pair):
    ell = eng.ell
    phis_a = [eng.phi(a) for a in pair.a_seq]
    assert (ell / 2).cmp(phis_a[0]) < 0 and phis_a[0].cmp(ell) < 0
    for p, q in zip(phis_a, phis_a[1:]):
        assert p.cmp(q) < 0 and q.cmp(ell) < 0
    phis_d = [eng.phi(d) for d in pair.d_seq]
    assert phis_d[0].cmp(2 * phis_a[0]) < 0
    for p, q in zip(phis_d, phis_d[1:]):
        assert p.cmp(q) > 0 and q.cmp(ell) > 0
    for a in pair.a_seq:
        assert a[0] % 2 == 1 and a[1] % 2 == 1
    for d in pair.d_seq:
        assert d[0] % 2 == 0 and d[1] % 2 == 0
