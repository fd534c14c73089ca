"""Monoid descriptions and their exact query engines.

A MonoidSpec is a closed symbolic family: finitely generated monoids,
unions of a finitely generated base with addition-absorbing regions,
half-plane monoids (rational or irrational normal), and named presets.
Every semi-decidable query returns a three-valued Verdict carrying
replayable evidence; bounded searches are never presented as proofs.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction

from .exact import Scalar, Norm, ZERO, ONE
from .geometry import (
    Point, Line, check_point, inner, inner_scalar, padd, psub, pneg, pscale,
    norm1, lattice_near_line,
)

PROVEN = "proven"
REFUTED = "refuted"
UNKNOWN = "unknown"

DEFAULT_STEP_BOUND = 4000
DEFAULT_VALIDATION_HALFWIDTH = 8


class SpecError(ValueError):
    """Malformed or inconsistent monoid description."""


@dataclass(frozen=True)
class Verdict:
    status: str
    certificate: tuple = ()   # (kind, payload...) pairs flattened to str/ints
    bound: int | None = None

    @staticmethod
    def proven(*certificate) -> "Verdict":
        return Verdict(PROVEN, certificate)

    @staticmethod
    def refuted(*certificate) -> "Verdict":
        return Verdict(REFUTED, certificate)

    @staticmethod
    def unknown(bound=None, *certificate) -> "Verdict":
        return Verdict(UNKNOWN, certificate, bound)

    @property
    def is_proven(self):
        return self.status == PROVEN

    @property
    def is_refuted(self):
        return self.status == REFUTED

    @property
    def is_unknown(self):
        return self.status == UNKNOWN

    def to_json(self):
        out = {"status": self.status, "certificate": _jsonable(self.certificate)}
        if self.bound is not None:
            out["bound"] = self.bound
        return out


def _jsonable(obj):
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in sorted(obj.items(), key=lambda kv: str(kv[0]))}
    if isinstance(obj, Scalar):
        return str(obj)
    if isinstance(obj, Norm):
        return str(obj)
    if isinstance(obj, Fraction):
        return str(obj)
    if isinstance(obj, frozenset):
        return sorted(_jsonable(v) for v in obj)
    return obj


@dataclass(frozen=True)
class Window:
    """Axis-aligned integer box, one (lo, hi) interval per axis."""

    bounds: tuple

    @staticmethod
    def of(*intervals) -> "Window":
        bs = tuple((int(lo), int(hi)) for lo, hi in intervals)
        if not 1 <= len(bs) <= 3:
            raise SpecError("window dimension must be 1..3")
        for lo, hi in bs:
            if lo > hi:
                raise SpecError(f"empty interval [{lo}, {hi}]")
        return Window(bs)

    @staticmethod
    def square(n: int, dim: int = 2, lo=None) -> "Window":
        low = -n if lo is None else lo
        return Window.of(*[(low, n)] * dim)

    @property
    def dim(self):
        return len(self.bounds)

    def contains(self, x: Point) -> bool:
        return len(x) == self.dim and all(lo <= c <= hi for c, (lo, hi) in zip(x, self.bounds))

    def points(self):
        ranges = [range(lo, hi + 1) for lo, hi in self.bounds]
        for combo in itertools.product(*ranges):
            yield combo

    def dilated(self, factor: int = 2) -> "Window":
        return Window(tuple((lo * factor, hi * factor) for lo, hi in self.bounds))

    def hull_with(self, other: "Window") -> "Window":
        return Window(tuple((min(a, c), max(b, d))
                            for (a, b), (c, d) in zip(self.bounds, other.bounds)))

    def to_json(self):
        return [list(b) for b in self.bounds]

    @staticmethod
    def from_json(obj):
        return Window.of(*obj)

    def __str__(self):
        return "x".join(f"[{lo},{hi}]" for lo, hi in self.bounds)


# ---------------------------------------------------------------------------
# one-dimensional submonoids of Z (row content, kernel directions)
# ---------------------------------------------------------------------------


class OneDimMonoid:
    """Submonoid of (Z, +) generated by integer coefficients."""

    def __init__(self, coeffs):
        cs = sorted({int(c) for c in coeffs if c})
        if not cs:
            self.kind = "zero"
            self.g = 0
            self.base = ()
        elif cs[0] < 0 < cs[-1]:
            self.kind = "group"
            self.g = math.gcd(*[abs(c) for c in cs])
            self.base = ()
        else:
            self.kind = "nat"
            self.sign = 1 if cs[0] > 0 else -1
            mags = [abs(c) for c in cs]
            self.g = math.gcd(*mags)
            self.base = tuple(sorted(m // self.g for m in mags))
            self._table = self._reachable()

    def _reachable(self):
        a, b = self.base[0], self.base[-1]
        limit = a * b + b + 1  # beyond the Frobenius number of the reduced monoid
        ok = bytearray(limit)
        ok[0] = 1
        for n in range(1, limit):
            ok[n] = any(n >= g and ok[n - g] for g in self.base)
        return ok

    def contains(self, t: int) -> bool:
        if self.kind == "zero":
            return t == 0
        if self.kind == "group":
            return t % self.g == 0
        n = t * self.sign
        if n < 0 or n % self.g:
            return False
        n //= self.g
        return bool(self._table[n]) if n < len(self._table) else True

    @property
    def is_group(self) -> bool:
        return self.kind in ("zero", "group")

    def unit_set_modulus(self):
        """Units: 0 for 'zero'/'nat', the full gZ for 'group'."""
        return self.g if self.kind == "group" else None

    def min_nonunit(self):
        """Smallest |t| over nonunits, as a signed value; None if all units."""
        if self.kind != "nat":
            return None
        return self.sign * self.g * self.base[0]

    def atoms(self):
        """Minimal generators (atoms) of a 'nat' monoid, signed; else empty."""
        if self.kind != "nat":
            return ()
        out = []
        for n in range(1, len(self._table)):
            if not self._table[n]:
                continue
            if any(self._table[k] and self._table[n - k]
                   for k in range(1, n)):
                continue
            out.append(self.sign * self.g * n)
        return tuple(out)

    def bounded_below(self) -> bool:
        return self.kind == "zero" or (self.kind == "nat" and self.sign > 0)

    def bounded_above(self) -> bool:
        return self.kind == "zero" or (self.kind == "nat" and self.sign < 0)

    def describe(self):
        if self.kind == "zero":
            return ("zero",)
        if self.kind == "group":
            return ("group", self.g)
        return ("nat", self.sign, self.g, self.base)


# components: ("all",) | ("ray+", lo) | ("ray-", hi)
#           | ("coset", offset, OneDimMonoid) | ("finite", frozenset)
class RowSet:
    """Subset of Z arising as one row of a monoid; finite union of shapes."""

    def __init__(self, components=()):
        self.components = tuple(components)

    @staticmethod
    def empty():
        return RowSet()

    @staticmethod
    def all_ints():
        return RowSet((("all",),))

    @staticmethod
    def ray_ge(lo):
        return RowSet((("ray+", lo),))

    @staticmethod
    def ray_le(hi):
        return RowSet((("ray-", hi),))

    @staticmethod
    def coset(offset, kernel: OneDimMonoid):
        return RowSet((("coset", offset, kernel),))

    @staticmethod
    def finite(points):
        pts = frozenset(int(p) for p in points)
        return RowSet((("finite", pts),)) if pts else RowSet()

    def union(self, other: "RowSet") -> "RowSet":
        if any(c[0] == "all" for c in self.components + other.components):
            return RowSet.all_ints()
        return RowSet(self.components + other.components)

    @property
    def is_empty(self):
        return not self.components

    def contains(self, t: int) -> bool:
        for c in self.components:
            kind = c[0]
            if kind == "all":
                return True
            if kind == "ray+" and t >= c[1]:
                return True
            if kind == "ray-" and t <= c[1]:
                return True
            if kind == "coset" and c[2].contains(t - c[1]):
                return True
            if kind == "finite" and t in c[1]:
                return True
        return False

    def min_elt(self):
        """Smallest element, None if empty, raises RowUnbounded if unbounded below."""
        if self.is_empty:
            return None
        best = None
        for c in self.components:
            kind = c[0]
            if kind in ("all", "ray-"):
                raise RowUnbounded()
            if kind == "ray+":
                m = c[1]
            elif kind == "coset":
                if not c[2].bounded_below():
                    raise RowUnbounded()
                m = c[1]  # kernel minimum is 0
            else:
                m = min(c[1])
            best = m if best is None else min(best, m)
        return best

    def any_element(self):
        for c in self.components:
            kind = c[0]
            if kind == "all":
                return 0
            if kind == "ray+":
                return c[1]
            if kind == "ray-":
                return c[1]
            if kind == "coset":
                return c[1]
            if kind == "finite":
                return min(c[1])
        return None

    def shifted(self, delta: int) -> "RowSet":
        out = []
        for c in self.components:
            kind = c[0]
            if kind == "all":
                out.append(c)
            elif kind in ("ray+", "ray-"):
                out.append((kind, c[1] + delta))
            elif kind == "coset":
                out.append(("coset", c[1] + delta, c[2]))
            else:
                out.append(("finite", frozenset(p + delta for p in c[1])))
        return RowSet(out)


class RowUnbounded(Exception):
    pass


_SPLIT_SCAN_CAP = 200_000


def row_split(r1: RowSet, r2: RowSet, total: int):
    """Find t with t in r1 and total - t in r2.

    Returns t, or None if provably impossible, or raises RowUnknown when
    the shapes defeat the bounded analysis.
    """
    if r1.is_empty or r2.is_empty:
        return None
    for c in r1.components:
        if c[0] == "all":
            s = r2.any_element()
            return total - s
    for c in r2.components:
        if c[0] == "all":
            return r1.any_element()
    try:
        m1 = r1.min_elt()
        m2 = r2.min_elt()
    except RowUnbounded:
        # unbounded-below rows: try group-coset residue logic
        return _row_split_residues(r1, r2, total)
    if total - m2 - m1 > _SPLIT_SCAN_CAP:
        raise RowUnknown()
    for t in range(m1, total - m2 + 1):
        if r1.contains(t) and r2.contains(total - t):
            return t
    return None


def _row_split_residues(r1, r2, total):
    for c1 in r1.components:
        if c1[0] == "coset" and c1[2].kind == "group":
            g = c1[2].g
            # t ranges over a full residue class mod g
            for c2 in r2.components:
                kind = c2[0]
                if kind in ("all",):
                    return c1[1]
                if kind == "finite":
                    for s in sorted(c2[1]):
                        if (total - s - c1[1]) % g == 0:
                            return total - s
                if kind in ("ray+", "ray-"):
                    step = 1 if kind == "ray+" else -1
                    for s in range(c2[1], c2[1] + step * g, step):
                        if (total - s - c1[1]) % g == 0:
                            return total - s
                if kind == "coset":
                    k2 = c2[2]
                    if k2.kind == "group":
                        g2 = k2.g
                        target = total - c1[1] - c2[1]
                        if target % math.gcd(g, g2) == 0:
                            # CRT solvable; construct t
                            for t in range(c1[1], c1[1] + g * g2 // math.gcd(g, g2), 1):
                                if (t - c1[1]) % g == 0 and k2.contains(total - t - c2[1]):
                                    return t
                            continue
                    else:
                        probe = c2[1]
                        for n in range(0, 64):
                            s = probe + n * k2.g * (k2.sign if k2.kind == "nat" else 1)
                            if k2.contains(s - c2[1]) and (total - s - c1[1]) % g == 0:
                                return total - s
    raise RowUnknown()


class RowUnknown(Exception):
    pass


# ---------------------------------------------------------------------------
# region and spec descriptions
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Congruence:
    mods: tuple
    residues: tuple

    def holds(self, x: Point) -> bool:
        return all(c % m == r for c, m, r in zip(x, self.mods, self.residues, strict=True))

    def to_json(self):
        return {"mods": list(self.mods), "residues": list(self.residues)}

    @staticmethod
    def from_json(obj):
        return Congruence(tuple(obj["mods"]), tuple(obj["residues"]))


@dataclass(frozen=True)
class Band:
    """{v : v[axis] >= threshold}, optionally intersected with a congruence."""

    axis: int
    threshold: int
    congruence: Congruence | None = None

    def contains(self, x: Point) -> bool:
        if x[self.axis] < self.threshold:
            return False
        return self.congruence is None or self.congruence.holds(x)

    def to_json(self):
        out = {"type": "band", "axis": self.axis, "threshold": self.threshold}
        if self.congruence:
            out["congruence"] = self.congruence.to_json()
        return out


@dataclass(frozen=True)
class HalfPlaneRegion:
    """{v : <v, u> >= 0} (or > 0), u a Scalar pair, optional congruence."""

    u: tuple
    strict: bool = False
    congruence: Congruence | None = None

    def contains(self, x: Point) -> bool:
        s = inner_scalar(x, self.u).sign()
        if s < 0 or (s == 0 and self.strict):
            return False
        return self.congruence is None or self.congruence.holds(x)

    def to_json(self):
        out = {"type": "half-plane", "u": [c.to_json() for c in self.u],
               "strict": self.strict}
        if self.congruence:
            out["congruence"] = self.congruence.to_json()
        return out


@dataclass(frozen=True)
class ProductRegion:
    """Per-axis constraints: ('free',) | ('ge', c) | ('le', c) | ('eq', c)."""

    constraints: tuple
    congruence: Congruence | None = None

    def contains(self, x: Point) -> bool:
        for c, con in zip(x, self.constraints, strict=True):
            kind = con[0]
            if kind == "ge" and c < con[1]:
                return False
            if kind == "le" and c > con[1]:
                return False
            if kind == "eq" and c != con[1]:
                return False
        return self.congruence is None or self.congruence.holds(x)

    def to_json(self):
        out = {"type": "product", "axes": [list(c) for c in self.constraints]}
        if self.congruence:
            out["congruence"] = self.congruence.to_json()
        return out


def region_from_json(obj):
    t = obj["type"]
    cong = Congruence.from_json(obj["congruence"]) if obj.get("congruence") else None
    if t == "band":
        return Band(int(obj["axis"]), int(obj["threshold"]), cong)
    if t == "half-plane":
        u = tuple(Scalar.from_json(c) for c in obj["u"])
        return HalfPlaneRegion(u, bool(obj.get("strict", False)), cong)
    if t == "product":
        axes = tuple(tuple(a if i == 0 else int(a) for i, a in enumerate(c))
                     for c in obj["axes"])
        return ProductRegion(axes, cong)
    raise SpecError(f"unknown region type {t!r}")


@dataclass(frozen=True)
class FinGen:
    gens: tuple
    declared_support: Line | None = None
    dim: int = 2

    @staticmethod
    def of(gens, declared_support=None, dim=None) -> "FinGen":
        pts = []
        for g in gens:
            p = check_point(g)
            if any(p):
                pts.append(p)
        dims = {len(p) for p in pts}
        if len(dims) > 1:
            raise SpecError("mixed generator dimensions")
        d = dims.pop() if dims else (dim or 2)
        ordered = tuple(sorted(set(pts)))
        return FinGen(ordered, declared_support, d)


@dataclass(frozen=True)
class RegionUnion:
    base: FinGen
    regions: tuple

    @property
    def dim(self):
        return self.base.dim


@dataclass(frozen=True)
class HalfPlane:
    u: tuple            # Scalar pair, the inward normal
    closed: bool = True
    dim: int = 2


@dataclass(frozen=True)
class PresetSpec:
    preset_id: str
    params: tuple = ()  # sorted (key, value) pairs

    @staticmethod
    def of(preset_id, **params):
        return PresetSpec(preset_id, tuple(sorted(params.items())))

    @property
    def params_dict(self):
        return dict(self.params)


def spec_to_json(spec):
    if isinstance(spec, FinGen):
        out = {"kind": "fingen", "dim": spec.dim,
               "generators": [list(g) for g in spec.gens]}
        if spec.declared_support is not None:
            out["support"] = spec.declared_support.to_json()
        return out
    if isinstance(spec, RegionUnion):
        return {"kind": "region-union",
                "base": spec_to_json(spec.base),
                "regions": [r.to_json() for r in spec.regions]}
    if isinstance(spec, HalfPlane):
        return {"kind": "half-plane", "dim": spec.dim,
                "u": [c.to_json() for c in spec.u], "closed": spec.closed}
    if isinstance(spec, PresetSpec):
        return {"kind": "preset", "preset": {"id": spec.preset_id,
                                             "params": dict(spec.params)}}
    raise SpecError(f"not a spec: {spec!r}")


def _int_or_str(v):
    if isinstance(v, str):
        return int(v)
    return int(v)


def spec_from_json(obj):
    try:
        kind = obj["kind"]
    except (TypeError, KeyError) as e:
        raise SpecError(f"spec file missing 'kind': {e}") from e
    if kind == "fingen":
        gens = [tuple(_int_or_str(c) for c in g) for g in obj.get("generators", [])]
        support = Line.from_json(obj["support"]) if obj.get("support") else None
        return FinGen.of(gens, support, dim=obj.get("dim"))
    if kind == "region-union":
        base = spec_from_json(obj["base"])
        regions = tuple(region_from_json(r) for r in obj.get("regions", []))
        return validate_region_union(RegionUnion(base, regions))
    if kind == "half-plane":
        u = tuple(Scalar.from_json(c) for c in obj["u"])
        return HalfPlane(u, bool(obj.get("closed", True)), int(obj.get("dim", 2)))
    if kind == "preset":
        p = obj["preset"]
        return PresetSpec.of(p["id"], **p.get("params", {}))
    raise SpecError(f"unknown spec kind {kind!r}")


def validate_region_union(spec: RegionUnion, halfwidth: int = DEFAULT_VALIDATION_HALFWIDTH,
                          trusted: bool = False) -> RegionUnion:
    """Window check that the union is closed under addition.

    Sound rejection, bounded acceptance: failures raise, passing only says
    no counterexample exists in the sampled window.
    """
    if trusted:
        return spec
    eng = engine_for(spec)
    w = Window.square(halfwidth, spec.dim)
    members = [p for p in w.points() if eng.contains(p).is_proven]
    # closure of the union on sampled pairs
    for a in members:
        for b in members:
            s = padd(a, b)
            if eng.contains(s).is_refuted:
                raise SpecError(f"union not closed: {a} + {b} = {s} escapes")
    # per-region closure with itself and with the base generators
    for reg in spec.regions:
        samples = [p for p in members if reg.contains(p)][:60]
        for a in samples:
            for b in samples:
                s = padd(a, b)
                if w.contains(s) and not any(r.contains(s) for r in spec.regions) \
                        and not eng.contains(s).is_proven:
                    raise SpecError(f"region not absorbed: {a} + {b}")
            for g in spec.base.gens:
                s = padd(a, g)
                if eng.contains(s).is_refuted:
                    raise SpecError(f"region + generator escapes: {a} + {g}")
    return spec


# ---------------------------------------------------------------------------
# integer lattice (membership over Z, any-sign combinations)
# ---------------------------------------------------------------------------


class IntLattice:
    """Lattice in Z^d spanned by integer vectors, via row echelon over Z."""

    def __init__(self, vectors, dim):
        self.dim = dim
        work = [list(v) for v in vectors if any(v)]
        basis = []
        for p in range(dim):
            piv_rows = [w for w in work if w[p] != 0]
            rest = [w for w in work if w[p] == 0]
            if not piv_rows:
                work = rest
                continue
            cur = piv_rows[0]
            for other in piv_rows[1:]:
                g, s, t = self._xgcd(cur[p], other[p])
                combined = [s * a + t * b for a, b in zip(cur, other)]
                extra = [(cur[p] // g) * b - (other[p] // g) * a
                         for a, b in zip(cur, other)]
                cur = combined
                if any(extra):
                    rest.append(extra)
            if cur[p] < 0:
                cur = [-c for c in cur]
            basis.append(cur)
            work = rest
        self.basis = basis

    @staticmethod
    def _xgcd(a, b):
        old_r, r = a, b
        old_s, s = 1, 0
        old_t, t = 0, 1
        while r:
            qu = old_r // r
            old_r, r = r, old_r - qu * r
            old_s, s = s, old_s - qu * s
            old_t, t = t, old_t - qu * t
        return old_r, old_s, old_t

    def contains(self, x) -> bool:
        v = list(x)
        for b in self.basis:
            piv = next(i for i, c in enumerate(b) if c)
            if v[piv] % b[piv]:
                return False
            k = v[piv] // b[piv]
            v = [vc - k * bc for vc, bc in zip(v, b)]
        return not any(v)


# ---------------------------------------------------------------------------
# cone analysis of finite integer generator sets (dim 2 exact)
# ---------------------------------------------------------------------------


def _primitive(v):
    g = math.gcd(*[abs(c) for c in v])
    return tuple(c // g for c in v)


def _canonical_dir(v):
    """Primitive with positive first nonzero component."""
    p = _primitive(v)
    first = next(c for c in p if c)
    return p if first > 0 else tuple(-c for c in p)


def _rot90(v):
    return (-v[1], v[0])


@dataclass
class ConeInfo:
    kind: str                 # trivial | ray | line | pointed | halfplane | full | unknown3
    functional: tuple | None = None    # strict positive functional (pointed)
    duals: tuple = ()          # pair of dual boundary normals (pointed)
    normal: tuple | None = None        # supporting normal (halfplane)
    direction: tuple | None = None     # primitive direction (ray / line / kernel)


def cone_info(gens, dim) -> ConeInfo:
    gens = [g for g in gens if any(g)]
    if not gens:
        return ConeInfo("trivial")
    if dim == 1:
        signs = {1 if g[0] > 0 else -1 for g in gens}
        if len(signs) == 2:
            return ConeInfo("line", direction=(1,))
        return ConeInfo("ray", direction=(signs.pop(),))
    if dim == 3:
        return _cone_info_3d(gens)

    dirs = sorted({_primitive(g) for g in gens})
    if len(dirs) == 1:
        return ConeInfo("ray", direction=dirs[0])
    if len({frozenset((d, tuple(-c for c in d))) for d in dirs}) == 1:
        return ConeInfo("line", direction=dirs[0])
    if all(d == dirs[0] or d == tuple(-c for c in dirs[0]) for d in dirs):
        return ConeInfo("line", direction=dirs[0])

    candidates = set()
    for d in dirs:
        r = _rot90(d)
        candidates.add(_primitive(r))
        candidates.add(_primitive(tuple(-c for c in r)))
    valid = [n for n in candidates if all(inner(g, n) >= 0 for g in dirs)]
    if not valid:
        return ConeInfo("full")
    distinct_dirs = {_primitive(n) for n in valid}
    if len(distinct_dirs) == 1:
        n = distinct_dirs.pop()
        kernel = [d for d in dirs if inner(d, n) == 0]
        return ConeInfo("halfplane", normal=n,
                        direction=kernel[0] if kernel else None)
    # pointed: find the two extreme dual rays
    best = None
    for a, b in itertools.combinations(valid, 2):
        cross = abs(a[0] * b[1] - a[1] * b[0])
        if best is None or cross > best[0]:
            # all other valid normals must sit inside cone(a, b)
            det = a[0] * b[1] - a[1] * b[0]
            if det == 0:
                continue
            ok = True
            for n in valid:
                alpha = n[0] * b[1] - n[1] * b[0]
                beta = a[0] * n[1] - a[1] * n[0]
                if det < 0:
                    alpha, beta = -alpha, -beta
                if alpha < 0 or beta < 0:
                    ok = False
                    break
            if ok:
                best = (cross, a, b)
    if best is None:
        return ConeInfo("full")
    _, na, nb = best
    phi = (na[0] + nb[0], na[1] + nb[1])
    if not all(inner(g, phi) > 0 for g in dirs):
        # half-plane masked as pointed should not happen; stay honest
        return ConeInfo("halfplane", normal=na,
                        direction=next((d for d in dirs if inner(d, na) == 0), None))
    return ConeInfo("pointed", functional=phi, duals=(na, nb))


def _cone_info_3d(gens):
    dirs = sorted({_primitive(g) for g in gens})
    if len(dirs) == 1:
        return ConeInfo("ray", direction=dirs[0])
    candidates = [(1, 0, 0), (0, 1, 0), (0, 0, 1)]
    total = tuple(sum(g[i] for g in dirs) for i in range(3))
    if any(total):
        candidates.append(_primitive(total))
    for a, b in itertools.combinations(dirs, 2):
        cr = (a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2],
              a[0] * b[1] - a[1] * b[0])
        if any(cr):
            candidates.append(_primitive(cr))
            candidates.append(_primitive(tuple(-c for c in cr)))
    for n in candidates:
        if all(inner(g, n) > 0 for g in dirs):
            return ConeInfo("pointed", functional=n)
    return ConeInfo("unknown3")


# ---------------------------------------------------------------------------
# engines
# ---------------------------------------------------------------------------


class Engine:
    """Query engine behind one MonoidSpec."""

    spec = None
    dim = 2

    def contains(self, x: Point) -> Verdict:
        raise NotImplementedError

    def is_unit(self, x: Point) -> Verdict:
        cx = self.contains(x)
        if not cx.is_proven:
            return Verdict.refuted("not-member") if cx.is_refuted else cx
        cn = self.contains(pneg(x))
        if cn.is_proven:
            return Verdict.proven("inverse-in-monoid")
        if cn.is_refuted:
            return Verdict.refuted("inverse-missing")
        return Verdict.unknown(cn.bound)

    def unit_lattice(self):
        """Generators of U(M) as a lattice; None when not fully known."""
        return ()

    def atom_verdict(self, x: Point) -> Verdict:
        raise NotImplementedError

    def atomic_element(self, x: Point) -> Verdict:
        """Is x a sum of atoms (0 counts, units do not)?"""
        raise NotImplementedError

    def atom_structure(self):
        """('finite', pts) | ('rows', {j: RowSet}, note) | ('empty',) | None."""
        return None

    def hull_contains(self, x: Point) -> Verdict:
        """Membership in <A(M)>."""
        raise NotImplementedError

    def support(self) -> "SupportDescription":
        raise NotImplementedError


@dataclass
class SupportDescription:
    kind: str                     # none | all | unique | pencil
    lines: tuple = ()
    rationally_supported: bool = False
    rational_line: Line | None = None

    def to_json(self):
        return {"kind": self.kind,
                "lines": [l.to_json() for l in self.lines],
                "rationally_supported": self.rationally_supported,
                "rational_line": self.rational_line.to_json() if self.rational_line else None}


def _line_from_normal(n) -> Line:
    """Line through the origin orthogonal to integer-or-scalar normal n."""
    nx, ny = (Scalar.coerce(c) for c in n)
    # direction = rot90(n)
    return Line.from_direction(-ny, nx)


class FinGenEngine(Engine):
    def __init__(self, spec: FinGen, step_bound=DEFAULT_STEP_BOUND):
        self.spec = spec
        self.dim = spec.dim
        self.gens = spec.gens
        self.step_bound = step_bound
        self.lattice = IntLattice(self.gens, self.dim)
        self.cone = cone_info(self.gens, self.dim)
        if self.cone.kind == "halfplane":
            n = self.cone.normal
            self.kernel_gens = tuple(g for g in self.gens if inner(g, n) == 0)
            self.pos_gens = tuple(g for g in self.gens if inner(g, n) > 0)
            self.kdir = _canonical_dir(self.cone.direction or _rot90(n))
            self.kernel_monoid = OneDimMonoid(self._kcoeff(g) for g in self.kernel_gens)
        elif self.cone.kind in ("ray", "line"):
            self.kdir = _canonical_dir(self.cone.direction)
            self.kernel_monoid = OneDimMonoid(self._kcoeff(g) for g in self.gens)

    def _kcoeff(self, g):
        """Coefficient of g along self.kdir (g must be parallel)."""
        d = self.kdir
        i = next(i for i, c in enumerate(d) if c)
        if any(g[j] * d[i] != g[i] * d[j] for j in range(len(d))):
            raise SpecError("generator off the kernel direction")
        return g[i] // d[i]

    # -- membership ---------------------------------------------------

    def contains(self, x: Point) -> Verdict:
        x = check_point(x, self.dim)
        if not any(x):
            return Verdict.proven("identity")
        if not self.gens:
            return Verdict.refuted("trivial-monoid")
        if not self.lattice.contains(x):
            return Verdict.refuted("outside-generated-lattice")
        kind = self.cone.kind
        if kind in ("ray", "line"):
            d = self.kdir
            i = next(i for i, c in enumerate(d) if c)
            if any(x[j] * d[i] != x[i] * d[j] for j in range(len(d))):
                return Verdict.refuted("off-generator-line")
            t = x[i] // d[i]
            if self.kernel_monoid.contains(t):
                return Verdict.proven("on-line", t)
            return Verdict.refuted("line-coefficient-not-generated", t)
        if kind == "pointed":
            for n in (self.cone.duals or (self.cone.functional,)):
                if n and inner(x, n) < 0:
                    return Verdict.refuted("outside-cone", n)
            combo = self._knapsack(x)
            if combo is not None:
                return Verdict.proven("combination", tuple(sorted(combo.items())))
            return Verdict.refuted("exhausted-cone-search",
                                   ("functional", self.cone.functional))
        if kind == "halfplane":
            n = self.cone.normal
            phi = inner(x, n)
            if phi < 0:
                return Verdict.refuted("below-supporting-line", n)
            combo = self._halfplane_solve(x, phi)
            if combo is not None:
                return Verdict.proven("combination", tuple(sorted(combo.items())))
            return Verdict.refuted("exhausted-strip-search", ("normal", n))
        return self._bfs(x)

    def _knapsack(self, x):
        phi = self.cone.functional
        gens = sorted(self.gens, key=lambda g: (inner(g, phi), g))

        def rec(i, rest, acc):
            if not any(rest):
                return dict(acc)
            if i == len(gens):
                return None
            g = gens[i]
            fg = inner(g, phi)
            fr = inner(rest, phi)
            if fr < 0:
                return None
            max_c = fr // fg
            for c in range(max_c, -1, -1):
                nrest = psub(rest, pscale(c, g))
                if inner(nrest, phi) < 0:
                    continue
                if c:
                    acc.append((g, c))
                got = rec(i + 1, nrest, acc)
                if got is not None:
                    return got
                if c:
                    acc.pop()
            return None

        return rec(0, x, [])

    def _halfplane_solve(self, x, phi_x):
        n = self.cone.normal
        pos = sorted(self.pos_gens, key=lambda g: (inner(g, n), g))

        def rec(i, rest, acc):
            fr = inner(rest, n)
            if fr == 0:
                # remainder must be a kernel-monoid element
                d = self.kdir
                j = next(j for j, c in enumerate(d) if c)
                if any(rest[k] * d[j] != rest[j] * d[k] for k in range(len(d))):
                    return None
                t = rest[j] // d[j]
                if self.kernel_monoid.contains(t):
                    if t:
                        acc.append((pscale(t, self.kdir), 1))
                        out = dict(acc)
                        acc.pop()
                        return out
                    return dict(acc)
                return None
            if i == len(pos):
                return None
            g = pos[i]
            fg = inner(g, n)
            for c in range(fr // fg, -1, -1):
                nrest = psub(rest, pscale(c, g))
                if inner(nrest, n) < 0:
                    continue
                if c:
                    acc.append((g, c))
                got = rec(i + 1, nrest, acc)
                if got is not None:
                    return got
                if c:
                    acc.pop()
            return None

        return rec(0, x, [])

    def _bfs(self, x):
        seen = {tuple([0] * self.dim)}
        frontier = [tuple([0] * self.dim)]
        steps = 0
        while frontier and steps < self.step_bound:
            nxt = []
            for p in frontier:
                for g in self.gens:
                    q = padd(p, g)
                    if q == x:
                        return Verdict.proven("bfs-path")
                    if q in seen or norm1(q) > norm1(x) + 2 * max(norm1(g) for g in self.gens):
                        continue
                    seen.add(q)
                    nxt.append(q)
                    steps += 1
            frontier = nxt
        return Verdict.unknown(self.step_bound, "no-positive-functional")

    # -- representations / atoms ---------------------------------------

    def all_representations(self, x, limit=200_000):
        """All multisets of generators summing to x (pointed cones only)."""
        if self.cone.kind != "pointed":
            raise SpecError("representations need a pointed cone")
        phi = self.cone.functional
        gens = sorted(self.gens, key=lambda g: (inner(g, phi), g))
        out = []

        def rec(i, rest, acc):
            if len(out) > limit:
                raise SpecError("representation explosion")
            if not any(rest):
                out.append(dict(acc))
                return
            if i == len(gens):
                return
            g = gens[i]
            fg = inner(g, phi)
            fr = inner(rest, phi)
            if fr < 0:
                return
            for c in range(fr // fg, -1, -1):
                nrest = psub(rest, pscale(c, g))
                if inner(nrest, phi) < 0:
                    continue
                ok = True
                for nd in self.cone.duals:
                    if inner(nrest, nd) < 0:
                        ok = False
                        break
                if not ok:
                    continue
                if c:
                    acc.append((g, c))
                rec(i + 1, nrest, acc)
                if c:
                    acc.pop()

        rec(0, x, [])
        return out

    def _rows(self):
        """y-graded row table: requires every generator to have y >= 0."""
        if self.cone.kind not in ("halfplane", "pointed"):
            return None
        if any(g[1] < 0 for g in self.gens):
            return None
        n = (0, 1)
        kg = [g for g in self.gens if g[1] == 0]
        kernel = OneDimMonoid([g[0] for g in kg])
        pos = tuple(g for g in self.gens if g[1] > 0)
        return n, (1, 0), kernel, pos

    def row_set(self, j: int) -> RowSet:
        """Content of row <x, n> = j in kernel-direction coordinates.

        Only valid for 2D specs whose supporting normal is (0, 1) and kernel
        direction (1, 0); presets and the embedded family satisfy this.
        """
        if self.dim != 2:
            raise SpecError("row analysis unavailable")
        if j < 0:
            return RowSet.empty()
        if self.cone.kind == "trivial":
            return RowSet.finite([0]) if j == 0 else RowSet.empty()
        if self.cone.kind in ("ray", "line"):
            if self.kdir == (1, 0):
                return RowSet.coset(0, self.kernel_monoid) if j == 0 else RowSet.empty()
            if self.kdir == (0, 1):
                return RowSet.finite([0]) if self.kernel_monoid.contains(j) else RowSet.empty()
            raise SpecError("row analysis requires axis-aligned generators")
        info = self._rows()
        if info is None:
            raise SpecError("row analysis unavailable")
        n, kdir, kernel, pos = info
        if tuple(n) != (0, 1) or kdir != (1, 0):
            raise SpecError("row analysis requires support y >= 0")
        out = RowSet.empty()
        offsets = set()

        def rec(i, y_left, x_off):
            if y_left == 0:
                offsets.add(x_off)
                return
            if i == len(pos):
                return
            g = pos[i]
            for c in range(y_left // g[1], -1, -1):
                rec(i + 1, y_left - c * g[1], x_off + c * g[0])

        rec(0, j, 0)
        for off in sorted(offsets):
            out = out.union(RowSet.coset(off, kernel))
        return out

    def atom_verdict(self, x: Point) -> Verdict:
        x = check_point(x, self.dim)
        cx = self.contains(x)
        if not cx.is_proven:
            return Verdict.refuted("not-member") if cx.is_refuted else cx
        u = self.is_unit(x)
        if u.is_proven:
            return Verdict.refuted("unit")
        kind = self.cone.kind
        if kind in ("ray", "line"):
            if self.kernel_monoid.is_group:
                return Verdict.refuted("unit")
            d = self.kdir
            i = next(i for i, c in enumerate(d) if c)
            t = x[i] // d[i]
            ats = self.kernel_monoid.atoms()
            if t in ats:
                return Verdict.proven("line-monoid-atom", t)
            # find a split
            for a in ats:
                if self.kernel_monoid.contains(t - a) and t - a != 0:
                    return Verdict.refuted("split", pscale(a // d[i] if d[i] else a, d), psub(x, pscale(a, d)))
            return Verdict.refuted("split-exists", t)
        if kind == "pointed":
            reps = self.all_representations(x)
            for rep in reps:
                if sum(rep.values()) >= 2:
                    items = sorted(rep.items())
                    g, c = items[0]
                    r = g
                    s = psub(x, r)
                    return Verdict.refuted("split", r, s)
            return Verdict.proven("only-length-1-representations")
        if kind == "halfplane":
            return self._atom_by_rows(x)
        return Verdict.unknown(self.step_bound, "no-positive-functional")

    def _atom_by_rows(self, x):
        n = self.cone.normal
        y = inner(x, n)
        try:
            if tuple(n) == (0, 1):
                return atom_by_row_tables(self, x, y)
        except (SpecError, RowUnknown):
            pass
        return generic_split_search(self, x)

    def atomic_element(self, x: Point) -> Verdict:
        cx = self.contains(x)
        if not cx.is_proven:
            return Verdict.refuted("not-member") if cx.is_refuted else cx
        if self.is_unit(x).is_proven:
            return Verdict.refuted("unit")
        if self.cone.kind == "pointed":
            return Verdict.proven("pointed-fingen-is-atomic")
        if self.cone.kind in ("ray", "line"):
            if self.kernel_monoid.is_group:
                return Verdict.refuted("unit")
            return Verdict.proven("numerical-monoid-is-atomic")
        if self.cone.kind == "halfplane":
            # kernel is a unit group here; the reduced monoid is a pointed
            # fg monoid, so every nonunit is a sum of atoms (associates lift)
            return Verdict.proven("associate-lift-of-pointed-quotient")
        return Verdict.unknown(self.step_bound)

    def hull_contains(self, x: Point) -> Verdict:
        if not any(x):
            return Verdict.proven("identity")
        st = self.atom_structure()
        if st and st[0] == "finite":
            hull = FinGenEngine(FinGen.of(st[1], dim=self.dim))
            return hull.contains(x)
        if st and st[0] == "empty":
            return Verdict.refuted("no-atoms")
        if self.cone.kind == "halfplane":
            # <A(M)> = members with positive functional value
            got = self.contains(x)
            if not got.is_proven:
                return got
            return (Verdict.proven("nonunit-member") if inner(x, self.cone.normal) >= 1
                    else Verdict.refuted("unit-level"))
        return Verdict.unknown(self.step_bound)

    def atom_structure(self):
        if self.cone.kind == "pointed":
            atoms = [g for g in self.gens if self.atom_verdict(g).is_proven]
            return ("finite", tuple(sorted(atoms)))
        if self.cone.kind in ("ray", "line"):
            if self.kernel_monoid.is_group:
                return ("empty",)
            d = self.kdir
            i = next(i for i, c in enumerate(d) if c)
            return ("finite", tuple(pscale(t // d[i], d) for t in self.kernel_monoid.atoms()))
        return None

    def unit_lattice(self):
        kind = self.cone.kind
        if kind in ("trivial", "pointed"):
            return ()
        if kind in ("ray", "line", "halfplane"):
            g = self.kernel_monoid.unit_set_modulus()
            if g:
                return (pscale(g, self.kdir),)
            return ()
        return None

    def support(self) -> SupportDescription:
        kind = self.cone.kind
        if kind == "trivial":
            return SupportDescription("all", (), True, Line.through_origin(0))
        if kind in ("ray", "line"):
            d = self.cone.direction
            if self.dim != 2:
                return SupportDescription("pencil", (), True, None)
            ln = Line.from_direction(Scalar.from_int(d[0]), Scalar.from_int(d[1]))
            return SupportDescription("pencil", (ln,), True, ln)
        if kind == "pointed":
            na, nb = self.cone.duals
            la, lb = _line_from_normal(na), _line_from_normal(nb)
            phi = self.cone.functional
            return SupportDescription("pencil", (la, lb), True, _line_from_normal(phi))
        if kind == "halfplane":
            ln = _line_from_normal(self.cone.normal)
            return SupportDescription("unique", (ln,), True, ln)
        if kind == "full":
            return SupportDescription("none")
        return SupportDescription("none")


def generic_split_search(engine, x, radius=24):
    """Witness-only split search; Unknown when nothing found."""
    best = None
    for r in sorted(Window.square(radius, engine.dim).points(), key=lambda p: (norm1(p), p)):
        if not any(r) or r == x:
            continue
        s = psub(x, r)
        if not any(s):
            continue
        if engine.contains(r).is_proven and engine.contains(s).is_proven:
            if not engine.is_unit(r).is_proven and not engine.is_unit(s).is_proven:
                return Verdict.refuted("split", r, s)
    return Verdict.unknown(radius, "split-search-exhausted")


def atom_by_row_tables(engine, x, y) -> Verdict:
    """Exact atom decision from row structure (support normal (0,1))."""
    t_x = x[0]
    k0 = _row0_monoid(engine)
    if y == 0:
        if k0 is None or k0.is_group:
            return Verdict.refuted("unit")
        ats = k0.atoms()
        if t_x in ats:
            return Verdict.proven("row0-numerical-atom")
        for a in ats:
            if t_x - a != 0 and k0.contains(t_x - a):
                return Verdict.refuted("split", (a, 0), (t_x - a, 0))
        return Verdict.refuted("row0-not-in-monoid")
    # splits with a nonunit row-0 part
    if k0 is not None and k0.kind == "nat":
        ry = engine.row_set(y)
        t0 = _row0_shift_split(k0, ry, t_x)
        if t0 is not None:
            return Verdict.refuted("split", (t0, 0), (t_x - t0, y))
    # middle rows
    for j in range(1, y):
        r1 = engine.row_set(j)
        r2 = engine.row_set(y - j)
        t = row_split(r1, r2, t_x)
        if t is not None:
            return Verdict.refuted("split", (t, j), (t_x - t, y - j))
    return Verdict.proven("row-analysis-no-split")


def _row0_shift_split(k0: OneDimMonoid, ry: RowSet, t_x: int):
    """Find a row-0 nonunit t0 with t_x - t0 still in the row, else None."""
    if ry.is_empty:
        return None
    step = k0.g * k0.sign
    first = k0.base[0] * step  # smallest-magnitude nonunit, signed
    try:
        if k0.sign > 0:
            my = ry.min_elt()
            t0 = first
            while t_x - t0 >= my:
                if k0.contains(t0) and ry.contains(t_x - t0):
                    return t0
                t0 += k0.g
            return None
    except RowUnbounded:
        pass
    # row unbounded in the shift direction: scan one modulus worth of shifts
    span = max(64, 2 * k0.g * (len(getattr(k0, "_table", b"")) + 2))
    t0 = first
    for _ in range(span):
        if k0.contains(t0) and ry.contains(t_x - t0):
            return t0
        t0 += step
    raise RowUnknown()


def _row0_monoid(engine):
    row0 = engine.row_set(0)
    for c in row0.components:
        if c[0] == "coset" and c[1] == 0:
            return c[2]
    if row0.is_empty:
        return OneDimMonoid([])
    return None


class HalfPlaneEngine(Engine):
    def __init__(self, spec: HalfPlane):
        self.spec = spec
        self.dim = spec.dim
        if self.dim != 2:
            raise SpecError("half-plane specs are 2D")
        self.u = tuple(Scalar.coerce(c) for c in spec.u)
        if all(c.is_zero for c in self.u):
            raise SpecError("zero normal")
        self.closed = spec.closed
        self.rational = all(c.is_rational for c in self.u)
        if self.rational:
            fr = [c.to_fraction() for c in self.u]
            den = math.lcm(fr[0].denominator, fr[1].denominator)
            iv = (int(fr[0] * den), int(fr[1] * den))
            self.int_u = _primitive(iv)
            self.kdir = _primitive(_rot90(self.int_u))
        self.boundary_line = _line_from_normal(self.u)

    def value(self, x):
        if self.rational:
            return inner(check_point(x, 2), self.int_u)
        return inner_scalar(check_point(x, 2), self.u)

    def contains(self, x: Point) -> Verdict:
        x = check_point(x, 2)
        v = self.value(x)
        s = (v > 0) - (v < 0) if isinstance(v, int) else v.sign()
        if s > 0:
            return Verdict.proven("halfplane-interior")
        if s == 0:
            if not any(x):
                return Verdict.proven("identity")
            if self.closed:
                return Verdict.proven("halfplane-boundary")
            return Verdict.refuted("open-boundary-excluded")
        return Verdict.refuted("wrong-side")

    def is_unit(self, x: Point) -> Verdict:
        cx = self.contains(x)
        if not cx.is_proven:
            return Verdict.refuted("not-member") if cx.is_refuted else cx
        if not any(x):
            return Verdict.proven("identity")
        if self.rational and self.closed and self.value(x) == 0:
            return Verdict.proven("boundary-lattice-unit")
        return Verdict.refuted("positive-functional-value")

    def unit_lattice(self):
        if self.rational and self.closed:
            return (self.kdir,)
        return ()

    def atom_verdict(self, x: Point) -> Verdict:
        x = check_point(x, 2)
        cx = self.contains(x)
        if not cx.is_proven:
            return Verdict.refuted("not-member") if cx.is_refuted else cx
        if self.is_unit(x).is_proven:
            return Verdict.refuted("unit")
        if self.rational:
            v = self.value(x)
            if v == 1:
                return Verdict.proven("minimal-positive-level")
            # v >= 2: peel one level-1 point
            e = self._level_point(1)
            r = e
            s = psub(x, e)
            return Verdict.refuted("split", r, s)
        # irrational normal: constructive antimatter split
        r, s = self._irrational_split(x)
        return Verdict.refuted("split", r, s)

    def _level_point(self, v):
        # integer point with <p, int_u> = v (int_u is primitive, so g = +-1)
        a, b = self.int_u
        g, s, t = IntLattice._xgcd(a, b)
        if g < 0:
            g, s, t = -g, -s, -t
        return (s * v, t * v)

    def _irrational_split(self, x):
        d = self.boundary_line.dist_to(x)
        eps = Fraction(1, 2)
        while not (Norm.of(Scalar.from_fraction(eps)) < d):
            eps /= 2
        v = lattice_near_line(self.boundary_line, eps).point
        val = inner_scalar(v, self.u)
        if val.sign() < 0:
            v = pneg(v)
        assert self.contains(v).is_proven and not self.is_unit(v).is_proven
        s = psub(x, v)
        assert self.contains(s).is_proven and not self.is_unit(s).is_proven
        return v, s

    def atomic_element(self, x: Point) -> Verdict:
        cx = self.contains(x)
        if not cx.is_proven:
            return Verdict.refuted("not-member") if cx.is_refuted else cx
        if self.is_unit(x).is_proven:
            return Verdict.refuted("unit")
        if self.rational:
            return Verdict.proven("graded-by-level")
        return Verdict.refuted("antimatter-no-atoms")

    def hull_contains(self, x: Point) -> Verdict:
        if not any(x):
            return Verdict.proven("identity")
        if self.rational:
            v = self.value(x)
            if v >= 1:
                return Verdict.proven("level-sum")
            return Verdict.refuted("below-atom-levels")
        return Verdict.refuted("antimatter-empty-hull")

    def atom_structure(self):
        if self.rational:
            return ("rows", {1: RowSet.all_ints()}, "level-1-points")
        return ("empty",)

    def row_set(self, j):
        if not self.rational or tuple(self.int_u) != (0, 1):
            raise SpecError("row analysis requires support y >= 0")
        if j < 0:
            return RowSet.empty()
        if j == 0:
            if self.closed:
                return RowSet.coset(0, OneDimMonoid([1, -1]))
            return RowSet.coset(0, OneDimMonoid([]))
        return RowSet.all_ints()

    def support(self) -> SupportDescription:
        ln = self.boundary_line
        return SupportDescription("unique", (ln,), self.rational,
                                  ln if self.rational else None)


class RegionUnionEngine(Engine):
    def __init__(self, spec: RegionUnion):
        self.spec = spec
        self.dim = spec.dim
        self.base = FinGenEngine(spec.base)
        self.regions = spec.regions
        self._row_mode = self._detect_row_mode()
        self._row_cache = {}

    def _detect_row_mode(self):
        if self.dim != 2:
            return False
        for g in self.base.gens:
            if g[1] < 0:
                return False
        for r in self.regions:
            if isinstance(r, Band) and r.axis == 1 and r.threshold >= 1 and r.congruence is None:
                continue
            if isinstance(r, ProductRegion) and len(r.constraints) == 2 and r.congruence is None:
                ycon = r.constraints[1]
                if ycon[0] in ("ge", "eq") and ycon[1] >= 1:
                    continue
            return False
        return True

    def contains(self, x: Point) -> Verdict:
        x = check_point(x, self.dim)
        for i, r in enumerate(self.regions):
            if r.contains(x):
                return Verdict.proven("region", i)
        got = self.base.contains(x)
        if got.is_proven:
            return got
        if got.is_refuted:
            return Verdict.refuted("outside-base-and-regions", got.certificate)
        return got

    def is_unit(self, x: Point) -> Verdict:
        if self._row_mode:
            x = check_point(x, 2)
            if x[1] != 0:
                res = self.contains(x)
                if not res.is_proven:
                    return Verdict.refuted("not-member") if res.is_refuted else res
                return Verdict.refuted("positive-row")
            return self.base.is_unit(x)
        return super().is_unit(x)

    def unit_lattice(self):
        if self._row_mode:
            return self.base.unit_lattice()
        return None

    def row_set(self, j: int) -> RowSet:
        if not self._row_mode:
            raise SpecError("row analysis unavailable")
        if j in self._row_cache:
            return self._row_cache[j]
        out = self.base.row_set(j)
        for r in self.regions:
            if isinstance(r, Band):
                if j >= r.threshold:
                    out = out.union(RowSet.all_ints())
            else:
                ycon = r.constraints[1]
                ok = (ycon[0] == "ge" and j >= ycon[1]) or (ycon[0] == "eq" and j == ycon[1])
                if ok:
                    xcon = r.constraints[0]
                    if xcon[0] == "free":
                        out = out.union(RowSet.all_ints())
                    elif xcon[0] == "ge":
                        out = out.union(RowSet.ray_ge(xcon[1]))
                    elif xcon[0] == "le":
                        out = out.union(RowSet.ray_le(xcon[1]))
                    else:
                        out = out.union(RowSet.finite([xcon[1]]))
        self._row_cache[j] = out
        return out

    def atom_verdict(self, x: Point) -> Verdict:
        x = check_point(x, self.dim)
        cx = self.contains(x)
        if not cx.is_proven:
            return Verdict.refuted("not-member") if cx.is_refuted else cx
        u = self.is_unit(x)
        if u.is_proven:
            return Verdict.refuted("unit")
        if self._row_mode:
            try:
                return atom_by_row_tables(self, x, x[1])
            except (RowUnknown, SpecError):
                pass
        got = generic_split_search(self, x)
        return got

    def full_band_threshold(self):
        """Least j0 with rows j >= j0 equal to all of Z, from a pure band."""
        ths = [r.threshold for r in self.regions
               if isinstance(r, Band) and r.axis == 1 and r.congruence is None]
        return min(ths) if ths else None

    def atom_structure(self):
        """Finite atom set with a completeness argument, when derivable."""
        if not self._row_mode:
            return None
        k0 = _row0_monoid(self)
        b = self.full_band_threshold()
        if b is None or k0 is None:
            return None
        if k0.is_group and k0.kind == "group":
            return None
        if k0.kind == "zero":
            return None
        m0 = k0.min_nonunit()
        if m0 is None or m0 <= 0:
            return None
        # rows >= b are full, so any member there splits off (m0, 0).
        # Rows below b: members past a saturation bound also split via
        # (m0, 0); only the finitely many candidates before it can be atoms.
        atoms = [(t, 0) for t in k0.atoms()]
        for j in range(1, b):
            rj = self.row_set(j)
            if rj.is_empty:
                continue
            sat = _saturation_bound(rj, m0)
            if sat is None:
                return None
            try:
                lo = rj.min_elt()
            except RowUnbounded:
                return None
            for t in range(lo, sat):
                if rj.contains(t) and self.atom_verdict((t, j)).is_proven:
                    atoms.append((t, j))
        return ("finite", tuple(sorted(atoms)))

    def atomic_element(self, x: Point) -> Verdict:
        cx = self.contains(x)
        if not cx.is_proven:
            return Verdict.refuted("not-member") if cx.is_refuted else cx
        if self.is_unit(x).is_proven:
            return Verdict.refuted("unit")
        st = self.atom_structure()
        if st and st[0] == "finite":
            hull = FinGenEngine(FinGen.of(st[1], dim=self.dim))
            got = hull.contains(x)
            if got.is_proven:
                return Verdict.proven("hull-member", got.certificate)
            if got.is_refuted:
                return Verdict.refuted("outside-atom-hull", got.certificate)
            return got
        return Verdict.unknown(None, "no-atom-certificate")

    def hull_contains(self, x: Point) -> Verdict:
        st = self.atom_structure()
        if st and st[0] == "finite":
            hull = FinGenEngine(FinGen.of(st[1], dim=self.dim))
            return hull.contains(x)
        return Verdict.unknown(None, "no-atom-certificate")

    def support(self) -> SupportDescription:
        base_sup = self.base.support()
        forced = []
        for r in self.regions:
            if isinstance(r, Band):
                if r.threshold <= 0:
                    return SupportDescription("none")
                n = tuple(1 if i == r.axis else 0 for i in range(self.dim))
                forced.append(_line_from_normal(n))
            elif isinstance(r, HalfPlaneRegion):
                forced.append(_line_from_normal(r.u))
            elif isinstance(r, ProductRegion):
                frees = [i for i, c in enumerate(r.constraints) if c[0] == "free"]
                ges = [i for i, c in enumerate(r.constraints) if c[0] in ("ge", "eq")]
                if len(frees) == 1 and len(ges) == 1 and r.constraints[ges[0]][1] >= 0:
                    n = tuple(1 if i == ges[0] else 0 for i in range(self.dim))
                    forced.append(_line_from_normal(n))
                else:
                    return SupportDescription("none")
        if not forced:
            return base_sup
        first = forced[0]
        if not all(first.same_line(l) for l in forced[1:]):
            return SupportDescription("none")
        # the base must sit on the regions' side of the forced line
        n = first.normal()
        sides = {inner_scalar(g, n).sign() for g in self.base.gens}
        region_side = inner_scalar(_any_region_point(self.regions[0]), n).sign()
        if region_side == 0:
            region_side = 1
        if -region_side in sides:
            return SupportDescription("none")
        return SupportDescription("unique", (first,), first.is_rational_direction,
                                  first if first.is_rational_direction else None)


def _saturation_bound(row: RowSet, m0: int) -> int | None:
    """Bound beyond which every row member t also has t - m0 in the row.

    None when no such bound is derivable from the component shapes.
    """
    bound = None
    for c in row.components:
        kind = c[0]
        if kind == "all":
            b = None  # saturated everywhere; no constraint
            continue
        if kind == "ray+":
            b = c[1] + m0
        elif kind == "finite":
            b = max(c[1]) + 1
        elif kind == "coset":
            k = c[2]
            if k.kind == "zero":
                b = c[1] + 1
            elif k.kind == "group":
                if m0 % k.g:
                    return None
                b = c[1]  # cosets of a group are shift-closed when m0 | g-aligned
            else:
                if m0 % k.g or k.sign < 0:
                    return None
                b = c[1] + k.g * len(k._table) + m0
        else:
            return None
        if b is not None:
            bound = b if bound is None else max(bound, b)
    if bound is None:
        bound = 0
    return bound


def _any_region_point(r):
    if isinstance(r, Band):
        p = [0, 0]
        p[r.axis] = r.threshold
        return tuple(p)
    if isinstance(r, ProductRegion):
        out = []
        for c in r.constraints:
            out.append(c[1] if c[0] != "free" else 0)
        return tuple(out)
    return (0, 0)


_ENGINE_CACHE = {}


def engine_for(spec) -> Engine:
    key = spec
    if key in _ENGINE_CACHE:
        return _ENGINE_CACHE[key]
    if isinstance(spec, FinGen):
        eng = FinGenEngine(spec)
    elif isinstance(spec, RegionUnion):
        eng = RegionUnionEngine(spec)
    elif isinstance(spec, HalfPlane):
        eng = HalfPlaneEngine(spec)
    elif isinstance(spec, PresetSpec):
        from .presets import preset
        eng = preset(spec.preset_id, **spec.params_dict).engine
    else:
        raise SpecError(f"no engine for {spec!r}")
    _ENGINE_CACHE[key] = eng
    return eng


# ---------------------------------------------------------------------------
# module-level operations
# ---------------------------------------------------------------------------


def contains(spec, x: Point) -> Verdict:
    return engine_for(spec).contains(x)


def divides(spec, s: Point, r: Point) -> Verdict:
    """s | r in M, i.e. r - s in M."""
    return engine_for(spec).contains(psub(check_point(r), check_point(s)))


@dataclass
class UnitsResult:
    units: tuple
    complete: bool
    unresolved: tuple = ()


def units(spec, window: Window) -> UnitsResult:
    eng = engine_for(spec)
    out, unresolved = [], []
    for p in window.points():
        v = eng.is_unit(p)
        if v.is_proven:
            out.append(p)
        elif v.is_unknown:
            unresolved.append(p)
    return UnitsResult(tuple(sorted(out)), not unresolved, tuple(unresolved))


@dataclass
class PointsResult:
    points: tuple
    complete: bool
    unresolved: tuple = ()


def monoid_points(spec, window: Window) -> PointsResult:
    eng = engine_for(spec)
    out, unresolved = [], []
    for p in window.points():
        v = eng.contains(p)
        if v.is_proven:
            out.append(p)
        elif v.is_unknown:
            unresolved.append(p)
    return PointsResult(tuple(sorted(out)), not unresolved, tuple(unresolved))


def supporting_lines(spec) -> SupportDescription:
    return engine_for(spec).support()


@dataclass
class Embedding:
    image_spec: object
    forward_matrix: tuple   # rows of the 2x2 integer matrix
    slope: Fraction | None

    def forward(self, x: Point) -> Point:
        m = self.forward_matrix
        return (m[0][0] * x[0] + m[0][1] * x[1], m[1][0] * x[0] + m[1][1] * x[1])


def embed_ZxN0(spec, line: Line | None = None) -> Embedding:
    """Injective additive map into Z x N0 for rationally supported specs.

    A rational supporting line may be passed (or declared on a FinGen spec)
    to pin the embedding; otherwise a computed one is used.
    """
    if line is None and isinstance(spec, FinGen):
        line = spec.declared_support
    if line is None:
        sup = supporting_lines(spec)
        if not sup.rationally_supported or sup.rational_line is None:
            raise SpecError("monoid is not rationally supported")
        line = sup.rational_line
    if not line.is_rational_direction:
        raise SpecError("supporting line must have rational direction")
    if isinstance(spec, FinGen):
        nrm = line.normal()
        sides = {inner_scalar(g, nrm).sign() for g in spec.gens}
        if -1 in sides and 1 in sides:
            raise SpecError("declared line does not support the monoid")
    b, a = line.direction_primitive()
    n = (-a, b)
    eng = engine_for(spec)
    # orient the normal so the monoid sits on the nonnegative side
    flip = False
    if isinstance(spec, FinGen):
        if any(inner(g, n) < 0 for g in spec.gens):
            flip = True
    if flip:
        n = (a, -b)
    fwd = ((b, a), n)
    if isinstance(spec, FinGen):
        image = FinGen.of([(b * g[0] + a * g[1], n[0] * g[0] + n[1] * g[1])
                           for g in spec.gens], dim=2)
    else:
        image = None
    slope = Fraction(a, b) if b else None
    return Embedding(image, fwd, slope)
