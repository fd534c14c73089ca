"""Atoms, factorization sets Z(x), length sets L(x), and atomic hulls.

Enumeration is windowed and completeness is tracked explicitly: a result
is flagged complete only when the atom supply provably covers every
divisor of the target, or an invariant certifies emptiness.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from .geometry import Point, check_point, inner, padd, psub, pscale, pneg, norm1
from .monoid import (
    Verdict, Window, engine_for, FinGen, FinGenEngine, SpecError,
)


def is_atom(spec, a: Point) -> Verdict:
    return engine_for(spec).atom_verdict(a)


def is_atomic_element(spec, x: Point) -> Verdict:
    return engine_for(spec).atomic_element(x)


@dataclass(frozen=True)
class AtomSet:
    atoms: tuple
    window: Window
    complete: bool                 # every point of M in the window resolved
    globally_complete: bool        # certified: no atoms outside the window list
    associate_classes: tuple = ()
    unresolved: tuple = ()

    def __contains__(self, p):
        return p in self.atoms


def _associate_classes(atoms, unit_lattice):
    """Group atoms modulo the unit lattice (single generator supported)."""
    if not unit_lattice:
        return tuple((a,) for a in atoms)
    g = unit_lattice[0]
    classes = {}
    for a in atoms:
        # canonical representative: subtract the unit multiple aligning on g
        i = next(i for i, c in enumerate(g) if c)
        k = a[i] // g[i]
        rep = psub(a, pscale(k, g))
        classes.setdefault(rep, []).append(a)
    return tuple(tuple(sorted(v)) for k, v in sorted(classes.items()))


def atoms_in_window(spec, window: Window) -> AtomSet:
    eng = engine_for(spec)
    atoms, unresolved = [], []
    for p in window.points():
        c = eng.contains(p)
        if c.is_unknown:
            unresolved.append(p)
            continue
        if not c.is_proven:
            continue
        v = eng.atom_verdict(p)
        if v.is_proven:
            atoms.append(p)
        elif v.is_unknown:
            unresolved.append(p)
    atoms.sort()
    st = eng.atom_structure()
    globally_complete = False
    if st is not None and st[0] == "finite":
        globally_complete = all(window.contains(a) for a in st[1])
    elif st is not None and st[0] == "empty":
        globally_complete = True
    ul = eng.unit_lattice()
    classes = _associate_classes(atoms, ul if ul is not None else ())
    return AtomSet(tuple(atoms), window, not unresolved, globally_complete,
                   classes, tuple(unresolved))


@dataclass(frozen=True)
class Factorization:
    """Multiset of atoms as sorted (atom, multiplicity) pairs."""

    parts: tuple

    @staticmethod
    def of(pairs) -> "Factorization":
        merged = {}
        for a, c in pairs:
            if c:
                merged[tuple(a)] = merged.get(tuple(a), 0) + c
        return Factorization(tuple(sorted(merged.items())))

    @property
    def length(self) -> int:
        return sum(c for _, c in self.parts)

    def value(self) -> Point:
        if not self.parts:
            raise ValueError("empty factorization has no dimension")
        acc = tuple([0] * len(self.parts[0][0]))
        for a, c in self.parts:
            acc = padd(acc, pscale(c, a))
        return acc

    def to_json(self):
        return [[list(a), c] for a, c in self.parts]


@dataclass(frozen=True)
class FactorizationSet:
    target: Point
    factorizations: tuple
    complete: bool
    note: str = ""

    @property
    def lengths(self):
        return tuple(sorted({f.length for f in self.factorizations}))


@dataclass(frozen=True)
class LengthSet:
    lengths: tuple
    complete: bool


def _divisor_window(eng, x) -> Window | None:
    """Box guaranteed to contain every divisor of x (pointed cones only)."""
    if not isinstance(eng, FinGenEngine) or eng.cone.kind != "pointed":
        return None
    na, nb = eng.cone.duals
    # divisors r satisfy <r, n> >= 0 and <x - r, n> >= 0 for both duals;
    # that region is a bounded parallelogram; take its integer bounding box
    corners = []
    det = na[0] * nb[1] - na[1] * nb[0]
    for va, vb in ((0, 0), (inner(x, na), 0), (0, inner(x, nb)),
                   (inner(x, na), inner(x, nb))):
        # solve <r, na> = va, <r, nb> = vb over rationals
        rx = (va * nb[1] - vb * na[1], det)
        ry = (vb * na[0] - va * nb[0], det)
        corners.append((rx, ry))

    def lo(vals):
        return min(a // b if b > 0 else -((-a) // b) if b < 0 else 0 for a, b in vals)

    def hi(vals):
        return max(-((-a) // b) if b > 0 else a // b if b < 0 else 0 for a, b in vals)

    xs = [c[0] for c in corners]
    ys = [c[1] for c in corners]
    return Window.of((lo(xs) - 1, hi(xs) + 1), (lo(ys) - 1, hi(ys) + 1))


def factorizations(spec, x: Point, atom_source: AtomSet | None = None,
                   length_bound: int | None = None) -> FactorizationSet:
    """All multisets of atoms summing to x, with honest completeness."""
    eng = engine_for(spec)
    x = check_point(x, eng.dim)
    cx = eng.contains(x)
    if cx.is_refuted:
        raise ValueError(f"{x} is not in the monoid")
    if not any(x):
        return FactorizationSet(x, (Factorization.of([]),), True, "identity")

    special = getattr(eng, "factorization_set", None)
    if special is not None:
        return special(x, length_bound)

    if atom_source is None:
        dw = _divisor_window(eng, x)
        if dw is not None:
            atom_source = atoms_in_window(spec, dw)
        else:
            st = eng.atom_structure()
            if st is not None and st[0] == "finite":
                pts = st[1]
                if pts:
                    w = Window.of(*[(min(p[i] for p in pts), max(p[i] for p in pts))
                                    for i in range(eng.dim)])
                else:
                    w = Window.square(1, eng.dim)
                atom_source = AtomSet(tuple(sorted(pts)), w, True, True)
            elif st is not None and st[0] == "empty":
                atom_source = AtomSet((), Window.square(1, eng.dim), True, True)
            else:
                raise SpecError("factorizations need an atom_source for this spec")

    atoms = sorted(atom_source.atoms, key=lambda a: (norm1(a), a))
    # grading functional for pruning: prefer a strictly positive one
    grading = _grading(eng, atoms)
    out = []
    bound = length_bound

    def rec(i, rest, acc, used):
        if not any(rest):
            out.append(Factorization.of(list(acc)))
            return
        if i == len(atoms):
            return
        if bound is not None and used >= bound:
            return
        a = atoms[i]
        cmax = _max_count(rest, a, grading)
        if bound is not None:
            cmax = min(cmax, bound - used)
        for c in range(cmax, -1, -1):
            nrest = psub(rest, pscale(c, a))
            if grading is not None and inner(nrest, grading) < 0:
                continue
            if c:
                acc.append((a, c))
            rec(i + 1, nrest, acc, used + c)
            if c:
                acc.pop()

    rec(0, x, [], 0)
    out.sort(key=lambda f: f.parts)

    complete = atom_source.globally_complete and length_bound is None
    note = ""
    if not atom_source.globally_complete:
        # emptiness can still be certified by an invariant over all atoms
        emptiness = _invariant_empty(eng, x)
        if emptiness and not out:
            complete, note = True, emptiness
        else:
            note = "atom source not globally complete"
    elif length_bound is not None:
        note = "length bound applied"
    if grading is None and complete and out and length_bound is None:
        # without a positive functional, infinitely many factorizations may
        # exist even over finitely many atoms (unit-like cancellations)
        if _has_cancelling_pair(atoms):
            complete, note = False, "atoms admit cancelling combinations"
    return FactorizationSet(x, tuple(out), complete, note)


def _grading(eng, atoms):
    if isinstance(eng, FinGenEngine) and eng.cone.kind == "pointed":
        return eng.cone.functional
    # all atoms in upper half plane with positive y: use (0, 1)
    if atoms and all(len(a) == 2 and a[1] > 0 for a in atoms):
        return (0, 1)
    if atoms and all(a[-1] == 0 and a[0] > 0 for a in atoms):
        return tuple([1] + [0] * (len(atoms[0]) - 1))
    return None


def _max_count(rest, a, grading):
    if grading is not None:
        fa = inner(a, grading)
        fr = inner(rest, grading)
        if fa > 0:
            return max(0, fr // fa)
    # fall back to coordinate bounds where signs allow
    best = None
    for r, c in zip(rest, a):
        if c > 0:
            k = max(0, r // c) if r >= 0 else 0
        elif c < 0:
            k = max(0, (-r) // (-c)) if r <= 0 else 0
        else:
            continue
        best = k if best is None else min(best, k)
    return best if best is not None else 0


def _has_cancelling_pair(atoms):
    sset = set(atoms)
    return any(pneg(a) in sset for a in atoms)


def _invariant_empty(eng, x):
    """Invariant-based proof that Z(x) is empty despite incomplete atom lists."""
    inv = getattr(eng, "atom_invariants", None)
    if inv is None:
        return None
    for kind, data, name in inv():
        if kind == "nonneg-functional":
            if inner(x, data) < 0:
                return f"all atoms satisfy <a, {data}> >= 0; target violates it"
        elif kind == "congruence-lattice":
            if not data.contains(x):
                return f"atom sums stay in the {name} lattice; target escapes"
    return None


def lengths(spec, x: Point, atom_source=None, length_bound=None) -> LengthSet:
    fs = factorizations(spec, x, atom_source, length_bound)
    eng = engine_for(spec)
    complete = fs.complete
    # graded monoids pin the length set even when Z(x) itself is infinite
    if not complete:
        g = _graded_atoms(eng)
        if g is not None:
            return LengthSet((inner(x, g),) if inner(x, g) > 0 else (), True)
    return LengthSet(fs.lengths, complete)


def _graded_atoms(eng):
    """Functional with value exactly 1 on every atom, when certified."""
    st = eng.atom_structure()
    if st is None:
        return None
    if st[0] == "rows":
        rows = st[1]
        if set(rows.keys()) == {1}:
            return (0, 1)
    return None


@dataclass(frozen=True)
class HullResult:
    points: tuple
    complete: bool
    note: str = ""


def atomic_hull(spec, window: Window) -> HullResult:
    """<A(M)> intersected with the window."""
    eng = engine_for(spec)
    hull_fn = getattr(eng, "hull_contains", None)
    pts, complete = [], True
    note = ""
    for p in window.points():
        v = hull_fn(p)
        if v.is_proven:
            pts.append(p)
        elif v.is_unknown:
            complete = False
    if not complete:
        # fall back to saturation by window atoms; flagged partial
        src = atoms_in_window(spec, window)
        reach = {tuple([0] * eng.dim)}
        frontier = [tuple([0] * eng.dim)]
        while frontier:
            nxt = []
            for q in frontier:
                for a in src.atoms:
                    s = padd(q, a)
                    if window.contains(s) and s not in reach:
                        reach.add(s)
                        nxt.append(s)
            frontier = nxt
        pts = sorted(set(pts) | reach)
        note = "window-atom saturation; out-of-window atoms not excluded"
    return HullResult(tuple(sorted(pts)), complete, note)
