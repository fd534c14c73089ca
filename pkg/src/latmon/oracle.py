"""Naive reference implementations used only for differential testing.

Deliberately simple and slow: BFS membership, exhaustive factorization
recursion, and a fixed xorshift64* generator for reproducible random
specs (same constants everywhere, so fixtures port across platforms).
"""

from __future__ import annotations

from dataclasses import dataclass

from .geometry import padd, psub, pscale
from .monoid import FinGen, Verdict, Window


@dataclass(frozen=True)
class OracleConfig:
    max_sum_steps: int = 50_000
    window: Window = Window.square(12, 2, lo=0)
    seed: int = 1


def naive_contains(gens, x, steps=50_000) -> Verdict:
    """BFS over nonnegative generator combinations, up to a step budget."""
    x = tuple(x)
    zero = tuple([0] * len(x))
    if x == zero:
        return Verdict.proven("identity")
    gens = [tuple(g) for g in gens if any(g)]
    if not gens:
        return Verdict.refuted("trivial")
    # quick 1-D invariant: coordinates where all generators share a sign
    for i in range(len(x)):
        if all(g[i] >= 0 for g in gens) and x[i] < 0:
            return Verdict.refuted("coordinate-sign")
        if all(g[i] <= 0 for g in gens) and x[i] > 0:
            return Verdict.refuted("coordinate-sign")
    seen = {zero}
    frontier = [zero]
    used = 0
    radius = max(sum(abs(c) for c in x), 1) + 2 * max(sum(abs(c) for c in g) for g in gens)
    while frontier:
        nxt = []
        for p in frontier:
            for g in gens:
                q = padd(p, g)
                if q == x:
                    return Verdict.proven("bfs")
                if q in seen or sum(abs(c) for c in q) > radius:
                    continue
                used += 1
                if used > steps:
                    return Verdict.unknown(steps)
                seen.add(q)
                nxt.append(q)
        frontier = nxt
    return Verdict.refuted("bfs-exhausted", radius)


def naive_factorizations(gens, x, max_len=None):
    """All generator multisets summing to x; generators in N^2 only.

    Returns a sorted list of sorted ((gen, count), ...) tuples.
    """
    gens = sorted({tuple(g) for g in gens if any(g)})
    if any(any(c < 0 for c in g) for g in gens):
        raise ValueError("oracle factorizations require N^d generators")
    x = tuple(x)
    out = []

    def rec(i, rest, acc, used):
        if not any(rest):
            out.append(tuple(acc))
            return
        if i == len(gens) or any(c < 0 for c in rest):
            return
        g = gens[i]
        cmax = min(rest[k] // g[k] for k in range(len(g)) if g[k]) if any(g) else 0
        if max_len is not None:
            cmax = min(cmax, max_len - used)
        for c in range(cmax, -1, -1):
            if c:
                acc.append((g, c))
            rec(i + 1, psub(rest, pscale(c, g)), acc, used + c)
            if c:
                acc.pop()

    rec(0, x, [], 0)
    return sorted(out)


class XorShift64Star:
    """xorshift64* PRNG: shifts 12/25/27, multiplier 2685821657736338717."""

    MULT = 2685821657736338717
    MASK = (1 << 64) - 1

    def __init__(self, seed: int):
        self.state = (seed or 1) & self.MASK

    def next_u64(self) -> int:
        s = self.state
        s ^= (s >> 12)
        s ^= (s << 25) & self.MASK
        s ^= (s >> 27)
        self.state = s
        return (s * self.MULT) & self.MASK

    def below(self, n: int) -> int:
        return self.next_u64() % n


def random_fingen_spec(seed: int, max_gens: int = 4, box: int = 6) -> FinGen:
    """Reproducible random FinGen spec with generators in N^2 inside the box."""
    rng = XorShift64Star(seed)
    count = 1 + rng.below(max_gens)
    gens = set()
    while len(gens) < count:
        g = (rng.below(box + 1), rng.below(box + 1))
        if any(g):
            gens.add(g)
    return FinGen.of(sorted(gens))
