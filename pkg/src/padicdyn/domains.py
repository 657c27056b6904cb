"""Balls and compact open domains with canonical decompositions.

A closed ball of radius p^t is identified by its level t and canonical key:
the unique finite base-p expansion of its center with digits only at
exponents below -t.  A compact open domain is normalized to a disjoint
union of balls at a single base level (differences are resolved by refining;
complete sibling groups are merged back up), which makes equality, measure,
refinement and nested representative systems immediate.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator

from .config import DEFAULT_CONFIG, AnalysisConfig
from .errors import (
    DecompositionTooLarge,
    EmptyDomain,
    LevelTooCoarse,
    NotInDomain,
    PrimeMismatch,
)
from .padics import NEG_INF, PAdicRational, RationalLike, canonical_key, fraction_valuation


@dataclass(frozen=True)
class Ball:
    """Closed ball of radius p^level with canonical center key."""

    level: int
    key: Fraction
    prime: int

    @staticmethod
    def containing(x: RationalLike, level: int, p: int) -> "Ball":
        xv = PAdicRational.of(x, p)
        return Ball(level, canonical_key(xv.value, level, p), p)

    @property
    def measure_exponent(self) -> int:
        return self.level

    @property
    def measure(self) -> Fraction:
        return Fraction(self.prime) ** self.level

    @property
    def center(self) -> PAdicRational:
        return PAdicRational(self.key, self.prime)

    def contains(self, x: RationalLike) -> bool:
        xv = PAdicRational.of(x, self.prime)
        return fraction_valuation(xv.value - self.key, self.prime) >= -self.level

    def contains_ball(self, other: "Ball") -> bool:
        return other.level <= self.level and self.contains(other.center)

    def child(self, digit: int) -> "Ball":
        step = Fraction(self.prime) ** (-self.level)
        return Ball(self.level - 1, self.key + digit * step, self.prime)

    def children(self) -> tuple["Ball", ...]:
        return tuple(self.child(d) for d in range(self.prime))

    def parent(self) -> "Ball":
        return Ball(
            self.level + 1,
            canonical_key(self.key, self.level + 1, self.prime),
            self.prime,
        )

    def subdivide(self, level: int) -> Iterator["Ball"]:
        """All level-t descendants, t <= self.level, in key order."""
        if level > self.level:
            raise LevelTooCoarse(
                f"cannot subdivide a level-{self.level} ball at level {level}"
            )
        count = self.prime ** (self.level - level)
        step = Fraction(self.prime) ** (-self.level)
        for j in range(count):
            yield Ball(level, self.key + j * step, self.prime)

    def __str__(self):
        return f"B({self.key}, {self.level})"


@dataclass(frozen=True)
class CompactDomain:
    """Finite disjoint union of balls, all stored at one base level."""

    prime: int
    base_level: int
    keys: frozenset[Fraction]

    @staticmethod
    def from_balls(balls: Iterable[Ball]) -> "CompactDomain":
        balls = list(balls)
        if not balls:
            raise EmptyDomain("domain with no balls")
        p = balls[0].prime
        if any(b.prime != p for b in balls):
            raise PrimeMismatch("balls over different primes")
        level = min(b.level for b in balls)
        keys = set()
        for b in balls:
            for sub in b.subdivide(level):
                keys.add(sub.key)
        return CompactDomain(p, level, frozenset(keys))._coarsened()

    @staticmethod
    def zp(p: int) -> "CompactDomain":
        return CompactDomain(p, 0, frozenset([Fraction(0)]))

    @staticmethod
    def ball(center: RationalLike, level: int, p: int) -> "CompactDomain":
        return CompactDomain.from_balls([Ball.containing(center, level, p)])

    @staticmethod
    def sphere(radius_exponent: int, p: int) -> "CompactDomain":
        """S_{p^N}(0): the points of norm exactly p^N."""
        n = radius_exponent
        step = Fraction(p) ** (-n)
        balls = [Ball(n - 1, d * step, p) for d in range(1, p)]
        return CompactDomain.from_balls(balls)

    def _coarsened(self) -> "CompactDomain":
        level, keys = self.base_level, self.keys
        while keys:
            groups: dict[Fraction, int] = {}
            for k in keys:
                parent = canonical_key(k, level + 1, self.prime)
                groups[parent] = groups.get(parent, 0) + 1
            if all(c == self.prime for c in groups.values()):
                level += 1
                keys = frozenset(groups)
            else:
                break
        return CompactDomain(self.prime, level, keys)

    def balls(self) -> tuple[Ball, ...]:
        return tuple(
            Ball(self.base_level, k, self.prime) for k in sorted(self.keys)
        )

    @property
    def ball_count(self) -> int:
        return len(self.keys)

    @property
    def measure(self) -> Fraction:
        return len(self.keys) * Fraction(self.prime) ** self.base_level

    def height_exponent(self) -> int:
        """Smallest M >= level data with X inside the ball of radius p^M
        around 0 (0 when the domain sits inside Z_p)."""
        out = self.base_level
        for k in self.keys:
            if k != 0:
                out = max(out, -int(fraction_valuation(k, self.prime)))
        return max(out, 0)

    def union(self, other: "CompactDomain") -> "CompactDomain":
        self._check(other)
        level = min(self.base_level, other.base_level)
        return CompactDomain.from_balls(
            list(self._refined_balls(level)) + list(other._refined_balls(level))
        )

    def difference(self, other: "CompactDomain") -> "CompactDomain":
        self._check(other)
        level = min(self.base_level, other.base_level)
        mine = {b.key for b in self._refined_balls(level)}
        theirs = {b.key for b in other._refined_balls(level)}
        left = mine - theirs
        if not left:
            raise EmptyDomain("difference removed every ball")
        return CompactDomain(self.prime, level, frozenset(left))._coarsened()

    def _refined_balls(self, level: int) -> Iterator[Ball]:
        for b in self.balls():
            yield from b.subdivide(level)

    def _check(self, other: "CompactDomain"):
        if self.prime != other.prime:
            raise PrimeMismatch("domains over different primes")

    def contains(self, x: RationalLike) -> bool:
        xv = PAdicRational.of(x, self.prime)
        return xv.key_at_level(self.base_level) in self.keys

    def __contains__(self, x) -> bool:
        return self.contains(x)

    def __str__(self):
        parts = " + ".join(str(b) for b in self.balls()[:6])
        extra = "" if len(self.keys) <= 6 else f" + ... ({len(self.keys)} balls)"
        return parts + extra


@dataclass(frozen=True)
class RepresentativeSystem:
    """One canonical point per level-t ball; canonical keys make the systems
    nested across levels automatically."""

    level: int
    points: dict[Ball, PAdicRational]

    def __iter__(self):
        return iter(self.points.items())


def decompose(
    X: CompactDomain, t: int, config: AnalysisConfig = DEFAULT_CONFIG
) -> list[Ball]:
    """The unique decomposition of X into level-t balls, sorted by key."""
    if t > X.base_level:
        raise LevelTooCoarse(
            f"domain is expressed at level {X.base_level}; cannot decompose at {t}"
        )
    count = len(X.keys) * X.prime ** (X.base_level - t)
    if count > config.ball_cap:
        raise DecompositionTooLarge(
            f"decomposition at level {t} needs {count} balls (cap {config.ball_cap})"
        )
    out: list[Ball] = []
    for b in X.balls():
        out.extend(b.subdivide(t))
    out.sort(key=lambda b: b.key)
    return out


def representatives(
    X: CompactDomain, t: int, config: AnalysisConfig = DEFAULT_CONFIG
) -> RepresentativeSystem:
    balls = decompose(X, t, config)
    return RepresentativeSystem(t, {b: b.center for b in balls})


def locate(X: CompactDomain, x: RationalLike, t: int) -> Ball:
    """The level-t ball of X containing x; NotInDomain otherwise."""
    xv = PAdicRational.of(x, X.prime)
    if not X.contains(xv):
        best = NEG_INF
        for k in X.keys:
            v = fraction_valuation(xv.value - k, X.prime)
            best = max(best, v)
        dist = NEG_INF if best is NEG_INF else -best
        raise NotInDomain(
            f"{xv} is not in the domain (nearest ball at distance exponent {dist})",
            distance_exponent=dist,
        )
    if t > X.base_level:
        raise LevelTooCoarse(
            f"domain is expressed at level {X.base_level}; cannot locate at {t}"
        )
    return Ball(t, xv.key_at_level(t), X.prime)
