"""Distortion and compression profiles of cyclic subgroups, translation
numbers, and geometric-series summability of compressions.

All values are exact on a certified range derived from a complete ball
table; outside that range the API raises OutOfRange instead of
extrapolating.  Real arguments use the conventions forced by the
definitions: distortion is constant on [n, n+1), compression on (n-1, n].
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .groups import (
    Group,
    GroupError,
    LengthLowerBound,
    OutOfRange,
    WordMetric,
    enumerate_ball,
)


def require_infinite_order(group: Group, g) -> None:
    """All built-in models are torsion-free, so only the identity is rejected."""
    group.validate(g)
    if g == group.identity:
        raise GroupError("element has finite order (identity); need infinite order")


@dataclass(frozen=True)
class PowerLengthTable:
    """Exact word lengths of the powers g^j that fit inside a ball."""

    group: Group
    g: tuple
    radius: int
    entries: tuple  # (j, length) for every j >= 1 with length <= radius
    generating_set: str

    @property
    def j_max(self) -> int:
        return self.entries[-1][0]


def power_lengths(group: Group, g, radius: int,
                  max_elements: int | None = None) -> PowerLengthTable:
    """Mark the powers of g inside the ball of the given radius.

    The scan over exponents stops once the certified lower bound exceeds the
    radius, which guarantees that *every* power of length <= radius is found.
    """
    require_infinite_order(group, g)
    bound = group.compression_lower_bound(g)
    table = enumerate_ball(group, radius, max_elements)
    entries = []
    j = 1
    p = g
    while bound.value(j) <= radius:
        length = table.length(p)
        if length is not None:
            entries.append((j, length))
        j += 1
        p = group.mul(p, g)
    if not entries:
        raise OutOfRange(
            f"radius {radius} is too small: no power of "
            f"{group.format_elem(g)} fits in the ball"
        )
    return PowerLengthTable(group, g, radius, tuple(entries),
                            group.generating_set_description())


class CompressionProfile:
    """Distortion/compression data for <g>, exact on a certified range.

    distortion(x) is exact for x <= radius; compression(i) and the floored
    quarter values are exact for 1 <= i <= j_max = distortion(radius).  The
    declared lower bound is validated against the exact data at build time.
    """

    def __init__(self, table: PowerLengthTable, lower_bound: LengthLowerBound):
        self.table = table
        self.lower_bound = lower_bound
        self.group = table.group
        self.g = table.g
        self.radius = table.radius
        self.j_max = table.j_max
        self._length_of = dict(table.entries)
        # Suffix minima over the recorded powers: powers missing from the
        # table have length > radius and can never achieve the minimum.
        self._rho = {}
        best = None
        for j, length in reversed(table.entries):
            best = length if best is None else min(best, length)
            self._rho[j] = best
        for i in range(1, self.j_max + 1):
            if i not in self._rho:
                nxt = min(j for j in self._rho if j >= i)
                self._rho[i] = self._rho[nxt]
        for i in range(1, self.j_max + 1):
            if lower_bound.value(i) > self._rho[i]:
                raise GroupError(
                    f"declared lower bound {lower_bound.describe()} exceeds the "
                    f"exact compression at {i}: {lower_bound.value(i)} > {self._rho[i]}"
                )

    # -- exact invariants ---------------------------------------------------

    def power_length(self, j: int) -> int:
        if j in self._length_of:
            return self._length_of[j]
        raise OutOfRange(f"power {j} exceeds radius {self.radius}")

    def distortion(self, x) -> int:
        """Largest j >= 0 with l(g^j) <= x (exact for x <= radius)."""
        xf = math.floor(x)
        if xf > self.radius:
            raise OutOfRange(f"distortion is exact only up to {self.radius}")
        if xf < 0:
            return 0
        best = 0
        for j, length in self.table.entries:
            if length <= xf:
                best = j
        return best

    def compression(self, i) -> int:
        """Least length of a power g^j with |j| >= i (exact for i <= j_max)."""
        ic = math.ceil(i)
        if ic <= 0:
            return 0
        if ic > self.j_max:
            raise OutOfRange(f"compression is exact only up to {self.j_max}")
        return self._rho[ic]

    def rho_inverse(self, c) -> int:
        """sup of the real interval where the compression stays <= c."""
        if self.compression(1) > c:
            return 0
        best = max(j for j in range(1, self.j_max + 1) if self._rho[j] <= c)
        if best == self.j_max:
            # Certify there is no larger exponent with compression <= c.
            if self.lower_bound.value(best + 1) <= c:
                raise OutOfRange(
                    f"cannot certify the inverse at {c}: exact range ends at {self.j_max}"
                )
        return best

    def quarter_floor(self, j: int) -> int:
        """floor(compression(j)/4); the cone radius increments."""
        if j == 0:
            return 0
        return self.compression(j) // 4

    # -- translation numbers -------------------------------------------------

    def translation_data(self) -> "TranslationData":
        return translation_number(self.table, self.lower_bound)


def build_profile(group: Group, g, radius: int,
                  max_elements: int | None = None) -> CompressionProfile:
    table = power_lengths(group, g, radius, max_elements)
    return CompressionProfile(table, group.compression_lower_bound(g))


@dataclass(frozen=True)
class TranslationData:
    """Certified upper-bound data for the translation number of g."""

    terms: tuple            # (n, l(g^n), l(g^n)/n) for recorded powers
    running_min: tuple      # non-increasing sequence of certified upper bounds
    best_upper_bound: float
    lower_bound: float | None      # positive slope when declared linear
    undistorted_witness: bool


def translation_number(table: PowerLengthTable,
                       lower_bound: LengthLowerBound | None = None) -> TranslationData:
    """Upper bounds l(g^n)/n for the translation number (subadditive limit).

    Every term bounds the limit from above; the running minimum is the
    non-increasing certified sequence.  A declared linear lower bound
    lambda*n yields the certified positive lower bound lambda.
    """
    if lower_bound is None:
        lower_bound = table.group.compression_lower_bound(table.g)
    terms = []
    running = []
    best = math.inf
    for j, length in table.entries:
        ratio = length / j
        best = min(best, ratio)
        terms.append((j, length, ratio))
        running.append(best)
    slope = lower_bound.linear_slope()
    return TranslationData(
        terms=tuple(terms),
        running_min=tuple(running),
        best_upper_bound=best,
        lower_bound=float(slope) if slope is not None else None,
        undistorted_witness=slope is not None,
    )


@dataclass(frozen=True)
class SummabilityReport:
    """Partial sum of r**compression(i) with a rigorous closed-form tail.

    Terms beyond the exact range use the certified lower bound, so both the
    partial sum and the tail over-approximate the true series; the total is
    a certified upper bound for it.
    """

    r: float
    terms: int
    partial_sum: float
    tail_bound: float
    exact_terms: int

    @property
    def total_upper_bound(self) -> float:
        return self.partial_sum + self.tail_bound


def sdt_partial_sum(profile: CompressionProfile, r: float, terms: int) -> SummabilityReport:
    if not 0.0 < r < 1.0:
        raise GroupError("base r must lie in (0, 1)")
    if terms < 1:
        raise GroupError("need at least one term")
    exact = min(terms, profile.j_max)
    partial = 0.0
    for i in range(1, terms + 1):
        exponent = profile.compression(i) if i <= exact else profile.lower_bound.value(i)
        partial += r ** exponent
    tail = profile.lower_bound.tail(r, terms + 1)
    return SummabilityReport(r=r, terms=terms, partial_sum=partial,
                             tail_bound=tail, exact_terms=exact)


@dataclass(frozen=True)
class ConjugationCheck:
    """Compression comparison between g and t*g*t^-1.

    Certified inequality: compression_conj(n) >= compression(n) - 2*l(t);
    slack(n) is the left side minus the right side, exact on the shared range.
    """

    t_length: int
    js: tuple
    slacks: tuple
    min_slack: int

    @property
    def holds(self) -> bool:
        return self.min_slack >= 0


def conjugation_compression_check(group: Group, g, t, radius: int,
                                  max_elements: int | None = None) -> ConjugationCheck:
    require_infinite_order(group, g)
    group.validate(t)
    conj = group.mul(group.mul(t, g), group.inv(t))
    prof_g = build_profile(group, g, radius, max_elements)
    prof_c = build_profile(group, conj, radius, max_elements)
    t_length = WordMetric(group).length(t)
    top = min(prof_g.j_max, prof_c.j_max)
    if top < 1:
        raise OutOfRange("radius too small for a shared exact range")
    js = tuple(range(1, top + 1))
    slacks = tuple(
        prof_c.compression(n) - (prof_g.compression(n) - 2 * t_length) for n in js
    )
    return ConjugationCheck(t_length=t_length, js=js, slacks=slacks,
                            min_slack=min(slacks))
