"""Finitely supported configurations over a group, the shift action,
homoclinic data, cone sets, specification gluing, and golden-mean membership.

Configurations are finite-support differences from a constant background
symbol; that is the only homoclinic class represented here, and it is all
the desk-scale pipeline ever evaluates.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .groups import Group, WordMetric
from .invariants import CompressionProfile, build_profile


class ContractError(ValueError):
    """A documented precondition of a shift-space operation was violated."""


class Configuration:
    """Immutable point of alphabet**group differing from the background on
    finitely many cells.  Equality and hashing use the reduced support."""

    __slots__ = ("group", "alphabet", "background", "support", "_hash")

    def __init__(self, group: Group, alphabet, background, support):
        alphabet = tuple(alphabet)
        if background not in alphabet:
            raise ContractError("background symbol must belong to the alphabet")
        reduced = {}
        for cell, symbol in dict(support).items():
            group.validate(cell)
            if symbol not in alphabet:
                raise ContractError(f"symbol {symbol!r} is not in the alphabet")
            if symbol != background:
                reduced[cell] = symbol
        object.__setattr__(self, "group", group)
        object.__setattr__(self, "alphabet", alphabet)
        object.__setattr__(self, "background", background)
        object.__setattr__(self, "support", reduced)
        object.__setattr__(self, "_hash",
                           hash((alphabet, background, frozenset(reduced.items()))))

    def __setattr__(self, *_):
        raise AttributeError("Configuration is immutable")

    def symbol_at(self, cell):
        return self.support.get(cell, self.background)

    def translate(self, h) -> "Configuration":
        """Left shift: the new value at k is the old value at h^-1 k."""
        group = self.group
        moved = {group.mul(h, cell): sym for cell, sym in self.support.items()}
        return Configuration(group, self.alphabet, self.background, moved)

    def pattern(self, cells) -> tuple:
        return tuple(self.symbol_at(c) for c in cells)

    def differing_cells(self, other: "Configuration"):
        if (self.alphabet, self.background) != (other.alphabet, other.background):
            raise ContractError("configurations live in different shift spaces")
        cells = set(self.support) | set(other.support)
        return sorted(
            (c for c in cells if self.symbol_at(c) != other.symbol_at(c)),
            key=self.group.format_elem,
        )

    def __eq__(self, other):
        return (isinstance(other, Configuration)
                and self.alphabet == other.alphabet
                and self.background == other.background
                and self.support == other.support)

    def __hash__(self):
        return self._hash

    def __repr__(self):
        items = ",".join(
            f"{self.group.format_elem(c)}:{s}"
            for c, s in sorted(self.support.items(), key=lambda kv: self.group.format_elem(kv[0]))
        )
        return f"<config {{{items}}} bg={self.background}>"

    def to_jsonable(self):
        return {
            "alphabet": list(self.alphabet),
            "background": self.background,
            "support": [
                [self.group.format_elem(c), s]
                for c, s in sorted(self.support.items(),
                                   key=lambda kv: self.group.format_elem(kv[0]))
            ],
        }

    @classmethod
    def from_jsonable(cls, group: Group, obj) -> "Configuration":
        support = {group.parse_elem(cell): sym for cell, sym in obj["support"]}
        return cls(group, tuple(obj["alphabet"]), obj["background"], support)


def background_configuration(group: Group, alphabet, background=0) -> Configuration:
    return Configuration(group, alphabet, background, {})


def shift_act(h, x: Configuration) -> Configuration:
    return x.translate(h)


def homoclinic_agreement_radius(x: Configuration, y: Configuration,
                                metric: WordMetric) -> int:
    """Least N with x = y outside the ball of radius N (0 when equal)."""
    cells = x.differing_cells(y)
    if not cells:
        return 0
    return max(metric.length(c) for c in cells)


# Backwards-friendly alias used throughout the cocycle layer.
homoclinic_N = homoclinic_agreement_radius


def agree_on_ball(x: Configuration, y: Configuration, radius: int,
                  metric: WordMetric) -> bool:
    """Whether x and y coincide on the closed ball of the given radius."""
    return all(metric.length(c) > radius for c in x.differing_cells(y))


# ---------------------------------------------------------------------------
# Subshift descriptions
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class FullShift:
    alphabet: tuple

    def __post_init__(self):
        object.__setattr__(self, "alphabet", tuple(self.alphabet))


@dataclass(frozen=True)
class GoldenMean:
    """Configurations where every translate of each family contains a zero."""

    alphabet: tuple
    families: tuple  # non-empty finite subsets of the group

    def __post_init__(self):
        object.__setattr__(self, "alphabet", tuple(self.alphabet))
        fams = tuple(tuple(f) for f in self.families)
        if not fams or any(len(f) == 0 for f in fams):
            raise ContractError("each constraint family must be non-empty")
        if 0 not in self.alphabet:
            raise ContractError("golden-mean constraints need the symbol 0")
        object.__setattr__(self, "families", fams)


def membership_check(x: Configuration, spec, window=None) -> bool:
    """Check membership of a finitely supported configuration.

    Full shifts always pass.  For golden-mean constraints only the translates
    meeting the support can fail: outside support*F^-1 every family window
    contains a background cell, and the background is 0.  A supplied window
    must cover that set.
    """
    if isinstance(spec, FullShift):
        if x.alphabet != spec.alphabet:
            raise ContractError("alphabet mismatch")
        return True
    if not isinstance(spec, GoldenMean):
        raise ContractError(f"unknown subshift description {spec!r}")
    if x.alphabet != spec.alphabet:
        raise ContractError("alphabet mismatch")
    if x.background != 0:
        raise ContractError("golden-mean membership needs background 0")
    group = x.group
    required = set()
    for family in spec.families:
        for cell in x.support:
            for f in family:
                required.add(group.mul(cell, group.inv(f)))
    if window is not None:
        window = set(window)
        missing = required - window
        if missing:
            raise ContractError(
                f"window misses {len(missing)} constraint translates near the support"
            )
        centers = window
    else:
        centers = required
    for g in centers:
        for family in spec.families:
            if all(x.symbol_at(group.mul(g, f)) != 0 for f in family):
                return False
    return True


def default_specification_constants(spec, metric: WordMetric):
    """Gluing constants: full shifts need none; golden-mean constraints get a
    buffer of twice the largest family radius so no window straddles both
    copied regions outside the agreement ball."""
    if isinstance(spec, FullShift):
        return 1.0, 0.0
    if isinstance(spec, GoldenMean):
        reach = max(metric.length(f) for fam in spec.families for f in fam)
        return 1.0, 2.0 * reach
    raise ContractError(f"unknown subshift description {spec!r}")


# ---------------------------------------------------------------------------
# Cones and gluing
# ---------------------------------------------------------------------------

class ConeParams:
    """Cone data for an anchor element: the k-th cone piece is
    a^(+-k) * B(floor(rho(k)/4) + R).

    Membership tests are decidable because the certified compression lower
    bound caps how far a piece of the cone can reach back toward the identity.
    """

    def __init__(self, group: Group, anchor, radius_R: int,
                 profile: CompressionProfile, s_prime: float = 1.0,
                 t_prime: float = 0.0, metric: WordMetric | None = None):
        if radius_R < 0:
            raise ContractError("cone radius parameter must be >= 0")
        if s_prime < 1.0 or t_prime < 0.0:
            raise ContractError("specification constants need s' >= 1, t' >= 0")
        group.validate(anchor)
        self.group = group
        self.anchor = anchor
        self.R = radius_R
        self.profile = profile
        self.s_prime = s_prime
        self.t_prime = t_prime
        self.metric = metric or WordMetric(group)
        self.anchor_length = self.metric.length(anchor)
        self.lower_bound = profile.lower_bound
        self._powers = {0: group.identity}

    @classmethod
    def create(cls, group: Group, anchor, radius_R: int,
               s_prime: float = 1.0, t_prime: float = 0.0,
               metric: WordMetric | None = None,
               max_query_length: int = 64,
               profile_radius: int | None = None) -> "ConeParams":
        """Build cone data with a profile sized for queries up to the given
        word length (exact compressions are needed along the whole cone)."""
        metric = metric or WordMetric(group)
        bound = group.compression_lower_bound(anchor)
        anchor_length = metric.length(anchor)
        if profile_radius is None:
            slope = bound.linear_slope()
            if slope is None:
                raise ContractError(
                    "anchor without a linear certified bound needs an explicit "
                    "profile_radius to truncate cone searches"
                )
            deepest = (4 * (max_query_length + radius_R)) // (3 * slope) + 2
            profile_radius = max(4 * radius_R + 2 * anchor_length,
                                 anchor_length * deepest, 4)
        profile = build_profile(group, anchor, profile_radius)
        return cls(group, anchor, radius_R, profile, s_prime, t_prime, metric)

    def _power(self, j: int):
        if j not in self._powers:
            prev = self._power(j - 1) if j > 0 else self._power(j + 1)
            step = self.anchor if j > 0 else self.group.inv(self.anchor)
            self._powers[j] = self.group.mul(prev, step)
        return self._powers[j]

    def piece_radius(self, j: int) -> int:
        """floor(rho(j)/4) + R for the j-th cone piece."""
        return self.profile.quarter_floor(j) + self.R

    def cone_contains(self, k, sign: str) -> bool:
        """Whether k lies in the union of the signed cone pieces."""
        if sign not in ("+", "-"):
            raise ContractError("sign must be '+' or '-'")
        group = self.group
        length = self.metric.length(k)
        j = 0
        while True:
            hat = self.lower_bound.value(j)
            if 3 * hat > 4 * (length + self.R):
                return False
            power = self._power(-j if sign == "+" else j)
            if self.metric.length(group.mul(power, k)) <= self.piece_radius(j):
                return True
            j += 1

    def overlap_window_bound(self) -> int:
        """Radius certified to contain the intersection of the two cones."""
        return self.anchor_length * self.profile.rho_inverse(4 * self.R) + 2 * self.R

    def specification_ball_radius(self) -> int:
        """Agreement radius under which gluing is guaranteed to succeed."""
        rho_inv = self.profile.rho_inverse(4 * self.R)
        return math.ceil(self.s_prime * self.anchor_length * rho_inv
                         + 2 * self.R + self.t_prime)


def cone_membership(k, params: ConeParams, sign: str) -> bool:
    """Function form of ConeParams.cone_contains."""
    return params.cone_contains(k, sign)


@dataclass(frozen=True)
class GlueResult:
    y: Configuration
    n_spec: int
    plus_agrees: bool   # y matches x on the whole + cone
    minus_agrees: bool  # y matches x' on the whole - cone


def glue(x: Configuration, x_prime: Configuration, params: ConeParams,
         check: bool = True) -> GlueResult:
    """Splice two homoclinic configurations along the anchor cones.

    The output copies x on the + cone, x' on the - cone, and is background
    elsewhere.  The construction needs the inputs to agree on the cone
    overlap; agreement on the ball of radius specification_ball_radius()
    is the certified sufficient condition, and any input pair whose
    differences avoid both cones simultaneously is accepted.
    """
    if x.group is not params.group:
        raise ContractError("configurations and cone data use different groups")
    for cell in x.differing_cells(x_prime):
        if params.cone_contains(cell, "+") and params.cone_contains(cell, "-"):
            raise ContractError(
                "inputs disagree at "
                f"{params.group.format_elem(cell)} inside the cone overlap; "
                "they must agree on the ball of radius "
                f"{params.specification_ball_radius()}"
            )
    support = {}
    for cell, sym in x.support.items():
        if params.cone_contains(cell, "+"):
            support[cell] = sym
    for cell, sym in x_prime.support.items():
        if params.cone_contains(cell, "-"):
            if cell in support and support[cell] != sym:
                raise AssertionError(
                    "cone overlap inconsistency after the agreement check; "
                    "the specification constants s', t' are too small"
                )
            support[cell] = sym
    y = Configuration(x.group, x.alphabet, x.background, support)
    plus_ok = minus_ok = True
    if check:
        plus_ok = all(not params.cone_contains(c, "+") for c in x.differing_cells(y))
        minus_ok = all(not params.cone_contains(c, "-") for c in x_prime.differing_cells(y))
        if not (plus_ok and minus_ok):
            raise AssertionError(
                "glued configuration fails a cone agreement check; "
                "the specification constants s', t' are too small"
            )
    return GlueResult(y, params.specification_ball_radius(), plus_ok, minus_ok)
