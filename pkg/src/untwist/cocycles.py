"""Cocycles over shift spaces with certified holonomy limits, transfer-map
construction, and homomorphism extraction.

A cocycle is specified by one finite-window block map per generator; values
on arbitrary elements are derived along canonical geodesic words, with
relation checks as the well-definedness gate.  Every truncated limit comes
with a rigorous tail bound computed from the anchor's certified compression
lower bound.
"""

from __future__ import annotations

import itertools
import math
import statistics
from dataclasses import dataclass

from .groups import Group, WordMetric, parse_group
from .shifts import Configuration, glue, homoclinic_N
from .targets import TargetGroup, describe_target, target_from_description


class CocycleError(ValueError):
    """Invalid cocycle specification or unsupported request."""


class VerificationError(RuntimeError):
    """An extraction or consistency check exceeded its tolerance."""

    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report


def canonical_cells(metric: WordMetric, window: int):
    """Deterministic ordering of the ball of the given radius."""
    ball = metric.ball(window)
    fmt = metric.group.format_elem
    return tuple(sorted(
        (g for g, length in ball.lengths.items() if length <= window),
        key=lambda g: (ball.lengths[g], fmt(g)),
    ))


class BlockMap:
    """Map from configurations to a target group through a finite window.

    Backed either by an explicit pattern table or by a function with a
    declared range-diameter bound; the diameter feeds the derived geometric
    continuity constants, so it must over-approximate the true range spread.
    """

    def __init__(self, target: TargetGroup, cells, window: int, table=None,
                 fn=None, diameter_bound: float | None = None):
        if (table is None) == (fn is None):
            raise CocycleError("exactly one of table/fn must be given")
        self.target = target
        self.cells = tuple(cells)
        self.window = window
        self.table = dict(table) if table is not None else None
        self.fn = fn
        if self.table is not None:
            self.diameter_bound = (self._table_diameter()
                                   if diameter_bound is None else diameter_bound)
        else:
            if diameter_bound is None:
                raise CocycleError("function-backed block maps need a diameter bound")
            self.diameter_bound = diameter_bound

    def _table_diameter(self) -> float:
        values = list(self.table.values())
        if len(values) <= 1:
            return 0.0
        if len(values) <= 512:
            return max(self.target.dist(u, v)
                       for u, v in itertools.combinations(values, 2))
        base = values[0]
        return 2.0 * max(self.target.dist(base, v) for v in values)

    def apply(self, symbol_at):
        """Evaluate on any cell -> symbol lookup."""
        pattern = tuple(symbol_at(c) for c in self.cells)
        if self.table is not None:
            try:
                return self.table[pattern]
            except KeyError:
                raise CocycleError(f"pattern {pattern!r} missing from table") from None
        return self.fn(pattern)

    def value(self, x: Configuration):
        return self.apply(x.symbol_at)

    def tabulated(self, alphabet, limit: int = 65536) -> "BlockMap":
        """Materialise an explicit table over all patterns (exact diameter)."""
        if self.table is not None:
            return self
        n_patterns = len(alphabet) ** len(self.cells)
        if n_patterns > limit:
            raise CocycleError(
                f"{n_patterns} patterns exceed the tabulation limit {limit}")
        table = {}
        for pattern in itertools.product(alphabet, repeat=len(self.cells)):
            table[pattern] = self.fn(pattern)
        return BlockMap(self.target, self.cells, self.window, table=table)


class CocycleSpec:
    """Generator block maps into a bi-invariant metric target group."""

    def __init__(self, group: Group, target: TargetGroup, alphabet,
                 background, generator_maps: dict, rate: float = 0.5,
                 metric: WordMetric | None = None):
        if not 0.0 < rate < 1.0:
            raise CocycleError("geometric rate must lie in (0, 1)")
        self.group = group
        self.target = target
        self.alphabet = tuple(alphabet)
        self.background = background
        self.metric = metric or WordMetric(group)
        self.rate = rate
        self.maps = dict(generator_maps)
        labels = {lab for lab, _ in group.gens}
        missing = labels - set(self.maps)
        if missing:
            raise CocycleError(f"missing generator block maps: {sorted(missing)}")
        # Continuity constants: a window-w map moves by at most its range
        # diameter, and agreement on B(n >= w) pins it, so D * r^-w works.
        self.constant_by_label = {
            lab: bm.diameter_bound * rate ** (-bm.window)
            for lab, bm in self.maps.items()
        }
        self.holder_constant = max(self.constant_by_label.values())
        self._background_config = Configuration(group, self.alphabet, background, {})
        self._word_cache = {}

    def background_config(self) -> Configuration:
        return self._background_config

    def generator_value(self, label: str, x: Configuration):
        return self.maps[label].value(x)

    def holder_constants(self, g):
        """(C_g, r) with d(c(g,x), c(g,y)) <= C_g * r**n for agreement on B(n)."""
        k = self.metric.length(g)
        r = self.rate
        C_g = self.holder_constant * sum(r ** (-i) for i in range(k))
        return C_g, r

    def evaluate_word(self, labels, x: Configuration):
        """Cocycle value along an explicit generator word (left-to-right)."""
        group, target = self.group, self.target
        factors = []
        state = x
        for lab in reversed(labels):
            factors.append(self.generator_value(lab, state))
            state = state.translate(group.gen(lab))
        acc = target.identity
        for h in reversed(factors):
            acc = target.mul(acc, h)
        return acc

    def evaluate(self, g, x: Configuration):
        """Cocycle value at g along the canonical geodesic word."""
        if g == self.group.identity:
            return self.target.identity
        word = self._word_cache.get(g)
        if word is None:
            word = self.metric.geodesic_word(g)
            self._word_cache[g] = word
        return self.evaluate_word(word, x)


def relation_consistency(spec: CocycleSpec, samples, element_pairs=()) -> float:
    """Well-definedness gate: a true cocycle evaluates identically along any
    two words with the same product and satisfies the composition identity.
    Returns the largest observed discrepancy."""
    group, target = spec.group, spec.target
    worst = 0.0
    word_pairs = group.defining_relation_word_pairs()
    for x in samples:
        for w1, w2 in word_pairs:
            worst = max(worst, target.dist(spec.evaluate_word(w1, x),
                                           spec.evaluate_word(w2, x)))
        for g, h in element_pairs:
            lhs = spec.evaluate(group.mul(g, h), x)
            rhs = target.mul(spec.evaluate(g, x.translate(h)), spec.evaluate(h, x))
            worst = max(worst, target.dist(lhs, rhs))
    return worst


# ---------------------------------------------------------------------------
# Holonomy limits with certified tails
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class HolonomyCertificate:
    anchor: str
    sign: str
    n_used: int
    tail_bound: float
    agreement_radius: int
    holder_constant: float
    rate: float
    lower_bound: str
    epsilon: float

    def to_jsonable(self):
        return {
            "anchor": self.anchor, "sign": self.sign, "n_used": self.n_used,
            "tail_bound": self.tail_bound,
            "agreement_radius": self.agreement_radius,
            "holder_constant": self.holder_constant, "rate": self.rate,
            "lower_bound": self.lower_bound, "epsilon": self.epsilon,
        }


def partial_product(spec: CocycleSpec, g, x: Configuration, y: Configuration,
                    n: int, sign: str = "+"):
    """Truncated holonomy comparison of the forward (or backward) orbits.

    The '+' product multiplies the inverted values along g^j for j = 0..n-1;
    the '-' product multiplies plain values along g^-j for j = 1..n-1.
    """
    if n < 1:
        raise CocycleError("partial products need n >= 1")
    group, target = spec.group, spec.target
    if sign == "+":
        step, start, count, invert = g, 0, n, True
    elif sign == "-":
        step, start, count, invert = group.inv(g), 1, n - 1, False
    else:
        raise CocycleError("sign must be '+' or '-'")
    px = target.identity
    py = target.identity
    cx, cy = x, y
    if start == 1:
        cx, cy = cx.translate(step), cy.translate(step)
    for _ in range(count):
        fx = spec.evaluate(g, cx)
        fy = spec.evaluate(g, cy)
        if invert:
            fx, fy = target.inv(fx), target.inv(fy)
        px = target.mul(px, fx)
        py = target.mul(py, fy)
        cx, cy = cx.translate(step), cy.translate(step)
    return target.mul(px, target.inv(py))


def holonomy(spec: CocycleSpec, g, x: Configuration, y: Configuration,
             epsilon: float = 1e-8, sign: str = "+",
             max_factors: int = 1_000_000):
    """Holonomy limit between homoclinic points, with a certified tail.

    Returns (value, certificate); the certificate's tail bound dominates the
    distance from any longer truncation (and from the limit).  Discrete
    targets with epsilon < 1/2 therefore receive the exact limit.
    """
    group = spec.group
    if g == group.identity:
        raise CocycleError("holonomy needs an infinite-order anchor")
    bound = group.compression_lower_bound(g)
    fmt = group.format_elem(g)
    if x == y:
        cert = HolonomyCertificate(fmt, sign, 0, 0.0, 0, 0.0, spec.rate,
                                   bound.describe(), epsilon)
        return spec.target.identity, cert
    agreement = homoclinic_N(x, y, spec.metric)
    C_g, r = spec.holder_constants(g)
    if C_g == 0.0:
        value = partial_product(spec, g, x, y, 1, sign)
        cert = HolonomyCertificate(fmt, sign, 1, 0.0, agreement, 0.0, r,
                                   bound.describe(), epsilon)
        return value, cert
    c_prime = C_g * r ** (-(agreement + 1))
    n = 1
    while c_prime * bound.tail(r, n) >= epsilon:
        n *= 2
        if n > max_factors:
            raise CocycleError(
                "tail cannot be certified below epsilon within the factor budget"
            )
    tail = c_prime * bound.tail(r, n)
    value = partial_product(spec, g, x, y, n, sign)
    cert = HolonomyCertificate(fmt, sign, n, tail, agreement, C_g, r,
                               bound.describe(), epsilon)
    return value, cert


def holonomy_identity_check(spec: CocycleSpec, g, triples,
                            epsilon: float = 1e-8) -> float:
    """Largest composition defect d(h(x,y)h(y,z), h(x,z)) over the triples."""
    target = spec.target
    worst = 0.0
    for x, y, z in triples:
        hxy, _ = holonomy(spec, g, x, y, epsilon)
        hyz, _ = holonomy(spec, g, y, z, epsilon)
        hxz, _ = holonomy(spec, g, x, z, epsilon)
        worst = max(worst, target.dist(target.mul(hxy, hyz), hxz))
    return worst


def plus_minus_agree(spec: CocycleSpec, g, pairs, epsilon: float = 1e-8) -> float:
    """Largest distance between forward and backward holonomies."""
    worst = 0.0
    for x, y in pairs:
        plus, _ = holonomy(spec, g, x, y, epsilon, sign="+")
        minus, _ = holonomy(spec, g, x, y, epsilon, sign="-")
        worst = max(worst, spec.target.dist(plus, minus))
    return worst


def generator_independence(spec: CocycleSpec, g, h, pairs,
                           epsilon: float = 1e-8) -> float:
    """Largest distance between holonomies computed through two anchors.

    Only meaningful over one-ended groups whose divergence grows
    sub-exponentially; other models are refused.
    """
    group = spec.group
    if group.ends != "one" or not group.subexponential_divergence:
        raise CocycleError(
            f"{group.name} is not declared one-ended with sub-exponential "
            "divergence; anchor independence is not guaranteed"
        )
    worst = 0.0
    for x, y in pairs:
        via_g, _ = holonomy(spec, g, x, y, epsilon)
        via_h, _ = holonomy(spec, h, x, y, epsilon)
        worst = max(worst, spec.target.dist(via_g, via_h))
    return worst


@dataclass(frozen=True)
class DecayRow:
    R: int
    n_spec: int
    observed: float
    via_witness: float
    bound: float
    pairs: int


def specification_decay(spec: CocycleSpec, g, params_by_R: dict,
                        pairs_by_R: dict, epsilon: float = 1e-8):
    """Holonomy decay against the agreement radius.

    For pairs agreeing on the gluing ball of each R, both the direct
    holonomy distance to the identity and the glued-witness decomposition
    must stay below 2 * C_g * r**R * sum_j r**floor(rho(j)/4).
    """
    target = spec.target
    C_g, r = spec.holder_constants(g)
    rows = []
    for R in sorted(params_by_R):
        params = params_by_R[R]
        profile = params.profile
        series = sum(r ** profile.quarter_floor(j)
                     for j in range(0, profile.j_max + 1))
        series += profile.lower_bound.tail(r ** 0.25, profile.j_max + 1) / r
        bound = 2.0 * C_g * (r ** R) * series
        observed = 0.0
        witness = 0.0
        pairs = pairs_by_R[R]
        for x, xp in pairs:
            direct, _ = holonomy(spec, g, x, xp, epsilon)
            observed = max(observed, target.dist(direct, target.identity))
            y = glue(x, xp, params).y
            minus_part, _ = holonomy(spec, g, x, y, epsilon, sign="-")
            plus_part, _ = holonomy(spec, g, y, xp, epsilon, sign="+")
            witness = max(witness,
                          target.dist(minus_part, target.identity)
                          + target.dist(plus_part, target.identity))
        rows.append(DecayRow(R, params.specification_ball_radius(), observed,
                             witness, bound, len(pairs)))
    return rows


# ---------------------------------------------------------------------------
# Transfer maps and untwisting
# ---------------------------------------------------------------------------

class TransferTable:
    """Memoised transfer map built from holonomies against the background."""

    def __init__(self, spec: CocycleSpec, anchor, epsilon: float = 1e-8):
        spec.group.validate(anchor)
        self.spec = spec
        self.anchor = anchor
        self.epsilon = epsilon
        self.base = spec.background_config()
        self.cache = {}

    def value(self, x: Configuration):
        """(b(x), certificate); normalised so the background maps to e."""
        if x in self.cache:
            return self.cache[x]
        result = holonomy(self.spec, self.anchor, x, self.base, self.epsilon)
        self.cache[x] = result
        return result


def build_transfer(spec: CocycleSpec, anchor, x: Configuration,
                   epsilon: float = 1e-8, table: TransferTable | None = None):
    table = table or TransferTable(spec, anchor, epsilon)
    return table.value(x)


@dataclass
class UntwistReport:
    psi: dict                  # element -> extracted homomorphism value
    constancy_defect: float
    homomorphism_defect: float
    tolerance: float
    epsilon: float
    samples: int

    @property
    def ok(self) -> bool:
        return (self.constancy_defect <= self.tolerance
                and self.homomorphism_defect <= 2 * self.tolerance)


def extract_homomorphism(spec: CocycleSpec, anchor, elements, samples,
                         epsilon: float = 1e-8, tolerance: float = 1e-6,
                         transfer: TransferTable | None = None) -> UntwistReport:
    """Untwist the cocycle through the transfer map and read off psi.

    psi(g) is the first sample's value of b(gx)^-1 c(g,x) b(x); the constancy
    defect measures its dependence on the sample, the homomorphism defect its
    failure to be multiplicative.  A constancy defect above tolerance raises.
    """
    group, target = spec.group, spec.target
    transfer = transfer or TransferTable(spec, anchor, epsilon)
    samples = list(samples)
    if not samples:
        raise CocycleError("need at least one sample configuration")

    def psi_at(g, x):
        bx, _ = transfer.value(x)
        bgx, _ = transfer.value(x.translate(g))
        return target.mul(target.inv(bgx), target.mul(spec.evaluate(g, x), bx))

    psi = {}
    constancy = 0.0
    for g in elements:
        first = psi_at(g, samples[0])
        psi[g] = first
        for x in samples[1:]:
            constancy = max(constancy, target.dist(psi_at(g, x), first))
    hom_defect = 0.0
    for g in elements:
        for h in elements:
            product = group.mul(g, h)
            if product not in psi:
                psi[product] = psi_at(product, samples[0])
            hom_defect = max(hom_defect,
                             target.dist(target.mul(psi[g], psi[h]), psi[product]))
    report = UntwistReport(psi, constancy, hom_defect, tolerance, epsilon,
                           len(samples))
    if constancy > tolerance:
        raise VerificationError(
            f"transfer quotient is not constant: defect {constancy} exceeds "
            f"{tolerance} (non-cocycle input or epsilon too large)",
            report=report,
        )
    return report


@dataclass(frozen=True)
class HolderModulusRow:
    agreement_radius: int
    max_distance: float
    pairs: int


@dataclass(frozen=True)
class HolderModulusReport:
    rows: tuple
    fitted_rate: float
    fitted_scale: float
    zero_floor: float


def holder_modulus(transfer: TransferTable, pairs_by_N: dict) -> HolderModulusReport:
    """Geometric-decay fit for the transfer map.

    Refuses anchors without a certified linear compression lower bound: for
    those the transfer map is only guaranteed continuous, and a geometric
    modulus cannot be claimed.
    """
    spec = transfer.spec
    bound = spec.group.compression_lower_bound(transfer.anchor)
    if bound.linear_slope() is None:
        raise CocycleError(
            f"anchor {spec.group.format_elem(transfer.anchor)} has no certified "
            "linear compression bound; refusing a geometric-modulus fit"
        )
    target = spec.target
    zero_floor = 2.0 * transfer.epsilon
    rows = []
    for N in sorted(pairs_by_N):
        worst = 0.0
        pairs = pairs_by_N[N]
        for x, y in pairs:
            bx, _ = transfer.value(x)
            by, _ = transfer.value(y)
            worst = max(worst, target.dist(bx, by))
        rows.append(HolderModulusRow(N, worst, len(pairs)))
    points = [(row.agreement_radius, math.log(row.max_distance))
              for row in rows if row.max_distance > zero_floor]
    if len(points) >= 2:
        fit = statistics.linear_regression([p[0] for p in points],
                                           [p[1] for p in points])
        rate = math.exp(fit.slope)
        scale = math.exp(fit.intercept)
    else:
        rate = 0.0
        scale = math.exp(points[0][1]) if points else 0.0
    return HolderModulusReport(tuple(rows), rate, scale, zero_floor)


# ---------------------------------------------------------------------------
# Plants: homomorphisms, coboundary twists, linear potentials
# ---------------------------------------------------------------------------

def _value_for_label(group: Group, target: TargetGroup, values: dict, label: str):
    if label in values:
        return values[label]
    inverse = group.inverse_label(label)
    if inverse in values:
        return target.inv(values[inverse])
    raise CocycleError(f"no value supplied for generator {label!r} or its inverse")


def homomorphism_cocycle(group: Group, target: TargetGroup, values: dict,
                         alphabet, background=0, rate: float = 0.5,
                         metric: WordMetric | None = None) -> CocycleSpec:
    """Constant cocycle c(s, .) = phi(s); values given per positive label."""
    metric = metric or WordMetric(group)
    alphabet = tuple(alphabet)
    cells = (group.identity,)
    maps = {}
    for label, _ in group.gens:
        h = _value_for_label(group, target, values, label)
        table = {(sym,): h for sym in alphabet}
        maps[label] = BlockMap(target, cells, 0, table=table)
    return CocycleSpec(group, target, alphabet, background, maps, rate, metric)


def coboundary_cocycle(group: Group, target: TargetGroup, values: dict,
                       potential: BlockMap, alphabet, background=0,
                       rate: float = 0.5, metric: WordMetric | None = None,
                       tabulate_limit: int = 16384) -> CocycleSpec:
    """Twist of a homomorphism by a potential:
    c(s, x) = b(s.x)^-1 * phi(s) * b(x), a cocycle for any block map b."""
    metric = metric or WordMetric(group)
    alphabet = tuple(alphabet)
    window = potential.window + 1
    cells = canonical_cells(metric, window)
    index = {c: i for i, c in enumerate(cells)}

    def potential_value(pattern, positions):
        sub = tuple(pattern[i] for i in positions)
        if potential.table is not None:
            return potential.table[sub]
        return potential.fn(sub)

    maps = {}
    for label, s in group.gens:
        phi_s = _value_for_label(group, target, values, label)
        s_inv = group.inv(s)
        here = tuple(index[c] for c in potential.cells)
        shifted = tuple(index[group.mul(s_inv, c)] for c in potential.cells)

        def fn(pattern, phi_s=phi_s, here=here, shifted=shifted):
            b_x = potential_value(pattern, here)
            b_sx = potential_value(pattern, shifted)
            return target.mul(target.inv(b_sx), target.mul(phi_s, b_x))

        bm = BlockMap(target, cells, window, fn=fn,
                      diameter_bound=2.0 * potential.diameter_bound)
        if len(alphabet) ** len(cells) <= tabulate_limit:
            bm = bm.tabulated(alphabet, tabulate_limit)
        maps[label] = bm
    return CocycleSpec(group, target, alphabet, background, maps, rate, metric)


def weighted_potential(group: Group, metric: WordMetric, target: TargetGroup,
                       window: int, weights: dict, alphabet) -> BlockMap:
    """Linear symbol-weighted potential b(x) = sum_cell x_cell * w_cell.

    Real targets sum componentwise; tori reduce modulo one; cyclic targets
    take integer weights modulo the order.  The declared diameter bound is
    the symbol span times the total weight mass (capped for tori).
    """
    from .targets import FiniteGroup, RealVector, Torus

    cells = canonical_cells(metric, window)
    alphabet = tuple(alphabet)
    span = max(alphabet) - min(alphabet)
    w = {c: weights.get(c) for c in cells if weights.get(c) is not None}
    if isinstance(target, (RealVector, Torus)):
        dim = target.dim
        for c, vec in w.items():
            if len(vec) != dim:
                raise CocycleError(f"weight at {group.format_elem(c)} has wrong dim")

        def fn(pattern):
            total = [0.0] * dim
            for i, c in enumerate(cells):
                vec = w.get(c)
                if vec is None:
                    continue
                for k in range(dim):
                    total[k] += pattern[i] * vec[k]
            if isinstance(target, Torus):
                return target.wrap(total)
            return tuple(total)

        mass = sum(math.sqrt(sum(v * v for v in vec)) for vec in w.values())
        diameter = span * mass
        if isinstance(target, Torus):
            diameter = min(diameter, math.sqrt(dim) / 2.0)
        return BlockMap(target, cells, window, fn=fn, diameter_bound=diameter)
    if isinstance(target, FiniteGroup):
        n = len(target.elements)

        def fn(pattern):
            total = 0
            for i, c in enumerate(cells):
                coeff = w.get(c)
                if coeff is None:
                    continue
                total += pattern[i] * coeff
            return total % n

        return BlockMap(target, cells, window, fn=fn, diameter_bound=1.0)
    raise CocycleError(f"no weighted potential for target {target.name}")


def corrupted_spec(spec: CocycleSpec, label: str, pattern_index: int,
                   new_value) -> CocycleSpec:
    """Copy of a cocycle specification with one table entry replaced
    (negative control for the consistency checks)."""
    bm = spec.maps[label].tabulated(spec.alphabet)
    patterns = sorted(bm.table)
    pattern = patterns[pattern_index % len(patterns)]
    table = dict(bm.table)
    if table[pattern] == new_value:
        raise CocycleError("corruption must change the entry")
    table[pattern] = new_value
    maps = dict(spec.maps)
    maps[label] = BlockMap(spec.target, bm.cells, bm.window, table=table)
    return CocycleSpec(spec.group, spec.target, spec.alphabet, spec.background,
                       maps, spec.rate, spec.metric)


# ---------------------------------------------------------------------------
# Serialisation
# ---------------------------------------------------------------------------

def cocycle_spec_to_jsonable(spec: CocycleSpec, tabulate_limit: int = 65536) -> dict:
    generators = []
    for label, _ in spec.group.gens:
        bm = spec.maps[label].tabulated(spec.alphabet, tabulate_limit)
        generators.append({
            "label": label,
            "window": bm.window,
            "cells": [spec.group.format_elem(c) for c in bm.cells],
            "table": [[list(p), spec.target.to_jsonable_elem(v)]
                      for p, v in sorted(bm.table.items())],
        })
    return {
        "group": spec.group.name,
        "alphabet": list(spec.alphabet),
        "background": spec.background,
        "rate": spec.rate,
        "target": describe_target(spec.target),
        "generators": generators,
    }


def cocycle_spec_from_jsonable(obj, group: Group | None = None,
                               metric: WordMetric | None = None) -> CocycleSpec:
    group = group or parse_group(obj["group"])
    target = target_from_description(obj["target"])
    maps = {}
    for entry in obj["generators"]:
        cells = tuple(group.parse_elem(c) for c in entry["cells"])
        table = {tuple(p): target.from_jsonable_elem(v) for p, v in entry["table"]}
        maps[entry["label"]] = BlockMap(target, cells, int(entry["window"]),
                                        table=table)
    return CocycleSpec(group, target, tuple(obj["alphabet"]), obj["background"],
                       maps, float(obj["rate"]), metric)
