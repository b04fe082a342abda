"""Divergence of point pairs past forbidden balls, and the divergence
function of a group over a sampled window.

The forbidden region around the obstacle c is the *open* ball
{h : d(c,h) < radius}, so radius 0 forbids nothing.  Searches run inside a
window ball centred at the identity; window restriction only removes paths,
so finite answers are window-exact upper bounds for the ambient graph and
infinity is only certified where removing the obstacle provably disconnects
the whole group (currently: the rank-one lattice with an interior obstacle).
"""

from __future__ import annotations

import math
import statistics
from collections import deque
from dataclasses import dataclass

from .groups import (
    BallTable,
    Group,
    GroupError,
    IntegerLattice,
    WordMetric,
    enumerate_ball,
)

FINITE = "finite"
WINDOW_DISCONNECTED = "window_disconnected"
INFINITE = "infinite"


@dataclass(frozen=True)
class DivergenceQuery:
    group: Group
    a: tuple
    b: tuple
    c: tuple
    window_radius: int
    forbidden_radius: int


def make_query(group: Group, a, b, c, window_radius: int,
               metric: WordMetric | None = None) -> DivergenceQuery:
    """Compute the obstacle radius max(0, floor(d(c,{a,b})/2) - 2) exactly."""
    for x in (a, b, c):
        group.validate(x)
    if c == a or c == b:
        raise GroupError("obstacle must differ from both endpoints")
    metric = metric or WordMetric(group)
    d = min(metric.distance(c, a), metric.distance(c, b))
    radius = max(0, d // 2 - 2)
    return DivergenceQuery(group, a, b, c, window_radius, radius)


@dataclass(frozen=True)
class PathSearchResult:
    outcome: str                 # FINITE | WINDOW_DISCONNECTED | INFINITE
    length: int | None = None
    path: tuple | None = None    # vertex path witness for finite outcomes

    @property
    def value(self) -> float:
        if self.outcome == FINITE:
            return float(self.length)
        return math.inf


def _certified_disconnection(query: DivergenceQuery) -> bool:
    """True when removing the forbidden set provably disconnects the group."""
    group = query.group
    if not (isinstance(group, IntegerLattice) and group.dimension == 1):
        return False
    if query.forbidden_radius < 1:
        return False
    a, b, c = query.a[0], query.b[0], query.c[0]
    return min(a, b) < c < max(a, b)


def avoidant_shortest_path(query: DivergenceQuery,
                           table: BallTable | None = None,
                           max_elements: int | None = None) -> PathSearchResult:
    """Exact shortest path from a to b inside the window, off the obstacle."""
    group = query.group
    if table is None or table.radius < query.window_radius:
        table = enumerate_ball(group, query.window_radius, max_elements)
    window = query.window_radius
    for x in (query.a, query.b, query.c):
        length = table.length(x)
        if length is None or length > window:
            raise GroupError("query points must lie inside the window ball")

    forbidden = set()
    if query.forbidden_radius >= 1:
        inner = enumerate_ball(group, query.forbidden_radius - 1, max_elements)
        forbidden = {group.mul(query.c, u) for u in inner.order}
    if query.a in forbidden or query.b in forbidden:
        raise GroupError("endpoint inside the forbidden ball; radius formula violated")

    if query.a == query.b:
        return PathSearchResult(FINITE, 0, (query.a,))
    dist = {query.a: 0}
    parent = {}
    frontier = deque([query.a])
    lengths = table.lengths
    while frontier:
        g = frontier.popleft()
        for _, s in group.gens:
            h = group.mul(g, s)
            if h in dist or h in forbidden:
                continue
            length = lengths.get(h)
            if length is None or length > window:
                continue
            dist[h] = dist[g] + 1
            parent[h] = g
            if h == query.b:
                path = [h]
                while path[-1] != query.a:
                    path.append(parent[path[-1]])
                path.reverse()
                return PathSearchResult(FINITE, dist[h], tuple(path))
            frontier.append(h)
    if _certified_disconnection(query):
        return PathSearchResult(INFINITE)
    return PathSearchResult(WINDOW_DISCONNECTED)


@dataclass(frozen=True)
class PairDivergence:
    """Best sampled divergence of a pair; a lower bound for the supremum."""

    a: tuple
    b: tuple
    value: float                 # math.inf when certified infinite
    witness_c: tuple | None
    window_radius: int
    window_disconnections: int   # obstacles disconnecting within the window only


def div_pair(group: Group, a, b, obstacles, window_radius: int,
             table: BallTable | None = None,
             metric: WordMetric | None = None,
             max_elements: int | None = None) -> PairDivergence:
    """Maximise the avoidant distance over the sampled obstacle set."""
    metric = metric or WordMetric(group)
    if table is None:
        table = enumerate_ball(group, window_radius, max_elements)
    best = -1
    witness = None
    window_cuts = 0
    for c in obstacles:
        if c == a or c == b:
            continue
        query = make_query(group, a, b, c, window_radius, metric)
        result = avoidant_shortest_path(query, table)
        if result.outcome == INFINITE:
            return PairDivergence(a, b, math.inf, c, window_radius, window_cuts)
        if result.outcome == WINDOW_DISCONNECTED:
            window_cuts += 1
            continue
        if result.length > best:
            best = result.length
            witness = c
    if witness is None:
        raise GroupError("no usable obstacle produced a finite search")
    return PairDivergence(a, b, float(best), witness, window_radius, window_cuts)


def geodesic_points(group: Group, a, b, metric: WordMetric):
    """Vertices of a canonical geodesic from a to b, endpoints included."""
    word = metric.geodesic_word(group.mul(group.inv(a), b))
    points = [a]
    cur = a
    for label in word:
        cur = group.mul(cur, group.gen(label))
        points.append(cur)
    return points


def default_obstacles(group: Group, a, b, table: BallTable, rng,
                      metric: WordMetric, sample_budget: int = 10):
    """Obstacles on a geodesic between the endpoints plus seeded window samples."""
    obstacles = [p for p in geodesic_points(group, a, b, metric) if p not in (a, b)]
    pool = [g for g in table.order if g not in (a, b)]
    for _ in range(sample_budget):
        if not pool:
            break
        obstacles.append(pool[rng.randrange(len(pool))])
    seen = set()
    unique = []
    for c in obstacles:
        if c not in seen:
            seen.add(c)
            unique.append(c)
    return unique


@dataclass(frozen=True)
class DivergenceRow:
    n: int
    value: float
    witness_a: tuple
    witness_b: tuple
    witness_c: tuple | None
    window_radius: int


def div_function(group: Group, n_max: int, *, window_factor: int = 4,
                 sample_budget: int = 10, pairs_per_n: int = 2, seed: int = 0,
                 n_min: int = 2, rng=None,
                 max_elements: int | None = None):
    """Sampled divergence function: for each n, the best pair with d(a,b) <= n.

    Rows are cumulative maxima (pairs at distance <= n include all smaller
    distances), so the sequence is non-decreasing by construction.
    """
    import random

    if rng is None:
        rng = random.Random(seed)
    metric = WordMetric(group)
    rows = []
    best_so_far = None
    for n in range(n_min, n_max + 1):
        window_radius = window_factor * n
        table = enumerate_ball(group, window_radius, max_elements)
        pairs = [_axis_pair(group, n)]
        for _ in range(max(0, pairs_per_n - 1)):
            pairs.append(_random_pair(group, n, table, rng))
        best_row = None
        for a, b in pairs:
            obstacles = default_obstacles(group, a, b, table, rng, metric, sample_budget)
            pair = div_pair(group, a, b, obstacles, window_radius, table, metric)
            if best_row is None or pair.value > best_row.value:
                best_row = DivergenceRow(n, pair.value, a, b, pair.witness_c,
                                         window_radius)
        if best_so_far is not None and best_so_far.value > best_row.value:
            best_row = DivergenceRow(n, best_so_far.value, best_so_far.witness_a,
                                     best_so_far.witness_b, best_so_far.witness_c,
                                     window_radius)
        best_so_far = best_row
        rows.append(best_row)
        if best_row.value == math.inf:
            # Later rows can only repeat the certified-infinite witness.
            for m in range(n + 1, n_max + 1):
                rows.append(DivergenceRow(m, math.inf, best_row.witness_a,
                                          best_row.witness_b, best_row.witness_c,
                                          window_factor * m))
            break
    return rows


def _axis_pair(group: Group, n: int):
    """Canonical pair at distance n spread along the first generator."""
    g = group.gens[0][1]
    return group.power(g, -(n // 2)), group.power(g, n - n // 2)


def _random_pair(group: Group, n: int, table: BallTable, rng):
    """Seeded pair at distance close to n, balanced around the identity."""
    for distance in range(n, 1, -1):
        sphere = table.elements_of_length(distance)
        if sphere:
            w = sphere[rng.randrange(len(sphere))]
            word = table.geodesic_word(w)
            mid = len(word) // 2
            prefix = group.eval_word(word[:mid])
            suffix = group.eval_word(word[mid:])
            return group.inv(prefix), suffix
    return _axis_pair(group, n)


@dataclass(frozen=True)
class GrowthFit:
    """Descriptive log-log fit of a divergence sequence; no asymptotic claim."""

    degree: float            # least-squares slope of log(value) against log(n)
    subexp_statistic: float  # max over n of log(value)/n
    points_used: int


def classify_growth(ns, values) -> GrowthFit:
    pairs = [(n, v) for n, v in zip(ns, values)
             if math.isfinite(v) and v > 0 and n > 0]
    if len(pairs) < 4:
        raise GroupError("growth fit needs at least 4 finite positive points")
    xs = [math.log(n) for n, _ in pairs]
    ys = [math.log(v) for _, v in pairs]
    fit = statistics.linear_regression(xs, ys)
    stat = max(math.log(v) / n for n, v in pairs)
    return GrowthFit(degree=fit.slope, subexp_statistic=stat, points_used=len(pairs))
