import math
import random

import pytest

from untwist import (
    GroupError,
    InfiniteCyclic,
    IntegerLattice,
    WordMetric,
    classify_growth,
    div_function,
    div_pair,
    make_query,
)
from untwist.divergence import (
    FINITE,
    INFINITE,
    WINDOW_DISCONNECTED,
    avoidant_shortest_path,
    default_obstacles,
    geodesic_points,
)
from untwist.groups import enumerate_ball

from oracles import grid_avoidant_length

Z2 = IntegerLattice(2)
Z = InfiniteCyclic()


def test_forbidden_radius_formula():
    metric = WordMetric(Z2)
    q = make_query(Z2, (-6, 0), (6, 0), (0, 0), 24, metric)
    assert q.forbidden_radius == 1
    q2 = make_query(Z2, (-3, 0), (3, 0), (0, 0), 12, metric)
    assert q2.forbidden_radius == 0  # floor(3/2) - 2 clamps at zero
    q3 = make_query(Z2, (-10, 0), (10, 0), (1, 1), 40, metric)
    assert q3.forbidden_radius == 10 // 2 - 2  # d(c,{a,b}) = min(12, 10)


def test_obstacle_must_differ_from_endpoints():
    with pytest.raises(GroupError):
        make_query(Z2, (0, 0), (6, 0), (0, 0), 24)


def test_grid_example_length_14():
    q = make_query(Z2, (-6, 0), (6, 0), (0, 0), 24)
    result = avoidant_shortest_path(q)
    assert result.outcome == FINITE
    assert result.length == 14
    assert result.length == grid_avoidant_length((-6, 0), (6, 0), (0, 0), 1, 24)


@pytest.mark.parametrize("n", range(6, 15))
def test_axis_pairs_match_grid_oracle(n):
    q = make_query(Z2, (-n, 0), (n, 0), (0, 0), 4 * n)
    result = avoidant_shortest_path(q)
    oracle = grid_avoidant_length((-n, 0), (n, 0), (0, 0), q.forbidden_radius, 4 * n)
    assert result.outcome == FINITE
    assert result.length == oracle


def test_zero_radius_gives_geodesic_distance():
    metric = WordMetric(Z2)
    rng = random.Random(2)
    table = enumerate_ball(Z2, 12)
    elems = list(table.lengths)
    for _ in range(25):
        a, b, c = (rng.choice(elems) for _ in range(3))
        if c in (a, b):
            continue
        q = make_query(Z2, a, b, c, 24, metric)
        if q.forbidden_radius != 0:
            continue
        result = avoidant_shortest_path(q)
        assert result.length == metric.distance(a, b)


def test_path_witness_is_valid():
    q = make_query(Z2, (-6, 0), (6, 0), (0, 0), 24)
    result = avoidant_shortest_path(q)
    path = result.path
    assert path[0] == (-6, 0) and path[-1] == (6, 0)
    assert len(path) - 1 == result.length
    metric = WordMetric(Z2)
    for u, v in zip(path, path[1:]):
        assert metric.distance(u, v) == 1
    for v in path:
        assert metric.distance((0, 0), v) >= q.forbidden_radius
        assert metric.length(v) <= q.window_radius


def test_z_interior_obstacle_infinite():
    q = make_query(Z, (-6,), (6,), (0,), 24)
    assert q.forbidden_radius == 1
    result = avoidant_shortest_path(q)
    assert result.outcome == INFINITE


def test_z_exterior_obstacle_finite():
    q = make_query(Z, (-6,), (6,), (9,), 40)
    result = avoidant_shortest_path(q)
    assert result.outcome == FINITE
    assert result.length == 12


def test_window_disconnected_without_certificate():
    # +cone pair squeezed by a huge obstacle in z^2 with a tiny window
    metric = WordMetric(Z2)
    q = make_query(Z2, (-12, 0), (12, 0), (0, 0), 12, metric)
    result = avoidant_shortest_path(q)
    assert result.outcome in (FINITE, WINDOW_DISCONNECTED)


def test_obstacle_monotonicity():
    # enlarging the forbidden radius never shortens the path
    from untwist.divergence import DivergenceQuery

    lengths = []
    for radius in (0, 1, 2, 3):
        q = DivergenceQuery(Z2, (-8, 0), (8, 0), (0, 0), 32, radius)
        lengths.append(avoidant_shortest_path(q).length)
    assert lengths == sorted(lengths)


def test_window_monotonicity():
    from untwist.divergence import DivergenceQuery

    lengths = []
    for window in (10, 12, 20, 40):
        q = DivergenceQuery(Z2, (-8, 0), (8, 0), (0, 0), window, 2)
        result = avoidant_shortest_path(q)
        if result.outcome == FINITE:
            lengths.append(result.length)
    assert lengths == sorted(lengths, reverse=True) and lengths


def test_div_pair_adjacent_points():
    metric = WordMetric(Z2)
    table = enumerate_ball(Z2, 12)
    rng = random.Random(0)
    obstacles = default_obstacles(Z2, (0, 0), (1, 0), table, rng, metric, 6)
    pair = div_pair(Z2, (0, 0), (1, 0), obstacles, 12, table, metric)
    assert pair.value == 1.0


def test_div_pair_axis_values_in_band():
    metric = WordMetric(Z2)
    rng = random.Random(7)
    for n in (6, 9, 12, 14):
        a, b = (-n, 0), (n, 0)
        table = enumerate_ball(Z2, 4 * n)
        obstacles = default_obstacles(Z2, a, b, table, rng, metric, 10)
        pair = div_pair(Z2, a, b, obstacles, 4 * n, table, metric)
        assert 3 * n - 8 <= pair.value <= 3 * n + 8
        assert pair.witness_c is not None


def test_geodesic_points_cover_segment():
    metric = WordMetric(Z2)
    pts = geodesic_points(Z2, (-3, 0), (3, 0), metric)
    assert pts[0] == (-3, 0) and pts[-1] == (3, 0)
    assert len(pts) == 7


def test_div_function_monotone_and_bounded():
    rows = div_function(Z2, 12, seed=7)
    values = [r.value for r in rows]
    assert values == sorted(values)
    for r in rows:
        assert r.value / r.n <= 4.0


def test_div_function_z_infinite_from_12():
    rows = div_function(Z, 14, seed=3)
    by_n = {r.n: r.value for r in rows}
    assert all(math.isfinite(by_n[n]) for n in range(2, 12))
    assert math.isinf(by_n[12]) and math.isinf(by_n[14])


def test_div_function_heisenberg_small_scale_finite():
    from untwist import DiscreteHeisenberg

    rows = div_function(DiscreteHeisenberg(), 4, window_factor=3, seed=5,
                        sample_budget=4, pairs_per_n=1)
    assert rows and all(math.isfinite(r.value) for r in rows)


def test_classify_growth_synthetic():
    ns = list(range(4, 40))
    linear = classify_growth(ns, [3 * n for n in ns])
    assert abs(linear.degree - 1.0) <= 0.1
    quadratic = classify_growth(ns, [2 * n * n for n in ns])
    assert abs(quadratic.degree - 2.0) <= 0.1
    cubicish = classify_growth(ns, [n ** 1.5 for n in ns])
    assert abs(cubicish.degree - 1.5) <= 0.1


def test_classify_growth_needs_points():
    with pytest.raises(GroupError):
        classify_growth([1, 2, 3], [1.0, 2.0, math.inf])


def test_classify_growth_measured_z2():
    rows = div_function(Z2, 16, seed=7)
    finite = [(r.n, r.value) for r in rows if math.isfinite(r.value)]
    fit = classify_growth([n for n, _ in finite], [v for _, v in finite])
    assert 0.8 <= fit.degree <= 1.3
    assert fit.subexp_statistic <= 1.0
