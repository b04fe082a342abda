import random

import pytest

from untwist import (
    ConeParams,
    Configuration,
    ContractError,
    DiscreteHeisenberg,
    FullShift,
    GoldenMean,
    IntegerLattice,
    WordMetric,
    background_configuration,
    default_specification_constants,
    glue,
    homoclinic_N,
    membership_check,
    shift_act,
)
from untwist.sampling import pair_agreeing_on_ball, seeded_rng

Z2 = IntegerLattice(2)
METRIC = WordMetric(Z2)
A = (0, 1)
A3 = (0, 1, 2)


def cfg(support, alphabet=A):
    return Configuration(Z2, alphabet, 0, support)


# -- configurations and the shift action --------------------------------------

def test_background_entries_are_dropped():
    x = cfg({(1, 0): 1, (2, 2): 0})
    assert x.support == {(1, 0): 1}
    assert x.symbol_at((2, 2)) == 0


def test_symbols_validated():
    with pytest.raises(ContractError):
        cfg({(0, 0): 7})
    with pytest.raises(ContractError):
        Configuration(Z2, A, 9, {})


def test_shift_by_identity_and_background_fixed():
    x = cfg({(0, 0): 1, (3, -1): 1})
    assert shift_act((0, 0), x) == x
    xbar = background_configuration(Z2, A)
    assert shift_act((5, 7), xbar) == xbar


def test_shift_convention():
    x = cfg({(0, 0): 1})
    assert shift_act((1, 0), x).support == {(1, 0): 1}
    # value at k after shifting by h is the value at h^-1 k
    y = shift_act((2, 3), x)
    assert y.symbol_at((2, 3)) == 1
    assert y.symbol_at((0, 0)) == 0


def test_homoclinic_radius():
    x = cfg({(2, 3): 1})
    y = cfg({})
    assert homoclinic_N(x, y, METRIC) == 5
    assert homoclinic_N(x, x, METRIC) == 0
    z = cfg({(2, 3): 1, (7, 0): 1})
    assert homoclinic_N(x, z, METRIC) == 7


def test_homoclinic_radius_differing_symbols_on_shared_cell():
    x = Configuration(Z2, A3, 0, {(1, 1): 1})
    y = Configuration(Z2, A3, 0, {(1, 1): 2})
    assert homoclinic_N(x, y, METRIC) == 2


def test_shift_equivariance_inequality():
    rng = seeded_rng(4)
    from untwist.sampling import random_configuration

    for _ in range(30):
        x = random_configuration(Z2, METRIC, A, rng, 6, 3)
        y = random_configuration(Z2, METRIC, A, rng, 6, 3)
        h = (rng.randrange(-3, 4), rng.randrange(-3, 4))
        lhs = homoclinic_N(shift_act(h, x), shift_act(h, y), METRIC)
        assert lhs <= homoclinic_N(x, y, METRIC) + METRIC.length(h)


def test_any_pattern_on_ball_realizable():
    # finite-support points are dense: any ball pattern is realised by one
    ball = METRIC.ball(2)
    rng = seeded_rng(9)
    cells = list(ball.order)
    for _ in range(20):
        pattern = {c: rng.choice(A) for c in cells}
        x = cfg({c: s for c, s in pattern.items() if s != 0})
        assert all(x.symbol_at(c) == pattern[c] for c in cells)


# -- cones ---------------------------------------------------------------------

def make_params(R, anchor=(1, 0), s=1.0, t=0.0, L=64):
    return ConeParams.create(Z2, anchor, R, s, t, METRIC, max_query_length=L)


def test_identity_in_both_cones():
    params = make_params(0)
    assert params.cone_contains((0, 0), "+")
    assert params.cone_contains((0, 0), "-")


def test_axis_in_plus_cone():
    params = make_params(0)
    for j in range(12):
        assert params.cone_contains((j, 0), "+")
    assert not params.cone_contains((-1, 0), "+")
    assert params.cone_contains((-1, 0), "-")


def test_cone_intersection_within_bound_exhaustive():
    for R in (0, 1, 2, 4):
        params = make_params(R, L=40)
        bound = params.overlap_window_bound()
        table = METRIC.ball(20)
        for g in table.order:
            if table.lengths[g] > 20:
                continue
            if params.cone_contains(g, "+") and params.cone_contains(g, "-"):
                assert METRIC.length(g) <= bound
        # the bound equals l(a) * rho_inverse(4R) + 2R
        assert bound == params.profile.rho_inverse(4 * R) + 2 * R


def test_spec_ball_radius_full_shift():
    # rho(j) = j for the axis anchor, so N = 4R + 2R
    for R in (0, 1, 2, 4):
        params = make_params(R)
        assert params.specification_ball_radius() == 6 * R


def test_heisenberg_cone_needs_profile_radius():
    heis = DiscreteHeisenberg()
    with pytest.raises(ContractError):
        ConeParams.create(heis, (0, 0, 1), 1)  # central anchor: no linear bound
    params = ConeParams.create(heis, (0, 0, 1), 0, profile_radius=10)
    assert params.cone_contains((0, 0, 0), "+")


# -- gluing ----------------------------------------------------------------------

def test_glue_identical_inputs():
    params = make_params(2)
    x = cfg({(4, 0): 1, (-4, 0): 1})
    result = glue(x, x, params)
    for cell in list(x.support) + [(0, 0), (9, 9)]:
        in_plus = params.cone_contains(cell, "+")
        in_minus = params.cone_contains(cell, "-")
        if in_plus:
            assert result.y.symbol_at(cell) == x.symbol_at(cell)
        if in_minus:
            assert result.y.symbol_at(cell) == x.symbol_at(cell)
        if not in_plus and not in_minus:
            assert result.y.symbol_at(cell) == 0


def test_glue_backgrounds():
    params = make_params(2)
    xbar = background_configuration(Z2, A)
    assert glue(xbar, xbar, params).y == xbar


def test_glue_spec_example():
    params = make_params(2)
    x = cfg({(5, 0): 1})
    xp = cfg({(-5, 0): 1})
    result = glue(x, xp, params)
    assert result.y.symbol_at((5, 0)) == 1
    assert result.y.symbol_at((-5, 0)) == 1
    assert result.plus_agrees and result.minus_agrees


def test_glue_rejects_overlap_disagreement():
    params = make_params(0)
    x = cfg({(0, 0): 1})
    xp = cfg({})
    with pytest.raises(ContractError):
        glue(x, xp, params)


def test_glue_accepts_pairs_agreeing_on_spec_ball():
    rng = seeded_rng(13)
    for R in (0, 2, 4):
        params = make_params(R, L=80)
        N = params.specification_ball_radius()
        for _ in range(15):
            x, xp = pair_agreeing_on_ball(Z2, METRIC, A, rng, N, shell=4)
            result = glue(x, xp, params)
            for cell in x.differing_cells(result.y):
                assert not params.cone_contains(cell, "+")
            for cell in xp.differing_cells(result.y):
                assert not params.cone_contains(cell, "-")


def test_glue_output_is_finitely_supported_and_composed():
    params = make_params(2)
    x = cfg({(6, 1): 1, (0, 9): 1})
    xp = cfg({(-7, 0): 1, (0, -9): 1})
    y = glue(x, xp, params).y
    assert set(y.support) <= set(x.support) | set(xp.support)


# -- subshift membership ----------------------------------------------------------

F_HORIZ = ((0, 0), (1, 0))
F_VERT = ((0, 0), (0, 1))
GM = GoldenMean(A, (F_HORIZ, F_VERT))


def test_full_shift_always_member():
    assert membership_check(cfg({(0, 0): 1, (1, 0): 1}), FullShift(A))


def test_background_always_member():
    assert membership_check(background_configuration(Z2, A), GM)


def test_adjacent_ones_rejected():
    assert not membership_check(cfg({(0, 0): 1, (1, 0): 1}), GM)
    assert not membership_check(cfg({(3, 3): 1, (3, 4): 1}), GM)


def test_single_one_accepted():
    assert membership_check(cfg({(0, 0): 1}), GM)
    assert membership_check(cfg({(0, 0): 1, (2, 0): 1, (1, 1): 1}), GM)


def test_membership_window_must_cover_support():
    x = cfg({(0, 0): 1, (1, 0): 1})
    with pytest.raises(ContractError):
        membership_check(x, GM, window=[(9, 9)])
    window = [Z2.mul(c, Z2.inv(f)) for c in x.support for fam in GM.families for f in fam]
    assert membership_check(x, GM, window=window) is False


def test_membership_background_zero_required():
    x = Configuration(Z2, A, 1, {(0, 0): 0})
    with pytest.raises(ContractError):
        membership_check(x, GM)


def test_specification_constants():
    s, t = default_specification_constants(FullShift(A), METRIC)
    assert (s, t) == (1.0, 0.0)
    s, t = default_specification_constants(GM, METRIC)
    assert (s, t) == (1.0, 2.0)


def sample_golden_mean_config(rng, cells_pool, tries=60):
    while True:
        support = {}
        for cell in rng.sample(cells_pool, min(4, len(cells_pool))):
            support[cell] = 1
        x = cfg(support)
        if membership_check(x, GM):
            return x


def test_gluing_preserves_golden_mean_membership():
    rng = seeded_rng(23)
    table = METRIC.ball(30)
    for R in (2, 4):
        s, t = default_specification_constants(GM, METRIC)
        params = make_params(R, s=s, t=t, L=80)
        N = params.specification_ball_radius()
        inner = [g for g in table.order if table.lengths[g] <= N]
        outer = [g for g in table.order if N < table.lengths[g] <= N + 5]
        for _ in range(20):
            core = sample_golden_mean_config(rng, inner)
            x_extra = sample_golden_mean_config(rng, outer)
            xp_extra = sample_golden_mean_config(rng, outer)
            x = cfg({**core.support, **x_extra.support})
            xp = cfg({**core.support, **xp_extra.support})
            if not (membership_check(x, GM) and membership_check(xp, GM)):
                continue
            y = glue(x, xp, params).y
            assert membership_check(y, GM)
