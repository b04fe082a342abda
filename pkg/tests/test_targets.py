import itertools
import random

import pytest

from untwist import (
    FiniteGroup,
    RealVector,
    Torus,
    bi_invariance_defect,
    cyclic_group,
)
from untwist.targets import TargetError, describe_target, target_from_description


def symmetric_group_3():
    elements = list(itertools.permutations(range(3)))

    def compose(p, q):  # (p*q)(i) = p(q(i))
        return tuple(p[q[i]] for i in range(3))

    table = {(p, q): compose(p, q) for p in elements for q in elements}
    return FiniteGroup(elements, table, (0, 1, 2), name="sym3")


TARGETS = [RealVector(1), RealVector(2), Torus(1), Torus(2), cyclic_group(5),
           symmetric_group_3()]


@pytest.mark.parametrize("target", TARGETS, ids=lambda t: t.name)
def test_bi_invariance(target):
    rng = random.Random(17)
    tol = 0.0 if target.is_discrete else 1e-12
    assert bi_invariance_defect(target, rng, trials=150) <= tol


@pytest.mark.parametrize("target", TARGETS, ids=lambda t: t.name)
def test_metric_axioms_sampled(target):
    rng = random.Random(5)
    for _ in range(60):
        a = target.random_element(rng)
        b = target.random_element(rng)
        c = target.random_element(rng)
        assert target.dist(a, a) == 0.0
        assert target.dist(a, b) == target.dist(b, a)
        assert target.dist(a, c) <= target.dist(a, b) + target.dist(b, c) + 1e-12


@pytest.mark.parametrize("target", TARGETS, ids=lambda t: t.name)
def test_group_axioms_sampled(target):
    rng = random.Random(7)
    for _ in range(60):
        a = target.random_element(rng)
        b = target.random_element(rng)
        c = target.random_element(rng)
        lhs = target.mul(target.mul(a, b), c)
        rhs = target.mul(a, target.mul(b, c))
        assert target.dist(lhs, rhs) <= 1e-12
        assert target.dist(target.mul(a, target.inv(a)), target.identity) <= 1e-12


def test_torus_wraps():
    t = Torus(1)
    assert t.mul((0.75,), (0.5,)) == (0.25,)
    assert t.dist((0.95,), (0.05,)) == pytest.approx(0.1)


def test_cyclic_structure():
    c5 = cyclic_group(5)
    assert c5.mul(3, 4) == 2
    assert c5.inv(2) == 3
    assert c5.dist(1, 1) == 0.0 and c5.dist(1, 2) == 1.0


def test_finite_group_table_validation():
    with pytest.raises(TargetError):
        FiniteGroup([0, 1], {(0, 0): 0, (0, 1): 1, (1, 0): 1, (1, 1): 1}, 0)


def test_description_roundtrip():
    for target in (RealVector(3), Torus(2), cyclic_group(7), symmetric_group_3()):
        rebuilt = target_from_description(describe_target(target))
        rng = random.Random(1)
        for _ in range(20):
            a = rebuilt.random_element(rng)
            b = rebuilt.random_element(rng)
            assert rebuilt.dist(rebuilt.mul(a, b), rebuilt.mul(a, b)) == 0.0
        assert rebuilt.name == target.name or rebuilt.name.startswith("cyclic")
