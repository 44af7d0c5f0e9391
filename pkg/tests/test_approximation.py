import random
from fractions import Fraction

import pytest
from hypothesis import given

from treespace.approximation import approximate, sup_distance
from treespace.construction import quotient_map
from treespace.corpus import lipschitz_function
from treespace.presentation import (FNode, SimpleFunction, WeightAssignment, cantor_tree,
                                    enumerate_points, evaluate, lipschitz_bound)
from trees import T1, T2, decaying_t2, instances, seeds


def test_constant_function():
    g = SimpleFunction.constant(T2, Fraction(3, 7))
    y, report = approximate(T2, decaying_t2(), g, Fraction(1, 4))
    assert report.error == 0
    assert sup_distance(T2, g, y) == 0
    assert report.passed


def test_t1_bumps_reproduced():
    g = SimpleFunction((FNode(0, ((FNode(1), FNode(1), FNode(1)),)),))
    y, report = approximate(T1, WeightAssignment.uniform(T1), g, Fraction(1, 2))
    assert report.error == 0
    assert all(evaluate(y, b) == evaluate(g, b) for b in enumerate_points(T1, 6))
    assert report.passed


def test_decaying_t2_distance_profile():
    w = decaying_t2()
    # distance to the root branch: 0 at the root, 1 elsewhere
    g = SimpleFunction((FNode(0, ((FNode(1, ((FNode(1),),)),),)),))
    assert lipschitz_bound(g, w, T2) == 1
    y, report = approximate(T2, w, g, Fraction(1, 4))
    assert report.error <= Fraction(1, 4)
    assert report.passed
    assert report.to_json()["construction_epsilon"] == "1/8"


def test_rejects_non_lipschitz():
    g = SimpleFunction((FNode(0, ((FNode(1),),)),))
    with pytest.raises(ValueError, match="Lipschitz"):
        approximate(T1, WeightAssignment.uniform(T1, 0), g, Fraction(1, 2))


@given(instances(), seeds)
def test_error_bound_and_checks(inst, seed):
    p, w = inst
    g = lipschitz_function(random.Random(seed), p, w)
    for eps in (Fraction(1, 2), Fraction(1, 4)):
        y, report = approximate(p, w, g, eps)
        assert report.error <= eps
        assert report.passed, [c for c in report.checks if not c.passed]


@given(instances(), seeds)
def test_y_constant_on_fibres(inst, seed):
    p, w = inst
    g = lipschitz_function(random.Random(seed), p, w)
    y, report = approximate(p, w, g, Fraction(1, 2))
    tree = report.tree
    seen: dict = {}
    for b in enumerate_points(p, y.max_overrides() + 2):
        q = quotient_map(tree, b)
        assert seen.setdefault(q, evaluate(y, b)) == evaluate(y, b)


@given(instances(), seeds)
def test_reapproximation_is_exact_at_fine_scale(inst, seed):
    # with strictly positive weights, eps <= 2 * min weight makes every tilde set a point
    p, w = inst
    if w.min_positive() is None or 0 in w.values():
        return
    g = lipschitz_function(random.Random(seed), p, w)
    y, _ = approximate(p, w, g, Fraction(1, 2))
    for eps in (w.min_positive(), 2 * w.min_positive()):
        _, report = approximate(p, w, y, eps)
        assert report.error == 0


@pytest.mark.parametrize("depth", [0, 1, 2, 3])
def test_cantor_tree_pipeline(depth):
    p = cantor_tree(depth)
    w = WeightAssignment.by_level(p, [Fraction(1, 2 ** k) for k in range(depth + 1)])
    rng = random.Random(depth)
    for _ in range(10):
        g = lipschitz_function(rng, p, w)
        for eps in (Fraction(1, 2), Fraction(1, 4)):
            _, report = approximate(p, w, g, eps)
            assert report.error <= eps and report.passed
