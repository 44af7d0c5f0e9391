import random
from fractions import Fraction

import pytest
from hypothesis import given

from treespace.corpus import lipschitz_function, random_function
from treespace.ordinal import INFINITE
from treespace.oracles import cantor_basis_identity, oracle_distance, oracle_lipschitz
from treespace.presentation import (ChildGroup, ClopenDescriptor, FNode, PointAddress,
                                    PresentationNode, SimpleFunction, TreePresentation,
                                    WeightAssignment, cantor_set, cantor_tree, design_copy_bound,
                                    distance, enumerate_points, evaluate, leaf, lipschitz_bound,
                                    member, node, validate)
from trees import LEAF, T1, T2, decaying_t2, instances, seeds


def addr(root, *steps):
    return PointAddress(root, tuple(steps))


# -- validate -------------------------------------------------------------------------

def test_validate_examples():
    assert validate(LEAF) == []
    assert validate(T1) == []
    bad = TreePresentation((PresentationNode((ChildGroup(leaf(), 0),)),))
    assert any("empty group" in d for d in validate(bad))


def test_validate_reports_paths():
    bad = TreePresentation((node((node((leaf(), -1)), 1)),))
    (diag,) = validate(bad)
    assert diag.startswith("r0.0.0")
    assert validate(TreePresentation(())) == ["roots: at least one root is required"]


# -- enumeration --------------------------------------------------------------------

def test_enumerate_examples():
    assert len(enumerate_points(T1, 3)) == 4
    assert len(enumerate_points(LEAF, 5)) == 1
    assert len(enumerate_points(T2, 2)) == 7
    pts = enumerate_points(T1, 3)
    assert pts == sorted(pts)


@pytest.mark.parametrize("depth", [0, 1, 2, 3])
@pytest.mark.parametrize("k", [2, 3])
def test_cantor_tree_counts(depth, k):
    assert len(enumerate_points(cantor_tree(depth), k)) == (k ** (depth + 1) - 1) // (k - 1)


def test_cantor_shapes():
    assert cantor_tree(0) == LEAF
    assert cantor_tree(1) == T1
    assert cantor_set(addr(0, (0, 0), (0, 2))) == (1, 4)


# -- member / distance / evaluate ----------------------------------------------------

def test_member_examples():
    root = addr(0)
    assert all(member(ClopenDescriptor(root), b) for b in enumerate_points(T1, 3))
    leaf0 = addr(0, (0, 0))
    assert not member(ClopenDescriptor(root, {leaf0}), leaf0)
    assert member(ClopenDescriptor(root, {leaf0}), addr(0, (0, 1)))
    assert not member(ClopenDescriptor(addr(0, (0, 1))), addr(0, (0, 2)))
    with pytest.raises(ValueError):
        ClopenDescriptor(root, {addr(0, (0, 0), (0, 0))})


def test_distance_examples():
    ones = WeightAssignment.uniform(T1)
    b = addr(0, (0, 0))
    assert distance(ones, b, b) == 0
    assert distance(ones, addr(0, (0, 0)), addr(0, (0, 1))) == 1
    w = decaying_t2()
    assert distance(w, addr(0, (0, 0), (0, 0)), addr(0, (0, 0), (0, 1))) == Fraction(1, 4)
    assert oracle_distance(w, addr(0, (0, 0), (0, 0)), addr(0, (0, 0), (0, 1))) == Fraction(1, 4)


def t1_bumps():
    return SimpleFunction((FNode(0, ((FNode(1), FNode(1), FNode(1)),)),))


def test_evaluate_examples():
    assert evaluate(SimpleFunction.constant(T2, 3), addr(0, (0, 4), (0, 1))) == 3
    f = t1_bumps()
    assert evaluate(f, addr(0, (0, 5))) == 0
    assert evaluate(f, addr(0, (0, 1))) == 1
    assert evaluate(f, addr(0)) == 0


def test_lipschitz_examples():
    ones = WeightAssignment.uniform(T1)
    assert lipschitz_bound(SimpleFunction.constant(T1, 7), ones, T1) == 0
    assert lipschitz_bound(t1_bumps(), ones, T1) == 1
    jump = SimpleFunction((FNode(0, ((FNode(2),),)),))
    assert lipschitz_bound(jump, ones, T1) == 2
    assert oracle_lipschitz(jump, ones, T1, 3) == 2
    zero = WeightAssignment.uniform(T1, 0)
    assert lipschitz_bound(jump, zero, T1) is INFINITE


# -- properties -------------------------------------------------------------------------

@given(instances())
def test_distance_is_ultrametric(inst):
    p, w = inst
    pts = enumerate_points(p, 2)[:14]
    for a in pts:
        for b in pts:
            assert distance(w, a, b) == distance(w, b, a) == oracle_distance(w, a, b)
            for c in pts:
                assert distance(w, a, c) <= max(distance(w, a, b), distance(w, b, c))


@given(instances())
def test_weight_one_is_discrete(inst):
    p, _ = inst
    ones = WeightAssignment.uniform(p)
    pts = enumerate_points(p, 2)[:20]
    assert all(distance(ones, a, b) == (0 if a == b else 1) for a in pts for b in pts)


def _swap(b: PointAddress, depth: int, k1: int, k2: int) -> PointAddress:
    steps = list(b.steps)
    if len(steps) > depth and steps[depth][1] in (k1, k2):
        g, k = steps[depth]
        steps[depth] = (g, k2 if k == k1 else k1)
    return PointAddress(b.root, tuple(steps))


@given(instances(), seeds)
def test_copy_permutation_symmetry(inst, seed):
    p, w = inst
    f = random_function(random.Random(seed), p, w)
    m = f.max_overrides()
    pts = enumerate_points(p, m + 2)
    for depth in range(p.depth()):
        # swapping copies m and m+1 at one level only touches tail copies of omega-groups
        for b in pts[:30]:
            if len(b.steps) > depth and not p.group(b.template[:depth + 2]).is_omega:
                continue
            b2 = _swap(b, depth, m, m + 1)
            assert evaluate(f, b) == evaluate(f, b2)
            for c in pts[:15]:
                assert distance(w, b, c) == distance(w, b2, _swap(c, depth, m, m + 1))


@given(instances())
def test_basis_trichotomy(inst):
    p, _ = inst
    pts = enumerate_points(p, design_copy_bound(0))
    cones = {t: {b for b in pts if member(ClopenDescriptor(t), b)} for t in pts[:30]}
    for s, a in cones.items():
        for t, b in cones.items():
            assert not (a & b) or a <= b or b <= a


@given(instances(), seeds)
def test_lipschitz_matches_pairwise_oracle(inst, seed):
    p, w = inst
    f = random_function(random.Random(seed), p, w, max_overrides=1)
    k = f.copy_bound()
    sym = lipschitz_bound(f, w, p)
    assert sym == oracle_lipschitz(f, w, p, k)
    # the design copy bound is already exact: one more copy changes nothing
    assert oracle_lipschitz(f, w, p, k) == oracle_lipschitz(f, w, p, k + 1)


@given(instances(), seeds)
def test_generated_functions_are_one_lipschitz(inst, seed):
    p, w = inst
    f = lipschitz_function(random.Random(seed), p, w)
    assert lipschitz_bound(f, w, p) in (0, 1)


@pytest.mark.parametrize("depth", [0, 1, 2, 3])
def test_cantor_basis_identity(depth):
    assert cantor_basis_identity(depth, 3) == []
