"""Deterministic random instances: presentations, weights, functions and ordinals."""

from __future__ import annotations

import random
from fractions import Fraction
from typing import Optional

from .ordinal import Ordinal
from .presentation import (OMEGA_COPIES, ChildGroup, FNode, PresentationNode, SimpleFunction,
                           TreePresentation, WeightAssignment, lipschitz_bound)

__all__ = ["random_presentation", "random_weights", "random_function", "random_ordinal",
           "lipschitz_function", "point_budget", "corpus"]

WEIGHT_CHOICES = (Fraction(0), Fraction(1, 8), Fraction(1, 4), Fraction(1, 2), Fraction(1))


def point_budget(p: TreePresentation, copy_bound: int = 2) -> int:
    """Number of points ``enumerate_points(p, copy_bound)`` would return."""
    def count(n: PresentationNode) -> int:
        total = 1
        for grp in n.groups:
            k = copy_bound if grp.is_omega else grp.multiplicity
            total += k * count(grp.template)
        return total
    return sum(count(r) for r in p.roots)


def random_presentation(rng: random.Random, max_depth: int = 4, max_groups: int = 3,
                        max_roots: int = 2, max_points: Optional[int] = 300) -> TreePresentation:
    """Random presentation; redrawn until the bound-2 enumeration has at most ``max_points`` points."""
    def gen(depth: int) -> PresentationNode:
        if depth >= max_depth or rng.random() < 0.2 + 0.15 * depth:
            return PresentationNode()
        groups = []
        for _ in range(rng.randint(1, max_groups)):
            m = OMEGA_COPIES if rng.random() < 0.6 else rng.randint(1, 2)
            groups.append(ChildGroup(gen(depth + 1), m))
        return PresentationNode(tuple(groups))

    while True:
        p = TreePresentation(tuple(gen(0) for _ in range(rng.randint(1, max_roots))))
        if max_points is None or point_budget(p) <= max_points:
            return p


def random_weights(rng: random.Random, p: TreePresentation) -> WeightAssignment:
    mode = rng.random()
    if mode < 0.2:
        return WeightAssignment.uniform(p)
    if mode < 0.4:
        # weights halving with depth
        return WeightAssignment({q: Fraction(1, 2 ** (len(q) - 1)) for q in p.paths})
    return WeightAssignment({q: rng.choice(WEIGHT_CHOICES) for q in p.paths})


def random_function(rng: random.Random, p: TreePresentation, w: WeightAssignment,
                    max_overrides: int = 2, denominator: int = 8) -> SimpleFunction:
    """Random locally constant function; constant across weight-0 steps, so its Lipschitz bound is finite."""
    top = Fraction(rng.randint(0, denominator), denominator)  # shared by weight-0 roots

    def gen(n: PresentationNode, path, parent_value) -> FNode:
        if w.of(path) == 0:
            value = parent_value
        else:
            value = Fraction(rng.randint(0, denominator), denominator)
        groups = []
        for g, grp in enumerate(n.groups):
            limit = max_overrides if grp.is_omega else min(grp.multiplicity, max_overrides)
            k = rng.randint(0, limit)
            groups.append(tuple(gen(grp.template, path + (g,), value) for _ in range(k)))
        while groups and not groups[-1]:
            groups.pop()
        return FNode(value, tuple(groups))

    return SimpleFunction(tuple(gen(r, (i,), top) for i, r in enumerate(p.roots)))


def _scale(f: SimpleFunction, factor: Fraction) -> SimpleFunction:
    def go(n: FNode) -> FNode:
        return FNode(n.value * factor, tuple(tuple(go(x) for x in grp) for grp in n.groups))
    return SimpleFunction(tuple(go(r) for r in f.roots))


def lipschitz_function(rng: random.Random, p: TreePresentation, w: WeightAssignment,
                       max_overrides: int = 2) -> SimpleFunction:
    """A random function rescaled to have Lipschitz bound exactly 1 (or 0 when constant)."""
    f = random_function(rng, p, w, max_overrides)
    lip = lipschitz_bound(f, w, p)
    return _scale(f, 1 / lip) if lip > 0 else f


def random_ordinal(rng: random.Random, max_terms: int = 4, max_exponent: int = 4,
                   max_coefficient: int = 5, nested: int = 0) -> Ordinal:
    """Random ordinal; below ``w^w`` unless ``nested > 0`` allows ordinal exponents."""
    count = rng.randint(0, max_terms)
    exps = set()
    for _ in range(count):
        if nested and rng.random() < 0.3:
            exps.add(random_ordinal(rng, 2, max_exponent, 3, nested - 1))
        else:
            exps.add(Ordinal.of(rng.randint(0, max_exponent)))
    terms = [(e, rng.randint(1, max_coefficient)) for e in sorted(exps, reverse=True)]
    return Ordinal(terms)


def corpus(seed: int, size: int, **kw) -> list[tuple[TreePresentation, WeightAssignment]]:
    rng = random.Random(seed)
    out = []
    for _ in range(size):
        p = random_presentation(rng, **kw)
        out.append((p, random_weights(rng, p)))
    return out
