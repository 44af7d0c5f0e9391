"""Approximating Lipschitz functions by functions factoring through the construction tree.

The pipeline builds the construction tree at ``eps/2``, evaluates ``g`` at one
canonical point of every tilde set, smooths those values into a locally
constant function on the construction tree and pulls it back along the
quotient map.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Optional

from .construction import (Check, ConstructionTree, Instance, build_construction_tree,
                           quotient_map, verify_construction, verify_quotient)
from .ordinal import INFINITE, OMEGA, Ordinal, add
from .presentation import (FNode, PointAddress, SimpleFunction, TreePresentation,
                           WeightAssignment, enumerate_points, evaluate, iter_cone,
                           lipschitz_bound)

__all__ = ["NodeFunction", "uniform_approximation", "pull_back", "sup_distance",
           "PipelineReport", "construction_report", "approximate"]


@dataclass
class NodeFunction:
    """A locally constant function on the construction tree.

    Instances listed in ``explicit`` carry their own value; every other
    instance takes the value of its nearest explicit ancestor.
    """

    tree: ConstructionTree
    explicit: dict

    def __call__(self, inst: Instance) -> Fraction:
        while inst not in self.explicit:
            inst = self.tree.parent_instance(inst)
        return self.explicit[inst]


def _tail_representatives(tree: ConstructionTree, inst: Instance, child: int, bound: int):
    """Child instances whose new omega-coordinates are ``<= bound`` with at least one ``== bound``."""
    root = tree.nodes[child].key.root
    start = len(tree.nodes[inst.node].key.root)
    ranges, omega = [], []
    for k in range(start, len(root)):
        grp = tree.p.group(root[:k + 1])
        ranges.append(range(bound + 1) if grp.is_omega else range(grp.multiplicity))
        omega.append(grp.is_omega)
    for copies in itertools.product(*ranges):
        if not any(o and c == bound for o, c in zip(omega, copies)):
            continue
        a = inst.root
        for g, c in zip(root[start:], copies):
            a = a.child(g, c)
        yield Instance(child, a)


def uniform_approximation(tree: ConstructionTree, f1: Callable[[Instance], Fraction], eps,
                          tail_bound: int) -> NodeFunction:
    """Locally constant ``f`` with ``|f - f1| <= eps`` at every node of the construction tree.

    ``f1`` must be constant on every cone entered through an omega-copy index
    ``>= tail_bound``.  The clopen partition used is: every instance with all
    omega-coordinates below ``tail_bound`` on its own, together with the tail
    of each, which is absorbed into it.  Raises ``ValueError`` when ``f1``
    oscillates by more than ``eps`` on one of these pieces.
    """
    eps = Fraction(eps)
    explicit: dict = {}
    stack = tree.initial_instances()
    while stack:
        inst = stack.pop()
        v = Fraction(f1(inst))
        values = [v]
        for c in tree.children[inst.node]:
            values.extend(f1(t) for t in _tail_representatives(tree, inst, c, tail_bound))
        if max(values) - min(values) > eps:
            raise ValueError(f"oscillation {max(values) - min(values)} of f1 near {inst} exceeds {eps}")
        explicit[inst] = v
        stack.extend(tree.child_instances(inst, tail_bound))
    return NodeFunction(tree, explicit)


def pull_back(tree: ConstructionTree, f: Callable[[Instance], Fraction], tail_bound: int) -> SimpleFunction:
    """``f`` composed with the quotient map, as a function on the source tree.

    Copies with index ``>= tail_bound`` are left to inheritance: their whole
    cone maps into tail instances, which share the value of the parent point.
    """
    p = tree.p

    def build(a: PointAddress) -> FNode:
        n = p.node(a.template)
        groups = []
        for g, grp in enumerate(n.groups):
            count = tail_bound if grp.is_omega else grp.multiplicity
            groups.append(tuple(build(a.child(g, k)) for k in range(count)))
        while groups and not groups[-1]:
            groups.pop()
        return FNode(f(quotient_map(tree, a)), tuple(groups))

    return SimpleFunction(tuple(build(PointAddress(r)) for r in range(len(p.roots))))


def sup_distance(p: TreePresentation, f: SimpleFunction, g: SimpleFunction) -> Fraction:
    """Exact ``sup |f - g|`` over the branch space."""
    bound = max(f.max_overrides(), g.max_overrides()) + 1
    return max(abs(evaluate(f, b) - evaluate(g, b)) for b in enumerate_points(p, bound))


@dataclass
class PipelineReport:
    eps: Fraction
    eta: Ordinal
    lam: Ordinal
    n: int
    bound: Ordinal
    o_N: Optional[Ordinal]
    checks: list = field(default_factory=list)
    error: Optional[Fraction] = None
    lipschitz: Optional[Fraction] = None
    construction_eps: Optional[Fraction] = None
    tree: Optional[ConstructionTree] = field(default=None, repr=False, compare=False)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def to_json(self) -> dict:
        def q(x):
            return None if x is None else f"{x.numerator}/{x.denominator}"
        return {
            "epsilon": q(self.eps), "construction_epsilon": q(self.construction_eps or self.eps),
            "eta": str(self.eta), "lambda": str(self.lam), "n": self.n,
            "bound": str(self.bound), "o_N": None if self.o_N is None else str(self.o_N),
            "error": q(self.error), "lipschitz": q(self.lipschitz),
        }


def construction_report(tree: ConstructionTree, copy_bound: Optional[int] = None) -> PipelineReport:
    eta = Ordinal.of(tree.eta)
    lam, n = eta.split_finite()
    checks = verify_construction(tree, copy_bound) + verify_quotient(tree, copy_bound)
    try:
        o_n = tree.ordinal_index()
    except ValueError:
        o_n = None
    return PipelineReport(tree.eps, eta, lam, n, add(lam, Ordinal.of(2 * n + 2)), o_n, checks, tree=tree)


def approximate(p: TreePresentation, w: WeightAssignment, g: SimpleFunction, eps):
    """Return ``(y, report)`` with ``y`` constant on every tilde set and ``sup|g - y| <= L eps``."""
    eps = Fraction(eps)
    if eps <= 0:
        raise ValueError("epsilon must be positive")
    lip = lipschitz_bound(g, w, p)
    if lip is INFINITE:
        raise ValueError("function is not Lipschitz for this weight assignment")
    scale = max(Fraction(1), lip)
    tree = build_construction_tree(p, w, eps / 2)
    report = construction_report(tree)
    report.lipschitz = lip
    report.tree = tree
    report.eps, report.construction_eps = eps, eps / 2
    tail = g.max_overrides()

    def f1(inst):
        return evaluate(g, tree.canonical_point(inst))

    # oscillation of g on each tilde set; tail instances lie where g is constant
    limit = scale * eps / 2
    bad = []
    for inst in _explicit_instances(tree, tail):
        vals = [evaluate(g, b) for b in iter_cone(p, inst.root, tail + 1)
                if quotient_map(tree, b) == inst]
        if vals and not max(vals) - min(vals) < limit:
            bad.append(f"{inst}: {max(vals) - min(vals)}")
    report.checks.append(Check("tilde_oscillation", not bad, "; ".join(bad[:5])))

    f = uniform_approximation(tree, f1, limit, tail)
    y = pull_back(tree, f, tail)
    report.error = sup_distance(p, g, y)
    report.checks.append(Check("error_bound", report.error <= scale * eps,
                               f"error {report.error} vs {scale * eps}"))
    frag = Ordinal.of(len(tree.sequence) - 1)
    if report.o_N is not None:
        # o(N) < Frag(eps/2) + omega, with the finite excess made explicit
        report.checks.append(Check("index_shape", report.o_N < add(frag, OMEGA),
                                   f"o(N)={report.o_N} frag={frag}"))
    return y, report


def _explicit_instances(tree: ConstructionTree, tail: int) -> list[Instance]:
    out, stack = [], tree.initial_instances()
    while stack:
        inst = stack.pop()
        out.append(inst)
        stack.extend(tree.child_instances(inst, tail))
    return out
