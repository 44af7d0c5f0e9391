"""Ordinal index, Cantor-Bendixson rank and the tree / ordinal-interval correspondence."""

from __future__ import annotations

from .fragmentation import TemplateMarking
from .ordinal import ONE, ZERO, Ordinal, add, leading, omega_pow, omega_step
from .presentation import (OMEGA_COPIES, ChildGroup, PointAddress, PresentationNode,
                           TreePresentation, leaf)

__all__ = ["ordinal_index", "node_rank", "interval_type", "node_interval_type",
           "point_to_ordinal", "tree_of_interval", "cb_rank", "cb_closed_form", "cb_derive",
           "NotPresentableError"]


class NotPresentableError(ValueError):
    pass


def node_rank(n: PresentationNode) -> int:
    """Height of a template: 0 for a leaf, else one more than its tallest child."""
    return max((node_rank(g.template) + 1 for g in n.groups), default=0)


def ordinal_index(p: TreePresentation) -> Ordinal:
    """Number of maximal-element deletions needed to exhaust the tree."""
    return Ordinal.of(max(node_rank(r) for r in p.roots) + 1)


def _ordered_children(n: PresentationNode):
    """Canonical enumeration: finite groups in listed order, then the omega-groups."""
    finite = [(g, grp) for g, grp in enumerate(n.groups) if not grp.is_omega]
    omega = [(g, grp) for g, grp in enumerate(n.groups) if grp.is_omega]
    return finite, omega


def node_interval_type(n: PresentationNode, _memo=None) -> Ordinal:
    """``beta`` with the cone of any instance of ``n`` homeomorphic to ``[0, beta]``.

    Children are laid out left to right, each occupying a closed interval
    ``[0, beta_child]`` followed by the next; the omega-groups are interleaved
    round-robin at the end, so their block contributes ``sigma * omega`` where
    ``sigma`` is the length of one round.  The node itself is the top point.
    """
    memo = {} if _memo is None else _memo
    if id(n) in memo:
        return memo[id(n)]
    finite, omega = _ordered_children(n)
    total = ZERO
    for _, grp in finite:
        block = add(node_interval_type(grp.template, memo), ONE)
        for _ in range(grp.multiplicity):
            total = add(total, block)
    if omega:
        sigma = ZERO
        for _, grp in omega:
            sigma = add(sigma, add(node_interval_type(grp.template, memo), ONE))
        total = add(total, omega_step(sigma))
    memo[id(n)] = total
    return total


def interval_type(p: TreePresentation) -> Ordinal:
    """``beta`` such that ``[T]`` is homeomorphic to ``[0, beta]``.

    Roots are concatenated; every root but the last contributes ``beta_r + 1``.
    """
    total = ZERO
    for r in p.roots[:-1]:
        total = add(total, add(node_interval_type(r), ONE))
    return add(total, node_interval_type(p.roots[-1]))


def point_to_ordinal(p: TreePresentation, b: PointAddress) -> Ordinal:
    """Image of ``b`` under the homeomorphism ``[T] -> [0, interval_type(p)]``."""
    memo: dict = {}
    offset = ZERO
    for r in p.roots[:b.root]:
        offset = add(offset, add(node_interval_type(r, memo), ONE))
    n = p.roots[b.root]
    for g, k in b.steps:
        finite, omega = _ordered_children(n)
        grp = n.groups[g]
        if not grp.is_omega:
            for g2, other in finite:
                block = add(node_interval_type(other.template, memo), ONE)
                reps = k if g2 == g else other.multiplicity
                for _ in range(reps):
                    offset = add(offset, block)
                if g2 == g:
                    break
        else:
            for _, other in finite:
                block = add(node_interval_type(other.template, memo), ONE)
                offset = add(offset, block.mul_nat(other.multiplicity))
            blocks = [(g2, add(node_interval_type(o.template, memo), ONE)) for g2, o in omega]
            sigma = ZERO
            for _, blk in blocks:
                sigma = add(sigma, blk)
            offset = add(offset, sigma.mul_nat(k))
            for g2, blk in blocks:
                if g2 == g:
                    break
                offset = add(offset, blk)
        n = grp.template
    return add(offset, node_interval_type(n, memo))


def tree_of_interval(beta: Ordinal) -> TreePresentation:
    """A single-rooted presentation whose branch space is homeomorphic to ``[0, beta]``."""
    if any(not e.is_finite() for e, _ in beta.terms):
        raise NotPresentableError(f"{beta} is not presentable in regular class (beta >= w^w)")
    return TreePresentation((_interval_node(beta),))


def _interval_node(beta: Ordinal) -> PresentationNode:
    if beta.is_zero():
        return leaf()
    if beta.is_successor():
        lam, n = beta.split_finite()
        # a new root over the tree for beta - 1
        return PresentationNode((ChildGroup(_interval_node(add(lam, Ordinal.of(n - 1))), 1),))
    # beta = delta + w^k with k >= 1: one child for delta, then omega copies of w^(k-1)
    e, c = beta.terms[-1]
    k = e.to_int()
    delta = Ordinal(beta.terms[:-1] + (((e, c - 1),) if c > 1 else ()))
    groups = []
    if not delta.is_zero():
        groups.append(ChildGroup(_interval_node(delta), 1))
    groups.append(ChildGroup(_interval_node(omega_pow(Ordinal.of(k - 1))), OMEGA_COPIES))
    return PresentationNode(tuple(groups))


def cb_closed_form(beta: Ordinal) -> tuple[Ordinal, int]:
    """Cantor-Bendixson rank and size of the last non-empty derivative of ``[0, beta]``."""
    if beta.is_finite():
        return ONE, beta.to_int() + 1
    e, c = leading(beta)
    return add(e, ONE), c


def cb_rank(p: TreePresentation) -> tuple[Ordinal, int]:
    return cb_closed_form(interval_type(p))


def cb_derive(F: TemplateMarking) -> TemplateMarking:
    """Non-isolated points of ``F``.

    A node is a limit of ``F`` exactly when infinitely many of its child cones
    meet ``F``, i.e. when some omega-group template subtree contains a marked node.
    """
    p = F.p
    meets: dict = {}
    for q in reversed(p.paths):  # children before parents
        meets[q] = q in F.marked or any(meets[cq] for cq, _ in p.children(q))
    kept = {q for q in F.marked
            if any(grp.is_omega and meets[cq] for cq, grp in p.children(q))}
    return TemplateMarking(p, frozenset(kept))
