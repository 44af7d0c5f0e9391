"""Finitely presented well-founded trees and their branch spaces.

A presentation is a finite term: every node lists child *groups*, and a group
unfolds into ``multiplicity`` copies of one template node, where the
multiplicity is a positive integer or ``OMEGA_COPIES`` (countably many copies).
Presentations have finite depth, so every branch is finite and the branch
space ``[T]`` is identified with the set of nodes.

Template nodes are addressed by *template paths* ``(root, g1, g2, ...)``: the
root index followed by the group index taken at every level.  Semantic nodes
(equivalently finite branches) are addressed by :class:`PointAddress`, which
additionally records the copy index used in each group.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import Iterator, Mapping, Sequence, Union

from .ordinal import INFINITE

__all__ = [
    "OMEGA_COPIES", "ChildGroup", "PresentationNode", "TreePresentation",
    "PointAddress", "ClopenDescriptor", "WeightAssignment", "FNode",
    "SimpleFunction", "PresentationError", "validate", "enumerate_points",
    "member", "distance", "evaluate", "lipschitz_bound", "cantor_tree",
    "design_copy_bound", "leaf", "node", "format_path",
]

OMEGA_COPIES = "omega"

Path = tuple  # (root, g1, g2, ...)
Multiplicity = Union[int, str]


class PresentationError(ValueError):
    def __init__(self, diagnostics: Sequence[str]):
        super().__init__("; ".join(diagnostics))
        self.diagnostics = list(diagnostics)


@dataclass(frozen=True)
class ChildGroup:
    template: "PresentationNode"
    multiplicity: Multiplicity

    @property
    def is_omega(self) -> bool:
        return self.multiplicity == OMEGA_COPIES


@dataclass(frozen=True)
class PresentationNode:
    groups: tuple[ChildGroup, ...] = ()


def leaf() -> PresentationNode:
    return PresentationNode()


def node(*groups: tuple[PresentationNode, Multiplicity]) -> PresentationNode:
    """Shorthand: ``node((leaf(), "omega"), (leaf(), 2))``."""
    return PresentationNode(tuple(ChildGroup(t, m) for t, m in groups))


def format_path(path: Path) -> str:
    return "r" + ".".join(str(i) for i in path)


@dataclass(frozen=True)
class TreePresentation:
    roots: tuple[PresentationNode, ...]

    def __post_init__(self):
        object.__setattr__(self, "roots", tuple(self.roots))

    @functools.cached_property
    def _index(self) -> dict:
        index = {}

        def walk(path, n):
            index[path] = n
            for g, group in enumerate(n.groups):
                walk(path + (g,), group.template)

        for r, root in enumerate(self.roots):
            walk((r,), root)
        return index

    @property
    def paths(self) -> list[Path]:
        """All template paths in preorder."""
        return list(self._index)

    def node(self, path: Path) -> PresentationNode:
        return self._index[path]

    def group(self, path: Path) -> ChildGroup:
        """The group through which the (non-root) template ``path`` is reached."""
        return self._index[path[:-1]].groups[path[-1]]

    def children(self, path: Path) -> list[tuple[Path, ChildGroup]]:
        return [(path + (g,), grp) for g, grp in enumerate(self._index[path].groups)]

    def subtree(self, path: Path) -> list[Path]:
        n = len(path)
        return [q for q in self._index if q[:n] == path]

    def depth(self) -> int:
        return max(len(p) for p in self._index) - 1

    def addresses_of(self, path: Path, copy_bound: int) -> list["PointAddress"]:
        """Every address of template ``path`` with omega-copy indices below ``copy_bound``."""
        ranges = []
        for i in range(1, len(path)):
            grp = self.group(path[:i + 1])
            ranges.append(range(copy_bound if grp.is_omega else grp.multiplicity))
        return [PointAddress(path[0], tuple(zip(path[1:], ks))) for ks in product(*ranges)]

    def instance_count(self, path: Path) -> Multiplicity:
        """Number of semantic nodes instantiating template ``path``."""
        count = 1
        for i in range(1, len(path)):
            grp = self.group(path[:i + 1])
            if grp.is_omega:
                return OMEGA_COPIES
            count *= grp.multiplicity
        return count


@dataclass(frozen=True, order=True)
class PointAddress:
    """A semantic node ``t``, identified with the finite branch ``b_t``."""

    root: int
    steps: tuple[tuple[int, int], ...] = ()

    @property
    def template(self) -> Path:
        return (self.root,) + tuple(g for g, _ in self.steps)

    @property
    def depth(self) -> int:
        return len(self.steps)

    def parent(self) -> "PointAddress":
        if not self.steps:
            raise ValueError("a root has no parent")
        return PointAddress(self.root, self.steps[:-1])

    def child(self, group: int, copy: int) -> "PointAddress":
        return PointAddress(self.root, self.steps + ((group, copy),))

    def truncate(self, depth: int) -> "PointAddress":
        return PointAddress(self.root, self.steps[:depth])

    def prefixes(self) -> list["PointAddress"]:
        """The branch ``b_t`` as a list of addresses, root first."""
        return [self.truncate(i) for i in range(len(self.steps) + 1)]

    def extends(self, other: "PointAddress") -> bool:
        """True iff ``other`` precedes or equals ``self`` in the tree order."""
        return self.root == other.root and self.steps[:len(other.steps)] == other.steps

    def __str__(self):
        return f"r{self.root}" + "".join(f"/{g}:{k}" for g, k in self.steps)


@dataclass(frozen=True)
class ClopenDescriptor:
    """Basic clopen set ``U_t`` minus the cones of finitely many direct successors."""

    root: PointAddress
    excluded: frozenset[PointAddress] = frozenset()

    def __post_init__(self):
        object.__setattr__(self, "excluded", frozenset(self.excluded))
        for s in self.excluded:
            if s.depth != self.root.depth + 1 or not s.extends(self.root):
                raise ValueError(f"{s} is not a direct successor of {self.root}")

    @property
    def kind(self) -> str:
        return "II" if self.excluded else "I"


def member(c: ClopenDescriptor, b: PointAddress) -> bool:
    if not b.extends(c.root):
        return False
    return not any(b.extends(s) for s in c.excluded)


@dataclass(frozen=True)
class WeightAssignment:
    """One non-negative rational weight per template node."""

    weights: Mapping[Path, Fraction]

    def __post_init__(self):
        object.__setattr__(self, "weights", {p: Fraction(v) for p, v in self.weights.items()})

    @classmethod
    def uniform(cls, p: TreePresentation, value=1) -> "WeightAssignment":
        return cls({path: Fraction(value) for path in p.paths})

    @classmethod
    def by_level(cls, p: TreePresentation, values: Sequence) -> "WeightAssignment":
        """Weight ``values[k]`` on every template at depth ``k`` (last value repeats)."""
        return cls({path: Fraction(values[min(len(path) - 1, len(values) - 1)])
                    for path in p.paths})

    def of(self, path: Path) -> Fraction:
        return self.weights[path]

    def values(self) -> list[Fraction]:
        return sorted(set(self.weights.values()))

    def max_weight(self) -> Fraction:
        return max(self.weights.values())

    def min_positive(self):
        positive = [v for v in self.weights.values() if v > 0]
        return min(positive) if positive else None


def distance(w: WeightAssignment, b: PointAddress, c: PointAddress) -> Fraction:
    """Largest weight over the symmetric difference of the branches ``b`` and ``c``."""
    if b.root != c.root:
        common = -1
    else:
        common = 0
        for sb, sc in zip(b.steps, c.steps):
            if sb != sc:
                break
            common += 1
    tb, tc = b.template, c.template
    diff = [tb[:i + 1] for i in range(common + 1, len(tb))]
    diff += [tc[:i + 1] for i in range(common + 1, len(tc))]
    return max((w.of(p) for p in diff), default=Fraction(0))


# -- locally constant functions --------------------------------------------

@dataclass(frozen=True)
class FNode:
    """Value at one semantic node plus explicit overrides for its child copies.

    ``groups[g]`` lists override subtrees for copies ``0..m-1`` of group ``g``;
    every other copy takes ``value`` on its whole subtree.
    """

    value: Fraction
    groups: tuple[tuple["FNode", ...], ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "value", Fraction(self.value))
        object.__setattr__(self, "groups", tuple(tuple(g) for g in self.groups))

    def overrides(self, g: int) -> tuple["FNode", ...]:
        return self.groups[g] if g < len(self.groups) else ()


@dataclass(frozen=True)
class SimpleFunction:
    roots: tuple[FNode, ...]

    def __post_init__(self):
        object.__setattr__(self, "roots", tuple(self.roots))

    @classmethod
    def constant(cls, p: TreePresentation, value) -> "SimpleFunction":
        return cls(tuple(FNode(value) for _ in p.roots))

    def max_overrides(self) -> int:
        """Largest explicit override count over all groups (0 when none)."""
        best = 0
        stack = list(self.roots)
        while stack:
            n = stack.pop()
            for grp in n.groups:
                best = max(best, len(grp))
                stack.extend(grp)
        return best

    def copy_bound(self) -> int:
        return design_copy_bound(self.max_overrides() - 1)


def evaluate(f: SimpleFunction, b: PointAddress) -> Fraction:
    n = f.roots[b.root]
    for g, k in b.steps:
        over = n.overrides(g)
        if k >= len(over):
            return n.value
        n = over[k]
    return n.value


def design_copy_bound(largest_index: int) -> int:
    """Copy bound for exact suprema: the largest explicit or excluded copy index + 2."""
    return max(largest_index, 0) + 2


def enumerate_points(p: TreePresentation, copy_bound: int) -> list[PointAddress]:
    """All addresses whose omega-copy indices are below ``copy_bound``, in lexicographic order."""
    if copy_bound < 1:
        raise ValueError("copy_bound must be at least 1")
    out = []

    def walk(addr: PointAddress, n: PresentationNode):
        out.append(addr)
        for g, grp in enumerate(n.groups):
            count = copy_bound if grp.is_omega else grp.multiplicity
            for k in range(count):
                walk(addr.child(g, k), grp.template)

    for r, root in enumerate(p.roots):
        walk(PointAddress(r), root)
    return out


def iter_cone(p: TreePresentation, root: PointAddress, copy_bound: int) -> Iterator[PointAddress]:
    """Enumerated addresses extending ``root``."""
    stack = [root]
    while stack:
        addr = stack.pop()
        yield addr
        n = p.node(addr.template)
        for g in reversed(range(len(n.groups))):
            grp = n.groups[g]
            count = copy_bound if grp.is_omega else grp.multiplicity
            for k in reversed(range(count)):
                stack.append(addr.child(g, k))


def lipschitz_bound(f: SimpleFunction, w: WeightAssignment, p: TreePresentation):
    """Least ``L`` with ``|f(b) - f(c)| <= L d(b, c)``, or ``INFINITE``.

    For a threshold ``r`` the relation ``d(b, c) <= r`` is an equivalence whose
    classes are the components left after cutting every node of weight ``> r``
    from its parent; ``L`` is the largest oscillation-over-threshold ratio.
    """
    points = enumerate_points(p, f.copy_bound())
    values = {b: evaluate(f, b) for b in points}
    best = Fraction(0)
    for r in [Fraction(0)] + [v for v in w.values() if v > 0]:
        lo: dict = {}
        hi: dict = {}
        comp: dict = {}
        for b in points:  # parents precede children
            if w.of(b.template) <= r:
                key = comp[b.parent()] if b.steps else "top"
            else:
                key = b
            comp[b] = key
            v = values[b]
            lo[key] = min(lo.get(key, v), v)
            hi[key] = max(hi.get(key, v), v)
        osc = max(hi[k] - lo[k] for k in hi)
        if r == 0:
            if osc > 0:
                return INFINITE
        else:
            best = max(best, osc / r)
    return best


def cantor_tree(depth: int) -> TreePresentation:
    """Finite subsets of the naturals of size at most ``depth``, ordered by extension."""
    if depth < 0:
        raise ValueError("depth must be non-negative")
    n = leaf()
    for _ in range(depth):
        n = node((n, OMEGA_COPIES))
    return TreePresentation((n,))


def cantor_set(address: PointAddress) -> tuple[int, ...]:
    """The finite set ``A`` denoted by a node of :func:`cantor_tree` (naturals start at 1).

    Copy ``k`` of the children of ``A`` is ``A + {max(A) + 1 + k}``.
    """
    out, last = [], 0
    for _, k in address.steps:
        last = last + 1 + k
        out.append(last)
    return tuple(out)


# -- validation ---------------------------------------------------------------

def validate(p: TreePresentation) -> list[str]:
    """Diagnostics for every violated presentation invariant (empty when valid)."""
    problems = []
    roots = getattr(p, "roots", None)
    if not isinstance(roots, tuple) or not roots:
        return ["roots: at least one root is required"]

    def check(n, path, seen):
        if not isinstance(n, PresentationNode):
            problems.append(f"{format_path(path)}: not a presentation node")
            return
        if id(n) in seen:
            problems.append(f"{format_path(path)}: cyclic presentation")
            return
        for g, grp in enumerate(n.groups):
            where = format_path(path + (g,))
            m = grp.multiplicity
            if m == OMEGA_COPIES:
                pass
            elif isinstance(m, bool) or not isinstance(m, int):
                problems.append(f"{where}: multiplicity must be a positive integer or 'omega'")
            elif m == 0:
                problems.append(f"{where}: empty group")
            elif m < 0:
                problems.append(f"{where}: negative multiplicity")
            check(grp.template, path + (g,), seen | {id(n)})

    for r, root in enumerate(roots):
        check(root, (r,), frozenset())
    return problems


def validate_weights(p: TreePresentation, w: WeightAssignment) -> list[str]:
    problems = []
    for path in p.paths:
        if path not in w.weights:
            problems.append(f"{format_path(path)}: missing weight")
        elif w.weights[path] < 0:
            problems.append(f"{format_path(path)}: negative weight")
    return problems


def validate_function(p: TreePresentation, f: SimpleFunction) -> list[str]:
    problems = []
    if len(f.roots) != len(p.roots):
        return [f"function has {len(f.roots)} roots, tree has {len(p.roots)}"]

    def check(fn: FNode, path: Path, where: str):
        n = p.node(path)
        if len(fn.groups) > len(n.groups):
            problems.append(f"{where}: {len(fn.groups)} override groups, node has {len(n.groups)}")
            return
        for g, over in enumerate(fn.groups):
            grp = n.groups[g]
            if not grp.is_omega and len(over) > grp.multiplicity:
                problems.append(f"{where}/{g}: {len(over)} overrides exceed multiplicity {grp.multiplicity}")
            for k, sub in enumerate(over):
                check(sub, path + (g,), f"{where}/{g}:{k}")

    for r, fn in enumerate(f.roots):
        check(fn, (r,), f"r{r}")
    return problems
