"""The well-founded tree of basic clopen sets and its quotient map.

Every node ``b`` of the source tree gets a basic clopen neighbourhood ``N_b``:
with ``alpha = alpha(b)`` the derivation level at which ``b`` is removed, ``N_b``
is ``U_s`` for the least ``s`` on the branch of ``b`` such that ``U_s`` meets the
``alpha``-th derivative in diameter ``< eps``; failing that it is ``U_b`` minus
the cones of an inclusion-minimal set of finite-multiplicity child groups.  The
family of all ``N_b`` ordered by reverse inclusion is the construction tree.

All of this is uniform over copies, so the tree is stored by *descriptor
templates* (a template path plus excluded group indices).  A concrete node of
the construction tree is an :class:`Instance`: a descriptor template together
with the address of its least node in the source tree.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple, Optional

from .fragmentation import TemplateMarking, derivation_sequence, set_stats
from .indices import ordinal_index
from .ordinal import Ordinal, add
from .presentation import (OMEGA_COPIES, ChildGroup, Path, PointAddress, PresentationNode,
                           TreePresentation, WeightAssignment, design_copy_bound,
                           enumerate_points, format_path, iter_cone)

__all__ = ["Descriptor", "NNode", "Instance", "ConstructionTree", "Check",
           "ConstructionError", "build_construction_tree", "verify_construction",
           "quotient_map", "verify_quotient"]


class ConstructionError(ValueError):
    pass


@dataclass(frozen=True, order=True)
class Descriptor:
    """``U_root`` minus every copy of the child groups listed in ``excluded``."""

    root: Path
    excluded: frozenset = frozenset()

    def __post_init__(self):
        object.__setattr__(self, "excluded", frozenset(self.excluded))

    @property
    def kind(self) -> str:
        return "II" if self.excluded else "I"

    def contains_template(self, path: Path) -> bool:
        n = len(self.root)
        if path[:n] != self.root:
            return False
        return len(path) == n or path[n] not in self.excluded

    def label(self) -> str:
        if not self.excluded:
            return f"U[{format_path(self.root)}]"
        minus = ",".join(str(g) for g in sorted(self.excluded))
        return f"U[{format_path(self.root)}]-{{{minus}}}"


@dataclass(frozen=True)
class NNode:
    key: Descriptor
    alpha: int


class Instance(NamedTuple):
    node: int
    root: PointAddress

    def __str__(self):
        return f"{self.node}@{self.root}"


@dataclass(frozen=True)
class Check:
    name: str
    passed: bool
    detail: str = ""

    def to_json(self) -> dict:
        return {"name": self.name, "pass": self.passed, "detail": self.detail}


@dataclass(frozen=True)
class ConstructionTree:
    p: TreePresentation
    w: WeightAssignment
    eps: Fraction
    sequence: tuple  # derivation sequence [T]^(0), [T]^(1), ..., empty
    nodes: tuple  # NNode, in order of first use

    @property
    def eta(self) -> int:
        return len(self.sequence) - 2

    # -- tree structure over descriptor templates --------------------------
    @functools.cached_property
    def by_root(self) -> dict:
        out: dict = {}
        for i, n in enumerate(self.nodes):
            out.setdefault(n.key.root, []).append(i)
        return out

    def _strictly_contains(self, i: int, j: int) -> bool:
        a, b = self.nodes[i].key, self.nodes[j].key
        if a == b:
            return False
        if a.root == b.root:
            return a.excluded < b.excluded if a.excluded else True
        return len(a.root) < len(b.root) and a.contains_template(b.root)

    @functools.cached_property
    def parents(self) -> tuple:
        """Template-level parent: the smallest strictly larger descriptor rooted above."""
        out = []
        for j, n in enumerate(self.nodes):
            cands = [i for i in range(len(self.nodes))
                     if n.key.root[:len(self.nodes[i].key.root)] == self.nodes[i].key.root
                     and self._strictly_contains(i, j)]
            cands.sort(key=lambda i: (len(self.nodes[i].key.root),
                                      len(self.nodes[i].key.excluded)), reverse=True)
            out.append(cands[0] if cands else None)
        return tuple(out)

    @functools.cached_property
    def children(self) -> tuple:
        kids: list = [[] for _ in self.nodes]
        for j, i in enumerate(self.parents):
            if i is not None:
                kids[i].append(j)
        return tuple(tuple(k) for k in kids)

    @property
    def initial(self) -> list[int]:
        return [j for j, i in enumerate(self.parents) if i is None]

    def edge_path(self, j: int) -> Path:
        """Group indices leading from the parent's root template to the root of ``j``."""
        i = self.parents[j]
        start = 1 if i is None else len(self.nodes[i].key.root)
        return self.nodes[j].key.root[start:]

    def multiplicity(self, j: int):
        """Instances of ``j`` below one instance of its parent (or in total, if initial)."""
        i = self.parents[j]
        root = self.nodes[j].key.root
        start = 1 if i is None else len(self.nodes[i].key.root)
        count = 1
        for k in range(start, len(root)):
            grp = self.p.group(root[:k + 1])
            if grp.is_omega:
                return OMEGA_COPIES
            count *= grp.multiplicity
        return count

    def ancestors(self, j: int) -> list[int]:
        out, i = [], self.parents[j]
        while i is not None:
            out.append(i)
            i = self.parents[i]
        return out

    # -- template-level sets ------------------------------------------------
    def in_node(self, j: int, path: Path) -> bool:
        return self.nodes[j].key.contains_template(path)

    def in_tilde(self, j: int, path: Path) -> bool:
        """Template-level membership in the node minus the union of its children."""
        return self.in_node(j, path) and not any(self.in_node(c, path) for c in self.children[j])

    def q_template(self, path: Path) -> Optional[int]:
        """Smallest descriptor template containing instances of ``path``."""
        best = None
        for k in range(1, len(path) + 1):
            for j in self.by_root.get(path[:k], ()):
                if self.in_node(j, path) and (best is None or self._strictly_contains(best, j)):
                    best = j
        return best

    # -- instances ----------------------------------------------------------
    def contains(self, inst: Instance, b: PointAddress) -> bool:
        key = self.nodes[inst.node].key
        if not b.extends(inst.root):
            return False
        return b.depth == inst.root.depth or b.steps[inst.root.depth][0] not in key.excluded

    def instances_containing(self, b: PointAddress) -> list[Instance]:
        out = []
        for a in b.prefixes():
            for j in self.by_root.get(a.template, ()):
                inst = Instance(j, a)
                if self.contains(inst, b):
                    out.append(inst)
        return out

    def parent_instance(self, inst: Instance) -> Optional[Instance]:
        i = self.parents[inst.node]
        if i is None:
            return None
        return Instance(i, inst.root.truncate(len(self.nodes[i].key.root) - 1))

    def initial_instances(self) -> list[Instance]:
        out = []
        for j in self.initial:
            if self.multiplicity(j) == OMEGA_COPIES:
                raise ConstructionError(f"initial node {self.nodes[j].key.label()} has infinitely many copies")
            out.extend(Instance(j, a) for a in self.p.addresses_of(self.nodes[j].key.root, 1))
        return out

    def child_instances(self, inst: Instance, copy_bound: int) -> list[Instance]:
        """Children of ``inst`` whose new omega-copy indices are below ``copy_bound``."""
        out = []
        for c in self.children[inst.node]:
            suffixes = [inst.root]
            root = self.nodes[c].key.root
            for k in range(len(self.nodes[inst.node].key.root), len(root)):
                grp = self.p.group(root[:k + 1])
                count = copy_bound if grp.is_omega else grp.multiplicity
                suffixes = [a.child(root[k], n) for a in suffixes for n in range(count)]
            out.extend(Instance(c, a) for a in suffixes)
        return out

    def canonical_point(self, inst: Instance) -> PointAddress:
        """The root of ``inst`` if it lies in the tilde set, else its least member there."""
        j = inst.node
        root = self.nodes[j].key.root
        members = [q for q in self.p.subtree(root) if self.in_tilde(j, q)]
        if not members:
            raise ConstructionError(f"tilde set of {self.nodes[j].key.label()} is empty")
        best = min(members, key=lambda q: q[len(root):])
        a = inst.root
        for g in best[len(root):]:
            a = a.child(g, 0)
        return a

    # -- exported shape -------------------------------------------------------
    def presentation(self) -> TreePresentation:
        """The construction tree itself as a presentation (copies multiply along paths)."""
        def build(j):
            groups = tuple(ChildGroup(build(c), self.multiplicity(c)) for c in self.children[j])
            return PresentationNode(groups)

        roots = []
        for j in self.initial:
            m = self.multiplicity(j)
            if m == OMEGA_COPIES:
                raise ConstructionError("infinitely many initial nodes")
            roots.extend([build(j)] * m)
        return TreePresentation(tuple(roots))

    def ordinal_index(self) -> Ordinal:
        return ordinal_index(self.presentation())


# -- building -------------------------------------------------------------------

def _removed_all(p: TreePresentation, root: Path, groups) -> dict:
    return {g: p.node(root).groups[g].multiplicity for g in groups}


def build_construction_tree(p: TreePresentation, w: WeightAssignment, eps) -> ConstructionTree:
    eps = Fraction(eps)
    if eps <= 0:
        raise ValueError("epsilon must be positive")
    seq = derivation_sequence(w, eps, TemplateMarking.full(p))
    if seq[-1]:
        raise ConstructionError("fragmentation index is infinite")
    level = {}
    for a, F in enumerate(seq):
        for q in F.marked:
            level[q] = a

    stats_cache: dict = {}

    def stats(root: Path, a: int, excluded=frozenset()):
        key = (root, a, excluded)
        if key not in stats_cache:
            stats_cache[key] = set_stats(p, w, root, seq[a].marked.__contains__,
                                         _removed_all(p, root, excluded))
        return stats_cache[key]

    keys: dict = {}
    for q in p.paths:
        a = level[q]
        desc = None
        for k in range(1, len(q) + 1):
            if stats(q[:k], a)[1] < eps:
                desc = Descriptor(q[:k])
                break
        if desc is None:
            desc = Descriptor(q, _minimal_exclusion(p, q, a, eps, stats))
        keys.setdefault(desc, a)
    nodes = tuple(NNode(k, a) for k, a in keys.items())
    return ConstructionTree(p, w, eps, tuple(seq), nodes)


def _minimal_exclusion(p, q, a, eps, stats) -> frozenset:
    """Inclusion-minimal set of finite-multiplicity groups whose removal brings the diameter below eps."""
    cands = []
    for g, (cq, grp) in enumerate(p.children(q)):
        if grp.is_omega:
            continue
        reach = stats(cq, a)[0]
        if reach is not None:
            cands.append((reach, g))
    cands.sort(key=lambda rg: (-rg[0], rg[1]))
    chosen: list = []
    for _, g in cands:
        if stats(q, a, frozenset(chosen))[1] < eps:
            break
        chosen.append(g)
    if not stats(q, a, frozenset(chosen))[1] < eps:
        raise ConstructionError(f"no basic neighbourhood of {format_path(q)} has small diameter")
    for g in sorted(chosen):
        trial = frozenset(chosen) - {g}
        if stats(q, a, trial)[1] < eps:
            chosen.remove(g)
    return frozenset(chosen)


# -- quotient map -------------------------------------------------------------------

def quotient_map(tree: ConstructionTree, b: PointAddress) -> Instance:
    """The smallest construction-tree node containing ``b``."""
    best = None
    for inst in tree.instances_containing(b):
        if best is None or tree._strictly_contains(best.node, inst.node):
            best = inst
    if best is None:
        raise ConstructionError(f"{b} is not covered")
    return best


# -- verification -----------------------------------------------------------------

def _tilde_stats(tree: ConstructionTree, j: int):
    key = tree.nodes[j].key
    return set_stats(tree.p, tree.w, key.root, lambda q: tree.in_tilde(j, q),
                     _removed_all(tree.p, key.root, key.excluded))


def _node_stats(tree: ConstructionTree, j: int, a: int):
    key = tree.nodes[j].key
    return set_stats(tree.p, tree.w, key.root, tree.sequence[a].marked.__contains__,
                     _removed_all(tree.p, key.root, key.excluded))


def verify_construction(tree: ConstructionTree, copy_bound: Optional[int] = None) -> list[Check]:
    p, eps = tree.p, tree.eps
    bound = copy_bound or design_copy_bound(0)
    n = len(tree.nodes)
    checks = []

    # (a) trichotomy, template-exact then pointwise on an enumeration
    bad = []
    for i in range(n):
        for j in range(i + 1, n):
            ki, kj = tree.nodes[i].key, tree.nodes[j].key
            if ki.root == kj.root and ki.excluded and kj.excluded:
                bad.append(f"{ki.label()} vs {kj.label()}")
    points = enumerate_points(p, bound)
    nested: dict = {}
    for b in points:
        chain = sorted(tree.instances_containing(b),
                       key=lambda t: (t.root.depth, len(tree.nodes[t.node].key.excluded)))
        for big, small in zip(chain, chain[1:]):
            if (big, small) not in nested:
                nested[(big, small)] = all(tree.contains(big, c)
                                           for c in iter_cone(p, small.root, bound)
                                           if tree.contains(small, c))
            if not nested[(big, small)]:
                bad.append(f"{big} and {small} overlap without nesting")
    checks.append(Check("trichotomy", not bad, "; ".join(sorted(set(bad))[:5])))

    # (b) well-founded with finitely many initial nodes
    bad = []
    for j in range(n):
        seen, i = {j}, tree.parents[j]
        while i is not None:
            if i in seen:
                bad.append(f"cycle through {tree.nodes[j].key.label()}")
                break
            seen.add(i)
            i = tree.parents[i]
    for j in tree.initial:
        if tree.multiplicity(j) == OMEGA_COPIES:
            bad.append(f"initial node {tree.nodes[j].key.label()} has infinitely many copies")
    checks.append(Check("well_founded", not bad, "; ".join(bad[:5])))

    # (c) cover and tilde partition: per template exactly, and per enumerated point
    bad = []
    for q in p.paths:
        owners = [j for j in range(n) if tree.in_tilde(j, q)]
        if len(owners) != 1:
            bad.append(f"{format_path(q)} lies in {len(owners)} tilde sets")
    for b in points:
        containing = tree.instances_containing(b)
        if not containing:
            bad.append(f"{b} uncovered")
            continue
        parents_in = {tree.parent_instance(t) for t in containing}
        owners = [t for t in containing if t not in parents_in]
        if len(owners) != 1:
            bad.append(f"{b} lies in {len(owners)} tilde sets")
    checks.append(Check("cover_partition", not bad, "; ".join(bad[:5])))

    # (d) small tilde sets
    bad = []
    for j in range(n):
        d = _tilde_stats(tree, j)[1]
        if not d < eps:
            bad.append(f"{tree.nodes[j].key.label()}: diam {d}")
    checks.append(Check("tilde_diameter", not bad, "; ".join(bad[:5])))

    # (e) ordinal index bound
    eta = Ordinal.of(tree.eta)
    lam, m = eta.split_finite()
    bound_o = add(lam, Ordinal.of(2 * m + 2))
    try:
        o_n = tree.ordinal_index()
        ok = not bound_o < o_n
        detail = f"o(N)={o_n} bound={bound_o}"
    except ConstructionError as exc:
        ok, detail = False, str(exc)
    checks.append(Check("index_bound", ok, detail))

    # (f) alpha labels agree with both sides of the level identity
    bad = []
    for j, nd in enumerate(tree.nodes):
        meets = [a for a in range(len(tree.sequence)) if _node_stats(tree, j, a)[0] is not None]
        small = [a for a in range(len(tree.sequence)) if _node_stats(tree, j, a)[1] < eps]
        top = max(meets) if meets else None
        low = min(small) if small else None
        if not (top == low == nd.alpha):
            bad.append(f"{nd.key.label()}: label {nd.alpha}, max-meet {top}, min-small {low}")
    checks.append(Check("alpha_labels", not bad, "; ".join(bad[:5])))

    # (g) strict descent two steps apart
    bad = []
    for j in range(n):
        for i in tree.ancestors(j)[1:]:
            if not tree.nodes[i].alpha > tree.nodes[j].alpha:
                bad.append(f"{tree.nodes[i].key.label()} over {tree.nodes[j].key.label()}")
    checks.append(Check("alpha_descent", not bad, "; ".join(bad[:5])))
    return checks


def verify_quotient(tree: ConstructionTree, copy_bound: Optional[int] = None) -> list[Check]:
    p = tree.p
    bound = copy_bound or design_copy_bound(0)
    n = len(tree.nodes)
    checks = []

    bad = [tree.nodes[j].key.label() for j in range(n) if _tilde_stats(tree, j)[0] is None]
    checks.append(Check("surjective", not bad, "empty tilde: " + ", ".join(bad[:5]) if bad else ""))

    bad = []
    for j in range(n):
        for q in p.subtree(tree.nodes[j].key.root):
            owner = tree.q_template(q)
            below = owner is not None and (owner == j or j in tree.ancestors(owner))
            if below != tree.in_node(j, q):
                bad.append(f"{tree.nodes[j].key.label()} at {format_path(q)}")
    for b in enumerate_points(p, bound):
        try:
            image = quotient_map(tree, b)
        except ConstructionError as exc:
            bad.append(str(exc))
            continue
        chain, t = set(), image
        while t is not None:
            chain.add(t)
            t = tree.parent_instance(t)
        if chain != set(tree.instances_containing(b)):
            bad.append(f"preimage mismatch at {b}")
    checks.append(Check("preimage", not bad, "; ".join(bad[:5])))
    return checks
