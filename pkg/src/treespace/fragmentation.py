"""Epsilon-derivatives and fragmentation indices for weighted tree ultrametrics.

Closed sets that arise from derivation are unions of whole template classes, so
they are stored as :class:`TemplateMarking` values.  Diameters use the
ultrametric structure: below a template node the set is described by its
*reach* (largest weight on a path from the node down to a member) and its
diameter, both computed by one recursion over the finite template tree.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Mapping, Optional

from .ordinal import INFINITE, Ordinal
from .presentation import (OMEGA_COPIES, ClopenDescriptor, Path, TreePresentation,
                           WeightAssignment, format_path)

__all__ = ["TemplateMarking", "set_stats", "clopen_diam", "derive_once",
           "derivation_sequence", "frag_index", "frag_sup"]


@dataclass(frozen=True)
class TemplateMarking:
    """The set of all nodes instantiating one of the ``marked`` template paths."""

    p: TreePresentation
    marked: frozenset

    def __post_init__(self):
        object.__setattr__(self, "marked", frozenset(self.marked))

    @classmethod
    def full(cls, p: TreePresentation) -> "TemplateMarking":
        return cls(p, frozenset(p.paths))

    @classmethod
    def empty(cls, p: TreePresentation) -> "TemplateMarking":
        return cls(p, frozenset())

    def __contains__(self, path) -> bool:
        return path in self.marked

    def __bool__(self) -> bool:
        return bool(self.marked)

    def __le__(self, other: "TemplateMarking") -> bool:
        return self.marked <= other.marked

    def closedness_violations(self) -> list[Path]:
        """Marked templates below an omega-group whose group parent is unmarked."""
        bad = []
        for q in self.marked:
            for i in range(1, len(q)):
                if self.p.group(q[:i + 1]).is_omega and q[:i] not in self.marked:
                    bad.append(q[:i])
        return sorted(set(bad))

    def is_closed(self) -> bool:
        return not self.closedness_violations()

    def point_count(self):
        """Number of points in the denoted set, or ``OMEGA_COPIES`` when infinite."""
        total = 0
        for q in self.marked:
            n = self.p.instance_count(q)
            if n == OMEGA_COPIES:
                return OMEGA_COPIES
            total += n
        return total

    def labels(self) -> list[str]:
        return [format_path(q) for q in sorted(self.marked)]

    def __repr__(self):
        return f"TemplateMarking({self.labels()})"


def set_stats(p: TreePresentation, w: WeightAssignment, root: Path,
              inside: Callable[[Path], bool],
              removed: Optional[Mapping[int, int]] = None):
    """``(reach, diameter)`` of the set of members inside one instance of ``root``.

    ``inside`` decides membership per template path; ``removed`` maps a group
    index of ``root`` to the number of its copies cut away.  ``reach`` is
    ``None`` for an empty set.
    """
    memo: dict = {}

    def rec(q: Path, cut: Optional[Mapping[int, int]]):
        if cut is None and q in memo:
            return memo[q]
        reaches = []
        diam = Fraction(0)
        copies = 0
        for g, (cq, grp) in enumerate(p.children(q)):
            if grp.is_omega:
                n = 2  # infinitely many remain whatever finite set is cut
            else:
                n = grp.multiplicity - (cut or {}).get(g, 0)
                if n <= 0:
                    continue
            r, d = rec(cq, None)
            if r is None:
                continue
            reaches.append(r)
            diam = max(diam, d)
            copies += min(n, 2)
        here = inside(q)
        if reaches and (here or copies >= 2):
            diam = max(diam, max(reaches))
        if not reaches and not here:
            out = (None, Fraction(0))
        else:
            out = (max([w.of(q)] + reaches), diam)
        if cut is None:
            memo[q] = out
        return out

    return rec(root, removed)


def space_stats(p: TreePresentation, w: WeightAssignment, inside: Callable[[Path], bool]):
    """``(reach, diameter)`` over the whole (possibly multi-rooted) branch space."""
    parts = [set_stats(p, w, (r,), inside) for r in range(len(p.roots))]
    reaches = [r for r, _ in parts if r is not None]
    if not reaches:
        return None, Fraction(0)
    diam = max(d for _, d in parts)
    if len(reaches) >= 2:
        diam = max(diam, max(reaches))
    return max(reaches), diam


def clopen_diam(c: ClopenDescriptor, F: TemplateMarking, w: WeightAssignment) -> Fraction:
    """Exact d-diameter of ``c`` intersected with ``F``."""
    removed: dict[int, int] = {}
    for s in c.excluded:
        g = s.steps[-1][0]
        removed[g] = removed.get(g, 0) + 1
    return set_stats(F.p, w, c.root.template, F.marked.__contains__, removed)[1]


def _omega_reach(p: TreePresentation, w: WeightAssignment, F: TemplateMarking, q: Path,
                 memo_stats) -> Optional[Fraction]:
    best = None
    for cq, grp in p.children(q):
        if not grp.is_omega:
            continue
        r = memo_stats(cq)[0]
        if r is not None and (best is None or r > best):
            best = r
    return best


def derive_once(F: TemplateMarking, w: WeightAssignment, eps) -> TemplateMarking:
    """Points of ``F`` all of whose neighbourhoods meet ``F`` in diameter ``>= eps``.

    The smallest basic neighbourhood of a node removes every finite-multiplicity
    child and finitely many omega-copies.  Since the node itself is in ``F``,
    the ultrametric diameter is the largest distance to it, which is the largest
    reach of a tail copy of an omega-group.
    """
    eps = Fraction(eps)
    if eps <= 0:
        raise ValueError("epsilon must be positive")
    p = F.p
    cache: dict = {}

    def stats(q):
        if q not in cache:
            cache[q] = set_stats(p, w, q, F.marked.__contains__)
        return cache[q]

    kept = set()
    for q in F.marked:
        r = _omega_reach(p, w, F, q, stats)
        if r is not None and r >= eps:
            kept.add(q)
    return TemplateMarking(p, frozenset(kept))


def derivation_sequence(w: WeightAssignment, eps, start: TemplateMarking) -> list[TemplateMarking]:
    """``[F, F', F'', ...]`` ending with the first empty or repeated marking."""
    seq = [start]
    while seq[-1]:
        nxt = derive_once(seq[-1], w, eps)
        if nxt == seq[-1]:
            break
        seq.append(nxt)
    return seq


def frag_index(w: WeightAssignment, eps, start: TemplateMarking):
    """Number of derivation steps that empty ``start``, or ``INFINITE`` if it stalls."""
    seq = derivation_sequence(w, eps, start)
    if seq[-1]:
        return INFINITE
    return Ordinal.of(len(seq) - 1)


def frag_sup(w: WeightAssignment, start: TemplateMarking):
    """Supremum over epsilon, attained at half the smallest positive weight."""
    smallest = w.min_positive()
    eps = smallest / 2 if smallest is not None else Fraction(1)
    return frag_index(w, eps, start)
