"""Deterministic Graphviz output for presentations and construction trees."""

from __future__ import annotations

from typing import Optional

from .construction import ConstructionTree
from .presentation import OMEGA_COPIES, TreePresentation, WeightAssignment, format_path

__all__ = ["export_dot"]


def _mult(m) -> str:
    return "×ω" if m == OMEGA_COPIES else f"×{m}"


def _presentation_dot(p: TreePresentation, w: Optional[WeightAssignment]) -> list[str]:
    lines = []
    for q in p.paths:
        label = format_path(q)
        if w is not None:
            label += f"\\nw={w.of(q)}"
        lines.append(f'  "{format_path(q)}" [label="{label}"];')
    for q in p.paths:
        for cq, grp in p.children(q):
            lines.append(f'  "{format_path(q)}" -> "{format_path(cq)}" [label="{_mult(grp.multiplicity)}"];')
    return lines


def _construction_dot(t: ConstructionTree) -> list[str]:
    lines = []
    ids = [format_path(n.key.root) + ("-" + "-".join(map(str, sorted(n.key.excluded))) if n.key.excluded else "")
           for n in t.nodes]
    order = sorted(range(len(t.nodes)), key=lambda j: t.nodes[j].key)
    for j in order:
        n = t.nodes[j]
        lines.append(f'  "{ids[j]}" [label="{n.key.label()}\\ntype {n.key.kind}\\nalpha={n.alpha}"];')
    for j in order:
        i = t.parents[j]
        if i is not None:
            lines.append(f'  "{ids[i]}" -> "{ids[j]}" [label="{_mult(t.multiplicity(j))}"];')
        elif t.multiplicity(j) != 1:
            lines.append(f'  "{ids[j]}" [xlabel="{_mult(t.multiplicity(j))}"];')
    return lines


def export_dot(obj, w: Optional[WeightAssignment] = None, name: str = "T") -> str:
    """DOT digraph; node ids are template paths, edges carry the copy multiplicity."""
    if isinstance(obj, ConstructionTree):
        body = _construction_dot(obj)
        name = "N" if name == "T" else name
    elif isinstance(obj, TreePresentation):
        body = _presentation_dot(obj, w)
    else:
        raise TypeError("expected a TreePresentation or ConstructionTree")
    return "\n".join([f"digraph {name} {{"] + body + ["}"]) + "\n"
