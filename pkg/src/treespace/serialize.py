"""JSON files for trees (with optional weights) and locally constant functions."""

from __future__ import annotations

import json
from fractions import Fraction
from typing import Optional

from .presentation import (OMEGA_COPIES, ChildGroup, FNode, PresentationError, PresentationNode,
                           SimpleFunction, TreePresentation, WeightAssignment, validate,
                           validate_function)

__all__ = ["parse_rational", "format_rational", "tree_from_json", "tree_to_json",
           "function_from_json", "function_to_json", "load_tree", "load_function", "dumps"]


def parse_rational(text) -> Fraction:
    """``"p/q"`` (or an integer) to a ``Fraction``; floats are rejected to keep arithmetic exact."""
    if isinstance(text, bool) or isinstance(text, float):
        raise ValueError(f"expected an exact rational, got {text!r}")
    if isinstance(text, int):
        return Fraction(text)
    if not isinstance(text, str):
        raise ValueError(f"expected a rational string, got {text!r}")
    s = text.strip()
    num, _, den = s.partition("/")
    try:
        out = Fraction(int(num), int(den)) if den else Fraction(int(num))
    except (ValueError, ZeroDivisionError):
        raise ValueError(f"malformed rational {text!r}") from None
    return out


def format_rational(x) -> str:
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


def tree_from_json(data: dict, default_weight=1) -> tuple[TreePresentation, WeightAssignment]:
    """Presentation and weights from ``{"roots": [NODE, ...]}``; missing weights default to 1."""
    if not isinstance(data, dict) or not isinstance(data.get("roots"), list) or not data["roots"]:
        raise PresentationError(["roots: a non-empty list is required"])
    weights: dict = {}
    problems: list[str] = []

    def build(obj, path) -> PresentationNode:
        if not isinstance(obj, dict):
            problems.append(f"{_where(path)}: node must be an object")
            return PresentationNode()
        try:
            weights[path] = parse_rational(obj.get("weight", str(default_weight)))
            if weights[path] < 0:
                problems.append(f"{_where(path)}: negative weight")
        except ValueError as exc:
            problems.append(f"{_where(path)}: {exc}")
        groups = []
        for g, grp in enumerate(obj.get("groups", [])):
            if not isinstance(grp, dict) or "template" not in grp:
                problems.append(f"{_where(path + (g,))}: group needs a template")
                continue
            m = grp.get("multiplicity", 1)
            if m != OMEGA_COPIES and (isinstance(m, bool) or not isinstance(m, int)):
                problems.append(f"{_where(path + (g,))}: multiplicity must be an integer or 'omega'")
                m = 1
            groups.append(ChildGroup(build(grp["template"], path + (g,)), m))
        return PresentationNode(tuple(groups))

    roots = tuple(build(r, (i,)) for i, r in enumerate(data["roots"]))
    p = TreePresentation(roots)
    problems.extend(validate(p))
    if problems:
        raise PresentationError(problems)
    return p, WeightAssignment(weights)


def _where(path) -> str:
    return "r" + ".".join(str(x) for x in path)


def tree_to_json(p: TreePresentation, w: Optional[WeightAssignment] = None) -> dict:
    def dump(n: PresentationNode, path):
        out: dict = {}
        if w is not None:
            out["weight"] = format_rational(w.of(path))
        out["groups"] = [{"template": dump(grp.template, path + (g,)), "multiplicity": grp.multiplicity}
                         for g, grp in enumerate(n.groups)]
        return out

    return {"roots": [dump(r, (i,)) for i, r in enumerate(p.roots)]}


def function_from_json(data, p: TreePresentation) -> SimpleFunction:
    """A function file mirrors the tree: one ``FNODE`` per root, or a single one for one root."""
    items = data.get("roots") if isinstance(data, dict) and "roots" in data else [data]

    def build(obj) -> FNode:
        if not isinstance(obj, dict) or "value" not in obj:
            raise PresentationError(["function node needs a value"])
        groups = []
        for grp in obj.get("groups", []):
            groups.append(tuple(build(x) for x in (grp or {}).get("explicit", [])))
        return FNode(parse_rational(obj["value"]), tuple(groups))

    f = SimpleFunction(tuple(build(x) for x in items))
    problems = validate_function(p, f)
    if problems:
        raise PresentationError(problems)
    return f


def function_to_json(f: SimpleFunction) -> dict:
    def dump(n: FNode):
        out: dict = {"value": format_rational(n.value)}
        if n.groups:
            out["groups"] = [{"explicit": [dump(x) for x in grp]} for grp in n.groups]
        return out

    if len(f.roots) == 1:
        return dump(f.roots[0])
    return {"roots": [dump(r) for r in f.roots]}


def load_tree(path: str):
    with open(path) as fh:
        return tree_from_json(json.load(fh))


def load_function(path: str, p: TreePresentation) -> SimpleFunction:
    with open(path) as fh:
        return function_from_json(json.load(fh), p)


def dumps(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=False) + "\n"
