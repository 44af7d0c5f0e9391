"""Brute-force oracles over finite enumerations, and the comparison suite behind ``check``.

Everything here works point by point on ``enumerate_points`` output and shares
no code with the symbolic routines it is compared against, beyond the data
types themselves.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations
from typing import Iterable, Optional

from .construction import Check, build_construction_tree, verify_construction, verify_quotient
from .fragmentation import TemplateMarking, clopen_diam, derivation_sequence, derive_once, frag_index
from .indices import (cb_derive, cb_rank, interval_type, ordinal_index,
                      point_to_ordinal, tree_of_interval)
from .ordinal import INFINITE, Ordinal, omega_pow
from .presentation import (ClopenDescriptor, PointAddress, SimpleFunction, TreePresentation,
                           WeightAssignment, cantor_set, distance,
                           enumerate_points, evaluate, lipschitz_bound, member, validate)

__all__ = ["oracle_distance", "oracle_diameter", "oracle_ordinal_index", "oracle_derive",
           "oracle_lipschitz", "oracle_cb_iteration", "cantor_basis_identity",
           "point_to_ordinal_violations", "run_checks"]


def _nodes(b: PointAddress) -> set:
    return set(b.prefixes())


def oracle_distance(w: WeightAssignment, b: PointAddress, c: PointAddress) -> Fraction:
    diff = _nodes(b) ^ _nodes(c)
    return max((w.of(a.template) for a in diff), default=Fraction(0))


def oracle_diameter(w: WeightAssignment, points: Iterable[PointAddress]) -> Fraction:
    pts = list(points)
    return max((oracle_distance(w, b, c) for b, c in combinations(pts, 2)), default=Fraction(0))


def oracle_ordinal_index(p: TreePresentation, copy_bound: int = 2) -> int:
    """Count rounds of deleting maximal nodes from an enumeration."""
    alive = set(enumerate_points(p, copy_bound))
    rounds = 0
    while alive:
        parents = {b.parent() for b in alive if b.steps}
        alive = {b for b in alive if b in parents}
        rounds += 1
    return rounds


def oracle_derive(F: TemplateMarking, w: WeightAssignment, eps, copy_bound: int) -> set:
    """Templates of enumerated points of ``F`` whose every basic neighbourhood has diameter ``>= eps``.

    The smallest neighbourhood available inside the enumeration removes every
    finite-multiplicity child and the omega-copies ``0..copy_bound-2``; one
    enumerated tail copy of each omega-group remains.  Diameter is monotone
    under removal, so only that neighbourhood needs checking.
    """
    eps = Fraction(eps)
    points = enumerate_points(F.p, copy_bound)
    in_f = [b for b in points if b.template in F.marked]
    kept = set()
    for b in in_f:
        n = F.p.node(b.template)
        excluded = []
        for g, grp in enumerate(n.groups):
            count = copy_bound - 1 if grp.is_omega else grp.multiplicity
            excluded.extend(b.child(g, k) for k in range(count))
        c = ClopenDescriptor(b, frozenset(excluded))
        if oracle_diameter(w, [x for x in in_f if member(c, x)]) >= eps:
            kept.add(b.template)
    return kept


def oracle_lipschitz(f: SimpleFunction, w: WeightAssignment, p: TreePresentation, copy_bound: int):
    points = enumerate_points(p, copy_bound)
    vals = {b: evaluate(f, b) for b in points}
    best = Fraction(0)
    for b, c in combinations(points, 2):
        diff = abs(vals[b] - vals[c])
        d = oracle_distance(w, b, c)
        if d == 0:
            if diff:
                return INFINITE
        else:
            best = max(best, diff / d)
    return best


def oracle_cb_iteration(p: TreePresentation) -> tuple[int, object]:
    """Iterate ``cb_derive`` from the full marking: (steps to empty, size of last non-empty set)."""
    F = TemplateMarking.full(p)
    steps, last = 0, F
    while F:
        last = F
        F = cb_derive(F)
        steps += 1
    return steps, last.point_count()


def cantor_basis_identity(depth: int, copy_bound: int) -> list[str]:
    """Check ``U_{A,N} = U_A minus the cones of A+{n}, max(A) < n <= N`` pointwise."""
    from .presentation import cantor_tree
    pts = enumerate_points(cantor_tree(depth), copy_bound)
    sets = [cantor_set(b) for b in pts]
    bad = []
    for A in sets:
        top = A[-1] if A else 0
        for N in range(top, top + copy_bound + 2):
            for B in sets:
                lhs = tuple(x for x in B if x <= N) == A
                rhs = B[:len(A)] == A and not any(B[:len(A) + 1] == A + (n,)
                                                  for n in range(top + 1, N + 1))
                if lhs != rhs:
                    bad.append(f"A={A} N={N} B={B}")
    return bad


def _least_in_cone(p: TreePresentation, b: PointAddress) -> PointAddress:
    """Leftmost point of a cone in the canonical order: finite groups first, copy 0."""
    while True:
        n = p.node(b.template)
        if not n.groups:
            return b
        finite = [g for g, grp in enumerate(n.groups) if not grp.is_omega]
        b = b.child(finite[0] if finite else 0, 0)


def point_to_ordinal_violations(p: TreePresentation, copy_bound: int) -> list[str]:
    """Injectivity, range and cone-to-interval checks for ``point_to_ordinal``."""
    pts = enumerate_points(p, copy_bound)
    image = {b: point_to_ordinal(p, b) for b in pts}
    bad = []
    if len(set(image.values())) != len(pts):
        bad.append("not injective")
    beta = interval_type(p)
    for b, v in image.items():
        if beta < v:
            bad.append(f"{b} maps above beta")
    for t in pts:
        lo, hi = image[_least_in_cone(p, t)], image[t]
        for b in pts:
            inside = not (image[b] < lo) and not (hi < image[b])
            if inside != b.extends(t):
                bad.append(f"cone of {t} is not the interval [{lo}, {hi}] at {b}")
                break
    return bad


def _check(name, problems, ok_detail="") -> Check:
    problems = list(problems)
    return Check(name, not problems, "; ".join(problems[:5]) if problems else ok_detail)


def run_checks(p: TreePresentation, w: WeightAssignment, eps, copy_bound: int,
               g: Optional[SimpleFunction] = None) -> list[Check]:
    """Every symbolic-vs-oracle comparison for one instance."""
    eps = Fraction(eps)
    checks = [_check("presentation_valid", validate(p))]
    if not checks[0].passed:
        return checks
    K = copy_bound
    points = enumerate_points(p, K)
    sample = points[:25]

    o = ordinal_index(p)
    checks.append(_check("ordinal_index_oracle",
                         [] if o == oracle_ordinal_index(p, K) else [f"{o} vs {oracle_ordinal_index(p, K)}"]))
    bad = []
    for b in sample:
        for c in sample:
            if distance(w, b, c) != oracle_distance(w, b, c):
                bad.append(f"d({b},{c})")
            for a in sample[:10]:
                if distance(w, b, c) > max(distance(w, b, a), distance(w, a, c)):
                    bad.append(f"ultrametric at {b},{a},{c}")
    checks.append(_check("distance_ultrametric", bad))

    rank, count = cb_rank(p)
    steps, last = oracle_cb_iteration(p)
    bad = []
    if Ordinal.of(steps) != rank or last != count:
        bad.append(f"cb_rank ({rank},{count}) vs iteration ({steps},{last})")
    if o < rank:
        bad.append(f"CB {rank} exceeds o(T) {o}")
    checks.append(_check("cb_rank", bad))

    beta = interval_type(p)
    bad = []
    if omega_pow(o) < beta:
        bad.append(f"beta {beta} exceeds w^{o}")
    if interval_type(tree_of_interval(beta)) != beta:
        bad.append(f"roundtrip fails for {beta}")
    bad.extend(point_to_ordinal_violations(p, K))
    checks.append(_check("interval_type", bad, f"beta={beta}"))

    # derivation sequence: closedness, descent, oracle membership at K and K+1
    seq = derivation_sequence(w, eps, TemplateMarking.full(p))
    bad = []
    for F, G in zip(seq, seq[1:]):
        if not G.is_closed():
            bad.append(f"derivative not closed: {G.closedness_violations()}")
        if not G.marked < F.marked:
            bad.append("derivation stalled")
        for bound in (K, K + 1):
            brute = oracle_derive(F, w, eps, bound)
            if brute != set(G.marked):
                bad.append(f"derive_once differs from brute force at bound {bound}")
    if len(seq) - 1 > len(p.paths) + 1:
        bad.append("frag_index exceeds template count + 1")
    checks.append(_check("derive_oracle", bad, f"frag={frag_index(w, eps, TemplateMarking.full(p))}"))

    bad = []
    F = TemplateMarking.full(p)
    for b in sample:
        n = p.node(b.template)
        descs = [ClopenDescriptor(b)]
        if n.groups:
            descs.append(ClopenDescriptor(b, frozenset(b.child(g, 0) for g in range(len(n.groups)))))
        for c in descs:
            for M in seq:
                brute = oracle_diameter(w, [x for x in points if member(c, x) and x.template in M.marked])
                if clopen_diam(c, M, w) != brute:
                    bad.append(f"diam of {c.root} kind {c.kind}")
    checks.append(_check("clopen_diam_oracle", bad))

    bad = []
    for b in sample:
        for c in sample:
            s, t = set(x for x in points if member(ClopenDescriptor(b), x)), \
                   set(x for x in points if member(ClopenDescriptor(c), x))
            if s & t and not (s <= t or t <= s):
                bad.append(f"U_{b} and U_{c}")
    checks.append(_check("basis_trichotomy", bad))

    ones = WeightAssignment.uniform(p)
    bad = []
    a, b_ = TemplateMarking.full(p), TemplateMarking.full(p)
    for _ in range(len(p.paths) + 2):
        if not (a or b_):
            break
        if a != b_:
            bad.append(f"{a.labels()} vs {b_.labels()}")
            break
        a, b_ = derive_once(a, ones, Fraction(1, 2)), cb_derive(b_)
    checks.append(_check("weight_one_bridge", bad))

    bad = []
    scales = sorted(set(w.values()) | {eps}) + [w.max_weight() + 1]
    scales = [s for s in scales if s > 0]
    frags = [frag_index(w, s, TemplateMarking.full(p)) for s in scales]
    for (s1, f1), (s2, f2) in zip(zip(scales, frags), zip(scales[1:], frags[1:])):
        if f1 is INFINITE or f2 is INFINITE or f1 < f2:
            bad.append(f"frag({s1})={f1} < frag({s2})={f2}")
    checks.append(_check("frag_monotone", bad))

    if seq[-1]:
        checks.append(Check("construction", False, "fragmentation index is infinite"))
        return checks
    tree = build_construction_tree(p, w, eps)
    checks.extend(verify_construction(tree, K))
    checks.extend(verify_quotient(tree, K))

    if g is not None:
        from .approximation import approximate
        lip = lipschitz_bound(g, w, p)
        brute = oracle_lipschitz(g, w, p, g.copy_bound())
        checks.append(_check("lipschitz_oracle", [] if lip == brute else [f"{lip} vs {brute}"]))
        if lip is not INFINITE:
            _, report = approximate(p, w, g, eps)
            checks.extend(Check("approx_" + c.name, c.passed, c.detail) for c in report.checks
                          if c.name in ("tilde_oscillation", "error_bound", "index_shape"))
    return checks
