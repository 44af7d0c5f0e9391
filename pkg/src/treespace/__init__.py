"""Exact indices and clopen-tree constructions for finitely presented compact tree spaces."""

from .approximation import PipelineReport, approximate, uniform_approximation
from .construction import (ConstructionTree, build_construction_tree, quotient_map,
                           verify_construction, verify_quotient)
from .fragmentation import TemplateMarking, clopen_diam, derive_once, frag_index, frag_sup
from .indices import cb_derive, cb_rank, interval_type, ordinal_index, point_to_ordinal, tree_of_interval
from .ordinal import INFINITE, OMEGA, Ordinal, add, cmp, leading, omega_pow, omega_step, parse
from .presentation import (ClopenDescriptor, PointAddress, SimpleFunction, TreePresentation,
                           WeightAssignment, cantor_tree, distance, enumerate_points, evaluate,
                           lipschitz_bound, member, validate)

__all__ = ["ClopenDescriptor", "ConstructionTree", "INFINITE", "OMEGA", "Ordinal", "PipelineReport", "PointAddress", "SimpleFunction", "TemplateMarking", "TreePresentation", "WeightAssignment", "add", "approximate", "build_construction_tree", "cantor_tree", "cb_derive", "cb_rank", "clopen_diam", "cmp", "derive_once", "distance", "enumerate_points", "evaluate", "frag_index", "frag_sup", "interval_type", "leading", "lipschitz_bound", "member", "omega_pow", "omega_step", "ordinal_index", "parse", "point_to_ordinal", "quotient_map", "tree_of_interval", "uniform_approximation", "validate", "verify_construction", "verify_quotient"]

__version__ = "0.1.0"
