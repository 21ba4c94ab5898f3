"""String rewriting: reduction, Froidure-Pin, Knuth-Bendix and friends."""

from .froidure_pin import FPOptions, FPResult, froidure_pin
from .knuth_bendix import coxeter_presentation, knuth_bendix
from .pseudo import PseudoBoundedResult, pseudo_bounded_test
from .semidirect import SemidirectSystem, combine_semidirect, split_semidirect
from .system import (
    Rule,
    RewriteSystem,
    check_confluence,
    critical_pairs,
    enumerate_reduced,
    format_rules,
    is_admissible,
    is_reduced,
    load_rules,
    parse_rules,
    read_rules,
    reduce,
    save_rules,
    write_rules,
)
from ..words import shortlex_cmp

__all__ = [
    "FPOptions", "FPResult", "froidure_pin", "coxeter_presentation", "knuth_bendix",
    "PseudoBoundedResult", "pseudo_bounded_test", "SemidirectSystem",
    "combine_semidirect", "split_semidirect", "Rule", "RewriteSystem",
    "check_confluence", "critical_pairs", "enumerate_reduced", "format_rules",
    "is_admissible", "is_reduced", "load_rules", "parse_rules", "read_rules", "reduce",
    "save_rules", "write_rules", "shortlex_cmp",
]
