"""Strong external difference families over finite abelian groups.

Exact group and finite-field arithmetic, difference-family verifiers,
cyclotomic constructions and small exhaustive searches.
"""
from .constructions import CATALOG, build, verify_construction
from .cyclotomy import build_cyclotomy, semiprimitive_numbers
from .designs import (
    Family,
    delta,
    verify_bgsedf,
    verify_ds,
    verify_gsedf,
    verify_pds,
    verify_sedf,
)
from .errors import SedfError
from .groups import ElementSet, Group, GroupSpec, build_group, cyclic, field, parse_group

__all__ = [
    "CATALOG", "ElementSet", "Family", "Group", "GroupSpec", "SedfError", "build",
    "build_cyclotomy", "build_group", "cyclic", "delta", "field", "parse_group",
    "semiprimitive_numbers", "verify_bgsedf", "verify_construction", "verify_ds",
    "verify_gsedf", "verify_pds", "verify_sedf",
]
