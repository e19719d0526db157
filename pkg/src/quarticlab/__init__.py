"""Exact arithmetic on smooth plane quartics over finite fields."""

from .field import FieldElement, field_create, parse_field
from .forms import BinaryForm, ParseError, TernaryForm, parse_ternary_form, serialize
from .incidence import (find_split_line, find_split_tangent, intersection_divisor, pencil_report,
                        serre_weil_floor)
from .projective import ProjLine, ProjPoint
from .quartic import PlaneQuartic, apply_pgl3, fixture, random_smooth_quartic
from .special import (bitangency_classification, bitangents, char3_flex_conic, geometric_flexes,
                      is_galois_point)
from .tangential import (count_xc_points, genus_constants, is_frobenius_nonclassical, tangential_image,
                         xc_irreducibility_verdict)

__version__ = "0.1.0"

__all__ = [
    "BinaryForm", "FieldElement", "ParseError", "PlaneQuartic", "ProjLine", "ProjPoint", "TernaryForm",
    "apply_pgl3", "bitangency_classification", "bitangents", "char3_flex_conic", "count_xc_points",
    "field_create", "find_split_line", "find_split_tangent", "fixture", "genus_constants", "geometric_flexes",
    "intersection_divisor", "is_frobenius_nonclassical", "is_galois_point", "parse_field", "parse_ternary_form",
    "pencil_report", "random_smooth_quartic", "serialize", "serre_weil_floor", "tangential_image",
    "xc_irreducibility_verdict",
]
