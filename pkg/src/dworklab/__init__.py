"""Residual monodromy of the Dwork family and finite-field point counts."""

__version__ = "0.1.0"

from .ff import FieldCtx, field_make, field_of_order
from .linalg import Mat, Poly, charpoly
from .grp import MatGroup, gl_order, o_order, sp_order
from .qform import QuadForm, classify_type, invariant_forms
from .dwork import DworkParams, MDClass, classify_md
from .count import CountResult, count_Zt, mirror_trace
from .verify import CongruenceReport, GaloisEvidence

__all__ = [
    "FieldCtx", "field_make", "field_of_order", "Mat", "Poly", "charpoly",
    "MatGroup", "gl_order", "o_order", "sp_order", "QuadForm", "classify_type",
    "invariant_forms", "DworkParams", "MDClass", "classify_md", "CountResult",
    "count_Zt", "mirror_trace", "CongruenceReport", "GaloisEvidence",
]
