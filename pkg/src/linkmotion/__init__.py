"""Motion groups of split links: free products, symmetric automorphisms,
the semidirect decomposition of the motion group, and rooted L-trees."""

from .catalog import LinkSpec, PieceSpec, builtin_piece, htrivial, unlink, validate
from .errors import (
    InvalidMove,
    InvalidSpec,
    MissingSelfConjugation,
    MotionGroupError,
    NotLaminar,
    ParseError,
    SpecMismatch,
    Unsupported,
)
from .fpauto import FactorAut, PartialConjugation, SymmetricFPAut, compose, inverse, is_inner
from .freeprod import FactorElement, FactorGroup, FreeProduct, Word
from .grammar import format_element, parse_element
from .ltree import LTree, enumerate_trees
from .motion import R3, S3, MotionElement, MotionGroup, ProbeResult, finiteness_probe
from .presentation import Presentation, present
from .specio import dump_spec, load_spec, spec_from_document

__version__ = "0.1.0"

__all__ = [
    "LinkSpec",
    "PieceSpec",
    "builtin_piece",
    "htrivial",
    "unlink",
    "validate",
    "InvalidMove",
    "InvalidSpec",
    "MissingSelfConjugation",
    "MotionGroupError",
    "NotLaminar",
    "ParseError",
    "SpecMismatch",
    "Unsupported",
    "FactorAut",
    "PartialConjugation",
    "SymmetricFPAut",
    "compose",
    "inverse",
    "is_inner",
    "FactorElement",
    "FactorGroup",
    "FreeProduct",
    "Word",
    "format_element",
    "parse_element",
    "LTree",
    "enumerate_trees",
    "R3",
    "S3",
    "MotionElement",
    "MotionGroup",
    "ProbeResult",
    "finiteness_probe",
    "Presentation",
    "present",
    "dump_spec",
    "load_spec",
    "spec_from_document",
]
