from .annotate import annotate
from .check import check_decl, check_program, typecheck_decl
from .engine import Options
from .report import CALLPRE, CONSQ, FRAMESEP, POSTCHECK, CaseReport, DeclReport, Obligation, Step

__all__ = [
    "CALLPRE",
    "CONSQ",
    "FRAMESEP",
    "POSTCHECK",
    "CaseReport",
    "DeclReport",
    "Obligation",
    "Options",
    "Step",
    "annotate",
    "check_decl",
    "check_program",
    "typecheck_decl",
]
