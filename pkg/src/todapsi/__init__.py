"""Exact psi functions of elliptic curves and the Toda hierarchy they generate."""
from .curve import CurveElement, EllipticCurve, PointValue
from .exact import INF, NEG_INF, ExtInt, MultiPoly, QuadExt, Rational
from .psi import PsiSequence, psi_bk
from .toda import TodaParams, build_grids, verify_dtoda_phi
from .tropical import TropicalGrid, evolve, f_grid, verify_uDTE
from .valuation import ValuationPoint, val

__version__ = "0.1.0"

__all__ = [
    "CurveElement", "EllipticCurve", "PointValue", "INF", "NEG_INF", "ExtInt", "MultiPoly",
    "QuadExt", "Rational", "PsiSequence", "psi_bk", "TodaParams", "build_grids",
    "verify_dtoda_phi", "TropicalGrid", "evolve", "f_grid", "verify_uDTE", "ValuationPoint", "val",
]
