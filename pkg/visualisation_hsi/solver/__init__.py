"""
Solveurs de l'apprentissage de variété contraint : niveau instance, niveau
caractéristiques, référence LPP et évaluation des objectifs.
"""

from .options import SolveOptions, EmbeddingResult, auto_lambda, format_diagnostics
from .cg import CGResult, cg_solve
from .instance import instance_level, stationarity_gap
from .feature import (
    FeatureSolution, feature_level, solve_feature_level, apply_projection, feature_stationarity_gap
)
from .lpp import lpp_baseline, lpp_eigenpairs, laplacian_eigenmaps_dense
from .objectives import objective_instance, objective_feature

__all__ = [
    "SolveOptions",
    "EmbeddingResult",
    "auto_lambda",
    "format_diagnostics",
    "CGResult",
    "cg_solve",
    "instance_level",
    "stationarity_gap",
    "FeatureSolution",
    "feature_level",
    "solve_feature_level",
    "apply_projection",
    "feature_stationarity_gap",
    "lpp_baseline",
    "lpp_eigenpairs",
    "laplacian_eigenmaps_dense",
    "objective_instance",
    "objective_feature",
]
