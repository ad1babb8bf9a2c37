"""
Apprentissage contraint au niveau des caractéristiques : projection linéaire
F (p×3) réutilisable sur d'autres cubes du même capteur.

F = (X((1/λ)L + C₁)Xᵀ)⁻¹XCSᵀ ; seule la matrice p×p est formée.
"""

from dataclasses import dataclass
from typing import List

import numpy as np
from scipy import linalg

from ..correspondence.pairs import Correspondence
from ..graph.knn import SparseGraph, laplacian_apply
from ..hsi_io.cube import SpectralCube
from ..hsi_io.image import ColorImage
from ..hsi_io.projection import ProjectionMatrix
from ..utils.errors import DimensionError, SingularSystemError
from ..utils.logging import get_logger
from .instance import check_coverage, check_problem, constraint_targets, resolve_lambda
from .options import EmbeddingResult, SolveOptions

logger = get_logger(__name__)

# en deçà, la factorisation de Cholesky est jugée numériquement singulière
PIVOT_RATIO = 1e-14


@dataclass
class FeatureSolution:
    projection: ProjectionMatrix
    lam: float
    residuals: List[float]


def normal_equations(cube: SpectralCube, graph: SparseGraph, corr: Correspondence,
                     reference: ColorImage, lam: float, ridge: float = 0.0):
    """
    Forme M = X((1/λ)L + C₁)Xᵀ + ridge·I (p×p) et B = XCSᵀ (p×3).
    """
    X = cube.data
    XL = laplacian_apply(graph, X)
    M = (XL @ X.T) / lam + (X * corr.row_sums[np.newaxis, :]) @ X.T
    M = 0.5 * (M + M.T) + ridge * np.eye(cube.bands)
    B = X @ constraint_targets(corr, reference).T
    return M, B


def solve_feature_level(cube: SpectralCube, graph: SparseGraph, corr: Correspondence,
                        reference: ColorImage, opts: SolveOptions = None) -> FeatureSolution:
    """
    Résout les équations normales par factorisation de Cholesky.

    Raises:
        SingularSystemError: M singulière (suggère --ridge)
    """
    opts = opts or SolveOptions()
    check_problem(graph, corr, reference, cube.n_pixels)
    check_coverage(graph, corr, opts.ridge)
    lam = resolve_lambda(opts, graph, corr)

    M, B = normal_equations(cube, graph, corr, reference, lam, opts.ridge)
    try:
        factor = linalg.cho_factor(M, lower=True, check_finite=True)
    except linalg.LinAlgError:
        raise SingularSystemError(
            f"Matrice X((1/λ)L + C₁)Xᵀ de taille {cube.bands}×{cube.bands} non définie positive ; "
            f"essayer --ridge"
        ) from None
    pivots = np.abs(np.diag(factor[0]))
    if pivots.min() ** 2 <= PIVOT_RATIO * pivots.max() ** 2:
        raise SingularSystemError(
            f"Matrice X((1/λ)L + C₁)Xᵀ numériquement singulière ; essayer --ridge"
        )
    F = linalg.cho_solve(factor, B)

    residual = M @ F - B
    scale = np.linalg.norm(B, axis=0)
    residuals = [float(np.linalg.norm(residual[:, c]) / scale[c]) if scale[c] > 0 else 0.0 for c in range(3)]
    logger.info(f"Niveau caractéristiques résolu: lambda = {lam:.6g}, p = {cube.bands}")
    return FeatureSolution(ProjectionMatrix(F), lam, residuals)


def feature_level(cube: SpectralCube, graph: SparseGraph, corr: Correspondence,
                  reference: ColorImage, opts: SolveOptions = None) -> ProjectionMatrix:
    """
    Calcule la projection F (p×3) de l'espace spectral vers Lab.

    Args:
        cube: Cube d'apprentissage
        graph: Graphe du cube
        corr: Correspondance cube → référence
        reference: Référence en Lab
        opts: Options de résolution

    Returns:
        Matrice de projection
    """
    return solve_feature_level(cube, graph, corr, reference, opts).projection


def apply_projection(projection: ProjectionMatrix, cube: SpectralCube) -> EmbeddingResult:
    """
    Y = FᵀX, pour tout cube du même capteur.

    Raises:
        DimensionError: Nombre de bandes différent de celui de la projection
    """
    if projection.source_bands != cube.bands:
        raise DimensionError(
            f"La projection attend {projection.source_bands} bandes, le cube en a {cube.bands} "
            f"(même capteur requis)"
        )
    return EmbeddingResult(projection.weights.T @ cube.data)


def feature_stationarity_gap(projection: ProjectionMatrix, cube: SpectralCube, graph: SparseGraph,
                             corr: Correspondence, reference: ColorImage, lam: float):
    """
    Norme max du gradient 2XLXᵀF + 2λXC₁XᵀF − 2λXCSᵀ et de λXCSᵀ.
    """
    X = cube.data
    F = projection.weights
    XLXt = laplacian_apply(graph, X) @ X.T
    XC1Xt = (X * corr.row_sums[np.newaxis, :]) @ X.T
    XCSt = X @ constraint_targets(corr, reference).T
    gradient = 2.0 * XLXt @ F + 2.0 * lam * XC1Xt @ F - 2.0 * lam * XCSt
    return float(np.max(np.abs(gradient))), float(np.max(np.abs(lam * XCSt)))
