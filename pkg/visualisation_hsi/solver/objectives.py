"""
Valeurs des fonctions objectifs, sous forme de traces.

Ces évaluations ne servent pas à la résolution ; elles permettent de vérifier
l'optimalité des solutions et de comparer les deux niveaux d'apprentissage.
"""

import numpy as np

from ..correspondence.pairs import Correspondence
from ..graph.knn import SparseGraph, laplacian_apply
from ..hsi_io.cube import SpectralCube
from ..hsi_io.image import ColorImage
from ..hsi_io.projection import ProjectionMatrix
from ..utils.errors import DimensionError
from .instance import constraint_targets


def objective_instance(Y: np.ndarray, graph: SparseGraph, corr: Correspondence,
                       reference: ColorImage, lam: float) -> float:
    """
    tr(YLYᵀ) + λ·tr(YC₁Yᵀ + SC₂Sᵀ − 2YCSᵀ).

    Args:
        Y: Couleurs 3×n
        graph: Graphe du cube
        corr: Correspondance
        reference: Référence (3×m)
        lam: Poids de la contrainte

    Returns:
        Valeur de l'objectif, terme constant SC₂Sᵀ compris
    """
    Y = np.asarray(Y, dtype=np.float64)
    if Y.shape != (3, graph.n) or corr.n != graph.n or corr.m != reference.n_pixels:
        raise DimensionError(
            f"Formes incompatibles: Y {Y.shape}, graphe {graph.n}, correspondance {corr.n}×{corr.m}, "
            f"référence {reference.n_pixels}"
        )
    S = reference.data
    smoothness = float(np.sum(laplacian_apply(graph, Y) * Y))
    fit = (
        float(np.sum(Y * Y * corr.row_sums[np.newaxis, :]))
        + float(np.sum(S * S * corr.col_sums[np.newaxis, :]))
        - 2.0 * float(np.sum(Y * constraint_targets(corr, reference)))
    )
    return smoothness + lam * fit


def objective_feature(projection: ProjectionMatrix, cube: SpectralCube, graph: SparseGraph,
                      corr: Correspondence, reference: ColorImage, lam: float) -> float:
    """Objectif au niveau caractéristiques, évalué en Y = FᵀX."""
    if projection.source_bands != cube.bands:
        raise DimensionError(f"Projection de {projection.source_bands} bandes pour un cube de {cube.bands}")
    return objective_instance(projection.weights.T @ cube.data, graph, corr, reference, lam)
