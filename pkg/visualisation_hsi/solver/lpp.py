"""
Projections préservant la localité (référence de comparaison sans ancrage
couleur) et plongement laplacien dense pour les petits graphes.
"""

from typing import Tuple

import numpy as np
from scipy import linalg

from ..graph.knn import SparseGraph, laplacian_apply
from ..hsi_io.cube import SpectralCube
from ..hsi_io.projection import ProjectionMatrix
from ..utils.errors import DimensionError, ParameterError, SingularSystemError
from ..utils.logging import get_logger

logger = get_logger(__name__)

OUTPUT_DIMS = 3
DENSE_EIGENMAPS_MAX_N = 2000


def _fix_signs(vectors: np.ndarray) -> np.ndarray:
    """Oriente chaque colonne pour que son plus grand coefficient en valeur absolue soit positif."""
    pivots = np.argmax(np.abs(vectors), axis=0)
    signs = np.sign(vectors[pivots, np.arange(vectors.shape[1])])
    signs[signs == 0] = 1.0
    return vectors * signs


def lpp_matrices(cube: SpectralCube, graph: SparseGraph) -> Tuple[np.ndarray, np.ndarray]:
    """XLXᵀ et XDXᵀ (p×p), symétrisées."""
    if graph.n != cube.n_pixels:
        raise DimensionError(f"Graphe de {graph.n} sommets pour un cube de {cube.n_pixels} pixels")
    X = cube.data
    XLX = laplacian_apply(graph, X) @ X.T
    XDX = (X * graph.degree[np.newaxis, :]) @ X.T
    return 0.5 * (XLX + XLX.T), 0.5 * (XDX + XDX.T)


def lpp_eigenpairs(cube: SpectralCube, graph: SparseGraph,
                   dims: int = OUTPUT_DIMS) -> Tuple[np.ndarray, np.ndarray]:
    """
    Résout XLXᵀf = λXDXᵀf pour les `dims` plus petites valeurs propres.

    Si XDXᵀ n'est pas définie positive, 1e-10·trace/p est ajouté à sa
    diagonale avant la réduction de Cholesky.

    Returns:
        Valeurs propres croissantes et vecteurs propres (p×dims) de norme
        XDXᵀ unitaire

    Raises:
        ParameterError: Moins de `dims` bandes
        SingularSystemError: Factorisation impossible malgré la régularisation
    """
    p = cube.bands
    if p < dims:
        raise ParameterError(f"LPP exige au moins {dims} bandes, le cube en a {p}")
    XLX, XDX = lpp_matrices(cube, graph)

    try:
        linalg.cholesky(XDX, lower=True)
    except linalg.LinAlgError:
        ridge = 1e-10 * np.trace(XDX) / p
        logger.warning(f"XDXᵀ non définie positive, régularisation {ridge:.3e} ajoutée")
        XDX = XDX + ridge * np.eye(p)

    try:
        values, vectors = linalg.eigh(XLX, XDX, subset_by_index=(0, dims - 1))
    except linalg.LinAlgError as e:
        raise SingularSystemError(f"Problème propre généralisé LPP insoluble: {e}") from e
    return values, _fix_signs(vectors)


def lpp_baseline(cube: SpectralCube, graph: SparseGraph) -> ProjectionMatrix:
    """
    Projection LPP à trois dimensions du cube.

    Args:
        cube: Cube hyperspectral (p >= 3)
        graph: Graphe du cube

    Returns:
        Matrice p×3 des vecteurs propres généralisés
    """
    values, vectors = lpp_eigenpairs(cube, graph)
    logger.info(f"LPP: valeurs propres {', '.join(f'{v:.6g}' for v in values)}")
    return ProjectionMatrix(vectors)


def laplacian_eigenmaps_dense(graph: SparseGraph, dims: int = OUTPUT_DIMS) -> np.ndarray:
    """
    Plongement laplacien dense : Ly = λDy, vecteur propre constant écarté.

    Réservé aux petits graphes sans sommet isolé (contrôle des tests).

    Returns:
        Plongement dims×n
    """
    n = graph.n
    if n > DENSE_EIGENMAPS_MAX_N:
        raise ParameterError(f"Plongement dense limité à {DENSE_EIGENMAPS_MAX_N} sommets, reçu {n}")
    if dims + 1 > n:
        raise ParameterError(f"{dims} dimensions demandées pour {n} sommets")
    if np.any(graph.degree <= 0):
        raise SingularSystemError("Sommet isolé : D n'est pas définie positive")
    L = graph.dense_laplacian()
    _, vectors = linalg.eigh(L, np.diag(graph.degree), subset_by_index=(1, dims))
    return _fix_signs(vectors).T
