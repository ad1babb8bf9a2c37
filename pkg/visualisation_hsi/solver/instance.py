"""
Apprentissage contraint au niveau des instances : résolution directe des
coordonnées couleur Y de chaque pixel.

Y minimise tr(YLYᵀ) + λ·tr(YC₁Yᵀ + SC₂Sᵀ − 2YCSᵀ), soit
Y = SCᵀ((1/λ)L + C₁)⁻¹. L'inverse n'est jamais formé : chaque canal est
résolu par gradient conjugué sur A = (1/λ)L + C₁ + ridge·I.
"""

from typing import Tuple

import numpy as np

from ..correspondence.pairs import Correspondence
from ..graph.knn import SparseGraph, laplacian_apply
from ..hsi_io.image import ColorImage, ColorSpace
from ..utils.errors import DimensionError, FormatError, ParameterError, UnconstrainedComponentError
from ..utils.logging import get_logger
from .cg import cg_solve
from .options import AUTO, EmbeddingResult, SolveOptions, auto_lambda

logger = get_logger(__name__)


def check_problem(graph: SparseGraph, corr: Correspondence, reference: ColorImage, n: int):
    """Vérifie la cohérence des dimensions et l'espace couleur de la référence."""
    if graph.n != n or corr.n != n:
        raise DimensionError(f"Nombres de pixels incohérents: graphe {graph.n}, correspondance {corr.n}, attendu {n}")
    if corr.m != reference.n_pixels:
        raise DimensionError(
            f"La correspondance vise {corr.m} pixels, la référence en a {reference.n_pixels}"
        )
    if reference.space is not ColorSpace.LAB:
        raise FormatError("Les contraintes de couleur s'appliquent en Lab ; convertir la référence d'abord")
    if corr.n_pairs < 1:
        raise ParameterError("Au moins une paire appariée est nécessaire")


def check_coverage(graph: SparseGraph, corr: Correspondence, ridge: float):
    """
    Vérifie que chaque composante connexe contient un pixel contraint.

    Raises:
        UnconstrainedComponentError: Avec le plus petit pixel de la première
            composante sans contrainte (si ridge = 0)
    """
    if ridge > 0:
        return
    _, labels = graph.components()
    covered = np.bincount(labels, weights=corr.constrained().astype(np.float64))
    uncovered = np.flatnonzero(covered == 0)
    if len(uncovered):
        witness = int(np.flatnonzero(np.isin(labels, uncovered))[0])
        raise UnconstrainedComponentError(
            f"Composante connexe sans pixel apparié (pixel témoin {witness}) ; "
            f"ajouter des paires ou utiliser --ridge",
            witness=witness,
        )


def resolve_lambda(opts: SolveOptions, graph: SparseGraph, corr: Correspondence) -> float:
    """λ explicite, ou k·n/c en mode automatique."""
    if opts.lam != AUTO:
        return float(opts.lam)
    if graph.k is None:
        raise ParameterError("λ automatique exige le k du graphe ; fournir lambda explicitement")
    return auto_lambda(graph.k, graph.n, corr.n_pairs)


def constraint_targets(corr: Correspondence, reference: ColorImage) -> np.ndarray:
    """Matrice SCᵀ (3×n) : somme des couleurs appariées à chaque pixel."""
    return (corr.matrix() @ reference.data.T).T


def system_operator(graph: SparseGraph, corr: Correspondence, lam: float, ridge: float):
    """
    Opérateur v ↦ ((1/λ)L + C₁ + ridge·I)v et sa diagonale.
    """
    diagonal_terms = corr.row_sums.astype(np.float64) + ridge

    def apply_A(v: np.ndarray) -> np.ndarray:
        return laplacian_apply(graph, v) / lam + diagonal_terms * v

    return apply_A, graph.degree / lam + diagonal_terms


def instance_level(graph: SparseGraph, corr: Correspondence, reference: ColorImage,
                   opts: SolveOptions = None) -> EmbeddingResult:
    """
    Calcule les couleurs Lab de tous les pixels du cube.

    Args:
        graph: Graphe spectral-spatial du cube
        corr: Correspondance cube → référence
        reference: Image de référence en Lab
        opts: Options de résolution

    Returns:
        Y (3×n, Lab) avec itérations et résidus par canal ; en cas de
        non-convergence, le résultat partiel est renvoyé avec converged=False

    Raises:
        UnconstrainedComponentError: Composante sans pixel apparié et ridge nul
    """
    opts = opts or SolveOptions()
    n = graph.n
    check_problem(graph, corr, reference, n)
    check_coverage(graph, corr, opts.ridge)

    lam = resolve_lambda(opts, graph, corr)
    targets = constraint_targets(corr, reference)
    apply_A, diagonal = system_operator(graph, corr, lam, opts.ridge)
    preconditioner = diagonal if opts.preconditioner == "jacobi" else None
    max_iter = opts.max_iter_for(n)

    Y = np.zeros((3, n))
    iterations, residuals = [], []
    converged = True
    # les trois canaux sont indépendants
    for channel in range(3):
        result = cg_solve(apply_A, targets[channel], opts.cg_tol, max_iter, preconditioner)
        Y[channel] = result.x
        iterations.append(result.iterations)
        residuals.append(result.residual)
        if not result.converged:
            converged = False
            logger.warning(
                f"Gradient conjugué non convergé sur le canal {channel} après {result.iterations} "
                f"itérations (résidu relatif {result.residual:.3e})"
            )

    logger.info(f"Niveau instance résolu: lambda = {lam:.6g}, itérations = {iterations}")
    return EmbeddingResult(Y, lam, iterations, residuals, converged)


def stationarity_gap(Y: np.ndarray, graph: SparseGraph, corr: Correspondence,
                     reference: ColorImage, lam: float) -> Tuple[float, float]:
    """
    Norme max du gradient 2YL + 2λYC₁ − 2λSCᵀ et de λSCᵀ.

    Returns:
        (‖gradient‖_max, ‖λSCᵀ‖_max)
    """
    targets = constraint_targets(corr, reference)
    gradient = 2.0 * laplacian_apply(graph, Y) + 2.0 * lam * Y * corr.row_sums[np.newaxis, :] - 2.0 * lam * targets
    return float(np.max(np.abs(gradient))), float(np.max(np.abs(lam * targets)))
