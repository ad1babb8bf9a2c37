"""
Gradient conjugué sans matrice pour les systèmes symétriques définis positifs.
"""

from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from ..utils.errors import ConvergenceError


@dataclass
class CGResult:
    x: np.ndarray
    iterations: int
    residual: float
    converged: bool


def _small_enough(r: np.ndarray, b_norm: float, b_max: float, tol: float) -> bool:
    # résidu relatif en norme 2 et en norme infinie
    return np.linalg.norm(r) <= tol * b_norm and np.max(np.abs(r)) <= tol * b_max


def cg_solve(apply_A: Callable[[np.ndarray], np.ndarray], b: np.ndarray,
             tol: float = 1e-8, max_iter: int = 200,
             diagonal: Optional[np.ndarray] = None) -> CGResult:
    """
    Résout A·x = b par gradient conjugué (préconditionné si `diagonal` est fourni).

    L'arrêt exige ‖A·x − b‖ ≤ tol·‖b‖ à la fois en norme 2 et en norme
    infinie, vérifié sur le résidu recalculé et non sur la récurrence.

    Args:
        apply_A: Produit matrice-vecteur de l'opérateur symétrique
        b: Second membre
        tol: Tolérance relative
        max_iter: Nombre maximal d'itérations
        diagonal: Diagonale de A pour un préconditionneur de Jacobi

    Returns:
        Solution, itérations effectuées, résidu relatif final et drapeau de convergence

    Raises:
        ConvergenceError: Valeurs non finies ou courbure non positive (A non définie positive)
    """
    b = np.asarray(b, dtype=np.float64)
    b_norm = float(np.linalg.norm(b))
    x = np.zeros_like(b)
    if b_norm == 0.0:
        return CGResult(x, 0, 0.0, True)
    b_max = float(np.max(np.abs(b)))
    inverse_diagonal = None if diagonal is None else 1.0 / np.asarray(diagonal, dtype=np.float64)

    r = b.copy()
    z = r if inverse_diagonal is None else inverse_diagonal * r
    p = z.copy()
    rz = float(r @ z)
    iterations = 0
    while iterations < max_iter:
        Ap = apply_A(p)
        curvature = float(p @ Ap)
        if not np.isfinite(curvature) or curvature <= 0.0:
            raise ConvergenceError(
                "Gradient conjugué: courbure non positive ou non finie (opérateur singulier ou indéfini)"
            )
        alpha = rz / curvature
        x += alpha * p
        r -= alpha * Ap
        iterations += 1
        if not np.all(np.isfinite(x)):
            raise ConvergenceError("Gradient conjugué: valeurs non finies dans l'itéré")

        if _small_enough(r, b_norm, b_max, tol):
            # confirmer sur le vrai résidu, sinon repartir de celui-ci
            r = b - apply_A(x)
            if _small_enough(r, b_norm, b_max, tol):
                break
            z = r if inverse_diagonal is None else inverse_diagonal * r
            p = z.copy()
            rz = float(r @ z)
            continue

        z = r if inverse_diagonal is None else inverse_diagonal * r
        rz_next = float(r @ z)
        p = z + (rz_next / rz) * p
        rz = rz_next

    residual_vector = b - apply_A(x)
    residual = float(np.linalg.norm(residual_vector) / b_norm)
    converged = _small_enough(residual_vector, b_norm, b_max, tol)
    return CGResult(x, iterations, residual, converged)
