"""
Options et résultats des solveurs.
"""

import math
from dataclasses import dataclass, field
from typing import List, Optional, Union

import numpy as np

from ..utils.errors import ParameterError

AUTO = "auto"


@dataclass
class SolveOptions:
    """
    Options de résolution.

    Attributes:
        lam: Poids λ de la contrainte de couleur, ou "auto" (λ = k·n/c)
        cg_tol: Résidu relatif visé par le gradient conjugué
        cg_max_iter: Itérations maximales ; None donne max(200, 10·√n)
        ridge: Terme de Tikhonov ajouté à la diagonale (0 par défaut)
        preconditioner: "none" ou "jacobi"
    """

    lam: Union[float, str] = AUTO
    cg_tol: float = 1e-8
    cg_max_iter: Optional[int] = None
    ridge: float = 0.0
    preconditioner: str = "none"

    def __post_init__(self):
        if isinstance(self.lam, str):
            if self.lam.lower() != AUTO:
                raise ParameterError(f"lambda doit être 'auto' ou un réel > 0, reçu {self.lam!r}")
            self.lam = AUTO
        elif not (math.isfinite(self.lam) and self.lam > 0):
            raise ParameterError(f"lambda doit être > 0, reçu {self.lam}")
        if not 0 < self.cg_tol < 1:
            raise ParameterError(f"cg_tol doit être dans ]0, 1[, reçu {self.cg_tol}")
        if self.cg_max_iter is not None and self.cg_max_iter < 1:
            raise ParameterError(f"cg_max_iter doit être >= 1, reçu {self.cg_max_iter}")
        if not self.ridge >= 0:
            raise ParameterError(f"ridge doit être >= 0, reçu {self.ridge}")
        if self.preconditioner not in ("none", "jacobi"):
            raise ParameterError(f"Préconditionneur inconnu: {self.preconditioner!r}")

    def max_iter_for(self, n: int) -> int:
        if self.cg_max_iter is not None:
            return self.cg_max_iter
        return max(200, int(math.ceil(10.0 * math.sqrt(n))))


def auto_lambda(k: int, n: int, c: int) -> float:
    """λ = k·n/c (produit entier, puis division)."""
    if c < 1:
        raise ParameterError("λ automatique impossible sans paire appariée")
    return (k * n) / c


@dataclass
class EmbeddingResult:
    """
    Coordonnées couleur Y (3×n, espace Lαβ) et diagnostics de résolution.
    """

    Y: np.ndarray
    lam: Optional[float] = None
    iterations: List[int] = field(default_factory=list)
    residuals: List[float] = field(default_factory=list)
    converged: bool = True


def format_diagnostics(lam: float, iterations: List[int], residuals: List[float]) -> str:
    """Ligne de synthèse `lambda=<v> iters=<a>,<b>,<c> res=<ra>,<rb>,<rc>`."""
    iters = ",".join(str(i) for i in iterations)
    res = ",".join(repr(float(r)) for r in residuals)
    return f"lambda={float(lam)!r} iters={iters} res={res}"
