"""
Matrice de projection p×3 de l'espace spectral vers l'espace couleur.
"""

from dataclasses import dataclass
from pathlib import Path
from typing import Union

import numpy as np

from ..utils.errors import DimensionError, FormatError


@dataclass
class ProjectionMatrix:
    """Application linéaire F (p×3) ; Y = FᵀX."""

    weights: np.ndarray

    def __post_init__(self):
        self.weights = np.asarray(self.weights, dtype=np.float64)
        if self.weights.ndim != 2 or self.weights.shape[1] != 3:
            raise DimensionError(f"Une matrice de projection est p×3, reçu {self.weights.shape}")
        if self.weights.shape[0] < 1:
            raise DimensionError("Une matrice de projection a au moins une ligne")
        if not np.all(np.isfinite(self.weights)):
            raise FormatError("La matrice de projection contient des valeurs non finies")

    @property
    def source_bands(self) -> int:
        return self.weights.shape[0]


def format_float(value: float) -> str:
    """Représentation texte à 17 chiffres significatifs (aller-retour exact)."""
    return format(float(value), '.17g')


def write_projection(projection: ProjectionMatrix, path: Union[str, Path]) -> None:
    """Écrit `p 3` puis p lignes de trois réels séparés par une espace."""
    lines = [f"{projection.source_bands} 3"]
    lines += [" ".join(format_float(v) for v in row) for row in projection.weights]
    path = Path(path)
    try:
        path.write_text("\n".join(lines) + "\n", encoding='ascii')
    except OSError as e:
        raise OSError(f"Impossible d'écrire la projection {path}: {e.strerror or e}") from e


def read_projection(path: Union[str, Path]) -> ProjectionMatrix:
    """Lit une matrice de projection écrite par write_projection."""
    path = Path(path)
    try:
        lines = [line for line in path.read_text(encoding='ascii').splitlines() if line.strip()]
    except OSError as e:
        raise OSError(f"Impossible de lire la projection {path}: {e.strerror or e}") from e
    if not lines:
        raise FormatError(f"{path}: fichier de projection vide")
    head = lines[0].split()
    if len(head) != 2 or head[1] != "3" or not head[0].isdigit():
        raise FormatError(f"{path}: première ligne invalide '{lines[0]}' (attendu 'p 3')")
    p = int(head[0])
    if len(lines) - 1 != p:
        raise FormatError(f"{path}: {len(lines) - 1} lignes de poids pour p = {p}")
    rows = []
    for number, line in enumerate(lines[1:], start=2):
        parts = line.split()
        if len(parts) != 3:
            raise FormatError(f"{path}: ligne {number}: trois valeurs attendues")
        try:
            rows.append([float(v) for v in parts])
        except ValueError:
            raise FormatError(f"{path}: ligne {number}: valeur non numérique") from None
    return ProjectionMatrix(np.array(rows))
