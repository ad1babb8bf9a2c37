"""
Correspondance parcimonieuse entre les pixels du cube et ceux de l'image de
référence.
"""

import math
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Tuple, Union

import numpy as np
from scipy import sparse

from ..utils.errors import DimensionError, FormatError, GeometryError, ParameterError
from ..utils.logging import get_logger

logger = get_logger(__name__)


@dataclass
class Correspondence:
    """
    Appariements (i, j) entre un pixel i du cube (n pixels) et un pixel j de
    la référence (m pixels).

    Les paires sont dédoublonnées et triées ; `row_sums` et `col_sums` sont
    les diagonales C₁ et C₂ (comptes entiers).
    """

    n: int
    m: int
    pairs: np.ndarray
    row_sums: np.ndarray
    col_sums: np.ndarray

    @classmethod
    def from_pairs(cls, n: int, m: int, pairs: Iterable[Tuple[int, int]]) -> "Correspondence":
        """
        Construit une correspondance ; une paire (i, j) répétée n'est gardée
        qu'une fois, un même i peut être apparié à plusieurs j.
        """
        pairs = np.asarray(list(pairs) if not isinstance(pairs, np.ndarray) else pairs, dtype=np.int64)
        pairs = pairs.reshape(-1, 2)
        if n < 1 or m < 1:
            raise DimensionError(f"Nombres de pixels invalides: n = {n}, m = {m}")
        if len(pairs):
            if pairs[:, 0].min() < 0 or pairs[:, 0].max() >= n:
                raise DimensionError(f"Indice de pixel du cube hors de [0, {n})")
            if pairs[:, 1].min() < 0 or pairs[:, 1].max() >= m:
                raise DimensionError(f"Indice de pixel de la référence hors de [0, {m})")
        pairs = np.unique(pairs, axis=0)
        row_sums = np.bincount(pairs[:, 0], minlength=n).astype(np.int64)
        col_sums = np.bincount(pairs[:, 1], minlength=m).astype(np.int64)
        return cls(n, m, pairs, row_sums, col_sums)

    @property
    def n_pairs(self) -> int:
        return len(self.pairs)

    def matrix(self) -> sparse.csr_matrix:
        """Matrice binaire C (n×m)."""
        return sparse.csr_matrix(
            (np.ones(self.n_pairs), (self.pairs[:, 0], self.pairs[:, 1])), shape=(self.n, self.m)
        )

    def constrained(self) -> np.ndarray:
        """Masque des pixels du cube appariés au moins une fois."""
        return self.row_sums > 0


def sample_count(fraction: float, n: int) -> int:
    """⌈fraction·n⌉, insensible au bruit d'arrondi du produit."""
    if not 0.0 < fraction <= 1.0:
        raise ParameterError(f"La fraction doit être dans ]0, 1], reçu {fraction}")
    return min(n, max(1, math.ceil(round(fraction * n, 9))))


def sample_indices(n: int, fraction: float, seed: int) -> np.ndarray:
    """Tire ⌈fraction·n⌉ indices distincts, uniformément et sans remise, triés."""
    count = sample_count(fraction, n)
    rng = np.random.default_rng(seed)
    return np.sort(rng.choice(n, size=count, replace=False))


def sample_aligned(n: int, fraction: float, seed: int = 0) -> Correspondence:
    """
    Apparie un échantillon de pixels à eux-mêmes (cube et référence alignés).

    Args:
        n: Nombre de pixels (identique des deux côtés)
        fraction: Part des pixels appariés, dans ]0, 1]
        seed: Graine du tirage

    Returns:
        Correspondance {(i, i)}
    """
    indices = sample_indices(n, fraction, seed)
    logger.info(f"{len(indices)} paires tirées sur {n} pixels alignés (graine {seed})")
    return Correspondence.from_pairs(n, n, np.stack([indices, indices], axis=1))


def read_pairs(path: Union[str, Path], cube_shape: Tuple[int, int],
               ref_shape: Tuple[int, int]) -> Correspondence:
    """
    Lit un fichier CSV `hsi_row,hsi_col,ref_row,ref_col` (entiers à partir de 0,
    lignes `#` ignorées).

    Args:
        path: Chemin du fichier
        cube_shape: (hauteur, largeur) du cube
        ref_shape: (hauteur, largeur) de la référence

    Raises:
        FormatError: Ligne mal formée, coordonnée hors grille ou ligne dupliquée
    """
    path = Path(path)
    try:
        text = path.read_text(encoding='utf-8')
    except OSError as e:
        raise OSError(f"Impossible de lire le fichier de paires {path}: {e.strerror or e}") from e

    (ch, cw), (rh, rw) = cube_shape, ref_shape
    seen = {}
    pairs = []
    for number, line in enumerate(text.splitlines(), start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith('#'):
            continue
        parts = [p.strip() for p in stripped.split(',')]
        try:
            hr, hc, rr, rc = (int(p) for p in parts)
        except ValueError:
            raise FormatError(f"{path}: ligne {number}: quatre entiers attendus, reçu '{stripped}'") from None
        if not (0 <= hr < ch and 0 <= hc < cw):
            raise FormatError(f"{path}: ligne {number}: coordonnée du cube ({hr}, {hc}) hors de la grille {ch}×{cw}")
        if not (0 <= rr < rh and 0 <= rc < rw):
            raise FormatError(f"{path}: ligne {number}: coordonnée de référence ({rr}, {rc}) hors de la grille {rh}×{rw}")
        pair = (hr * cw + hc, rr * rw + rc)
        if pair in seen:
            raise FormatError(f"{path}: ligne {number}: doublon de la ligne {seen[pair]}")
        seen[pair] = number
        pairs.append(pair)

    return Correspondence.from_pairs(ch * cw, rh * rw, pairs)


def write_pairs(correspondence: Correspondence, path: Union[str, Path],
                cube_width: int, ref_width: int) -> None:
    """Écrit les paires au format CSV `hsi_row,hsi_col,ref_row,ref_col`."""
    pairs = correspondence.pairs
    hr, hc = np.divmod(pairs[:, 0], cube_width)
    rr, rc = np.divmod(pairs[:, 1], ref_width)
    write_grid_pairs(np.stack([hr, hc, rr, rc], axis=1), path)


def write_grid_pairs(grid_pairs: np.ndarray, path: Union[str, Path]) -> None:
    """Écrit des lignes (hsi_row, hsi_col, ref_row, ref_col) déjà en coordonnées de grille."""
    lines = ["# hsi_row,hsi_col,ref_row,ref_col"]
    lines += [",".join(str(v) for v in row) for row in np.asarray(grid_pairs, dtype=np.int64).tolist()]
    path = Path(path)
    try:
        path.write_text("\n".join(lines) + "\n", encoding='utf-8')
    except OSError as e:
        raise OSError(f"Impossible d'écrire le fichier de paires {path}: {e.strerror or e}") from e


def grid_pairs_from_matches(src: np.ndarray, dst: np.ndarray) -> np.ndarray:
    """
    Arrondit des appariements de points clés (x, y) → (x′, y′) en paires de
    pixels (hsi_row, hsi_col, ref_row, ref_col), sans doublon ni coordonnée
    négative.
    """
    src = round_half_away(np.asarray(src, dtype=np.float64).reshape(-1, 2))
    dst = round_half_away(np.asarray(dst, dtype=np.float64).reshape(-1, 2))
    rows = np.column_stack([src[:, 1], src[:, 0], dst[:, 1], dst[:, 0]]).astype(np.int64)
    rows = rows[np.all(rows >= 0, axis=1)]
    return np.unique(rows, axis=0)


def round_half_away(values: np.ndarray) -> np.ndarray:
    """Arrondi à l'entier le plus proche, demi-entiers éloignés de zéro."""
    return np.sign(values) * np.floor(np.abs(values) + 0.5)


def pairs_from_homography(homography, cube_shape: Tuple[int, int], ref_shape: Tuple[int, int],
                          fraction: float, seed: int = 0) -> Correspondence:
    """
    Apparie un échantillon de pixels du cube à la référence via une homographie.

    Les coordonnées sont (x, y) = (colonne, ligne). Les pixels projetés hors de
    la référence sont écartés plutôt que ramenés au bord.

    Args:
        homography: Homographie du cube vers la référence
        cube_shape: (hauteur, largeur) du cube
        ref_shape: (hauteur, largeur) de la référence
        fraction: Part des pixels du cube tirés
        seed: Graine du tirage

    Raises:
        GeometryError: Si aucun pixel tiré ne tombe dans la référence
    """
    (ch, cw), (rh, rw) = cube_shape, ref_shape
    indices = sample_indices(ch * cw, fraction, seed)
    rows, cols = np.divmod(indices, cw)
    mapped = homography.apply(np.stack([cols, rows], axis=1).astype(np.float64))
    with np.errstate(invalid='ignore'):
        x = round_half_away(mapped[:, 0])
        y = round_half_away(mapped[:, 1])
        inside = np.isfinite(x) & np.isfinite(y) & (x >= 0) & (x < rw) & (y >= 0) & (y < rh)
    if not np.any(inside):
        raise GeometryError("Aucun pixel tiré ne se projette dans l'image de référence")
    targets = y[inside].astype(np.int64) * rw + x[inside].astype(np.int64)
    dropped = int(np.count_nonzero(~inside))
    if dropped:
        logger.info(f"{dropped} pixels projetés hors de la référence écartés")
    return Correspondence.from_pairs(ch * cw, rh * rw, np.stack([indices[inside], targets], axis=1))
