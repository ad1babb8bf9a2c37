"""
Estimation d'une transformation projective entre le cube et l'image de
référence, avec rejet des appariements erronés par RANSAC.
"""

from dataclasses import dataclass
from pathlib import Path
from typing import Tuple, Union

import numpy as np
from tqdm import tqdm

from ..hsi_io.projection import format_float
from ..utils.errors import FormatError, GeometryError, ParameterError
from ..utils.logging import get_logger

logger = get_logger(__name__)

MIN_PAIRS = 4


@dataclass
class Homography:
    """Matrice projective 3×3 normalisée par H[2][2] = 1."""

    H: np.ndarray

    def __post_init__(self):
        H = np.asarray(self.H, dtype=np.float64)
        if H.shape != (3, 3) or not np.all(np.isfinite(H)):
            raise GeometryError("Une homographie est une matrice 3×3 de valeurs finies")
        if abs(H[2, 2]) < 1e-15:
            raise GeometryError("Homographie non normalisable (H[2][2] nul)")
        H = H / H[2, 2]
        if abs(np.linalg.det(H)) <= 1e-12:
            raise GeometryError("Homographie non inversible")
        self.H = H

    def apply(self, points: np.ndarray) -> np.ndarray:
        """Projette des points (N×2, coordonnées x, y)."""
        points = np.asarray(points, dtype=np.float64).reshape(-1, 2)
        homogeneous = np.column_stack([points, np.ones(len(points))]) @ self.H.T
        with np.errstate(divide='ignore', invalid='ignore'):
            return homogeneous[:, :2] / homogeneous[:, 2:3]


def _normalize_points(points: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """
    Centre les points et les met à l'échelle pour une distance quadratique
    moyenne de √2 à l'origine.

    Returns:
        Points normalisés et matrice 3×3 de la transformation
    """
    centroid = points.mean(axis=0)
    rms = np.sqrt(np.mean(np.sum((points - centroid) ** 2, axis=1)))
    if not rms > 0:
        raise GeometryError("Points confondus : normalisation impossible")
    scale = np.sqrt(2.0) / rms
    transform = np.array([
        [scale, 0.0, -scale * centroid[0]],
        [0.0, scale, -scale * centroid[1]],
        [0.0, 0.0, 1.0],
    ])
    return (points - centroid) * scale, transform


def _check_pairs(src, dst) -> Tuple[np.ndarray, np.ndarray]:
    src = np.asarray(src, dtype=np.float64).reshape(-1, 2)
    dst = np.asarray(dst, dtype=np.float64).reshape(-1, 2)
    if len(src) != len(dst):
        raise GeometryError(f"{len(src)} points source pour {len(dst)} points destination")
    if len(src) < MIN_PAIRS:
        raise GeometryError(f"Au moins {MIN_PAIRS} paires sont nécessaires, reçu {len(src)}")
    if not (np.all(np.isfinite(src)) and np.all(np.isfinite(dst))):
        raise GeometryError("Coordonnées non finies")
    return src, dst


def fit_homography(src, dst) -> Homography:
    """
    Ajuste h₁..h₈ (h₉ = 1) au sens des moindres carrés sur le système
    linéarisé, après normalisation des coordonnées.

    Chaque paire donne deux équations :
        h₁x + h₂y + h₃ − h₇xx′ − h₈yx′ = x′
        h₄x + h₅y + h₆ − h₇xy′ − h₈yy′ = y′

    Args:
        src: Points (x, y) du cube, N×2
        dst: Points (x′, y′) de la référence, N×2

    Returns:
        Homographie normalisée

    Raises:
        GeometryError: Moins de 4 paires ou système de rang insuffisant
    """
    src, dst = _check_pairs(src, dst)
    src_n, t_src = _normalize_points(src)
    dst_n, t_dst = _normalize_points(dst)

    x, y = src_n[:, 0], src_n[:, 1]
    xp, yp = dst_n[:, 0], dst_n[:, 1]
    zeros = np.zeros(len(x))
    ones = np.ones(len(x))
    A = np.empty((2 * len(x), 8))
    A[0::2] = np.column_stack([x, y, ones, zeros, zeros, zeros, -x * xp, -y * xp])
    A[1::2] = np.column_stack([zeros, zeros, zeros, x, y, ones, -x * yp, -y * yp])
    b = np.empty(2 * len(x))
    b[0::2] = xp
    b[1::2] = yp

    h, _, rank, singular = np.linalg.lstsq(A, b, rcond=None)
    if rank < 8 or singular[-1] <= 1e-10 * singular[0]:
        raise GeometryError("Géométrie dégénérée : système de rang insuffisant (points alignés ?)")

    H_normalized = np.append(h, 1.0).reshape(3, 3)
    H = np.linalg.inv(t_dst) @ H_normalized @ t_src
    return Homography(H)


def reprojection_errors(homography: Homography, src: np.ndarray, dst: np.ndarray) -> np.ndarray:
    """Distance euclidienne entre H·src et dst ; infinie pour un point à l'infini."""
    projected = homography.apply(src)
    errors = np.sqrt(np.sum((projected - dst) ** 2, axis=1))
    return np.where(np.isfinite(errors), errors, np.inf)


def _has_collinear_triple(points: np.ndarray, eps: float = 1e-9) -> bool:
    """Vrai si trois des quatre points sont (presque) alignés."""
    span = max(np.ptp(points[:, 0]), np.ptp(points[:, 1]), 1e-300)
    for a, b, c in ((0, 1, 2), (0, 1, 3), (0, 2, 3), (1, 2, 3)):
        u = points[b] - points[a]
        v = points[c] - points[a]
        if abs(u[0] * v[1] - u[1] * v[0]) <= eps * span * span:
            return True
    return False


def ransac_homography(src, dst, inlier_px: float = 3.0, iters: int = 1000,
                      seed: int = 0, progress: bool = False) -> Tuple[Homography, np.ndarray]:
    """
    Estimation robuste par hypothèse et vérification.

    À chaque itération, 4 paires tirées (graine fixe) donnent une hypothèse ;
    les paires d'erreur de reprojection < inlier_px forment son consensus.
    Le plus grand consensus (le premier en cas d'égalité) est réajusté sur
    tous ses inliers.

    Returns:
        Homographie réajustée et masque des inliers sous cette homographie

    Raises:
        GeometryError: Moins de 4 paires, ou aucune hypothèse avec 4 inliers
    """
    src, dst = _check_pairs(src, dst)
    if not inlier_px > 0:
        raise ParameterError(f"inlier_px doit être > 0, reçu {inlier_px}")
    if iters < 1:
        raise ParameterError(f"iters doit être >= 1, reçu {iters}")

    rng = np.random.default_rng(seed)
    best_count = 0
    best_mask = None
    for _ in tqdm(range(iters), desc="RANSAC", disable=not progress, leave=False):
        sample = rng.choice(len(src), size=MIN_PAIRS, replace=False)
        if _has_collinear_triple(src[sample]) or _has_collinear_triple(dst[sample]):
            continue
        try:
            candidate = fit_homography(src[sample], dst[sample])
        except GeometryError:
            continue
        mask = reprojection_errors(candidate, src, dst) < inlier_px
        count = int(np.count_nonzero(mask))
        if count > best_count:
            best_count, best_mask = count, mask

    if best_count < MIN_PAIRS:
        raise GeometryError(f"RANSAC : aucune itération n'atteint {MIN_PAIRS} inliers")

    refined = fit_homography(src[best_mask], dst[best_mask])
    final_mask = reprojection_errors(refined, src, dst) < inlier_px
    logger.info(f"RANSAC : {int(final_mask.sum())} inliers sur {len(src)} paires")
    return refined, final_mask


def read_matches(path: Union[str, Path]) -> Tuple[np.ndarray, np.ndarray]:
    """
    Lit un CSV d'appariements de points clés `x,y,xp,yp` (réels, lignes `#`
    ignorées).

    Returns:
        Points source (N×2) et destination (N×2)
    """
    path = Path(path)
    try:
        text = path.read_text(encoding='utf-8')
    except OSError as e:
        raise OSError(f"Impossible de lire les appariements {path}: {e.strerror or e}") from e
    rows = []
    for number, line in enumerate(text.splitlines(), start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith('#'):
            continue
        try:
            values = [float(v) for v in stripped.split(',')]
        except ValueError:
            raise FormatError(f"{path}: ligne {number}: valeurs non numériques") from None
        if len(values) != 4 or not all(np.isfinite(values)):
            raise FormatError(f"{path}: ligne {number}: quatre réels finis attendus")
        rows.append(values)
    matches = np.array(rows, dtype=np.float64).reshape(-1, 4)
    return matches[:, :2], matches[:, 2:]


def write_homography(homography: Homography, path: Union[str, Path]) -> None:
    """Écrit H en trois lignes de trois réels."""
    text = "\n".join(" ".join(format_float(v) for v in row) for row in homography.H) + "\n"
    path = Path(path)
    try:
        path.write_text(text, encoding='ascii')
    except OSError as e:
        raise OSError(f"Impossible d'écrire l'homographie {path}: {e.strerror or e}") from e


def read_homography(path: Union[str, Path]) -> Homography:
    """Relit une homographie écrite par write_homography."""
    path = Path(path)
    try:
        lines = [line.split() for line in path.read_text(encoding='ascii').splitlines() if line.strip()]
    except OSError as e:
        raise OSError(f"Impossible de lire l'homographie {path}: {e.strerror or e}") from e
    try:
        H = np.array(lines, dtype=np.float64)
    except ValueError:
        raise FormatError(f"{path}: valeurs non numériques") from None
    if H.shape != (3, 3):
        raise FormatError(f"{path}: 3 lignes de 3 réels attendues")
    return Homography(H)
