"""
Scènes synthétiques de petite taille : régions spatiales de signatures
spectrales distinctes, image de référence alignée en couleurs naturelles et
étiquettes de vérité terrain.
"""

import math
from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Union

import numpy as np

from .hsi_io.color import rgb_to_lab_array
from .hsi_io.cube import SpectralCube, write_cube
from .hsi_io.image import ColorImage, ColorSpace, write_image
from .utils.errors import ParameterError
from .utils.logging import get_logger

logger = get_logger(__name__)

# végétation, sol nu, eau, toiture, route, sable, forêt, béton
NATURAL_COLORS = np.array([
    [0.35, 0.60, 0.25],
    [0.55, 0.40, 0.25],
    [0.15, 0.30, 0.60],
    [0.70, 0.25, 0.20],
    [0.45, 0.45, 0.45],
    [0.85, 0.78, 0.55],
    [0.10, 0.35, 0.15],
    [0.75, 0.75, 0.72],
])

# écart des signatures autour du niveau de base, relatif aux distances Lαβ
SPECTRAL_GAIN = 2.0
BASE_REFLECTANCE = 0.5


@dataclass
class SyntheticScene:
    cube: SpectralCube
    reference: ColorImage
    labels: np.ndarray
    signatures: np.ndarray
    colors: np.ndarray


def scene_colors(clusters: int, rng: np.random.Generator) -> np.ndarray:
    """Couleurs des régions : palette fixe, puis couleurs tirées au-delà."""
    if clusters <= len(NATURAL_COLORS):
        return NATURAL_COLORS[:clusters].copy()
    extra = rng.uniform(0.1, 0.9, size=(clusters - len(NATURAL_COLORS), 3))
    return np.vstack([NATURAL_COLORS, extra])


def lift_colors(colors: np.ndarray, bands: int, rng: np.random.Generator) -> np.ndarray:
    """
    Signatures spectrales (bands×clusters) images linéaires des couleurs Lαβ.

    Les colonnes de la base tirée sont orthonormées dès trois bandes : les
    distances entre signatures sont alors celles des couleurs, multipliées
    par SPECTRAL_GAIN.
    """
    lab = rgb_to_lab_array(colors.T)
    lab = lab - lab.mean(axis=1, keepdims=True)
    basis, _ = np.linalg.qr(rng.normal(size=(max(bands, 3), 3)))
    return BASE_REFLECTANCE + SPECTRAL_GAIN * basis[:bands] @ lab


def region_labels(height: int, width: int, clusters: int, rng: np.random.Generator) -> np.ndarray:
    """
    Partition de Voronoï de la grille autour de `clusters` pixels germes
    distincts ; chaque région contient au moins son germe.

    Les germes sont tirés un par case d'une grille grossière (cases choisies
    au hasard), ce qui équilibre la taille des régions ; tirage libre si la
    grille est plus fine que l'image.
    """
    n = height * width
    grid_rows = math.ceil(math.sqrt(clusters))
    grid_cols = math.ceil(clusters / grid_rows)
    if grid_rows > height or grid_cols > width:
        seeds = rng.choice(n, size=clusters, replace=False)
    else:
        cells = rng.choice(grid_rows * grid_cols, size=clusters, replace=False)
        seeds = []
        for cell in cells.tolist():
            r, c = divmod(cell, grid_cols)
            row = rng.integers(r * height // grid_rows, (r + 1) * height // grid_rows)
            col = rng.integers(c * width // grid_cols, (c + 1) * width // grid_cols)
            seeds.append(row * width + col)
        seeds = np.array(seeds, dtype=np.int64)
    rows, cols = np.divmod(np.arange(n), width)
    seed_rows, seed_cols = np.divmod(seeds, width)
    dist = (rows[:, None] - seed_rows[None, :]) ** 2 + (cols[:, None] - seed_cols[None, :]) ** 2
    return np.argmin(dist, axis=1).astype(np.int64)


def make_scene(height: int = 16, width: int = 16, bands: int = 8, clusters: int = 4,
               noise: float = 0.01, seed: int = 0, layout_seed: Optional[int] = None) -> SyntheticScene:
    """
    Construit une scène synthétique.

    Les signatures et les couleurs ne dépendent que de `seed` ; la disposition
    des régions et le bruit dépendent de `layout_seed` (par défaut `seed`).
    Deux scènes de même `seed` partagent donc le même modèle capteur.

    Args:
        height, width: Dimensions de la grille
        bands: Nombre de bandes
        clusters: Nombre de régions
        noise: Écart-type du bruit gaussien ajouté au cube
        seed: Graine du modèle spectral
        layout_seed: Graine de la disposition et du bruit

    Returns:
        Scène avec cube, référence RGB et étiquettes
    """
    if height < 1 or width < 1 or bands < 1:
        raise ParameterError(f"Dimensions invalides: {height}×{width}×{bands}")
    if not 1 <= clusters <= height * width:
        raise ParameterError(f"Le nombre de régions doit être dans [1, {height * width}], reçu {clusters}")
    if not noise >= 0:
        raise ParameterError(f"Le bruit doit être >= 0, reçu {noise}")

    model_rng = np.random.default_rng(seed)
    colors = scene_colors(clusters, model_rng)
    signatures = lift_colors(colors, bands, model_rng)

    layout_rng = np.random.default_rng(seed if layout_seed is None else layout_seed)
    labels = region_labels(height, width, clusters, layout_rng)
    data = signatures[:, labels]
    if noise > 0:
        data = data + layout_rng.normal(0.0, noise, size=data.shape)

    # précision du fichier ENVI
    cube = SpectralCube(data, height, width).as_float32()
    reference = ColorImage(colors[labels].T, height, width, ColorSpace.RGB)
    logger.info(f"Scène synthétique: {height}×{width}×{bands}, {clusters} régions, bruit {noise}")
    return SyntheticScene(cube, reference, labels, signatures, colors)


def write_labels(scene: SyntheticScene, path: Union[str, Path]) -> None:
    """Écrit une ligne `ligne,colonne,étiquette` par pixel."""
    width = scene.cube.width
    lines = [f"{i // width},{i % width},{label}" for i, label in enumerate(scene.labels.tolist())]
    path = Path(path)
    try:
        path.write_text("\n".join(lines) + "\n", encoding='ascii')
    except OSError as e:
        raise OSError(f"Impossible d'écrire les étiquettes {path}: {e.strerror or e}") from e


def write_scene(scene: SyntheticScene, cube_path: Union[str, Path], reference_path: Union[str, Path],
                labels_path: Optional[Union[str, Path]] = None) -> None:
    write_cube(scene.cube, cube_path)
    write_image(scene.reference, reference_path)
    if labels_path is not None:
        write_labels(scene, labels_path)
