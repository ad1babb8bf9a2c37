"""
Lecture et écriture de cubes hyperspectraux au format ENVI restreint
(BSQ, float32, little-endian).
"""

from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple, Union

import numpy as np
from spectral.io import envi

from ..utils.errors import DimensionError, FormatError
from ..utils.logging import get_logger

logger = get_logger(__name__)

RAW_DTYPE = np.dtype('<f4')

REQUIRED_KEYS = ('samples', 'lines', 'bands', 'data type', 'interleave', 'byte order')


@dataclass
class SpectralCube:
    """
    Cube hyperspectral de p bandes sur une grille h×w.

    Les pixels sont rangés en colonnes de `data` (p×n) dans l'ordre ligne par
    ligne : la colonne i correspond à la ligne i // width et à la colonne
    i % width.
    """

    data: np.ndarray
    height: int
    width: int
    band_wavelengths: Optional[List[float]] = field(default=None)

    def __post_init__(self):
        self.data = np.asarray(self.data, dtype=np.float64)
        if self.data.ndim != 2:
            raise DimensionError(f"Les données du cube doivent être une matrice p×n, reçu {self.data.shape}")
        if self.height < 1 or self.width < 1:
            raise DimensionError(f"Dimensions de grille invalides: {self.height}×{self.width}")
        if self.data.shape[0] < 1:
            raise DimensionError("Un cube doit avoir au moins une bande")
        if self.data.shape[1] != self.height * self.width:
            raise DimensionError(
                f"{self.data.shape[1]} pixels ne correspondent pas à la grille {self.height}×{self.width}"
            )
        if not np.all(np.isfinite(self.data)):
            raise FormatError("Le cube contient des valeurs non finies (NaN ou Inf)")
        if self.band_wavelengths is not None and len(self.band_wavelengths) != self.bands:
            raise DimensionError(
                f"{len(self.band_wavelengths)} longueurs d'onde pour {self.bands} bandes"
            )

    @property
    def bands(self) -> int:
        return self.data.shape[0]

    @property
    def n_pixels(self) -> int:
        return self.data.shape[1]

    def index(self, row: int, col: int) -> int:
        """Indice plat d'une position de la grille."""
        return row * self.width + col

    def row_col(self, i: int) -> Tuple[int, int]:
        """Position (ligne, colonne) de l'indice plat i."""
        return divmod(i, self.width)

    def as_grid(self) -> np.ndarray:
        """Vue p×h×w des données."""
        return self.data.reshape(self.bands, self.height, self.width)

    @classmethod
    def from_grid(cls, grid: np.ndarray, band_wavelengths: Optional[List[float]] = None) -> "SpectralCube":
        """Construit un cube à partir d'un tableau p×h×w."""
        grid = np.asarray(grid, dtype=np.float64)
        if grid.ndim != 3:
            raise DimensionError(f"Tableau p×h×w attendu, reçu {grid.shape}")
        p, h, w = grid.shape
        return cls(grid.reshape(p, h * w), h, w, band_wavelengths)

    def as_float32(self) -> "SpectralCube":
        """Copie aux valeurs arrondies au float32 le plus proche (précision du format)."""
        with np.errstate(over='ignore'):
            rounded = self.data.astype(RAW_DTYPE).astype(np.float64)
        return SpectralCube(rounded, self.height, self.width, self.band_wavelengths)


def raw_path_for(header_path: Union[str, Path]) -> Path:
    """Chemin du fichier binaire associé à un en-tête."""
    return Path(header_path).with_suffix('.raw')


def _header_int(fields: Dict[str, Any], key: str, path: Path) -> int:
    try:
        return int(fields[key])
    except KeyError:
        raise FormatError(f"{path}: clé obligatoire absente: '{key}'") from None
    except (TypeError, ValueError):
        raise FormatError(f"{path}: valeur entière invalide pour '{key}': {fields[key]!r}") from None


def read_cube(path: Union[str, Path]) -> SpectralCube:
    """
    Lit un cube à partir d'un en-tête ENVI et de son fichier `.raw` adjacent.

    Args:
        path: Chemin de l'en-tête

    Returns:
        Cube lu

    Raises:
        FormatError: En-tête incomplet ou non supporté, taille du binaire
            incohérente, valeurs non finies
    """
    path = Path(path)
    try:
        fields = envi.read_envi_header(str(path))
    except envi.EnviException as e:
        raise FormatError(f"{path}: en-tête ENVI invalide: {e}") from e
    except OSError as e:
        raise OSError(f"Impossible de lire l'en-tête {path}: {e.strerror or e}") from e

    for key in REQUIRED_KEYS:
        if key not in fields:
            raise FormatError(f"{path}: clé obligatoire absente: '{key}'")

    samples = _header_int(fields, 'samples', path)
    lines = _header_int(fields, 'lines', path)
    bands = _header_int(fields, 'bands', path)
    if samples < 1 or lines < 1 or bands < 1:
        raise FormatError(f"{path}: dimensions invalides samples={samples} lines={lines} bands={bands}")
    if str(fields['interleave']).strip().lower() != 'bsq':
        raise FormatError(f"{path}: interleave non supporté: '{fields['interleave']}' (seul bsq est accepté)")
    if _header_int(fields, 'data type', path) != 4:
        raise FormatError(f"{path}: data type non supporté: {fields['data type']} (seul 4 = float32 est accepté)")
    if _header_int(fields, 'byte order', path) != 0:
        raise FormatError(f"{path}: byte order non supporté: {fields['byte order']} (seul 0 = little-endian est accepté)")
    if 'header offset' in fields and _header_int(fields, 'header offset', path) != 0:
        raise FormatError(f"{path}: header offset non supporté: {fields['header offset']}")

    wavelengths = None
    if 'wavelength' in fields:
        try:
            wavelengths = [float(v) for v in fields['wavelength']]
        except (TypeError, ValueError):
            raise FormatError(f"{path}: liste de longueurs d'onde invalide") from None

    raw_path = raw_path_for(path)
    n = samples * lines
    expected = RAW_DTYPE.itemsize * bands * n
    try:
        size = raw_path.stat().st_size
    except OSError as e:
        raise OSError(f"Impossible de lire le fichier binaire {raw_path}: {e.strerror or e}") from e
    if size != expected:
        raise FormatError(f"{raw_path}: taille {size} octets, {expected} attendus (4·p·n)")

    try:
        grid = np.asarray(envi.open(str(path), image=str(raw_path)).load(), dtype=np.float64)
    except envi.EnviException as e:
        raise FormatError(f"{path}: {e}") from e
    except OSError as e:
        raise OSError(f"Impossible de lire le fichier binaire {raw_path}: {e.strerror or e}") from e

    # lignes × colonnes × bandes → p×n
    values = grid.reshape(lines, samples, bands).transpose(2, 0, 1).reshape(bands, n)
    if not np.all(np.isfinite(values)):
        raise FormatError(f"{raw_path}: valeurs non finies dans les données")

    logger.debug(f"Cube lu: {path} ({bands} bandes, {lines}×{samples})")
    return SpectralCube(np.ascontiguousarray(values), lines, samples, wavelengths)


def write_cube(cube: SpectralCube, path: Union[str, Path]) -> None:
    """
    Écrit un cube (en-tête + binaire BSQ float32 little-endian).

    Les valeurs doivent être des float32 exacts, pour que la relecture rende
    un cube identique ; `SpectralCube.as_float32` les arrondit au préalable.

    Args:
        cube: Cube à écrire
        path: Chemin de l'en-tête `.hdr` ; le binaire prend l'extension `.raw`

    Raises:
        FormatError: Valeurs hors de la plage float32 ou non représentables
            exactement
    """
    path = Path(path)
    with np.errstate(over='ignore'):
        raw = cube.data.astype(RAW_DTYPE)
    if not np.all(np.isfinite(raw)):
        raise FormatError(f"{path}: valeurs hors de la plage float32, écriture impossible")
    if not np.array_equal(raw.astype(np.float64), cube.data):
        raise FormatError(
            f"{path}: valeurs non représentables exactement en float32 (arrondir avec as_float32)"
        )

    metadata = {}
    if cube.band_wavelengths is not None:
        metadata['wavelength'] = [repr(float(w)) for w in cube.band_wavelengths]
    grid = raw.reshape(cube.bands, cube.height, cube.width).transpose(1, 2, 0)
    try:
        envi.save_image(str(path), grid, dtype=np.float32, interleave='bsq', byteorder=0,
                        ext='.raw', force=True, metadata=metadata)
    except envi.EnviException as e:
        raise FormatError(f"{path}: {e}") from e
    except OSError as e:
        raise OSError(f"Impossible d'écrire le cube {path}: {e.strerror or e}") from e
    logger.debug(f"Cube écrit: {path}")


def minmax_scale(cube: SpectralCube) -> SpectralCube:
    """
    Ramène chaque bande dans [0, 1] ; une bande constante devient nulle.
    """
    low = cube.data.min(axis=1, keepdims=True)
    span = cube.data.max(axis=1, keepdims=True) - low
    scaled = np.divide(cube.data - low, span, out=np.zeros_like(cube.data), where=span > 0)
    return SpectralCube(scaled, cube.height, cube.width, cube.band_wavelengths)
