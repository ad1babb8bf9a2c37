"""
Images couleur à trois canaux et codec PPM binaire (P6, maxval 255).
"""

from dataclasses import dataclass
from enum import Enum
from pathlib import Path
from typing import Tuple, Union

import numpy as np

from ..utils.errors import DimensionError, FormatError
from ..utils.logging import get_logger

logger = get_logger(__name__)


class ColorSpace(str, Enum):
    RGB = "RGB"
    LAB = "Lab"


@dataclass
class ColorImage:
    """
    Image à trois canaux sur une grille h×w, stockée en matrice 3×m
    (même convention d'indexation ligne par ligne que les cubes).
    """

    data: np.ndarray
    height: int
    width: int
    space: ColorSpace = ColorSpace.RGB

    def __post_init__(self):
        self.space = ColorSpace(self.space)
        self.data = np.asarray(self.data, dtype=np.float64)
        if self.data.ndim != 2 or self.data.shape[0] != 3:
            raise DimensionError(f"Une image couleur est une matrice 3×m, reçu {self.data.shape}")
        if self.height < 1 or self.width < 1 or self.data.shape[1] != self.height * self.width:
            raise DimensionError(
                f"{self.data.shape[1]} pixels ne correspondent pas à la grille {self.height}×{self.width}"
            )
        if not np.all(np.isfinite(self.data)):
            raise FormatError("L'image contient des valeurs non finies")
        if self.space is ColorSpace.RGB and (self.data.min() < 0.0 or self.data.max() > 1.0):
            raise FormatError("Les valeurs RGB doivent être dans [0, 1]")

    @property
    def n_pixels(self) -> int:
        return self.data.shape[1]

    def index(self, row: int, col: int) -> int:
        return row * self.width + col

    def row_col(self, i: int) -> Tuple[int, int]:
        return divmod(i, self.width)


def _read_token(payload: bytes, pos: int) -> Tuple[bytes, int]:
    """Lit un jeton de l'en-tête PPM en sautant blancs et commentaires."""
    length = len(payload)
    while pos < length:
        if payload[pos:pos + 1] == b'#':
            while pos < length and payload[pos:pos + 1] not in (b'\n', b'\r'):
                pos += 1
        elif payload[pos:pos + 1].isspace():
            pos += 1
        else:
            break
    start = pos
    while pos < length and not payload[pos:pos + 1].isspace() and payload[pos:pos + 1] != b'#':
        pos += 1
    if start == pos:
        raise FormatError("En-tête PPM tronqué")
    return payload[start:pos], pos


def decode_ppm(payload: bytes) -> ColorImage:
    """
    Décode un PPM binaire P6 de maxval 255 ; l'octet v devient v/255.
    """
    if payload[:2] != b'P6':
        raise FormatError(f"Nombre magique PPM non supporté: {payload[:2]!r} (P6 attendu)")
    pos = 2
    fields = []
    for _ in range(3):
        token, pos = _read_token(payload, pos)
        try:
            fields.append(int(token))
        except ValueError:
            raise FormatError(f"Champ d'en-tête PPM invalide: {token!r}") from None
    width, height, maxval = fields
    if width < 1 or height < 1:
        raise FormatError(f"Dimensions PPM invalides: {width}×{height}")
    if maxval != 255:
        raise FormatError(f"maxval PPM non supporté: {maxval} (255 attendu)")
    # un seul blanc sépare l'en-tête des données
    pos += 1
    expected = 3 * width * height
    body = payload[pos:pos + expected]
    if len(body) != expected:
        raise FormatError(f"Données PPM tronquées: {len(body)} octets, {expected} attendus")
    pixels = np.frombuffer(body, dtype=np.uint8).reshape(width * height, 3).T
    return ColorImage(pixels.astype(np.float64) / 255.0, height, width, ColorSpace.RGB)


def encode_ppm(image: ColorImage) -> bytes:
    """
    Encode une image RGB en PPM P6 ; le canal x devient round(clip(x, 0, 1)·255).
    """
    if image.space is not ColorSpace.RGB:
        raise FormatError(f"Seule une image RGB peut être écrite en PPM (espace: {image.space.value})")
    # arrondi demi vers le haut, valeurs positives
    quantized = np.floor(np.clip(image.data, 0.0, 1.0) * 255.0 + 0.5).astype(np.uint8)
    header = f"P6\n{image.width} {image.height}\n255\n".encode('ascii')
    return header + np.ascontiguousarray(quantized.T).tobytes()


def read_image(path: Union[str, Path]) -> ColorImage:
    """Lit un fichier PPM P6."""
    path = Path(path)
    try:
        payload = path.read_bytes()
    except OSError as e:
        raise OSError(f"Impossible de lire l'image {path}: {e.strerror or e}") from e
    try:
        return decode_ppm(payload)
    except FormatError as e:
        raise FormatError(f"{path}: {e}") from e


def write_image(image: ColorImage, path: Union[str, Path]) -> None:
    """Écrit une image RGB au format PPM P6."""
    path = Path(path)
    payload = encode_ppm(image)
    try:
        path.write_bytes(payload)
    except OSError as e:
        raise OSError(f"Impossible d'écrire l'image {path}: {e.strerror or e}") from e
    logger.debug(f"Image écrite: {path} ({image.height}×{image.width})")
