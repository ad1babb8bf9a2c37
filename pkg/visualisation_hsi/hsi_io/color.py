"""
Conversion entre RGB et l'espace décorrélé Lαβ (log-LMS suivi d'une
transformation orthogonale).
"""

import numpy as np

from ..utils.errors import FormatError
from .image import ColorImage, ColorSpace

# plancher avant le logarithme, sous le pas de quantification 1/255
LOG_FLOOR = 1e-4
# plafond de l'exposant : 10**LOG_LMS_CEILING reste fini en float64
LOG_LMS_CEILING = 300.0

RGB_TO_LMS = np.array([
    [0.3811, 0.5783, 0.0402],
    [0.1967, 0.7244, 0.0782],
    [0.0241, 0.1288, 0.8444],
])

LOG_LMS_TO_LAB = np.diag([1.0 / np.sqrt(3.0), 1.0 / np.sqrt(6.0), 1.0 / np.sqrt(2.0)]) @ np.array([
    [1.0, 1.0, 1.0],
    [1.0, 1.0, -2.0],
    [1.0, -1.0, 0.0],
])

LMS_TO_RGB = np.linalg.inv(RGB_TO_LMS)
LAB_TO_LOG_LMS = np.linalg.inv(LOG_LMS_TO_LAB)


def rgb_to_lab_array(rgb: np.ndarray) -> np.ndarray:
    """Convertit une matrice 3×m de valeurs RGB en Lαβ."""
    lms = RGB_TO_LMS @ np.maximum(rgb, LOG_FLOOR)
    return LOG_LMS_TO_LAB @ np.log10(lms)


def lab_to_rgb_array(lab: np.ndarray) -> np.ndarray:
    """Inverse algébrique de rgb_to_lab_array, ramené dans [0, 1]."""
    lms = np.power(10.0, np.minimum(LAB_TO_LOG_LMS @ lab, LOG_LMS_CEILING))
    return np.clip(LMS_TO_RGB @ lms, 0.0, 1.0)


def rgb_to_lab(image: ColorImage) -> ColorImage:
    """
    Convertit une image RGB vers l'espace de travail Lαβ.

    Raises:
        FormatError: Si l'image n'est pas en RGB
    """
    if image.space is not ColorSpace.RGB:
        raise FormatError(f"rgb_to_lab attend une image RGB, reçu {image.space.value}")
    return ColorImage(rgb_to_lab_array(image.data), image.height, image.width, ColorSpace.LAB)


def lab_to_rgb(image: ColorImage) -> ColorImage:
    """
    Convertit une image Lαβ en RGB affichable (écrêtage dans [0, 1]).

    Raises:
        FormatError: Si l'image n'est pas en Lαβ
    """
    if image.space is not ColorSpace.LAB:
        raise FormatError(f"lab_to_rgb attend une image Lab, reçu {image.space.value}")
    return ColorImage(lab_to_rgb_array(image.data), image.height, image.width, ColorSpace.RGB)
