"""
Entrées/sorties : cubes hyperspectraux, images couleur, matrices de projection,
et conversion RGB ↔ Lαβ.
"""

from .cube import SpectralCube, read_cube, write_cube, minmax_scale
from .image import ColorImage, ColorSpace, read_image, write_image
from .color import rgb_to_lab, lab_to_rgb
from .projection import ProjectionMatrix, read_projection, write_projection

__all__ = [
    "SpectralCube",
    "read_cube",
    "write_cube",
    "minmax_scale",
    "ColorImage",
    "ColorSpace",
    "read_image",
    "write_image",
    "rgb_to_lab",
    "lab_to_rgb",
    "ProjectionMatrix",
    "read_projection",
    "write_projection",
]
