"""
Correspondance entre le cube et l'image de référence : tirage sur grilles
alignées, fichiers de paires, ou recalage projectif robuste.
"""

from .pairs import (
    Correspondence, sample_aligned, read_pairs, write_pairs, write_grid_pairs,
    grid_pairs_from_matches, pairs_from_homography
)
from .homography import (
    Homography, fit_homography, ransac_homography, reprojection_errors,
    read_matches, write_homography, read_homography
)

__all__ = [
    "Correspondence",
    "sample_aligned",
    "read_pairs",
    "write_pairs",
    "write_grid_pairs",
    "grid_pairs_from_matches",
    "pairs_from_homography",
    "Homography",
    "fit_homography",
    "ransac_homography",
    "reprojection_errors",
    "read_matches",
    "write_homography",
    "read_homography",
]
