"""
Noyaux RBF et composite, et caractéristiques spatiales par filtrage gaussien.
"""

from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy import ndimage

from ..hsi_io.cube import SpectralCube
from ..utils.errors import DimensionError, ParameterError
from ..utils.logging import get_logger

logger = get_logger(__name__)


@dataclass
class KernelParams:
    """
    Paramètres du graphe : compromis μ, largeurs de bande spectrale (δs) et
    spatiale (δw), nombre de voisins k et fenêtre gaussienne (rayon, σ).

    Les largeurs à None sont estimées par la médiane des distances.
    """

    mu: float = 0.5
    delta_s: Optional[float] = None
    delta_w: Optional[float] = None
    k: int = 10
    spatial_radius: int = 2
    spatial_sigma: float = 1.0

    def __post_init__(self):
        if not 0.0 <= self.mu <= 1.0:
            raise ParameterError(f"mu doit être dans [0, 1], reçu {self.mu}")
        for name in ("delta_s", "delta_w"):
            value = getattr(self, name)
            if value is not None and not value > 0:
                raise ParameterError(f"{name} doit être > 0, reçu {value}")
        if self.k < 1:
            raise ParameterError(f"k doit être >= 1, reçu {self.k}")
        if self.spatial_radius < 0:
            raise ParameterError(f"spatial_radius doit être >= 0, reçu {self.spatial_radius}")
        if not self.spatial_sigma > 0:
            raise ParameterError(f"spatial_sigma doit être > 0, reçu {self.spatial_sigma}")


def rbf_kernel(x: np.ndarray, y: np.ndarray, delta: float) -> float:
    """
    Noyau gaussien exp(−‖x−y‖²/(2δ²)).

    Le noyau de la chaleur exp(−‖x−y‖²/t) en est le cas t = 2δ².
    """
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    if x.shape != y.shape:
        raise DimensionError(f"Vecteurs de longueurs différentes: {x.shape} et {y.shape}")
    if not delta > 0:
        raise ParameterError(f"delta doit être > 0, reçu {delta}")
    return float(np.exp(-np.sum((x - y) ** 2) / (2.0 * delta * delta)))


def composite_kernel(xs_i: np.ndarray, xs_j: np.ndarray,
                     xw_i: np.ndarray, xw_j: np.ndarray,
                     params: KernelParams) -> float:
    """
    Noyau composite μ·K(xs_i, xs_j; δs) + (1−μ)·K(xw_i, xw_j; δw).

    Args:
        xs_i, xs_j: Signatures spectrales
        xw_i, xw_j: Caractéristiques spatiales
        params: Paramètres dont les deux largeurs de bande sont renseignées
    """
    if params.delta_s is None or params.delta_w is None:
        raise ParameterError("composite_kernel exige delta_s et delta_w explicites")
    spectral = rbf_kernel(xs_i, xs_j, params.delta_s)
    spatial = rbf_kernel(xw_i, xw_j, params.delta_w)
    return params.mu * spectral + (1.0 - params.mu) * spatial


def edge_kernel(spectral: np.ndarray, spatial: np.ndarray,
                rows: np.ndarray, cols: np.ndarray,
                params: KernelParams, chunk: int = 65536) -> np.ndarray:
    """
    Évalue le noyau composite sur une liste d'arêtes.

    Args:
        spectral: Signatures spectrales, une ligne par pixel (n×p)
        spatial: Caractéristiques spatiales, une ligne par pixel (n×p)
        rows, cols: Extrémités des arêtes
        params: Paramètres avec largeurs de bande renseignées

    Returns:
        Poids des arêtes, strictement positifs
    """
    weights = np.empty(len(rows), dtype=np.float64)
    two_ds2 = 2.0 * params.delta_s * params.delta_s
    two_dw2 = 2.0 * params.delta_w * params.delta_w
    for start in range(0, len(rows), chunk):
        r = rows[start:start + chunk]
        c = cols[start:start + chunk]
        ks = np.exp(-np.sum((spectral[r] - spectral[c]) ** 2, axis=1) / two_ds2)
        kw = np.exp(-np.sum((spatial[r] - spatial[c]) ** 2, axis=1) / two_dw2)
        weights[start:start + chunk] = params.mu * ks + (1.0 - params.mu) * kw
    # un poids sous-normal reste une arête
    return np.maximum(weights, np.finfo(np.float64).tiny)


def gaussian_window(radius: int, sigma: float) -> np.ndarray:
    """Poids non normalisés exp(−(dx²+dy²)/(2σ²)) sur la fenêtre (2r+1)²."""
    offsets = np.arange(-radius, radius + 1, dtype=np.float64)
    dy, dx = np.meshgrid(offsets, offsets, indexing='ij')
    return np.exp(-(dx ** 2 + dy ** 2) / (2.0 * sigma * sigma))


def spatial_features(cube: SpectralCube, radius: int, sigma: float) -> SpectralCube:
    """
    Moyenne gaussienne de chaque bande sur la fenêtre centrée sur le pixel.

    Au bord, seules les prises situées dans l'image comptent et les poids sont
    renormalisés (pas de remplissage).
    """
    if radius < 0:
        raise ParameterError(f"Le rayon doit être >= 0, reçu {radius}")
    if not sigma > 0:
        raise ParameterError(f"sigma doit être > 0, reçu {sigma}")
    if radius == 0:
        return SpectralCube(cube.data.copy(), cube.height, cube.width, cube.band_wavelengths)

    window = gaussian_window(radius, sigma)
    grid = cube.as_grid()
    filtered = ndimage.correlate(grid, window[np.newaxis, :, :], mode='constant', cval=0.0)
    norm = ndimage.correlate(np.ones((cube.height, cube.width)), window, mode='constant', cval=0.0)
    smoothed = filtered / norm[np.newaxis, :, :]
    return SpectralCube(smoothed.reshape(cube.bands, cube.n_pixels), cube.height, cube.width,
                        cube.band_wavelengths)


def estimate_bandwidth(features: np.ndarray, n_pairs: int = 1000, seed: int = 0) -> float:
    """
    Médiane des distances euclidiennes sur des paires distinctes tirées au hasard.

    Args:
        features: Une ligne par pixel
        n_pairs: Nombre de paires échantillonnées
        seed: Graine du générateur

    Returns:
        Largeur de bande ; 1.0 si la médiane est nulle ou s'il n'y a pas de paire
    """
    n = features.shape[0]
    if n < 2:
        return 1.0
    rng = np.random.default_rng(seed)
    first = rng.integers(0, n, size=n_pairs)
    # second tiré parmi les n−1 autres pixels
    second = rng.integers(0, n - 1, size=n_pairs)
    second = second + (second >= first)
    distances = np.sqrt(np.sum((features[first] - features[second]) ** 2, axis=1))
    median = float(np.median(distances))
    if not median > 0:
        logger.warning("Médiane des distances nulle, largeur de bande fixée à 1.0")
        return 1.0
    return median
