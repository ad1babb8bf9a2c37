"""
Préservation des distances : corrélation entre les distances euclidiennes
des paires de pixels dans l'espace spectral et dans l'espace couleur.

γ = (xᵀy/P − x̄ȳ) / (σx·σy), écarts-types de population.
"""

from dataclasses import dataclass
from typing import Tuple, Union

import numpy as np

from ..hsi_io.cube import SpectralCube
from ..hsi_io.image import ColorImage
from ..utils.errors import DimensionError, MetricUndefinedError, ParameterError
from ..utils.logging import get_logger

logger = get_logger(__name__)

ALL = "all"

PairBudget = Union[int, str]

_CHUNK = 65536


@dataclass
class DistanceSample:
    """Distances spectrales `x` et couleur `y` sur les mêmes P paires."""

    pair_count: int
    x: np.ndarray
    y: np.ndarray
    seed: int
    exhaustive: bool = False


def total_pairs(n: int) -> int:
    return n * (n - 1) // 2


def _unrank_pairs(flat: np.ndarray, n: int) -> Tuple[np.ndarray, np.ndarray]:
    """
    Convertit des rangs dans l'ordre lexicographique des paires i < j en
    couples (i, j).
    """
    i_values = np.arange(n - 1, dtype=np.int64)
    offsets = i_values * (2 * n - i_values - 1) // 2
    first = np.searchsorted(offsets, flat, side='right') - 1
    second = flat - offsets[first] + first + 1
    return first, second


def select_pairs(n: int, pair_budget: PairBudget, seed: int) -> Tuple[np.ndarray, np.ndarray, bool]:
    """
    Paires non ordonnées distinctes, triées par rang.

    Returns:
        Indices (i, j) et un booléen vrai si toutes les paires sont prises
    """
    total = total_pairs(n)
    if pair_budget == ALL or (not isinstance(pair_budget, str) and pair_budget >= total):
        flat = np.arange(total, dtype=np.int64)
        exhaustive = True
    else:
        if isinstance(pair_budget, str) or pair_budget < 2:
            raise ParameterError(f"pair_budget doit être 'all' ou un entier >= 2, reçu {pair_budget!r}")
        rng = np.random.default_rng(seed)
        flat = np.sort(rng.choice(total, size=int(pair_budget), replace=False)).astype(np.int64)
        exhaustive = False
    first, second = _unrank_pairs(flat, n)
    return first, second, exhaustive


def _pair_distances(values: np.ndarray, first: np.ndarray, second: np.ndarray) -> np.ndarray:
    distances = np.empty(len(first), dtype=np.float64)
    for start in range(0, len(first), _CHUNK):
        a = first[start:start + _CHUNK]
        b = second[start:start + _CHUNK]
        diff = values[:, a] - values[:, b]
        distances[start:start + _CHUNK] = np.sqrt(np.sum(diff * diff, axis=0))
    return distances


def distance_sample(cube: SpectralCube, image: ColorImage,
                    pair_budget: PairBudget = 100000, seed: int = 0) -> DistanceSample:
    """
    Tire les paires et calcule leurs distances dans les deux espaces.

    Un budget supérieur au nombre de paires revient à les prendre toutes.

    Args:
        cube: Cube hyperspectral
        image: Image couleur sur les mêmes pixels (Lαβ en usage normal)
        pair_budget: Nombre de paires, ou "all"
        seed: Graine du tirage

    Raises:
        DimensionError: Nombres de pixels différents
        ParameterError: Budget invalide ou moins de deux pixels
    """
    n = cube.n_pixels
    if image.n_pixels != n:
        raise DimensionError(f"Le cube a {n} pixels, l'image {image.n_pixels}")
    if n < 2:
        raise ParameterError("Au moins deux pixels sont nécessaires pour former une paire")
    first, second, exhaustive = select_pairs(n, pair_budget, seed)
    x = _pair_distances(cube.data, first, second)
    y = _pair_distances(image.data, first, second)
    return DistanceSample(len(x), x, y, seed, exhaustive)


def correlation(sample: DistanceSample) -> float:
    """γ sur un échantillon de distances."""
    x, y = sample.x, sample.y
    if np.ptp(x) == 0.0:
        raise MetricUndefinedError("Distances spectrales constantes : γ non défini")
    if np.ptp(y) == 0.0:
        raise MetricUndefinedError("Distances couleur constantes (image uniforme ?) : γ non défini")
    P = len(x)
    x_mean = x.mean()
    y_mean = y.mean()
    x_std = np.sqrt(np.mean((x - x_mean) ** 2))
    y_std = np.sqrt(np.mean((y - y_mean) ** 2))
    if not (x_std > 0 and y_std > 0):
        raise MetricUndefinedError("Variance nulle : γ non défini")
    return float((x @ y / P - x_mean * y_mean) / (x_std * y_std))


def preservation_of_distance(cube: SpectralCube, image: ColorImage,
                             pair_budget: PairBudget = 100000, seed: int = 0) -> float:
    """
    Corrélation γ entre distances spectrales et distances couleur.

    Args:
        cube: Cube hyperspectral
        image: Rendu couleur (Lαβ)
        pair_budget: Nombre de paires tirées, ou "all"
        seed: Graine du tirage

    Returns:
        γ dans [−1, 1]

    Raises:
        MetricUndefinedError: Distances constantes dans l'un des espaces
    """
    sample = distance_sample(cube, image, pair_budget, seed)
    gamma = correlation(sample)
    logger.info(f"Préservation des distances: gamma = {gamma:.6f} sur {sample.pair_count} paires")
    return gamma


def format_report(gamma: float, sample: DistanceSample) -> str:
    """Ligne `gamma=<v> pairs=<P> seed=<s>`."""
    return f"gamma={float(gamma)!r} pairs={sample.pair_count} seed={sample.seed}"
