"""
Graphe des k plus proches voisins pondéré par le noyau composite, et
application du laplacien L = D − W sans le former.
"""

from dataclasses import dataclass, replace
from pathlib import Path
from typing import Optional, Set, Tuple, Union

import numpy as np
from scipy import sparse
from scipy.sparse import csgraph
from scipy.spatial.distance import cdist
from tqdm import tqdm

from ..hsi_io.cube import SpectralCube
from ..hsi_io.projection import format_float
from ..utils.errors import DimensionError, FormatError, ParameterError
from ..utils.logging import get_logger
from .kernels import KernelParams, edge_kernel, estimate_bandwidth, spatial_features

logger = get_logger(__name__)


@dataclass
class SparseGraph:
    """
    Graphe non orienté pondéré sur n pixels.

    Chaque arête est stockée une seule fois avec i < j dans `rows`/`cols`
    (ordre lexicographique) ; la matrice `adjacency` est la forme CSR
    symétrique qui en découle, et `degree` ses sommes de lignes.
    """

    n: int
    rows: np.ndarray
    cols: np.ndarray
    weights: np.ndarray
    adjacency: sparse.csr_matrix
    degree: np.ndarray
    k: Optional[int] = None

    @classmethod
    def from_edges(cls, n: int, rows, cols, weights, k: Optional[int] = None) -> "SparseGraph":
        """
        Construit un graphe à partir d'arêtes (i, j, w) ; l'orientation est
        normalisée en i < j et les doublons sont refusés.
        """
        rows = np.asarray(rows, dtype=np.int64).ravel()
        cols = np.asarray(cols, dtype=np.int64).ravel()
        weights = np.asarray(weights, dtype=np.float64).ravel()
        if not (len(rows) == len(cols) == len(weights)):
            raise DimensionError("rows, cols et weights doivent avoir la même longueur")
        if n < 1:
            raise ParameterError(f"Un graphe a au moins un sommet, reçu n = {n}")
        if len(rows):
            if rows.min() < 0 or cols.min() < 0 or max(rows.max(), cols.max()) >= n:
                raise DimensionError(f"Indice de sommet hors de [0, {n})")
            if np.any(rows == cols):
                raise ParameterError("Les boucles (i = j) sont interdites")
            if not np.all(np.isfinite(weights)) or np.any(weights <= 0):
                raise ParameterError("Les poids doivent être finis et strictement positifs")

        low = np.minimum(rows, cols)
        high = np.maximum(rows, cols)
        order = np.lexsort((high, low))
        low, high, weights = low[order], high[order], weights[order]
        if len(low) > 1 and np.any((low[1:] == low[:-1]) & (high[1:] == high[:-1])):
            raise ParameterError("Arête dupliquée")

        adjacency = sparse.csr_matrix(
            (np.concatenate([weights, weights]),
             (np.concatenate([low, high]), np.concatenate([high, low]))),
            shape=(n, n),
        )
        adjacency.sort_indices()
        degree = adjacency @ np.ones(n)
        return cls(n, low, high, weights, adjacency, degree, k)

    @property
    def n_edges(self) -> int:
        return len(self.rows)

    def edge_set(self) -> Set[Tuple[int, int]]:
        """Ensemble des arêtes (i, j) avec i < j."""
        return set(zip(self.rows.tolist(), self.cols.tolist()))

    def dense_laplacian(self) -> np.ndarray:
        """Laplacien dense D − W ; réservé aux petits graphes."""
        return np.diag(self.degree) - self.adjacency.toarray()

    def components(self) -> Tuple[int, np.ndarray]:
        """Nombre de composantes connexes et étiquette de chaque sommet."""
        return csgraph.connected_components(self.adjacency, directed=False)


def _neighbour_lists(spectral: np.ndarray, k: int, chunk: int, progress: bool) -> np.ndarray:
    """
    Indices des k plus proches voisins de chaque pixel (distance spectrale
    euclidienne, ex aequo départagés par le plus petit indice).
    """
    n = spectral.shape[0]
    neighbours = np.empty((n, k), dtype=np.int64)
    starts = range(0, n, chunk)
    for start in tqdm(starts, desc="Graphe kNN", disable=not progress, leave=False):
        stop = min(start + chunk, n)
        dist = cdist(spectral[start:stop], spectral, 'sqeuclidean')
        dist[np.arange(stop - start), np.arange(start, stop)] = np.inf
        threshold = np.partition(dist, k - 1, axis=1)[:, k - 1]
        for offset in range(stop - start):
            row = dist[offset]
            candidates = np.flatnonzero(row <= threshold[offset])
            # tri stable : à distance égale, l'indice le plus petit passe devant
            ranked = candidates[np.argsort(row[candidates], kind='stable')]
            neighbours[start + offset] = ranked[:k]
    return neighbours


def resolve_bandwidths(cube: SpectralCube, features: SpectralCube, params: KernelParams,
                       n_pairs: int = 1000, seed: int = 0) -> KernelParams:
    """Renseigne les largeurs de bande manquantes par l'heuristique de la médiane."""
    delta_s = params.delta_s
    delta_w = params.delta_w
    if delta_s is None:
        delta_s = estimate_bandwidth(cube.data.T, n_pairs, seed)
        logger.info(f"Largeur de bande spectrale estimée: {delta_s:.6g}")
    if delta_w is None:
        delta_w = estimate_bandwidth(features.data.T, n_pairs, seed)
        logger.info(f"Largeur de bande spatiale estimée: {delta_w:.6g}")
    return replace(params, delta_s=delta_s, delta_w=delta_w)


def knn_graph(cube: SpectralCube, params: KernelParams,
              bandwidth_pairs: int = 1000, seed: int = 0,
              chunk: int = 256, progress: bool = False) -> SparseGraph:
    """
    Construit le graphe kNN symétrisé par union, pondéré par le noyau composite.

    Une arête (i, j) existe si j est parmi les k plus proches voisins de i ou
    l'inverse ; la candidature se fait sur la distance spectrale seule.

    Args:
        cube: Cube hyperspectral
        params: Paramètres du noyau et du voisinage
        bandwidth_pairs: Paires échantillonnées pour estimer δs/δw absents
        seed: Graine de l'estimation des largeurs de bande
        chunk: Nombre de pixels requêtes traités par bloc
        progress: Affiche une barre de progression

    Returns:
        Graphe pondéré

    Raises:
        ParameterError: Si k >= n (pour n > 1)
    """
    n = cube.n_pixels
    if n == 1:
        logger.warning("Cube d'un seul pixel: graphe sans arête")
        return SparseGraph.from_edges(1, [], [], [], k=params.k)
    if params.k >= n:
        raise ParameterError(f"k = {params.k} doit être strictement inférieur au nombre de pixels n = {n}")

    features = spatial_features(cube, params.spatial_radius, params.spatial_sigma)
    params = resolve_bandwidths(cube, features, params, bandwidth_pairs, seed)

    spectral = np.ascontiguousarray(cube.data.T)
    spatial = np.ascontiguousarray(features.data.T)

    neighbours = _neighbour_lists(spectral, params.k, chunk, progress)
    sources = np.repeat(np.arange(n, dtype=np.int64), params.k)
    targets = neighbours.ravel()
    low = np.minimum(sources, targets)
    high = np.maximum(sources, targets)
    pairs = np.unique(low * n + high)
    rows, cols = np.divmod(pairs, n)

    weights = edge_kernel(spectral, spatial, rows, cols, params)
    graph = SparseGraph.from_edges(n, rows, cols, weights, k=params.k)
    logger.info(f"Graphe construit: {n} sommets, {graph.n_edges} arêtes (k = {params.k}, mu = {params.mu})")
    return graph


def laplacian_apply(graph: SparseGraph, values: np.ndarray) -> np.ndarray:
    """
    Calcule V·L = V·D − V·W sans former L.

    Args:
        graph: Graphe pondéré
        values: Matrice r×n (ou vecteur de longueur n)

    Returns:
        Matrice de même forme que `values`
    """
    values = np.asarray(values, dtype=np.float64)
    if values.shape[-1] != graph.n:
        raise DimensionError(f"{values.shape[-1]} colonnes pour un graphe de {graph.n} sommets")
    # W symétrique : V·W = (W·Vᵀ)ᵀ
    if values.ndim == 1:
        return graph.degree * values - graph.adjacency @ values
    return values * graph.degree[np.newaxis, :] - (graph.adjacency @ values.T).T


def write_graph(graph: SparseGraph, path: Union[str, Path]) -> None:
    """Écrit `n e` puis une ligne `i j w` par arête (i < j)."""
    lines = [f"{graph.n} {graph.n_edges}"]
    lines += [f"{i} {j} {format_float(w)}" for i, j, w in zip(graph.rows, graph.cols, graph.weights)]
    path = Path(path)
    try:
        path.write_text("\n".join(lines) + "\n", encoding='ascii')
    except OSError as e:
        raise OSError(f"Impossible d'écrire le graphe {path}: {e.strerror or e}") from e


def read_graph(path: Union[str, Path]) -> SparseGraph:
    """Relit un graphe écrit par write_graph."""
    path = Path(path)
    try:
        lines = path.read_text(encoding='ascii').split("\n")
    except OSError as e:
        raise OSError(f"Impossible de lire le graphe {path}: {e.strerror or e}") from e
    try:
        n, e = (int(v) for v in lines[0].split())
        body = [line.split() for line in lines[1:1 + e]]
        rows = [int(parts[0]) for parts in body]
        cols = [int(parts[1]) for parts in body]
        weights = [float(parts[2]) for parts in body]
    except (ValueError, IndexError):
        raise FormatError(f"{path}: fichier de graphe mal formé") from None
    if len(rows) != e:
        raise FormatError(f"{path}: {len(rows)} arêtes lues, {e} annoncées")
    return SparseGraph.from_edges(n, rows, cols, weights)
