import numpy as np
import pytest

from visualisation_hsi.correspondence import Correspondence
from visualisation_hsi.graph import KernelParams, SparseGraph, knn_graph
from visualisation_hsi.hsi_io import ColorImage, ColorSpace, SpectralCube


@pytest.fixture
def rng():
    """Générateur à graine fixe."""
    return np.random.default_rng(12345)


@pytest.fixture
def make_cube():
    """Fabrique de cubes aléatoires reproductibles."""
    def _make(height=5, width=5, bands=4, seed=0):
        generator = np.random.default_rng(seed)
        return SpectralCube(generator.uniform(0.0, 1.0, size=(bands, height * width)), height, width)
    return _make


@pytest.fixture
def path_graph():
    """Graphe chemin 0–1–2 de poids unitaires."""
    return SparseGraph.from_edges(3, [0, 1], [1, 2], [1.0, 1.0])


@pytest.fixture
def make_instance():
    """
    Instance aléatoire complète : cube, graphe kNN, correspondance alignée
    (au moins un pixel contraint par composante connexe) et référence Lαβ.
    """
    def _make(height=5, width=8, bands=6, k=4, fraction=0.2, seed=0):
        generator = np.random.default_rng(seed)
        n = height * width
        cube = SpectralCube(generator.uniform(0.0, 1.0, size=(bands, n)), height, width)
        graph = knn_graph(cube, KernelParams(k=k, spatial_radius=1), seed=seed)
        count = max(1, int(round(fraction * n)))
        constrained = set(generator.choice(n, size=count, replace=False).tolist())
        _, labels = graph.components()
        for label in np.unique(labels):
            members = np.flatnonzero(labels == label)
            if not constrained.intersection(members.tolist()):
                constrained.add(int(members[0]))
        indices = np.array(sorted(constrained))
        corr = Correspondence.from_pairs(n, n, np.stack([indices, indices], axis=1))
        reference = ColorImage(generator.normal(0.0, 1.0, size=(3, n)), height, width, ColorSpace.LAB)
        return cube, graph, corr, reference
    return _make
