"""
Tests de la référence LPP et du plongement laplacien dense.
"""

import numpy as np
import pytest

from visualisation_hsi.graph import KernelParams, SparseGraph, knn_graph
from visualisation_hsi.hsi_io import SpectralCube
from visualisation_hsi.solver import laplacian_eigenmaps_dense, lpp_baseline, lpp_eigenpairs
from visualisation_hsi.solver.lpp import lpp_matrices
from visualisation_hsi.utils.errors import ParameterError, SingularSystemError


@pytest.mark.parametrize("seed,bands", [(0, 3), (1, 6), (2, 12), (3, 20)])
def test_generalized_eigen_residual(make_cube, seed, bands):
    cube = make_cube(height=6, width=7, bands=bands, seed=seed)
    graph = knn_graph(cube, KernelParams(k=5))
    values, vectors = lpp_eigenpairs(cube, graph)
    XLX, XDX = lpp_matrices(cube, graph)

    residual = XLX @ vectors - XDX @ vectors * values[np.newaxis, :]

    assert np.max(np.abs(residual)) < 1e-8
    assert np.all(values >= -1e-10)
    assert np.all(np.diff(values) >= 0)
    np.testing.assert_allclose(np.diag(vectors.T @ XDX @ vectors), 1.0, atol=1e-9)


def test_sign_convention(make_cube):
    cube = make_cube(height=5, width=5, bands=7, seed=4)
    F = lpp_baseline(cube, knn_graph(cube, KernelParams(k=4)))

    pivots = np.argmax(np.abs(F.weights), axis=0)
    assert np.all(F.weights[pivots, np.arange(3)] > 0)


def test_rayleigh_quotient_below_random_directions(make_cube, rng):
    cube = make_cube(height=6, width=6, bands=8, seed=5)
    graph = knn_graph(cube, KernelParams(k=5))
    values, vectors = lpp_eigenpairs(cube, graph)
    XLX, XDX = lpp_matrices(cube, graph)
    f = vectors[:, 0]
    quotient = (f @ XLX @ f) / (f @ XDX @ f)

    for _ in range(100):
        v = rng.normal(size=cube.bands)
        v /= np.sqrt(v @ XDX @ v)
        assert quotient <= (v @ XLX @ v) + 1e-12


def test_too_few_bands(make_cube):
    cube = make_cube(bands=2)
    with pytest.raises(ParameterError):
        lpp_baseline(cube, knn_graph(cube, KernelParams(k=3)))


def test_ridge_fallback_on_zero_band(make_cube):
    cube = make_cube(height=5, width=6, bands=5, seed=6)
    data = cube.data.copy()
    data[2] = 0.0
    cube = SpectralCube(data, 5, 6)

    values, vectors = lpp_eigenpairs(cube, knn_graph(cube, KernelParams(k=4)))

    assert vectors.shape == (5, 3)
    assert np.all(np.isfinite(values)) and np.all(np.isfinite(vectors))


class TestEigenmaps:

    def test_generalized_eigenvectors(self, make_cube):
        cube = make_cube(height=5, width=6, bands=4, seed=7)
        graph = knn_graph(cube, KernelParams(k=4))
        embedding = laplacian_eigenmaps_dense(graph)
        L = graph.dense_laplacian()

        assert embedding.shape == (3, graph.n)
        for y in embedding:
            value = (y @ L @ y) / (y @ (graph.degree * y))
            assert np.max(np.abs(L @ y - value * graph.degree * y)) < 1e-8

    def test_isolated_vertex(self):
        graph = SparseGraph.from_edges(5, [0, 1, 2], [1, 2, 3], [1.0, 1.0, 1.0])
        with pytest.raises(SingularSystemError):
            laplacian_eigenmaps_dense(graph)

    def test_size_limit(self):
        graph = SparseGraph.from_edges(2001, np.arange(2000), np.arange(1, 2001), np.ones(2000))
        with pytest.raises(ParameterError):
            laplacian_eigenmaps_dense(graph)
