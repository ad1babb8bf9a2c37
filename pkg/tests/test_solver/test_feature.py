"""
Tests de l'apprentissage contraint au niveau des caractéristiques et de la
réutilisation de la projection.
"""

import numpy as np
import pytest

from tests.oracles import accelerated_descent
from visualisation_hsi.correspondence import Correspondence
from visualisation_hsi.graph import SparseGraph
from visualisation_hsi.hsi_io import ColorImage, ColorSpace, ProjectionMatrix, SpectralCube
from visualisation_hsi.solver import (
    SolveOptions, apply_projection, feature_level, feature_stationarity_gap, objective_feature,
    solve_feature_level
)
from visualisation_hsi.utils.errors import DimensionError, SingularSystemError


def _all_pairs(n):
    return Correspondence.from_pairs(n, n, np.stack([np.arange(n), np.arange(n)], axis=1))


def _edgeless(n):
    return SparseGraph.from_edges(n, [], [], [])


class TestClosedForm:

    def test_one_hot_spectra_map_to_matched_colors(self):
        cube = SpectralCube(np.eye(3), 1, 3)
        S = ColorImage(np.array([[0.5, -0.1, 0.2], [0.0, 0.3, -0.4], [0.7, 0.1, 0.05]]), 1, 3, ColorSpace.LAB)

        F = feature_level(cube, _edgeless(3), _all_pairs(3), S, SolveOptions(lam=1.0))

        np.testing.assert_allclose(F.weights, S.data.T, rtol=0, atol=1e-14)
        np.testing.assert_allclose(apply_projection(F, cube).Y, S.data, rtol=0, atol=1e-14)

    def test_linear_ground_truth_recovered(self, rng):
        n = 48
        S_true = rng.normal(size=(3, n))
        G = rng.normal(size=(3, 3))
        X = np.vstack([G @ S_true, rng.normal(size=(3, n))])
        cube = SpectralCube(X, 6, 8)
        S = ColorImage(S_true, 6, 8, ColorSpace.LAB)

        F = feature_level(cube, _edgeless(n), _all_pairs(n), S, SolveOptions(lam=1.0))

        assert F.weights.shape == (6, 3)
        assert np.max(np.abs(apply_projection(F, cube).Y - S_true)) < 1e-6

    @pytest.mark.parametrize("seed", range(20))
    def test_matches_descent_oracle(self, make_instance, seed):
        cube, graph, corr, S = make_instance(height=5, width=8, bands=6, seed=seed)
        solution = solve_feature_level(cube, graph, corr, S)
        lam = solution.lam

        X = cube.data
        XLXt = X @ graph.dense_laplacian() @ X.T
        XC1Xt = (X * corr.row_sums[np.newaxis, :]) @ X.T
        XCSt = X @ (corr.matrix() @ S.data.T)
        hessian = 2.0 * (XLXt + lam * XC1Xt)
        F_oracle = accelerated_descent(
            lambda F: hessian @ F - 2.0 * lam * XCSt,
            np.zeros((cube.bands, 3)),
            np.linalg.eigvalsh(hessian),
        )

        np.testing.assert_allclose(solution.projection.weights, F_oracle, rtol=0, atol=1e-5)

    @pytest.mark.parametrize("seed", range(5))
    def test_stationarity(self, make_instance, seed):
        cube, graph, corr, S = make_instance(seed=seed)
        solution = solve_feature_level(cube, graph, corr, S)

        gradient, scale = feature_stationarity_gap(solution.projection, cube, graph, corr, S, solution.lam)

        assert gradient <= 10 * SolveOptions().cg_tol * scale
        assert all(r < 1e-9 for r in solution.residuals)

    def test_local_optimality(self, make_instance, rng):
        cube, graph, corr, S = make_instance(seed=11)
        solution = solve_feature_level(cube, graph, corr, S)
        best = objective_feature(solution.projection, cube, graph, corr, S, solution.lam)

        for _ in range(50):
            perturbed = ProjectionMatrix(solution.projection.weights + 1e-3 * rng.normal(size=(cube.bands, 3)))
            assert best <= objective_feature(perturbed, cube, graph, corr, S, solution.lam)

    def test_two_bands_give_two_by_three_projection(self, make_instance):
        cube, graph, corr, S = make_instance(bands=2, seed=1)
        F = feature_level(cube, graph, corr, S)
        assert F.weights.shape == (2, 3)


class TestSingular:

    def test_duplicated_band_is_singular(self, rng):
        band = rng.uniform(size=12)
        cube = SpectralCube(np.vstack([band, band, rng.uniform(size=12)]), 3, 4)
        S = ColorImage(rng.normal(size=(3, 12)), 3, 4, ColorSpace.LAB)

        with pytest.raises(SingularSystemError, match="--ridge"):
            feature_level(cube, _edgeless(12), _all_pairs(12), S, SolveOptions(lam=1.0))

    def test_ridge_makes_it_solvable(self, rng):
        band = rng.uniform(size=12)
        cube = SpectralCube(np.vstack([band, band, rng.uniform(size=12)]), 3, 4)
        S = ColorImage(rng.normal(size=(3, 12)), 3, 4, ColorSpace.LAB)

        F = feature_level(cube, _edgeless(12), _all_pairs(12), S, SolveOptions(lam=1.0, ridge=1e-3))

        # la régularisation répartit le poids entre les deux bandes identiques
        np.testing.assert_allclose(F.weights[0], F.weights[1], atol=1e-8)


class TestApplyProjection:

    def test_zero_projection(self, make_cube):
        cube = make_cube(bands=5)
        result = apply_projection(ProjectionMatrix(np.zeros((5, 3))), cube)
        np.testing.assert_array_equal(result.Y, 0.0)

    def test_training_cube_bit_identical(self, make_instance):
        cube, graph, corr, S = make_instance(seed=2)
        F = feature_level(cube, graph, corr, S)

        np.testing.assert_array_equal(apply_projection(F, cube).Y, F.weights.T @ cube.data)

    def test_pixel_permutation(self, make_cube, rng):
        cube = make_cube(height=4, width=6, bands=5, seed=3)
        F = ProjectionMatrix(rng.normal(size=(5, 3)))
        perm = rng.permutation(cube.n_pixels)
        shuffled = SpectralCube(cube.data[:, perm], 4, 6)

        np.testing.assert_allclose(apply_projection(F, shuffled).Y, apply_projection(F, cube).Y[:, perm],
                                   rtol=0, atol=1e-14)

    def test_band_mismatch(self, make_cube):
        with pytest.raises(DimensionError):
            apply_projection(ProjectionMatrix(np.ones((4, 3))), make_cube(bands=5))
