import numpy as np
import pytest

from tests.oracles import pairwise_objective
from visualisation_hsi.correspondence import Correspondence
from visualisation_hsi.graph import SparseGraph
from visualisation_hsi.hsi_io import ColorImage, ColorSpace, ProjectionMatrix
from visualisation_hsi.solver import objective_feature, objective_instance
from visualisation_hsi.utils.errors import DimensionError


@pytest.mark.parametrize("seed", range(5))
def test_trace_form_matches_pairwise_sum(make_instance, seed):
    _, graph, corr, S = make_instance(seed=seed)
    Y = np.random.default_rng(seed).normal(size=(3, graph.n))

    trace = objective_instance(Y, graph, corr, S, 7.5)
    pairwise = pairwise_objective(Y, graph, corr, S.data, 7.5)

    assert abs(trace - pairwise) <= 1e-9 * abs(pairwise)


def test_multiple_matches_per_reference_pixel(rng):
    graph = SparseGraph.from_edges(3, [0], [1], [0.5])
    corr = Correspondence.from_pairs(3, 2, [(0, 1), (2, 1), (1, 0)])
    S = ColorImage(rng.normal(size=(3, 2)), 1, 2, ColorSpace.LAB)
    Y = rng.normal(size=(3, 3))

    trace = objective_instance(Y, graph, corr, S, 2.0)
    assert trace == pytest.approx(pairwise_objective(Y, graph, corr, S.data, 2.0), rel=1e-12)


def test_zero_at_exact_fit(rng):
    S = ColorImage(rng.normal(size=(3, 4)), 2, 2, ColorSpace.LAB)
    graph = SparseGraph.from_edges(4, [], [], [])
    corr = Correspondence.from_pairs(4, 4, [(i, i) for i in range(4)])

    assert objective_instance(S.data, graph, corr, S, 3.0) == pytest.approx(0.0, abs=1e-12)


def test_feature_objective_evaluates_projection(make_instance, rng):
    cube, graph, corr, S = make_instance(seed=3)
    F = ProjectionMatrix(rng.normal(size=(cube.bands, 3)))

    assert objective_feature(F, cube, graph, corr, S, 2.0) == \
        objective_instance(F.weights.T @ cube.data, graph, corr, S, 2.0)


def test_shape_mismatch(path_graph):
    corr = Correspondence.from_pairs(3, 3, [(0, 0)])
    S = ColorImage(np.zeros((3, 3)), 1, 3, ColorSpace.LAB)
    with pytest.raises(DimensionError):
        objective_instance(np.zeros((3, 4)), path_graph, corr, S, 1.0)
