"""
Tests des scènes synthétiques.
"""

import numpy as np
import pytest

from visualisation_hsi.hsi_io import read_cube, read_image
from visualisation_hsi.hsi_io.color import rgb_to_lab_array
from visualisation_hsi.synthetic import (
    NATURAL_COLORS, SPECTRAL_GAIN, make_scene, region_labels, write_labels, write_scene
)
from visualisation_hsi.utils.errors import ParameterError


def test_signature_distances_follow_color_distances():
    scene = make_scene(bands=8, clusters=5, noise=0.0, seed=2)
    lab = rgb_to_lab_array(scene.colors.T)

    for a in range(5):
        for b in range(a + 1, 5):
            spectral = np.linalg.norm(scene.signatures[:, a] - scene.signatures[:, b])
            color = np.linalg.norm(lab[:, a] - lab[:, b])
            assert spectral == pytest.approx(SPECTRAL_GAIN * color, rel=1e-10)


def test_sensor_model_shared_across_layouts():
    first = make_scene(seed=4, layout_seed=1)
    second = make_scene(seed=4, layout_seed=2)

    np.testing.assert_array_equal(first.signatures, second.signatures)
    np.testing.assert_array_equal(first.colors, second.colors)
    assert not np.array_equal(first.labels, second.labels)


def test_reference_uses_region_colors():
    scene = make_scene(clusters=3, seed=1)
    np.testing.assert_array_equal(scene.reference.data, scene.colors[scene.labels].T)
    np.testing.assert_array_equal(scene.colors, NATURAL_COLORS[:3])


def test_extra_colors_beyond_palette():
    scene = make_scene(height=8, width=8, clusters=10, seed=0)
    assert scene.colors.shape == (10, 3)
    assert np.all((scene.colors >= 0.1) & (scene.colors <= 0.9))


@pytest.mark.parametrize("height,width,clusters", [(16, 16, 4), (5, 7, 6), (2, 2, 4), (1, 9, 3)])
def test_every_region_present(height, width, clusters):
    labels = region_labels(height, width, clusters, np.random.default_rng(0))
    assert sorted(np.unique(labels).tolist()) == list(range(clusters))


def test_invalid_parameters():
    with pytest.raises(ParameterError):
        make_scene(height=0)
    with pytest.raises(ParameterError):
        make_scene(height=2, width=2, clusters=5)
    with pytest.raises(ParameterError):
        make_scene(noise=-0.1)


def test_written_files(tmp_path):
    scene = make_scene(height=4, width=5, bands=3, seed=6)
    write_scene(scene, tmp_path / "c.hdr", tmp_path / "r.ppm", tmp_path / "l.csv")

    cube = read_cube(tmp_path / "c.hdr")
    np.testing.assert_array_equal(cube.data, scene.cube.data)
    assert (read_image(tmp_path / "r.ppm").height, cube.width) == (4, 5)
    lines = (tmp_path / "l.csv").read_text().splitlines()
    assert len(lines) == 20
    assert lines[6] == f"1,1,{scene.labels[6]}"


def test_labels_without_header(tmp_path):
    scene = make_scene(height=2, width=2, clusters=1)
    write_labels(scene, tmp_path / "l.csv")
    assert (tmp_path / "l.csv").read_text() == "0,0,0\n0,1,0\n1,0,0\n1,1,0\n"
