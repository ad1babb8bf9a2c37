"""
Tests de lecture et d'écriture des cubes ENVI.
"""

import numpy as np
import pytest

from visualisation_hsi.hsi_io import SpectralCube, minmax_scale, read_cube, write_cube
from visualisation_hsi.hsi_io.cube import raw_path_for
from visualisation_hsi.utils.errors import DimensionError, FormatError


def _write_header(path, samples=2, lines=2, bands=3, interleave="bsq", extra=""):
    path.write_text(
        "ENVI\n"
        f"samples = {samples}\n"
        f"lines = {lines}\n"
        f"bands = {bands}\n"
        "data type = 4\n"
        f"interleave = {interleave}\n"
        "byte order = 0\n" + extra,
        encoding="utf-8",
    )


class TestReadCube:
    """Décodage du format ENVI restreint."""

    def test_band_sequential_order(self, tmp_path):
        """Les valeurs 0..11 se rangent bande par bande."""
        header = tmp_path / "cube.hdr"
        _write_header(header)
        raw_path_for(header).write_bytes(np.arange(12, dtype="<f4").tobytes())

        cube = read_cube(header)

        assert (cube.bands, cube.height, cube.width) == (3, 2, 2)
        np.testing.assert_array_equal(cube.data[0], [0, 1, 2, 3])
        np.testing.assert_array_equal(cube.data[2], [8, 9, 10, 11])

    def test_bil_interleave_rejected(self, tmp_path):
        header = tmp_path / "cube.hdr"
        _write_header(header, interleave="bil")
        raw_path_for(header).write_bytes(np.zeros(12, dtype="<f4").tobytes())

        with pytest.raises(FormatError, match="interleave"):
            read_cube(header)

    def test_wrong_raw_size(self, tmp_path):
        header = tmp_path / "cube.hdr"
        _write_header(header)
        raw_path_for(header).write_bytes(np.zeros(11, dtype="<f4").tobytes())

        with pytest.raises(FormatError, match="attendus"):
            read_cube(header)

    def test_missing_key(self, tmp_path):
        header = tmp_path / "cube.hdr"
        header.write_text("ENVI\nsamples = 2\nlines = 2\n", encoding="utf-8")

        with pytest.raises(FormatError, match="bands"):
            read_cube(header)

    def test_non_finite_values(self, tmp_path):
        header = tmp_path / "cube.hdr"
        _write_header(header, bands=1)
        raw_path_for(header).write_bytes(np.array([0.0, np.nan, 1.0, 2.0], dtype="<f4").tobytes())

        with pytest.raises(FormatError, match="non finies"):
            read_cube(header)

    def test_unknown_keys_ignored(self, tmp_path):
        header = tmp_path / "cube.hdr"
        _write_header(header, bands=1, extra="description = {scene\n de test}\nsensor type = inconnu\n")
        raw_path_for(header).write_bytes(np.ones(4, dtype="<f4").tobytes())

        assert read_cube(header).n_pixels == 4

    def test_header_without_envi_magic(self, tmp_path):
        header = tmp_path / "cube.hdr"
        header.write_text("samples = 2\nlines = 2\nbands = 1\n", encoding="utf-8")
        raw_path_for(header).write_bytes(np.ones(4, dtype="<f4").tobytes())

        with pytest.raises(FormatError, match="ENVI"):
            read_cube(header)

    def test_missing_header_names_path(self, tmp_path):
        with pytest.raises(OSError, match="absent.hdr"):
            read_cube(tmp_path / "absent.hdr")


class TestWriteCube:
    """Écriture et aller-retour."""

    def test_single_value_is_four_little_endian_bytes(self, tmp_path):
        header = tmp_path / "one.hdr"
        write_cube(SpectralCube(np.array([[0.5]]), 1, 1), header)

        assert raw_path_for(header).read_bytes() == np.array([0.5], dtype="<f4").tobytes()

    def test_round_trip_is_bit_identical(self, tmp_path):
        generator = np.random.default_rng(4)
        values = generator.uniform(size=(8, 16))
        cube = SpectralCube(values, 4, 4, band_wavelengths=[400.0 + 10 * b for b in range(8)]).as_float32()
        header = tmp_path / "cube.hdr"

        write_cube(cube, header)
        again = read_cube(header)

        assert again.data.tobytes() == cube.data.tobytes()
        assert again.band_wavelengths == cube.band_wavelengths

    def test_inexact_values_are_refused(self, tmp_path):
        cube = SpectralCube(np.array([[0.1, 0.2, 1 / 3, 0.7]]), 2, 2)

        with pytest.raises(FormatError, match="float32"):
            write_cube(cube, tmp_path / "cube.hdr")
        assert not (tmp_path / "cube.hdr").exists()

    def test_rounded_copy_round_trips(self, tmp_path):
        cube = SpectralCube(np.array([[0.1, 0.2, 1 / 3, 0.7]]), 2, 2).as_float32()
        header = tmp_path / "cube.hdr"

        write_cube(cube, header)

        assert read_cube(header).data.tobytes() == cube.data.tobytes()
        np.testing.assert_allclose(cube.data, [[0.1, 0.2, 1 / 3, 0.7]], rtol=1e-7)

    def test_values_beyond_float32_range(self, tmp_path):
        cube = SpectralCube(np.array([[1e39]]), 1, 1)

        with pytest.raises(FormatError, match="plage"):
            write_cube(cube, tmp_path / "big.hdr")
        with pytest.raises(FormatError):
            cube.as_float32()

    def test_unwritable_directory(self, tmp_path):
        target = tmp_path / "absent" / "cube.hdr"
        with pytest.raises(OSError, match="cube.hdr"):
            write_cube(SpectralCube(np.zeros((1, 1)), 1, 1), target)


class TestSpectralCube:

    def test_grid_indexing_is_bijective(self):
        cube = SpectralCube(np.zeros((1, 12)), 3, 4)
        for i in range(12):
            assert cube.index(*cube.row_col(i)) == i

    def test_shape_mismatch(self):
        with pytest.raises(DimensionError):
            SpectralCube(np.zeros((2, 5)), 2, 2)

    def test_non_finite_rejected(self):
        with pytest.raises(FormatError):
            SpectralCube(np.array([[np.inf]]), 1, 1)


def test_minmax_scale_maps_bands_to_unit_interval():
    cube = SpectralCube(np.array([[1.0, 3.0, 5.0, 2.0], [7.0, 7.0, 7.0, 7.0]]), 2, 2)

    scaled = minmax_scale(cube)

    np.testing.assert_allclose(scaled.data[0], [0.0, 0.5, 1.0, 0.25])
    # bande constante
    np.testing.assert_array_equal(scaled.data[1], 0.0)
