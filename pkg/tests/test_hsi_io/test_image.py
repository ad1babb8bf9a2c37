"""
Tests du codec PPM.
"""

import numpy as np
import pytest

from visualisation_hsi.hsi_io import ColorImage, ColorSpace, read_image, write_image
from visualisation_hsi.hsi_io.image import decode_ppm, encode_ppm
from visualisation_hsi.utils.errors import DimensionError, FormatError


class TestPPM:

    def test_decode_two_pixels(self):
        image = decode_ppm(b"P6\n2 1\n255\n" + bytes([255, 0, 0, 0, 0, 255]))

        assert image.space is ColorSpace.RGB
        np.testing.assert_array_equal(image.data[:, 0], [1.0, 0.0, 0.0])
        np.testing.assert_array_equal(image.data[:, 1], [0.0, 0.0, 1.0])

    def test_header_comments_are_skipped(self):
        image = decode_ppm(b"P6\n# commentaire\n1 1\n255\n" + bytes([0, 51, 255]))
        np.testing.assert_allclose(image.data[:, 0], [0.0, 0.2, 1.0])

    def test_half_gray_encodes_to_128(self):
        image = ColorImage(np.full((3, 4), 0.5), 2, 2)
        payload = encode_ppm(image)
        assert payload.endswith(bytes([128]) * 12)

    def test_wrong_magic(self):
        with pytest.raises(FormatError, match="P6"):
            decode_ppm(b"P3\n1 1\n255\n0 0 0\n")

    def test_truncated_payload(self):
        with pytest.raises(FormatError, match="tronquées"):
            decode_ppm(b"P6\n2 2\n255\n" + bytes(5))

    def test_lab_image_cannot_be_written(self, tmp_path):
        image = ColorImage(np.zeros((3, 1)), 1, 1, ColorSpace.LAB)
        with pytest.raises(FormatError):
            write_image(image, tmp_path / "lab.ppm")

    def test_round_trip_quantization(self, tmp_path, rng):
        image = ColorImage(rng.uniform(size=(3, 30)), 5, 6)
        path = tmp_path / "image.ppm"

        write_image(image, path)
        again = read_image(path)

        assert (again.height, again.width) == (5, 6)
        assert np.max(np.abs(again.data - image.data)) <= 1.0 / 255 + 1e-9


def test_rgb_values_outside_unit_interval_rejected():
    with pytest.raises(FormatError):
        ColorImage(np.full((3, 1), 1.5), 1, 1)


def test_image_shape_mismatch():
    with pytest.raises(DimensionError):
        ColorImage(np.zeros((3, 5)), 2, 2)
