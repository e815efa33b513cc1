from unittest import TestCase

import numpy as np
import pytest

from craterlens.raster import ImageGrid, decode_pgm, encode_pgm16, load_pgm16, save_pgm16
from craterlens.testing import TestCaseWithTmpDir
from craterlens.utils import FormatError, TruncatedFileError


class TestPgmCodec(TestCase):
    def test_decode_8bit(self):
        img = decode_pgm(b"P5\n3 1\n255\n" + bytes([0, 51, 255]))
        assert img.source_bit_depth == 8
        assert np.allclose(img.values, [[0.0, 0.2, 1.0]])

    def test_decode_16bit_big_endian(self):
        img = decode_pgm(b"P5 2 1 65535\n\x01\x00\xff\xff")
        assert img.source_bit_depth == 16
        assert img.values[0, 0] == 256 / 65535
        assert img.values[0, 1] == 1.0

    def test_header_comments(self):
        img = decode_pgm(b"P5\n# made by hand\n2 # width\n1\n255\n\x00\x80")
        assert img.shape == (1, 2)

    def test_encode(self):
        img = ImageGrid(np.array([[0.0, 256 / 65535, 1.0]]))
        assert encode_pgm16(img) == b"P5\n3 1\n65535\n\x00\x00\x01\x00\xff\xff"

    def test_rejects_unsupported(self):
        with pytest.raises(FormatError):
            decode_pgm(b"P2\n1 1\n255\n0")
        with pytest.raises(FormatError):
            decode_pgm(b"P5\n1 1\n1000\n\x00\x00")
        with pytest.raises(FormatError):
            decode_pgm(b"P5\n0 1\n255\n")
        with pytest.raises(FormatError):
            decode_pgm(b"P5\n1 1")

    def test_truncated_payload(self):
        with pytest.raises(TruncatedFileError):
            decode_pgm(b"P5\n2 2\n65535\n\x00\x00\x00")
        with pytest.raises(OSError):
            decode_pgm(b"P5\n2 2\n255\n\x00")


class TestPgmFiles(TestCaseWithTmpDir):
    def test_16bit_values_survive_save_and_load(self):
        rng = np.random.default_rng(5)
        img = ImageGrid(rng.integers(0, 65536, size=(7, 5)) / 65535)
        path = self.tmp_dir / "a.pgm"
        save_pgm16(img, path)
        loaded = load_pgm16(path)
        assert np.array_equal(loaded.values, img.values)
        assert not list(self.tmp_dir.glob("*.tmp"))

    def test_missing_file(self):
        with pytest.raises(OSError):
            load_pgm16(self.tmp_dir / "missing.pgm")
