from unittest import TestCase

import numpy as np
import pytest
from parameterized import parameterized

from craterlens.raster import (
    ImageGrid,
    read_patch_csv,
    tile_footprints,
    tile_offsets,
    tile_overlapping,
    write_patch_csv,
)
from craterlens.testing import TestCaseWithTmpDir
from craterlens.utils import ArgumentError, FormatError


class TestTileOffsets(TestCase):
    @parameterized.expand(
        [
            (10, 4, 0.5, [0, 2, 4, 6]),
            (11, 4, 0.5, [0, 2, 4, 6, 7]),
            (1024, 1024, 0.5, [0]),
            (4096, 1024, 0.5, [0, 512, 1024, 1536, 2048, 2560, 3072]),
            (10, 3, 0.0, [0, 3, 6, 7]),
        ]
    )
    def test_offsets(self, size, patch, overlap, expected):
        assert tile_offsets(size, patch, overlap) == expected

    def test_invalid(self):
        with pytest.raises(ArgumentError):
            tile_offsets(10, 11, 0.5)
        with pytest.raises(ArgumentError):
            tile_offsets(10, 4, 1.0)
        with pytest.raises(ArgumentError):
            tile_offsets(10, 0, 0.5)


class TestTileOverlapping(TestCase):
    def test_patches_cover_image_in_row_major_order(self):
        rng = np.random.default_rng(3)
        img = ImageGrid(rng.uniform(size=(13, 11)))
        patches = tile_overlapping(img, 6, 0.5)

        assert [p.patch_id for p in patches] == list(range(len(patches)))
        keys = [(p.offset_y, p.offset_x) for p in patches]
        assert keys == sorted(keys)

        covered = np.zeros(img.shape, dtype=bool)
        for p in patches:
            assert p.image.shape == (6, 6)
            window = img.values[p.offset_y : p.offset_y + 6, p.offset_x : p.offset_x + 6]
            assert np.array_equal(p.image.values, window)
            covered[p.offset_y : p.offset_y + 6, p.offset_x : p.offset_x + 6] = True
        assert covered.all()

    def test_footprints_match_patches(self):
        img = ImageGrid.constant(20, 30, 0.1)
        assert [p.footprint for p in tile_overlapping(img, 10, 0.5)] == tile_footprints(30, 20, 10, 0.5)


class TestPatchCsv(TestCaseWithTmpDir):
    def test_write_and_read(self):
        footprints = tile_footprints(300, 200, 128, 0.5)
        path = self.tmp_dir / "patches.csv"
        write_patch_csv(footprints, path, header="# craterlens test\n")
        assert path.read_text().startswith("# craterlens test\npatch_id,offset_x,offset_y,width,height\n")
        assert read_patch_csv(path) == footprints

    def test_bad_header(self):
        path = self.tmp_dir / "patches.csv"
        path.write_text("id,x,y\n0,0,0\n")
        with pytest.raises(FormatError):
            read_patch_csv(path)

    def test_bad_row(self):
        path = self.tmp_dir / "patches.csv"
        path.write_text("patch_id,offset_x,offset_y,width,height\n0,0,zero,4,4\n")
        with pytest.raises(FormatError) as info:
            read_patch_csv(path)
        assert info.value.row == 1
