import io

import pytest

from craterlens.testing import TestCaseWithTmpDir
from craterlens.utils import atomic_write_bytes, atomic_write_text, read_data_lines


class TestAtomicWrite(TestCaseWithTmpDir):
    def test_write_and_replace(self):
        path = self.tmp_dir / "out.txt"
        atomic_write_text(path, "first\n")
        atomic_write_text(path, "second\n")
        assert path.read_text() == "second\n"
        assert [p.name for p in self.tmp_dir.iterdir()] == ["out.txt"]

    def test_failure_leaves_nothing(self):
        path = self.tmp_dir / "out.bin"
        with pytest.raises(TypeError):
            atomic_write_bytes(path, "not bytes")  # type: ignore
        assert list(self.tmp_dir.iterdir()) == []

    def test_failure_keeps_old_content(self):
        path = self.tmp_dir / "out.bin"
        atomic_write_bytes(path, b"\x00\x01")
        with pytest.raises(TypeError):
            atomic_write_bytes(path, 12)  # type: ignore
        assert path.read_bytes() == b"\x00\x01"
        assert len(list(self.tmp_dir.iterdir())) == 1


class TestReadDataLines:
    def test_skips_comments(self):
        f = io.StringIO("# craterlens 0.1.0 config=abc seed=0\na,b\n1,2\n# note\n3,4\n")
        assert list(read_data_lines(f)) == ["a,b\n", "1,2\n", "3,4\n"]
