import pytest

from craterlens.evaluation import CATALOG_CSV_HEADER, CatalogEntry, filter_band, load_catalog, write_catalog
from craterlens.testing import TestCaseWithTmpDir
from craterlens.utils import ArgumentError, FormatError


class TestCatalog(TestCaseWithTmpDir):
    def write(self, text: str):
        path = self.tmp_dir / "catalog.csv"
        path.write_text(text)
        return path

    def test_round_trip(self):
        entries = [CatalogEntry("A", 10.5, -3.25, 6.0, 0.9), CatalogEntry("B", -120.0, 45.0, 5.5)]
        path = self.tmp_dir / "catalog.csv"
        write_catalog(entries, path, "# craterlens test\n")
        assert load_catalog(path) == entries

    def test_extra_columns_and_blank_arc(self):
        path = self.write("id,lat_deg,lon_deg,diameter_km,arc_img,name\nX1,1.5,2.5,7.0,,Foo\nX2,-1,3,5,0.75,Bar\n")
        entries = load_catalog(path)
        assert entries == [CatalogEntry("X1", 2.5, 1.5, 7.0), CatalogEntry("X2", 3.0, -1.0, 5.0, 0.75)]

    def test_missing_column(self):
        with pytest.raises(FormatError):
            load_catalog(self.write("id,lat_deg,lon_deg\nA,0,0\n"))

    def test_duplicate_id(self):
        text = ",".join(CATALOG_CSV_HEADER) + "\nA,0,0,5,\nA,1,1,6,\n"
        with pytest.raises(FormatError) as info:
            load_catalog(self.write(text))
        assert info.value.row == 2

    def test_bad_values(self):
        header = ",".join(CATALOG_CSV_HEADER) + "\n"
        for row in ["A,zero,0,5,", "A,0,0,-5,", "A,0,0,nan,", "A,0,0,5,1.5"]:
            with pytest.raises(FormatError):
                load_catalog(self.write(header + row + "\n"))

    def test_filter_band_inclusive(self):
        catalog = [CatalogEntry(str(i), 0.0, 0.0, d) for i, d in enumerate([4.99, 5.0, 7.5, 10.0, 10.01])]
        assert [e.diameter for e in filter_band(catalog, 5.0, 10.0)] == [5.0, 7.5, 10.0]
        with pytest.raises(ArgumentError):
            filter_band(catalog, 10.0, 5.0)
