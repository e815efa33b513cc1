from unittest import TestCase

from craterlens.detect import DetectionGeo
from craterlens.evaluation import ARC_IMG_BINS, CatalogEntry, MatchPair, MatchReport, arcimg_binned_recall


class TestArcImgRecall(TestCase):
    def test_bins(self):
        arcs = {"a": 1.0, "b": 0.95, "c": 0.9, "d": 0.75, "e": 0.6, "f": 0.5, "g": 0.4, "h": None}
        catalog = [CatalogEntry(k, 0.0, 0.0, 5.0, v) for k, v in arcs.items()]
        report = MatchReport(
            tp_pairs=[MatchPair(DetectionGeo(0.0, 0.0, 5.0, 0.9), k, 0.8, 5.0) for k in ["a", "c", "f", "g", "h"]]
        )
        bins = arcimg_binned_recall(report, catalog)
        assert [b.label for b in bins] == [label for label, _, _ in ARC_IMG_BINS]
        assert [(b.matched, b.total) for b in bins] == [(1, 2), (1, 2), (1, 2)]
        assert [b.recall for b in bins] == [50.0, 50.0, 50.0]

    def test_empty_bin(self):
        catalog = [CatalogEntry("a", 0.0, 0.0, 5.0, 0.99)]
        bins = arcimg_binned_recall(MatchReport(), catalog)
        assert bins[0].recall == 0.0
        assert bins[1].recall is None and bins[1].total == 0
