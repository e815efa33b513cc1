import itertools
from unittest import TestCase

import numpy as np

from craterlens.detect import DetectionGeo
from craterlens.evaluation import (
    CatalogEntry,
    CraterCircle,
    MatchPair,
    MatchReport,
    catalog_circles,
    circles_overlap,
    overlapping_subset,
    subset_recall,
)


class TestCirclesOverlap(TestCase):
    def test_cases(self):
        a = CraterCircle(0.0, 0.0, 2.0)
        assert circles_overlap(a, CraterCircle(3.0, 0.0, 2.0))
        assert not circles_overlap(a, CraterCircle(4.0, 0.0, 2.0))
        assert not circles_overlap(a, CraterCircle(5.0, 0.0, 2.0))
        assert not circles_overlap(a, CraterCircle(0.5, 0.0, 1.0))
        assert not circles_overlap(a, CraterCircle(1.0, 0.0, 1.0))
        assert circles_overlap(a, CraterCircle(1.5, 0.0, 1.0))


class TestOverlappingSubset(TestCase):
    def test_matches_brute_force(self):
        rng = np.random.default_rng(3)
        catalog = [
            CatalogEntry(f"C{i}", float(lon), float(lat), float(d))
            for i, (lon, lat, d) in enumerate(
                zip(rng.uniform(0.0, 2.0, 120), rng.uniform(-1.0, 1.0, 120), rng.uniform(0.5, 4.0, 120))
            )
        ]
        circles = catalog_circles(catalog)
        flagged = set()
        for i, j in itertools.combinations(range(len(catalog)), 2):
            if circles_overlap(circles[i], circles[j]):
                flagged |= {i, j}
        subset = overlapping_subset(catalog)
        assert subset == [catalog[i] for i in sorted(flagged)]
        assert 0 < len(subset) < len(catalog)

    def test_nested_and_small(self):
        big = CatalogEntry("big", 0.0, 0.0, 10.0)
        inner = CatalogEntry("inner", 0.01, 0.0, 2.0)
        assert overlapping_subset([big, inner]) == []
        assert overlapping_subset([big]) == []

    def test_subset_recall(self):
        subset = [CatalogEntry(c, 0.0, 0.0, 5.0) for c in "abcd"]
        report = MatchReport(tp_pairs=[MatchPair(DetectionGeo(0.0, 0.0, 5.0, 0.9), "b", 0.9, 5.0)])
        result = subset_recall(report, subset)
        assert (result.matched, result.total, result.recall) == (1, 4, 25.0)
        assert subset_recall(report, []).recall == 0.0
