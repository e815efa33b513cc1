import json

import pytest

from craterlens.detect import GeoRef
from craterlens.evaluation import DEFAULT_LOCALIZATION_EDGES, EvaluationReport, evaluate, write_report_json
from craterlens.testing import TestCaseWithTmpDir, crater_at_px, geo_det_at_px
from craterlens.utils import Provenance


class TestEvaluate(TestCaseWithTmpDir):
    def setup_method(self):
        self.georef = GeoRef(meters_per_pixel=100.0)
        self.catalog = [
            crater_at_px("A", 100.0, 100.0, 60.0, self.georef, 0.97),
            crater_at_px("B", 140.0, 100.0, 60.0, self.georef, 0.8),
            crater_at_px("C", 400.0, 100.0, 80.0, self.georef, 0.6),
        ]
        self.dets = [
            geo_det_at_px(100.0, 100.0, 60.0, self.georef, 0.9),
            geo_det_at_px(402.0, 100.0, 80.0, self.georef, 0.8),
            geo_det_at_px(300.0, 300.0, 50.0, self.georef, 0.7),
        ]

    def test_summary(self):
        summary, report = evaluate(self.dets, self.catalog, self.georef)
        assert (summary.tp, summary.fp, summary.fn) == (2, 1, 1)
        assert summary.metrics == report.metrics()
        assert len(summary.localization) == len(DEFAULT_LOCALIZATION_EDGES)
        assert summary.localization[-1].count == 2
        assert summary.localization[0].count == 0
        assert summary.localization[1].mean_iou == pytest.approx(100.0)
        assert summary.overlap is not None
        assert (summary.overlap.matched, summary.overlap.total) == (1, 2)
        assert [b.recall for b in summary.arc_img] == [100.0, 0.0, 100.0]

    def test_json(self):
        summary, _ = evaluate(self.dets, self.catalog, self.georef)
        summary.provenance = Provenance("0.1", "abcdef0123456789", 1)
        path = self.tmp_dir / "evaluation.json"
        write_report_json(summary, path)
        data = json.loads(path.read_text())
        assert data["tp"] == 2 and data["provenance"]["seed"] == 1
        assert EvaluationReport.from_dict(data) == summary  # type: ignore

    def test_no_matches(self):
        summary, _ = evaluate([], self.catalog, self.georef)
        assert summary.metrics.f1 == 0.0
        assert len(summary.localization) == len(DEFAULT_LOCALIZATION_EDGES) - 1
