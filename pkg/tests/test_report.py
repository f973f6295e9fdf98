import json
import math

import pytest

from torchgrushin import estimates
from torchgrushin.estimates import ExperimentReport, ExperimentTolerances, Verdict


def _report() -> ExperimentReport:
    xs = [0.0, 1.0, 2.0, 3.0]
    ys = [3.0 * 2.0 ** (-0.5 * x) for x in xs]
    return ExperimentReport(
        experiment="restriction_decay",
        inputs={"p": 1.0, "ell_range": [0, 1, 2, 3]},
        series={"ell": xs, "norm": ys, "short": [math.inf]},
        verdict=Verdict.PASS,
        fit=estimates.fit_exponent(xs, ys),
        predicted=-0.5,
        constants={"F_l2_norm": 1.25},
        flags=("example flag",),
    )


def test_fit_exponent():
    """Exact power laws are recovered; degenerate inputs give no fit."""
    fit = estimates.fit_exponent([0.0, 1.0, 2.0, 3.0], [3.0 * 2.0 ** (-0.5 * x) for x in range(4)])
    assert fit is not None
    assert fit.slope == pytest.approx(-0.5, abs=1e-12)
    assert fit.constant == pytest.approx(3.0, rel=1e-12)
    assert fit.residual == pytest.approx(0.0, abs=1e-12)
    assert fit.points == 4

    assert estimates.fit_exponent([1.0], [2.0]) is None
    assert estimates.fit_exponent([0.0, 1.0, 2.0], [1.0, 0.0, math.nan]) is None


def test_verdict_allowances():
    """Upper verdicts allow `max(0.2 |predicted|, 0.1)`; short series are inconclusive."""
    tolerances = ExperimentTolerances()
    assert tolerances.allowance(-2.0) == pytest.approx(0.4)
    assert tolerances.allowance(0.1) == pytest.approx(0.1)

    def fit(slope: float, points: int = 4) -> estimates.ExponentFit:
        return estimates.ExponentFit(slope=slope, intercept=0.0, residual=0.0, points=points)

    assert estimates.upper_verdict(fit(-1.65), -2.0, tolerances) is Verdict.PASS
    assert estimates.upper_verdict(fit(-1.5), -2.0, tolerances) is Verdict.FAIL
    assert estimates.upper_verdict(fit(-3.0, points=3), -2.0, tolerances) is Verdict.INCONCLUSIVE
    assert estimates.upper_verdict(None, -2.0, tolerances) is Verdict.INCONCLUSIVE

    assert estimates.window_verdict(fit(0.25), 0.0, 0.3, tolerances) is Verdict.PASS
    assert estimates.window_verdict(fit(-0.35), 0.0, 0.3, tolerances) is Verdict.FAIL


def test_json_round_trip():
    """JSON is deterministic and reads back into an equal report."""
    report = _report()
    text = report.to_json()
    assert text == _report().to_json()

    payload = json.loads(text)
    assert payload["schema"] == estimates.SCHEMA
    assert payload["verdict"] == "PASS"
    assert payload["series"]["short"] == ["inf"]
    assert text.startswith("{\n  ")

    loaded = ExperimentReport.from_json(text)
    assert loaded.verdict is Verdict.PASS
    assert loaded.fit == report.fit
    assert loaded.flags == report.flags
    assert loaded.tolerances == report.tolerances
    assert loaded.series["norm"] == report.series["norm"]
    assert loaded.series["short"] == [math.inf]
    assert loaded.to_json() == text


def test_schema_mismatch():
    """Reports of another schema are refused."""
    payload = json.loads(_report().to_json())
    payload["schema"] = "something-else/1"
    with pytest.raises(ValueError):
        ExperimentReport.from_json(json.dumps(payload))


def test_csv():
    """Sorted columns, one row per sample, short columns padded."""
    lines = _report().to_csv().splitlines()
    assert lines[0] == "ell,norm,short"
    assert len(lines) == 5
    assert lines[1] == "0.0,3.0,inf"
    assert lines[2].endswith(",")


def test_with_config_and_write(tmp_path):
    """Reports embed their config and land in the output directory."""
    report = _report().with_config({"seed": 3})
    assert report.config == {"seed": 3}

    json_path, csv_path = report.write(tmp_path / "nested", stem="decay")
    assert json_path == tmp_path / "nested" / "decay.json"
    assert csv_path.read_text(encoding="utf-8") == report.to_csv()
    assert json.loads(json_path.read_text(encoding="utf-8"))["config"] == {"seed": 3}

    default_json, _ = report.write(tmp_path)
    assert default_json.name == "restriction_decay.json"
