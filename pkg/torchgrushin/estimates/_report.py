"""Private module; avoid importing from directly.
"""

import csv
import enum
import io
import json
import math
import pathlib
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Sequence, Tuple, Union

import numpy as np

SCHEMA = "torchgrushin.report/1"
"""str: Version tag embedded in every serialized report."""


class Verdict(enum.Enum):
    """Outcome of a fitted-exponent comparison."""

    PASS = "PASS"
    FAIL = "FAIL"
    INCONCLUSIVE = "INCONCLUSIVE"


@dataclass(frozen=True)
class ExponentFit:
    """Least-squares line `log2(y) = slope * x + intercept`."""

    slope: float
    intercept: float
    residual: float
    """float: Root-mean-square deviation of the fitted `log2(y)`."""
    points: int

    @property
    def constant(self) -> float:
        """float: Fitted constant `2^intercept`."""
        return 2.0 ** self.intercept


def fit_exponent(xs: Sequence[float], ys: Sequence[float]) -> Optional[ExponentFit]:
    """Fit `ys ~ C 2^{slope * xs}` by least squares on `log2(ys)`.

    Args:
        xs (Sequence[float]): Abscissae, already in exponent coordinates (band index
            `ell`, or `log2 |a|`, ...).
        ys (Sequence[float]): Positive measurements.

    Returns:
        Optional[ExponentFit]: Fit, or None with fewer than two usable points.
    """
    x = np.asarray(xs, dtype=np.float64)
    y = np.asarray(ys, dtype=np.float64)
    assert x.shape == y.shape
    usable = np.isfinite(y) & (y > 0.0) & np.isfinite(x)
    if np.count_nonzero(usable) < 2:
        return None
    x = x[usable]
    log_y = np.log2(y[usable])
    slope, intercept = np.polyfit(x, log_y, 1)
    residual = float(np.sqrt(np.mean((slope * x + intercept - log_y) ** 2)))
    return ExponentFit(
        slope=float(slope),
        intercept=float(intercept),
        residual=residual,
        points=int(x.shape[0]),
    )


@dataclass(frozen=True)
class ExperimentTolerances:
    """Declared tolerances shared by every experiment.

    Keyword Args:
        exponent_tolerance (float): Relative allowance on a predicted exponent.
        exponent_floor (float): Smallest absolute allowance.
        anchor_tolerance (float): Allowed `|slope|` of the `p = 2` control run.
        two_sided_tolerance (float): Allowance of two-sided exponent checks.
        hermite_tolerance (float): Allowance of the `[k]`-exponent of `sup_x H_k`.
        kappa (float): Comparability allowance of the comparison metric.
        leakage_budget (float): Largest relative leakage in propagation checks.
        tail_tolerance (float): Largest relative truncation tail.
        uniformity_budget (float): Largest relative ratio spread across scales.
        min_points (int): Fewer usable points make a fit inconclusive.
    """

    exponent_tolerance: float = 0.2
    exponent_floor: float = 0.1
    anchor_tolerance: float = 0.1
    two_sided_tolerance: float = 0.3
    hermite_tolerance: float = 0.2
    kappa: float = 3.0
    leakage_budget: float = 1e-3
    tail_tolerance: float = 1e-2
    uniformity_budget: float = 0.05
    min_points: int = 4

    def allowance(self, predicted: float) -> float:
        """Allowance `max(exponent_tolerance * |predicted|, exponent_floor)`."""
        return max(self.exponent_tolerance * abs(predicted), self.exponent_floor)

    def to_dict(self) -> Dict[str, Any]:
        return {
            name: getattr(self, name)
            for name in sorted(self.__dataclass_fields__.keys())  # type: ignore
        }


def upper_verdict(
    fit: Optional[ExponentFit],
    predicted: float,
    tolerances: ExperimentTolerances,
) -> Verdict:
    """PASS when the fitted slope does not exceed `predicted + allowance`."""
    if fit is None or fit.points < tolerances.min_points:
        return Verdict.INCONCLUSIVE
    if fit.slope <= predicted + tolerances.allowance(predicted):
        return Verdict.PASS
    return Verdict.FAIL


def window_verdict(
    fit: Optional[ExponentFit],
    predicted: float,
    window: float,
    tolerances: ExperimentTolerances,
) -> Verdict:
    """PASS when the fitted slope lies within `predicted +- window`."""
    if fit is None or fit.points < tolerances.min_points:
        return Verdict.INCONCLUSIVE
    if abs(fit.slope - predicted) <= window:
        return Verdict.PASS
    return Verdict.FAIL


def _json_safe(obj: Any) -> Any:
    if isinstance(obj, dict):
        return {str(k): _json_safe(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_json_safe(v) for v in obj]
    if isinstance(obj, enum.Enum):
        return obj.value
    if isinstance(obj, (np.floating, np.integer)):
        obj = obj.item()
    if isinstance(obj, float) and not math.isfinite(obj):
        return str(obj)
    if isinstance(obj, pathlib.Path):
        return str(obj)
    return obj


@dataclass(frozen=True)
class ExperimentReport:
    """Outcome of an experiment: raw series, fit and verdict.

    The verdict can always be recomputed from `series`, `predicted` and `tolerances`.
    """

    experiment: str
    inputs: Dict[str, Any]
    series: Dict[str, List[float]]
    verdict: Verdict
    fit: Optional[ExponentFit] = None
    predicted: Optional[float] = None
    constants: Dict[str, float] = field(default_factory=dict)
    flags: Tuple[str, ...] = ()
    tolerances: ExperimentTolerances = ExperimentTolerances()
    config: Dict[str, Any] = field(default_factory=dict)

    def with_config(self, config: Dict[str, Any]) -> "ExperimentReport":
        """Copy embedding a resolved run configuration."""
        return ExperimentReport(
            experiment=self.experiment,
            inputs=self.inputs,
            series=self.series,
            verdict=self.verdict,
            fit=self.fit,
            predicted=self.predicted,
            constants=self.constants,
            flags=self.flags,
            tolerances=self.tolerances,
            config=dict(config),
        )

    def to_dict(self) -> Dict[str, Any]:
        return _json_safe(
            {
                "schema": SCHEMA,
                "experiment": self.experiment,
                "inputs": self.inputs,
                "series": self.series,
                "verdict": self.verdict,
                "fit": None
                if self.fit is None
                else {
                    "slope": self.fit.slope,
                    "intercept": self.fit.intercept,
                    "residual": self.fit.residual,
                    "points": self.fit.points,
                },
                "predicted": self.predicted,
                "constants": self.constants,
                "flags": list(self.flags),
                "tolerances": self.tolerances.to_dict(),
                "config": self.config,
            }
        )

    def to_json(self) -> str:
        """Deterministic JSON: sorted keys, two-space indentation, no timestamps."""
        return json.dumps(self.to_dict(), sort_keys=True, indent=2) + "\n"

    def to_csv(self) -> str:
        """Series as CSV columns, one row per sample."""
        names = sorted(self.series.keys())
        length = max((len(self.series[name]) for name in names), default=0)
        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator="\n")
        writer.writerow(names)
        for i in range(length):
            writer.writerow(
                [
                    repr(float(self.series[name][i])) if i < len(self.series[name]) else ""
                    for name in names
                ]
            )
        return buffer.getvalue()

    @staticmethod
    def from_json(text: str) -> "ExperimentReport":
        payload = json.loads(text)
        if payload.get("schema") != SCHEMA:
            raise ValueError(f"Unsupported report schema: {payload.get('schema')}")
        fit = payload.get("fit")
        tolerances = ExperimentTolerances(**payload.get("tolerances", {}))
        return ExperimentReport(
            experiment=payload["experiment"],
            inputs=payload["inputs"],
            series={k: [float(v) for v in vs] for k, vs in payload["series"].items()},
            verdict=Verdict(payload["verdict"]),
            fit=None if fit is None else ExponentFit(**fit),
            predicted=payload.get("predicted"),
            constants=payload.get("constants", {}),
            flags=tuple(payload.get("flags", [])),
            tolerances=tolerances,
            config=payload.get("config", {}),
        )

    def write(
        self, directory: Union[str, pathlib.Path], *, stem: Optional[str] = None
    ) -> Tuple[pathlib.Path, pathlib.Path]:
        """Write `<stem>.json` and `<stem>.csv` into `directory`."""
        directory = pathlib.Path(directory)
        directory.mkdir(parents=True, exist_ok=True)
        stem = self.experiment if stem is None else stem
        json_path = directory / f"{stem}.json"
        csv_path = directory / f"{stem}.csv"
        json_path.write_text(self.to_json(), encoding="utf-8")
        csv_path.write_text(self.to_csv(), encoding="utf-8")
        return json_path, csv_path
