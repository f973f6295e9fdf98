"""Private module; avoid importing from directly.
"""

import dataclasses
import os
import pathlib
from dataclasses import dataclass, field
from typing import Any, Dict, Mapping, Optional, Union

import yaml

from ..calculus import DyadicBump, GridSpec, make_bump
from ..estimates import ExperimentTolerances

OUTPUT_DIR_VARIABLE = "TORCHGRUSHIN_OUTPUT_DIR"
"""str: Environment variable overriding `RunConfig.output_dir`."""

THREADS_VARIABLE = "TORCHGRUSHIN_THREADS"
"""str: Environment variable overriding `RunConfig.threads`."""


@dataclass(frozen=True)
class RunConfig:
    """Resolved settings of one command-line invocation.

    Values come from defaults, then a YAML/JSON config file, then command-line flags,
    then environment variables. The resolved config is embedded in every report.

    Keyword Args:
        d1 (int): First layer dimension.
        d2 (int): Second layer dimension.
        x_extent (float): Grid half-width along x.
        y_extent (float): Grid half-width along y.
        n_x (int): Samples per x-axis.
        n_y (int): Samples per y-axis.
        k_max (int): Retained Hermite eigenvalue indices.
        bump (str): Partition of unity identifier, `smooth` or `hat`.
        seed (int): Probe seed.
        trials (int): Probes per norm estimate.
        tolerances (dict): Overrides of `ExperimentTolerances` fields.
        output_dir (str): Directory reports are written to.
        threads (int, optional): Torch intra-op threads.
        verbose (bool): Progress output on stderr.
    """

    d1: int = 2
    d2: int = 1
    x_extent: float = 8.0
    y_extent: float = 16.0
    n_x: int = 32
    n_y: int = 32
    k_max: int = 16
    bump: str = "smooth"
    seed: int = 0
    trials: int = 8
    tolerances: Dict[str, Any] = field(default_factory=dict)
    output_dir: str = "reports"
    threads: Optional[int] = None
    verbose: bool = False

    def __post_init__(self) -> None:
        # Fail before any job starts
        self.grid_spec()
        self.experiment_tolerances()
        make_bump(self.bump)
        if self.trials < 1:
            raise ValueError(f"Need at least one trial, got {self.trials}.")
        if self.threads is not None and self.threads < 1:
            raise ValueError(f"Thread count must be positive, got {self.threads}.")

    def grid_spec(self) -> GridSpec:
        return GridSpec(
            d1=self.d1,
            d2=self.d2,
            x_extent=self.x_extent,
            y_extent=self.y_extent,
            n_x=self.n_x,
            n_y=self.n_y,
            k_max=self.k_max,
        )

    def experiment_tolerances(self) -> ExperimentTolerances:
        known = {f.name for f in dataclasses.fields(ExperimentTolerances)}
        unknown = set(self.tolerances.keys()) - known
        if len(unknown) > 0:
            raise ValueError(f"Unknown tolerance overrides: {sorted(unknown)}")
        return ExperimentTolerances(**self.tolerances)

    def dyadic_bump(self) -> DyadicBump:
        return make_bump(self.bump)

    def to_dict(self) -> Dict[str, Any]:
        return dataclasses.asdict(self)


def _coerce(name: str, value: Any) -> Any:
    """Cast a raw config value to the declared field type."""
    if value is None:
        return None
    if name in ("d1", "d2", "n_x", "n_y", "k_max", "seed", "trials", "threads"):
        return int(value)
    if name in ("x_extent", "y_extent"):
        return float(value)
    if name in ("bump", "output_dir"):
        return str(value)
    if name == "verbose":
        return bool(value)
    if name == "tolerances":
        if not isinstance(value, Mapping):
            raise ValueError("`tolerances` must be a mapping.")
        return dict(value)
    raise ValueError(f"Unknown config key: {name}")


def load_run_config(
    path: Optional[Union[str, pathlib.Path]] = None,
    *,
    overrides: Optional[Mapping[str, Any]] = None,
    environ: Optional[Mapping[str, str]] = None,
) -> RunConfig:
    """Resolve a `RunConfig` from a config file, flag overrides and the environment.

    Args:
        path (str or pathlib.Path, optional): YAML or JSON file holding a mapping of
            `RunConfig` fields.

    Keyword Args:
        overrides (Mapping[str, Any], optional): Flag values; None entries are ignored.
        environ (Mapping[str, str], optional): Environment; `os.environ` when None.

    Returns:
        RunConfig: Validated config.
    """
    fields: Dict[str, Any] = {}
    if path is not None:
        text = pathlib.Path(path).read_text(encoding="utf-8")
        try:
            loaded = yaml.safe_load(text)
        except yaml.YAMLError as e:
            raise ValueError(f"Malformed config file {path}: {e}") from e
        if loaded is None:
            loaded = {}
        if not isinstance(loaded, Mapping):
            raise ValueError(f"Config file {path} must hold a mapping.")
        for name, value in loaded.items():
            fields[str(name)] = _coerce(str(name), value)

    for name, value in (overrides or {}).items():
        if value is not None:
            fields[name] = _coerce(name, value)

    environ = os.environ if environ is None else environ
    if environ.get(OUTPUT_DIR_VARIABLE):
        fields["output_dir"] = environ[OUTPUT_DIR_VARIABLE]
    if environ.get(THREADS_VARIABLE):
        try:
            fields["threads"] = int(environ[THREADS_VARIABLE])
        except ValueError as e:
            raise ValueError(f"{THREADS_VARIABLE} must be an integer.") from e

    return RunConfig(**fields)
