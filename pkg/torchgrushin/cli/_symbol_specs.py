"""Private module; avoid importing from directly.

Symbols are named on the command line as `name:key=value,key=value`, for example
`bochner-riesz:delta=1,t=0.5` or `table:path=symbol.csv`.
"""

import pathlib
from typing import Callable, Dict

import numpy as np
import torch

from ..calculus import (
    Symbol1D,
    bochner_riesz,
    cosine_symbol,
    from_samples,
    gaussian,
    indicator,
    smooth_bump,
)


def _number(fields: Dict[str, str], key: str, default: float) -> float:
    try:
        return float(fields.pop(key, default))
    except ValueError as e:
        raise ValueError(f"Symbol parameter `{key}` must be a number.") from e


def _table(fields: Dict[str, str]) -> Symbol1D:
    """CSV with columns `lambda, real[, imag]`; `#` starts a comment."""
    if "path" not in fields:
        raise ValueError("Symbol tables need a `path` parameter.")
    path = pathlib.Path(fields.pop("path"))
    table = np.loadtxt(path, delimiter=",", ndmin=2, comments="#")
    if table.shape[1] not in (2, 3):
        raise ValueError(f"Symbol table {path} needs two or three columns.")
    values = table[:, 1] + (1j * table[:, 2] if table.shape[1] == 3 else 0.0)
    return from_samples(
        torch.from_numpy(table[:, 0]),
        torch.from_numpy(np.asarray(values, dtype=np.complex128)),
        name=f"table({path.name})",
    )


_PRESETS: Dict[str, Callable[[Dict[str, str]], Symbol1D]] = {
    "bochner-riesz": lambda f: bochner_riesz(_number(f, "delta", 1.0), _number(f, "t", 1.0)),
    "bump": lambda f: smooth_bump(_number(f, "lo", 0.25), _number(f, "hi", 4.0)),
    "indicator": lambda f: indicator(_number(f, "lo", 0.25), _number(f, "hi", 4.0)),
    "cosine": lambda f: cosine_symbol(_number(f, "t", 1.0)),
    "gaussian": lambda f: gaussian(_number(f, "scale", 1.0)),
    "table": _table,
}


def parse_symbol(text: str) -> Symbol1D:
    """Build a symbol from its command-line form.

    Args:
        text (str): `name` or `name:key=value,...`.

    Returns:
        Symbol1D: The named preset.
    """
    name, _, arguments = text.strip().partition(":")
    if name not in _PRESETS:
        raise ValueError(
            f"Unknown symbol `{name}`; expected one of {sorted(_PRESETS.keys())}."
        )
    fields: Dict[str, str] = {}
    for item in filter(None, (a.strip() for a in arguments.split(","))):
        key, sep, value = item.partition("=")
        if sep == "" or key.strip() == "":
            raise ValueError(f"Malformed symbol parameter `{item}`.")
        fields[key.strip()] = value.strip()

    symbol = _PRESETS[name](fields)
    if len(fields) > 0:
        raise ValueError(f"Unknown parameters for `{name}`: {sorted(fields.keys())}")
    return symbol
