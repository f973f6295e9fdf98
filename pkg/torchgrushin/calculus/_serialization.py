"""Private module; avoid importing from directly.
"""

import json
import pathlib
import struct
from typing import Union

import fannypack
import numpy as np
import torch

from ._grid import GridFunction, GridSpec

MAGIC = b"TGRSHN01"
"""bytes: Leading marker of the grid function container."""

_LENGTH_FORMAT = "<Q"


def save_grid_function(path: Union[str, pathlib.Path], f: GridFunction) -> None:
    """Write a grid function to the binary container.

    Layout: the 8-byte magic, the header length as a little-endian unsigned 64-bit
    integer, a compact UTF-8 JSON header with sorted keys, then the row-major
    little-endian complex128 samples.

    Args:
        path (str or pathlib.Path): Output file.
        f (GridFunction): Samples in the space domain; batch axes are allowed.
    """
    if f.frequency:
        raise ValueError("Only space-domain grid functions can be stored.")
    samples = np.ascontiguousarray(fannypack.utils.to_numpy(f.values), dtype="<c16")
    header = json.dumps(
        {
            "dtype": "complex128",
            "order": "C",
            "shape": list(samples.shape),
            "spec": f.spec.to_dict(),
        },
        sort_keys=True,
        separators=(",", ":"),
    ).encode("utf-8")

    with open(path, "wb") as file:
        file.write(MAGIC)
        file.write(struct.pack(_LENGTH_FORMAT, len(header)))
        file.write(header)
        file.write(samples.tobytes(order="C"))


def load_grid_function(path: Union[str, pathlib.Path]) -> GridFunction:
    """Read a grid function written by `save_grid_function()`.

    Args:
        path (str or pathlib.Path): Input file.

    Returns:
        GridFunction: Stored samples.
    """
    with open(path, "rb") as file:
        blob = file.read()

    if blob[: len(MAGIC)] != MAGIC:
        raise ValueError(f"{path} is not a grid function container.")
    offset = len(MAGIC)
    (header_length,) = struct.unpack_from(_LENGTH_FORMAT, blob, offset)
    offset += struct.calcsize(_LENGTH_FORMAT)
    try:
        header = json.loads(blob[offset : offset + header_length].decode("utf-8"))
    except (UnicodeDecodeError, json.JSONDecodeError) as e:
        raise ValueError(f"Malformed container header in {path}.") from e
    offset += header_length

    if header.get("dtype") != "complex128" or header.get("order") != "C":
        raise ValueError(f"Unsupported sample layout in {path}.")
    spec = GridSpec.from_dict(header["spec"])
    shape = tuple(int(n) for n in header["shape"])

    count = int(np.prod(shape)) if len(shape) > 0 else 1
    if len(blob) - offset != 16 * count:
        raise ValueError(f"Sample payload of {path} does not match shape {shape}.")
    samples = np.frombuffer(blob, dtype="<c16", count=count, offset=offset).reshape(shape)
    return GridFunction(spec=spec, values=torch.from_numpy(samples.copy()))
