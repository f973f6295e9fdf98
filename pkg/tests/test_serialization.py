import json
import struct

import pytest
import torch
from _grushin_fixtures import noise_1_1, spec_1_1

from torchgrushin import calculus
from torchgrushin.calculus import GridFunction


def test_container_round_trip(tmp_path, noise_1_1: GridFunction):
    """Stored grid functions come back bit for bit."""
    path = tmp_path / "noise.tgrshn"
    calculus.save_grid_function(path, noise_1_1)
    loaded = calculus.load_grid_function(path)
    assert loaded.spec == noise_1_1.spec
    assert not loaded.frequency
    assert torch.equal(loaded.values, noise_1_1.values)


def test_container_layout(tmp_path, noise_1_1: GridFunction):
    """Magic, little-endian header length, sorted JSON header, then samples."""
    path = tmp_path / "noise.tgrshn"
    calculus.save_grid_function(path, noise_1_1)
    blob = path.read_bytes()

    assert blob[:8] == b"TGRSHN01"
    (length,) = struct.unpack("<Q", blob[8:16])
    header = json.loads(blob[16 : 16 + length].decode("utf-8"))
    assert header["shape"] == [3, 32, 32]
    assert header["dtype"] == "complex128"
    assert list(header.keys()) == sorted(header.keys())
    assert len(blob) == 16 + length + 16 * 3 * 32 * 32


def test_container_errors(tmp_path, noise_1_1: GridFunction):
    """Bad magic, truncated payloads and spectra are rejected."""
    path = tmp_path / "noise.tgrshn"
    calculus.save_grid_function(path, noise_1_1)
    blob = path.read_bytes()

    truncated = tmp_path / "truncated.tgrshn"
    truncated.write_bytes(blob[:-16])
    with pytest.raises(ValueError):
        calculus.load_grid_function(truncated)

    wrong_magic = tmp_path / "magic.tgrshn"
    wrong_magic.write_bytes(b"NOTAGRID" + blob[8:])
    with pytest.raises(ValueError):
        calculus.load_grid_function(wrong_magic)

    with pytest.raises(ValueError):
        calculus.save_grid_function(tmp_path / "spectrum.tgrshn", calculus.fourier_y(noise_1_1))
