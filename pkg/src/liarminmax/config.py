"""Calibrated constants, frozen from desk-scale measurement runs.

The ``calibrate`` CLI subcommand re-measures and writes a plain key=value
file; the defaults below were produced by ``scripts/calibrate_constants.py``
and act as regression thresholds, not as claims about the algorithms.
"""

from __future__ import annotations

from dataclasses import dataclass, fields
from pathlib import Path

__all__ = ["CalibratedConstants", "DEFAULT", "load_constants", "dump_constants"]


@dataclass(frozen=True)
class CalibratedConstants:
    # Per-attempt sort budget: linear * s + log * s * ceil(log2 s).
    sort_budget_linear: int = 32
    sort_budget_log: int = 4
    # Regression ceiling for balanced-quicksort thickness, as a multiple of s.
    # Observed max ratio 3.6 over the calibration sweeps; 5 leaves headroom.
    thickness_ct: int = 5


DEFAULT = CalibratedConstants()


def load_constants(path: str | Path) -> CalibratedConstants:
    """Read a key=value config file; unknown keys are rejected."""
    known = {f.name for f in fields(CalibratedConstants)}
    values: dict[str, int] = {}
    for raw_line in Path(path).read_text().splitlines():
        line = raw_line.strip()
        if not line or line.startswith("#"):
            continue
        key, _, value = line.partition("=")
        key = key.strip()
        if key not in known:
            raise ValueError(f"unknown calibration key {key!r} in {path}")
        values[key] = int(value.strip())
    return CalibratedConstants(**values)


def dump_constants(constants: CalibratedConstants, path: str | Path) -> None:
    lines = [f"{f.name}={getattr(constants, f.name)}" for f in fields(constants)]
    Path(path).write_text("\n".join(lines) + "\n")
