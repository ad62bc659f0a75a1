"""Tidal constituents and the ordered catalog shared by every solver.

The catalog fixes the constituent ordering k = 0..n-1; all state vectors,
design-matrix columns, and reference vectors follow that order. Angular
speeds are stored in radians per hour; catalog files carry degrees per
hour (the convention used by tide-gauge harmonic tables) and are converted
at load time.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property
from importlib import resources
from pathlib import Path
from typing import Iterable

import numpy as np

TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class Constituent:
    """A single tidal constituent with its nodal corrections.

    speed is the angular frequency in radians/hour; nodal_factor and
    nodal_angle (radians) default to the no-correction values 1 and 0.
    """

    name: str
    speed: float
    nodal_factor: float = 1.0
    nodal_angle: float = 0.0
    # Degree-valued originals from a catalog file, kept so serialization
    # reproduces the file text exactly (rad->deg is not 1-ulp safe).
    speed_deg: float | None = field(default=None, compare=False, repr=False)
    nodal_angle_deg: float | None = field(default=None, compare=False, repr=False)

    def __post_init__(self) -> None:
        if not self.name:
            raise ValueError("constituent name must be non-empty")
        if not (self.speed > 0):
            raise ValueError(f"constituent {self.name!r}: speed must be positive, got {self.speed}")
        if not (self.nodal_factor > 0):
            raise ValueError(
                f"constituent {self.name!r}: nodal factor must be positive, got {self.nodal_factor}"
            )
        object.__setattr__(self, "nodal_angle", self.nodal_angle % TWO_PI)

    @property
    def period_hours(self) -> float:
        return TWO_PI / self.speed


@dataclass(frozen=True)
class ConstituentCatalog:
    """Ordered, immutable list of constituents; order is load order."""

    constituents: tuple[Constituent, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "constituents", tuple(self.constituents))
        if not self.constituents:
            raise ValueError("catalog must contain at least one constituent")
        seen: set[str] = set()
        for c in self.constituents:
            if c.name in seen:
                raise ValueError(f"duplicate constituent name {c.name!r}")
            seen.add(c.name)

    @property
    def n(self) -> int:
        return len(self.constituents)

    @cached_property
    def names(self) -> tuple[str, ...]:
        return tuple(c.name for c in self.constituents)

    @cached_property
    def speeds(self) -> np.ndarray:
        a = np.array([c.speed for c in self.constituents])
        a.setflags(write=False)
        return a

    @cached_property
    def nodal_factors(self) -> np.ndarray:
        a = np.array([c.nodal_factor for c in self.constituents])
        a.setflags(write=False)
        return a

    @cached_property
    def nodal_angles(self) -> np.ndarray:
        a = np.array([c.nodal_angle for c in self.constituents])
        a.setflags(write=False)
        return a

    @cached_property
    def _index(self) -> dict[str, int]:
        return {c.name: k for k, c in enumerate(self.constituents)}

    def index_of(self, name: str) -> int:
        """Position of the named constituent; raises KeyError if absent."""
        try:
            return self._index[name]
        except KeyError:
            raise KeyError(f"unknown constituent {name!r}") from None

    def __contains__(self, name: str) -> bool:
        return name in self._index

    def __len__(self) -> int:
        return self.n

    def __iter__(self):
        return iter(self.constituents)


def _parse_row(raw: str, row_number: int) -> Constituent:
    parts = [p.strip() for p in raw.split(",")]
    if len(parts) < 2 or len(parts) > 4 or not parts[0]:
        raise ValueError(
            f"catalog row {row_number}: expected 'name, speed_deg_per_hour[, f, u_deg]', got {raw!r}"
        )
    name = parts[0]
    try:
        speed_deg = float(parts[1])
        f = float(parts[2]) if len(parts) > 2 and parts[2] else 1.0
        u_deg = float(parts[3]) if len(parts) > 3 and parts[3] else 0.0
    except ValueError:
        raise ValueError(f"catalog row {row_number}: non-numeric field in {raw!r}") from None
    if not (speed_deg > 0):
        raise ValueError(f"catalog row {row_number}: speed must be positive, got {speed_deg}")
    return Constituent(
        name=name,
        speed=math.radians(speed_deg),
        nodal_factor=f,
        nodal_angle=math.radians(u_deg),
        speed_deg=speed_deg,
        nodal_angle_deg=u_deg,
    )


def load_catalog(source: str | Path) -> ConstituentCatalog:
    """Load a constituent catalog from a delimited text file.

    Columns: ``name, speed_deg_per_hour[, f, u_deg]``. Lines starting
    with ``#`` and blank lines are ignored. Speeds are converted to
    radians/hour; missing f, u default to 1 and 0. Rows are kept in file
    order, which becomes the canonical constituent order.
    """
    path = Path(source)
    rows: list[Constituent] = []
    with path.open("r", encoding="utf-8") as fh:
        for row_number, line in enumerate(fh, start=1):
            stripped = line.strip()
            if not stripped or stripped.startswith("#"):
                continue
            rows.append(_parse_row(stripped, row_number))
    if not rows:
        raise ValueError(f"catalog file {path} contains no constituent rows")
    return ConstituentCatalog(tuple(rows))


def write_catalog(catalog: ConstituentCatalog, path: str | Path) -> None:
    """Serialize a catalog back to the file format accepted by load_catalog."""
    lines = ["# name, speed_deg_per_hour[, f, u_deg]"]
    for c in catalog.constituents:
        speed_deg = c.speed_deg if c.speed_deg is not None else math.degrees(c.speed)
        u_deg = c.nodal_angle_deg if c.nodal_angle_deg is not None else math.degrees(c.nodal_angle)
        if c.nodal_factor == 1.0 and u_deg == 0.0:
            lines.append(f"{c.name}, {speed_deg!r}")
        else:
            lines.append(f"{c.name}, {speed_deg!r}, {c.nodal_factor!r}, {u_deg!r}")
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def default_catalog_path() -> Path:
    """Path of the bundled 37-constituent NOAA catalog file."""
    return Path(str(resources.files("relsha").joinpath("data/noaa37.csv")))


def load_default_catalog() -> ConstituentCatalog:
    return load_catalog(default_catalog_path())


def make_catalog(entries: Iterable[tuple[str, float]]) -> ConstituentCatalog:
    """Catalog from (name, speed_rad_per_hour) pairs; test/scripting helper."""
    return ConstituentCatalog(tuple(Constituent(name, speed) for name, speed in entries))
