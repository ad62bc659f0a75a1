"""File ingestion and export.

All formats are comma-separated UTF-8 text with a header row; lines
starting with ``#`` are comments. Timestamps are ISO-8601 (UTC assumed
when no offset is given) and are converted to hours since the first
valid sample. Bad rows are dropped with a logged warning, never
interpolated.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from datetime import datetime, timedelta, timezone
from pathlib import Path

import numpy as np

from .constituents import TWO_PI, ConstituentCatalog
from .series import HarmonicSolution, WaterLevelSeries

log = logging.getLogger(__name__)

FLAG_GOOD = 0


def parse_timestamp(text: str) -> datetime:
    text = text.strip()
    if text.endswith("Z"):
        text = text[:-1] + "+00:00"
    stamp = datetime.fromisoformat(text)
    if stamp.tzinfo is None:
        stamp = stamp.replace(tzinfo=timezone.utc)
    return stamp


def format_timestamp(epoch: datetime, hours: float) -> str:
    stamp = epoch + timedelta(hours=float(hours))
    stamp = (stamp + timedelta(microseconds=500_000)).replace(microsecond=0)
    return stamp.astimezone(timezone.utc).strftime("%Y-%m-%dT%H:%M:%SZ")


def format_number(value: float) -> str:
    return format(float(value), ".9g")


def _data_lines(path: Path) -> list[tuple[int, str]]:
    lines = []
    with path.open("r", encoding="utf-8") as fh:
        for number, raw in enumerate(fh, start=1):
            stripped = raw.strip()
            if not stripped or stripped.startswith("#"):
                continue
            lines.append((number, stripped))
    return lines


def load_water_levels(path: str | Path) -> WaterLevelSeries:
    """Load a ``timestamp,height_m`` file into a WaterLevelSeries.

    Rows with missing or non-finite heights are dropped with a warning;
    duplicate timestamps keep the first occurrence. Times are hours since
    the first valid sample, which becomes the series epoch.
    """
    path = Path(path)
    lines = _data_lines(path)
    if not lines or "timestamp" not in lines[0][1].lower():
        raise ValueError(f"{path}: missing 'timestamp,height_m' header")
    stamps: list[datetime] = []
    heights: list[float] = []
    for number, line in lines[1:]:
        parts = [p.strip() for p in line.split(",")]
        try:
            stamp = parse_timestamp(parts[0])
            value = float(parts[1]) if len(parts) > 1 and parts[1] else math.nan
        except (ValueError, IndexError):
            log.warning("%s:%d: unparseable row %r dropped", path, number, line)
            continue
        if not math.isfinite(value):
            log.warning("%s:%d: missing/non-finite height dropped", path, number)
            continue
        stamps.append(stamp)
        heights.append(value)
    if not stamps:
        raise ValueError(f"{path}: no valid rows")

    order = np.argsort(np.array([s.timestamp() for s in stamps]), kind="stable")
    epoch = stamps[order[0]]
    times, kept_heights = [], []
    last = None
    for i in order:
        hours = (stamps[i] - epoch).total_seconds() / 3600.0
        if last is not None and hours == last:
            log.warning("%s: duplicate timestamp %s dropped", path, stamps[i].isoformat())
            continue
        times.append(hours)
        kept_heights.append(heights[i])
        last = hours
    return WaterLevelSeries(np.array(times), np.array(kept_heights), epoch)


def water_levels_to_text(series: WaterLevelSeries) -> str:
    lines = ["timestamp,height_m"]
    for t, h in zip(series.times, series.heights):
        lines.append(f"{format_timestamp(series.epoch, t)},{format_number(h)}")
    return "\n".join(lines) + "\n"


def write_water_levels(series: WaterLevelSeries, path: str | Path) -> None:
    Path(path).write_text(water_levels_to_text(series), encoding="utf-8")


@dataclass(frozen=True, eq=False)
class AltimetrySeries:
    """Along-track altimetry samples grouped by repeat cycle.

    Gaps (missing cycles) are permitted and preserved; flagged-bad samples
    stay in the container but are excluded from analysis views.
    """

    pass_id: str
    cycles: np.ndarray
    times: np.ndarray
    heights: np.ndarray
    flags: np.ndarray
    epoch: datetime

    def __post_init__(self) -> None:
        cycles = np.array(self.cycles, dtype=int)
        times = np.array(self.times, dtype=float)
        heights = np.array(self.heights, dtype=float)
        flags = np.array(self.flags, dtype=int)
        if not (cycles.size == times.size == heights.size == flags.size):
            raise ValueError("cycle/time/height/flag arrays must have equal length")
        if times.size == 0:
            raise ValueError("altimetry series must contain at least one sample")
        if np.any(np.diff(times) < 0):
            raise ValueError("altimetry times must be non-decreasing")
        for name, arr in (("cycles", cycles), ("times", times), ("heights", heights), ("flags", flags)):
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)

    def __len__(self) -> int:
        return int(self.times.size)


def load_altimetry(path: str | Path, pass_id: str | None = None) -> AltimetrySeries:
    """Load a ``cycle,timestamp,ssh_m,flag`` file (flag 0 = good)."""
    path = Path(path)
    lines = _data_lines(path)
    if not lines or "cycle" not in lines[0][1].lower():
        raise ValueError(f"{path}: missing 'cycle,timestamp,ssh_m,flag' header")
    rows: list[tuple[int, datetime, float, int]] = []
    for number, line in lines[1:]:
        parts = [p.strip() for p in line.split(",")]
        try:
            cycle = int(parts[0])
            stamp = parse_timestamp(parts[1])
            value = float(parts[2]) if parts[2] else math.nan
            flag = int(parts[3]) if len(parts) > 3 and parts[3] else FLAG_GOOD
        except (ValueError, IndexError):
            log.warning("%s:%d: unparseable row %r dropped", path, number, line)
            continue
        if not math.isfinite(value):
            log.warning("%s:%d: missing/non-finite height dropped", path, number)
            continue
        rows.append((cycle, stamp, value, flag))
    if not rows:
        raise ValueError(f"{path}: no valid rows")
    rows.sort(key=lambda r: r[1])
    epoch = rows[0][1]
    return AltimetrySeries(
        pass_id=pass_id if pass_id is not None else path.stem,
        cycles=np.array([r[0] for r in rows]),
        times=np.array([(r[1] - epoch).total_seconds() / 3600.0 for r in rows]),
        heights=np.array([r[2] for r in rows]),
        flags=np.array([r[3] for r in rows]),
        epoch=epoch,
    )


def to_series(altimetry: AltimetrySeries, reducer: str = "median") -> WaterLevelSeries:
    """Reduce each cycle's good-flag samples to one representative height.

    reducer: "median" (default), "mean", or "nearest" (the sample closest
    to the cycle's mean time). Cycles with no good samples are absent from
    the output, preserving the gap.
    """
    if reducer not in ("median", "mean", "nearest"):
        raise ValueError(f"unknown reducer {reducer!r}")
    good = altimetry.flags == FLAG_GOOD
    times, heights = [], []
    for cycle in np.unique(altimetry.cycles[good]):
        mask = good & (altimetry.cycles == cycle)
        t = altimetry.times[mask]
        h = altimetry.heights[mask]
        if reducer == "median":
            value = float(np.median(h))
        elif reducer == "mean":
            value = float(np.mean(h))
        else:
            value = float(h[np.argmin(np.abs(t - t.mean()))])
        times.append(float(np.median(t)))
        heights.append(value)
    if not times:
        raise ValueError("no good-flag samples to reduce")
    order = np.argsort(times, kind="stable")
    kept_t, kept_h = [], []
    for i in order:
        if kept_t and times[i] == kept_t[-1]:
            log.warning("pass %s: coincident cycle time %.6f dropped", altimetry.pass_id, times[i])
            continue
        kept_t.append(times[i])
        kept_h.append(heights[i])
    return WaterLevelSeries(np.array(kept_t), np.array(kept_h), altimetry.epoch)


def write_altimetry(altimetry: AltimetrySeries, path: str | Path) -> None:
    lines = ["cycle,timestamp,ssh_m,flag"]
    for cycle, t, h, flag in zip(altimetry.cycles, altimetry.times, altimetry.heights, altimetry.flags):
        lines.append(
            f"{cycle},{format_timestamp(altimetry.epoch, t)},{format_number(h)},{flag}"
        )
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def load_harmonics(
    path: str | Path, catalog: ConstituentCatalog
) -> tuple[HarmonicSolution, dict[str, str]]:
    """Load a ``constituent_name,amplitude_m[,phase_deg]`` harmonics file.

    Rows are aligned to the catalog order. Unknown constituent names are
    rejected; constituents missing from the file default to amplitude 0,
    phase 0 with a warning. ``# key = value`` comment headers (mean_m,
    trend_m_per_hour, diagnostics from the CLI) are returned as metadata.
    """
    path = Path(path)
    metadata: dict[str, str] = {}
    amplitudes = np.zeros(catalog.n)
    phases = np.zeros(catalog.n)
    seen = np.zeros(catalog.n, dtype=bool)
    data_seen = False
    with path.open("r", encoding="utf-8") as fh:
        for number, raw in enumerate(fh, start=1):
            stripped = raw.strip()
            if not stripped:
                continue
            if stripped.startswith("#"):
                body = stripped.lstrip("#").strip()
                if "=" in body:
                    key, _, value = body.partition("=")
                    metadata[key.strip()] = value.strip()
                continue
            if "constituent_name" in stripped.lower():
                continue
            parts = [p.strip() for p in stripped.split(",")]
            if len(parts) < 2 or not parts[0]:
                raise ValueError(f"{path}:{number}: expected 'name, amplitude_m[, phase_deg]'")
            name = parts[0]
            try:
                k = catalog.index_of(name)
            except KeyError:
                raise ValueError(
                    f"{path}:{number}: constituent {name!r} is not in the catalog"
                ) from None
            try:
                amplitude = float(parts[1])
                phase_deg = float(parts[2]) if len(parts) > 2 and parts[2] else 0.0
            except ValueError:
                raise ValueError(f"{path}:{number}: non-numeric field") from None
            if amplitude < 0:
                raise ValueError(f"{path}:{number}: amplitude must be non-negative")
            if seen[k]:
                raise ValueError(f"{path}:{number}: duplicate constituent {name!r}")
            amplitudes[k] = amplitude
            phases[k] = math.radians(phase_deg) % TWO_PI
            seen[k] = True
            data_seen = True
    if not data_seen:
        raise ValueError(f"{path}: no harmonic rows")
    for k, present in enumerate(seen):
        if not present:
            log.warning(
                "%s: constituent %s missing, defaulting to amplitude 0", path, catalog.names[k]
            )
    solution = HarmonicSolution(
        mean=float(metadata.get("mean_m", 0.0)),
        trend=float(metadata.get("trend_m_per_hour", 0.0)),
        amplitudes=amplitudes,
        phases=phases,
        catalog=catalog,
        time_reference=float(metadata.get("time_reference_hours", 0.0)),
    )
    return solution, metadata


def solution_to_text(solution: HarmonicSolution, diagnostics: dict[str, object] | None = None) -> str:
    """Render a solution in the harmonics file format, with mean/trend and
    any diagnostics as ``# key = value`` headers."""
    lines = [
        f"# mean_m = {format_number(solution.mean)}",
        f"# trend_m_per_hour = {format_number(solution.trend)}",
        f"# time_reference_hours = {format_number(solution.time_reference)}",
    ]
    for key, value in (diagnostics or {}).items():
        if isinstance(value, float):
            value = format_number(value)
        lines.append(f"# {key} = {value}")
    lines.append("constituent_name,amplitude_m,phase_deg")
    for name, amplitude, phase in zip(solution.catalog.names, solution.amplitudes, solution.phases):
        lines.append(f"{name},{format_number(amplitude)},{format_number(math.degrees(phase))}")
    return "\n".join(lines) + "\n"


def write_solution(
    solution: HarmonicSolution,
    path: str | Path,
    diagnostics: dict[str, object] | None = None,
) -> None:
    Path(path).write_text(solution_to_text(solution, diagnostics), encoding="utf-8")
