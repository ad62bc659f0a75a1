import logging
import math
from datetime import datetime, timezone

import numpy as np
import pytest
from hypothesis import given, strategies as st

import relsha
from relsha.ingest import (
    AltimetrySeries,
    load_altimetry,
    load_harmonics,
    load_water_levels,
    parse_timestamp,
    solution_to_text,
    to_series,
    water_levels_to_text,
    write_altimetry,
    write_solution,
    write_water_levels,
)
from relsha.series import HarmonicSolution


def write(tmp_path, text, name="data.csv"):
    path = tmp_path / name
    path.write_text(text, encoding="utf-8")
    return path


class TestWaterLevels:
    def test_two_rows(self, tmp_path):
        path = write(tmp_path, "timestamp,height_m\n"
                               "2021-01-01T00:00:00Z,1.0\n"
                               "2021-01-01T00:06:00Z,1.2\n")
        series = load_water_levels(path)
        assert len(series) == 2
        assert series.times[0] == 0.0
        assert series.times[1] == pytest.approx(0.1)
        assert np.array_equal(series.heights, [1.0, 1.2])
        assert series.epoch == datetime(2021, 1, 1, tzinfo=timezone.utc)

    def test_missing_height_dropped_with_warning(self, tmp_path, caplog):
        path = write(tmp_path, "timestamp,height_m\n"
                               "2021-01-01T00:00:00Z,1.0\n"
                               "2021-01-01T00:06:00Z,\n"
                               "2021-01-01T00:12:00Z,1.4\n")
        with caplog.at_level(logging.WARNING):
            series = load_water_levels(path)
        assert len(series) == 2
        assert any("dropped" in record.message for record in caplog.records)

    def test_duplicate_timestamp_keeps_first(self, tmp_path, caplog):
        path = write(tmp_path, "timestamp,height_m\n"
                               "2021-01-01T00:00:00Z,1.0\n"
                               "2021-01-01T00:06:00Z,1.2\n"
                               "2021-01-01T00:06:00Z,9.9\n")
        with caplog.at_level(logging.WARNING):
            series = load_water_levels(path)
        assert len(series) == 2
        assert series.heights[1] == 1.2
        assert any("duplicate" in record.message for record in caplog.records)

    def test_unsorted_rows_are_sorted(self, tmp_path):
        path = write(tmp_path, "timestamp,height_m\n"
                               "2021-01-01T01:00:00Z,2.0\n"
                               "2021-01-01T00:00:00Z,1.0\n")
        series = load_water_levels(path)
        assert np.array_equal(series.heights, [1.0, 2.0])

    def test_header_required(self, tmp_path):
        path = write(tmp_path, "2021-01-01T00:00:00Z,1.0\n")
        with pytest.raises(ValueError, match="header"):
            load_water_levels(path)

    def test_no_valid_rows(self, tmp_path):
        path = write(tmp_path, "timestamp,height_m\nnot-a-date,xyz\n")
        with pytest.raises(ValueError, match="no valid rows"):
            load_water_levels(path)

    def test_round_trip(self, tmp_path):
        original = write(tmp_path, "timestamp,height_m\n"
                                   "2021-03-01T06:30:00Z,1.234\n"
                                   "2021-03-01T06:42:00Z,-0.567\n"
                                   "2021-03-01T07:00:00Z,0.25\n")
        series = load_water_levels(original)
        out = tmp_path / "out.csv"
        write_water_levels(series, out)
        assert load_water_levels(out).heights.tolist() == series.heights.tolist()
        assert out.read_text() == water_levels_to_text(series)
        again = tmp_path / "again.csv"
        write_water_levels(load_water_levels(out), again)
        assert again.read_text() == out.read_text()

    def test_timestamp_formats(self):
        for text in ("2021-01-01T00:00:00Z", "2021-01-01T00:00:00+00:00", "2021-01-01 00:00:00"):
            stamp = parse_timestamp(text)
            assert stamp.timestamp() == datetime(2021, 1, 1, tzinfo=timezone.utc).timestamp()


ALTIMETRY_TEXT = (
    "cycle,timestamp,ssh_m,flag\n"
    "1,2021-01-01T00:00:00Z,1.0,0\n"
    "1,2021-01-01T00:00:01Z,1.2,0\n"
    "1,2021-01-01T00:00:02Z,5.0,0\n"
    "2,2021-01-10T21:36:00Z,0.9,0\n"
    "2,2021-01-10T21:36:01Z,1.1,0\n"
    "3,2021-01-20T19:12:00Z,2.0,1\n"
    "3,2021-01-20T19:12:01Z,2.1,1\n"
    "4,2021-01-30T16:48:00Z,0.7,0\n"
)


class TestAltimetry:
    def test_load_and_reduce(self, tmp_path):
        path = write(tmp_path, ALTIMETRY_TEXT)
        altimetry = load_altimetry(path, pass_id="288")
        assert altimetry.pass_id == "288"
        assert len(altimetry) == 8
        series = to_series(altimetry)
        # cycle 3 is all-bad: gap preserved, cycles 1, 2, 4 remain
        assert len(series) == 3
        assert series.heights[0] == pytest.approx(1.2)  # median of (1.0, 1.2, 5.0)
        assert series.heights[1] == pytest.approx(1.0)  # even count: mid-mean
        assert series.heights[2] == pytest.approx(0.7)

    def test_reducers(self, tmp_path):
        path = write(tmp_path, ALTIMETRY_TEXT)
        altimetry = load_altimetry(path)
        mean_series = to_series(altimetry, reducer="mean")
        assert mean_series.heights[0] == pytest.approx((1.0 + 1.2 + 5.0) / 3)
        nearest = to_series(altimetry, reducer="nearest")
        assert nearest.heights[0] == pytest.approx(1.2)
        with pytest.raises(ValueError, match="reducer"):
            to_series(altimetry, reducer="mode")

    def test_sample_count_never_grows(self, tmp_path):
        path = write(tmp_path, ALTIMETRY_TEXT)
        altimetry = load_altimetry(path)
        assert len(to_series(altimetry)) <= len(altimetry)

    def test_round_trip(self, tmp_path):
        path = write(tmp_path, ALTIMETRY_TEXT)
        altimetry = load_altimetry(path)
        out = tmp_path / "alt.csv"
        write_altimetry(altimetry, out)
        again = load_altimetry(out)
        assert np.array_equal(again.heights, altimetry.heights)
        assert np.array_equal(again.cycles, altimetry.cycles)
        assert np.array_equal(again.flags, altimetry.flags)

    def test_all_bad_rejected_on_reduce(self, tmp_path):
        path = write(tmp_path, "cycle,timestamp,ssh_m,flag\n1,2021-01-01T00:00:00Z,1.0,2\n")
        with pytest.raises(ValueError, match="no good-flag"):
            to_series(load_altimetry(path))

    def test_non_decreasing_times_enforced(self):
        with pytest.raises(ValueError, match="non-decreasing"):
            AltimetrySeries("p", [1, 2], [1.0, 0.5], [0.0, 0.0], [0, 0],
                            datetime(2021, 1, 1, tzinfo=timezone.utc))

    @given(
        heights=st.lists(st.floats(-2, 2), min_size=1, max_size=12),
        cycle_count=st.integers(1, 4),
    )
    def test_to_series_satisfies_series_invariants(self, heights, cycle_count):
        count = len(heights)
        cycles = np.sort(np.arange(count) % cycle_count)
        times = np.linspace(0.0, 10.0 * count, count)
        altimetry = AltimetrySeries(
            "p", cycles, times, np.array(heights), np.zeros(count, dtype=int),
            datetime(2021, 1, 1, tzinfo=timezone.utc),
        )
        series = to_series(altimetry)
        assert np.all(np.diff(series.times) > 0) or len(series) == 1
        assert len(series) <= len(altimetry)


class TestHarmonics:
    def test_unknown_constituent_rejected(self, tmp_path, catalog):
        path = write(tmp_path, "constituent_name,amplitude_m,phase_deg\nZZ9,0.5,0\n")
        with pytest.raises(ValueError, match="ZZ9"):
            load_harmonics(path, catalog)

    def test_missing_constituents_default_zero_with_warning(self, tmp_path, catalog, caplog):
        path = write(tmp_path, "constituent_name,amplitude_m,phase_deg\nM2,0.64,249.1\n")
        with caplog.at_level(logging.WARNING):
            solution, _ = load_harmonics(path, catalog)
        assert solution.amplitude_of("M2") == 0.64
        assert solution.amplitudes.sum() == pytest.approx(0.64)
        assert sum("missing" in r.message for r in caplog.records) == catalog.n - 1

    def test_phase_column_optional(self, tmp_path, catalog):
        path = write(tmp_path, "constituent_name,amplitude_m\nM2,0.5\n")
        solution, _ = load_harmonics(path, catalog)
        assert solution.phases[catalog.index_of("M2")] == 0.0

    def test_duplicate_rejected(self, tmp_path, catalog):
        path = write(tmp_path, "constituent_name,amplitude_m,phase_deg\nM2,0.5,0\nM2,0.6,0\n")
        with pytest.raises(ValueError, match="duplicate"):
            load_harmonics(path, catalog)

    def test_negative_amplitude_rejected(self, tmp_path, catalog):
        path = write(tmp_path, "constituent_name,amplitude_m,phase_deg\nM2,-0.5,0\n")
        with pytest.raises(ValueError, match="non-negative"):
            load_harmonics(path, catalog)

    def test_metadata_headers(self, tmp_path, catalog):
        path = write(tmp_path, "# mean_m = 1.25\n# trend_m_per_hour = -0.001\n"
                               "# method = ha\n"
                               "constituent_name,amplitude_m,phase_deg\nM2,0.64,180\n")
        solution, metadata = load_harmonics(path, catalog)
        assert solution.mean == 1.25
        assert solution.trend == -0.001
        assert metadata["method"] == "ha"
        assert solution.phases[0] == pytest.approx(math.pi)

    def test_solution_round_trip(self, tmp_path, truth, catalog):
        out = tmp_path / "solution.csv"
        write_solution(truth, out, diagnostics={"method": "synthetic"})
        again, metadata = load_harmonics(out, catalog)
        assert metadata["method"] == "synthetic"
        assert np.allclose(again.amplitudes, truth.amplitudes, rtol=1e-8, atol=1e-12)
        assert np.allclose(again.phases, truth.phases, atol=1e-9)
        assert again.mean == pytest.approx(truth.mean)

    def test_empty_file_rejected(self, tmp_path, catalog):
        path = write(tmp_path, "constituent_name,amplitude_m,phase_deg\n")
        with pytest.raises(ValueError, match="no harmonic rows"):
            load_harmonics(path, catalog)

    def test_text_is_reference_compatible(self, catalog):
        solution = HarmonicSolution(
            0.5, 0.001, np.linspace(0, 1, catalog.n), np.zeros(catalog.n), catalog
        )
        text = solution_to_text(solution)
        assert "constituent_name,amplitude_m,phase_deg" in text
        assert text.startswith("# mean_m = 0.5")
