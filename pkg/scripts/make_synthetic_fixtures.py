#!/usr/bin/env python3
"""Regenerate the bundled synthetic truth and reference harmonics files.

The truth is a plausible semidiurnal (Delaware-Bay-like) amplitude set
over the standard 37 constituents. Long-period constituents (SA, SSA,
MM, MF, MSF) are kept small: over a one-year record they are nearly
collinear with the removed mean/trend line, and a truth dominated by
them would measure the detrending step, not the estimators.

reference_nearby perturbs the truth mildly (a nearby gauge in the same
basin); reference_offshore rescales it with larger scatter (a different
hydrodynamic environment). Everything is seeded; rerunning reproduces
the bundled files byte for byte.
"""

from __future__ import annotations

from pathlib import Path

import numpy as np

DATA_DIR = Path(__file__).resolve().parents[1] / "src" / "relsha" / "data"

TRUTH_AMPLITUDES = {
    "M2": 0.64, "S2": 0.115, "N2": 0.13, "K1": 0.095, "M4": 0.032, "O1": 0.08,
    "M6": 0.012, "MK3": 0.008, "S4": 0.004, "MN4": 0.013, "NU2": 0.026,
    "S6": 0.002, "MU2": 0.009, "2N2": 0.017, "OO1": 0.004, "LAM2": 0.005,
    "S1": 0.006, "M1": 0.005, "J1": 0.006, "MM": 0.005, "SSA": 0.005,
    "SA": 0.006, "MSF": 0.004, "MF": 0.007, "RHO1": 0.003, "Q1": 0.015,
    "T2": 0.008, "R2": 0.002, "2Q1": 0.002, "P1": 0.03, "2SM2": 0.004,
    "M3": 0.003, "L2": 0.018, "2MK3": 0.004, "K2": 0.035, "M8": 0.002,
    "MS4": 0.011,
}


def write_harmonics(path: Path, comment: str, names, amplitudes, phases_deg) -> None:
    lines = [f"# {comment}", "constituent_name,amplitude_m,phase_deg"]
    for name, amp, phase in zip(names, amplitudes, phases_deg):
        lines.append(f"{name},{amp:.6g},{phase:.4g}")
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    print(f"wrote {path}")


def main() -> None:
    names = list(TRUTH_AMPLITUDES)
    truth = np.array([TRUTH_AMPLITUDES[n] for n in names])

    rng = np.random.default_rng(20210101)
    truth_phases = np.round(rng.uniform(0.0, 360.0, len(names)), 1)
    write_harmonics(
        DATA_DIR / "synthetic_truth.csv",
        "synthetic truth harmonics for the bundled experiments",
        names, truth, truth_phases,
    )

    rng = np.random.default_rng(42)
    nearby = np.round(truth * (1 + rng.uniform(-0.08, 0.08, len(names))), 6)
    nearby_phases = np.round((truth_phases + rng.uniform(-15, 15, len(names))) % 360.0, 1)
    write_harmonics(
        DATA_DIR / "reference_nearby.csv",
        "synthetic nearby reference gauge (mild perturbation of the truth)",
        names, nearby, nearby_phases,
    )

    rng = np.random.default_rng(43)
    offshore = np.round(truth * (0.75 + rng.uniform(-0.2, 0.2, len(names))), 6)
    offshore_phases = np.round((truth_phases + rng.uniform(-60, 60, len(names))) % 360.0, 1)
    write_harmonics(
        DATA_DIR / "reference_offshore.csv",
        "synthetic offshore reference gauge (different regime, larger scatter)",
        names, offshore, offshore_phases,
    )


if __name__ == "__main__":
    main()
