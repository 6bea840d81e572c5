"""Calibration sweep that produced the frozen standard-noise preset.

Scans depth-jitter grid points (other corruption modes held at small fixed
values) and reports, per point, the mean unverified success rate across all
fixtures. The standard preset is the smallest grid point whose unverified
mean lands in [0.40, 0.90]; the chosen values are frozen into
pipeline.STANDARD_NOISE so results stay reproducible.

Run directly to re-derive: ``python -m bricklearn.calibration``.
"""

from __future__ import annotations

from dataclasses import replace

from .fixtures import fixture_events, fixture_names
from .pipeline import (
    MODE_UNVERIFIED,
    MODE_VERIFIED,
    STANDARD_NOISE,
    run_metrics,
    standard_config,
)
from .sensor import NoiseConfig

GRID = (0.10, 0.12, 0.14, 0.16, 0.18, 0.20)
TARGET_LOW, TARGET_HIGH = 0.40, 0.90


def calibrate(seeds: int = 32, grid: tuple[float, ...] = GRID) -> list[dict]:
    fixtures = {name: fixture_events(name) for name in fixture_names()}
    noise_grid = [replace(STANDARD_NOISE, sigma_d=s) for s in grid]
    report = run_metrics(fixtures, noise_grid, seeds, standard_config())

    out = []
    for noise in noise_grid:
        un = [r.success_rate for r in report.rows if r.noise == noise and r.mode == MODE_UNVERIFIED]
        ve = [r.success_rate for r in report.rows if r.noise == noise and r.mode == MODE_VERIFIED]
        out.append(
            {
                "sigma_d": noise.sigma_d,
                "unverified_mean": sum(un) / len(un),
                "verified_mean": sum(ve) / len(ve),
                "in_band": TARGET_LOW <= sum(un) / len(un) <= TARGET_HIGH,
            }
        )
    return out


def main() -> None:
    rows = calibrate()
    chosen: NoiseConfig | None = None
    for row in rows:
        print(
            f"sigma_d={row['sigma_d']:.2f}  unverified={row['unverified_mean']:.3f}  "
            f"verified={row['verified_mean']:.3f}  in_band={row['in_band']}"
        )
        if chosen is None and row["in_band"]:
            chosen = replace(STANDARD_NOISE, sigma_d=row["sigma_d"])
    if chosen is None:
        print("no grid point lands in the target band; widen the grid")
    else:
        print(f"standard preset candidate: {chosen}")


if __name__ == "__main__":
    main()
