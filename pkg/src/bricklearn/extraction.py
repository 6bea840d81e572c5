"""Task extraction: estimate the brick operation between two keyframes and
emit a confidence-ranked candidate list.

The estimator replaces a learned network with deterministic differencing:
cells whose depth rose past a threshold form the change region, whose
centroid, bounding box, and modal color parameterize the estimate. Candidate
confidence combines a Gaussian position density with soft type/orientation
scores, f = f_p * f_id * f_omega.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import ndimage

from .assembly import Bounds, BrickPlacement, xy_extent
from .catalog import DEFAULT_CATALOG, BrickCatalog, color_name
from .sensor import ObservationFrame

#: Lower bound on the position density's standard deviation. The spread is
#: tied to how far the estimated mean sits from the lattice; a mean that is
#: exactly integral would otherwise collapse the density to a singularity.
SIGMA_FLOOR = 0.1

#: How many of the best-scoring brick types enter candidate enumeration.
TOP_TYPE_COUNT = 3

DEFAULT_CHANGE_THRESHOLD = 0.5


class ExtractionError(Exception):
    """No usable brick operation could be read from the frame pair."""


@dataclass(frozen=True)
class DeltaEstimate:
    """Probabilistic summary of one brick operation.

    mu is the real-valued anchor estimate (x, y, z); id_scores and
    omega_scores are normalized soft classifications; color_estimate carries
    the modal color over the change region with its vote fraction.
    """

    mu: tuple[float, float, float]
    id_scores: dict[int, float]
    omega_scores: dict[int, float]
    color_estimate: tuple[str, float]
    changed_cells: frozenset[tuple[int, int]]


@dataclass(frozen=True)
class CandidateTask:
    """A hypothesized placement with its confidence components."""

    placement: BrickPlacement
    f_p: float
    f_id: float
    f_omega: float

    @property
    def f(self) -> float:
        return self.f_p * self.f_id * self.f_omega


def round_half_up(v: np.ndarray | float) -> np.ndarray | float:
    """Round to the nearest integer, ties toward +inf (keeps r(.) deterministic)."""
    return np.floor(np.asarray(v, dtype=np.float64) + 0.5)


def normalize_scores(raw: dict[int, float]) -> dict[int, float]:
    total = sum(raw.values())
    if total <= 0:
        raise ExtractionError("cannot normalize all-zero scores")
    return {k: v / total for k, v in raw.items()}


def position_likelihood(p: tuple[int, int, int], mu: tuple[float, float, float]) -> float:
    """Gaussian density of an integer cell under the position estimate.

    The covariance is isotropic with standard deviation equal to the
    distance from mu to its nearest lattice point, floored at SIGMA_FLOOR.
    The value is a raw density over a discrete domain, so it can exceed 1.
    """
    mu_a = np.asarray(mu, dtype=np.float64)
    frac = mu_a - round_half_up(mu_a)
    sigma = max(SIGMA_FLOOR, float(np.linalg.norm(frac)))
    delta = np.asarray(p, dtype=np.float64) - mu_a
    quad = float(delta @ delta) / (sigma * sigma)
    norm = (2.0 * math.pi) ** 1.5 * sigma**3
    return math.exp(-0.5 * quad) / norm


def _dimension_mismatch(region_dims: tuple[int, int], catalog: BrickCatalog, brick_id: int, omega: int) -> float:
    ex, ey = xy_extent(catalog, brick_id, omega)
    return abs(region_dims[0] - ex) + abs(region_dims[1] - ey)


def estimate_delta(
    prev: ObservationFrame,
    nxt: ObservationFrame,
    tau_c: float = DEFAULT_CHANGE_THRESHOLD,
    catalog: BrickCatalog = DEFAULT_CATALOG,
) -> DeltaEstimate:
    """Estimate the operation between two consecutive keyframes.

    The change region is the largest 4-connected component of cells whose
    depth rose by more than tau_c; isolated threshold crossings from sensor
    jitter would otherwise stretch the bounding box arbitrarily. The anchor
    estimate shifts the region centroid back by half the bounding-box extent
    so that on clean input it lands exactly on the placed brick's anchor.
    """
    if prev.shape != nxt.shape:
        raise ValueError("keyframes must share dimensions")
    if not 0.0 < tau_c < 1.0:
        raise ValueError(f"tau_c must be in (0, 1), got {tau_c}")

    diff = nxt.depth - prev.depth
    rose = diff > tau_c
    if not rose.any():
        raise ExtractionError("no operation detected: empty change region")

    # Keep the connected component with the most threshold-excess mass. A
    # placed brick rises a full height everywhere on its footprint, while
    # jitter clusters barely clear tau_c, so evidence mass separates them
    # far better than cell count.
    labels, count = ndimage.label(rose)
    mass = ndimage.sum_labels(diff - tau_c, labels, index=range(1, count + 1))
    region = labels == (int(np.argmax(mass)) + 1)

    xs, ys = np.nonzero(region)
    cx = float(xs.mean()) + 1.0
    cy = float(ys.mean()) + 1.0
    bbox_dx = int(xs.max() - xs.min()) + 1
    bbox_dy = int(ys.max() - ys.min()) + 1
    mu_x = cx - (bbox_dx - 1) / 2.0
    mu_y = cy - (bbox_dy - 1) / 2.0
    mu_z = float(np.median(nxt.depth[region]))
    X, Y = nxt.shape
    # Keep the estimate inside the workspace extended by one cell; the
    # height axis has no upper clamp here since frames carry no Z bound
    # (ranking rejects out-of-range heights).
    mu = (
        float(np.clip(mu_x, 0.0, X + 1.0)),
        float(np.clip(mu_y, 0.0, Y + 1.0)),
        max(0.0, mu_z),
    )

    raw_joint = {
        (e.id, w): math.exp(-_dimension_mismatch((bbox_dx, bbox_dy), catalog, e.id, w))
        for e in catalog
        for w in (0, 1)
    }
    id_scores = normalize_scores(
        {e.id: raw_joint[(e.id, 0)] + raw_joint[(e.id, 1)] for e in catalog}
    )
    omega_scores = normalize_scores(
        {w: sum(raw_joint[(e.id, w)] for e in catalog) for w in (0, 1)}
    )

    votes = nxt.color[region]
    votes = votes[votes > 0]
    if votes.size == 0:
        raise ExtractionError("no operation detected: change region has no color evidence")
    counts = np.bincount(votes)
    modal = int(np.argmax(counts))
    color_estimate = (color_name(modal), float(counts[modal] / votes.size))

    changed = frozenset((int(x) + 1, int(y) + 1) for x, y in zip(xs, ys))
    return DeltaEstimate(mu, id_scores, omega_scores, color_estimate, changed)


def rank_candidates(
    delta: DeltaEstimate,
    k_max: int,
    bounds: Bounds,
    catalog: BrickCatalog = DEFAULT_CATALOG,
) -> list[CandidateTask]:
    """Enumerate and score placements near the estimate.

    Positions range over the rounded mean and its 26-neighborhood, types
    over the TOP_TYPE_COUNT best id scores, orientations over both. Ranking
    is by f = f_p * f_id * f_omega descending, ties broken by canonical
    placement order, truncated to k_max.
    """
    if k_max < 1:
        raise ValueError("k_max must be >= 1")
    X, Y, Z = bounds
    center = round_half_up(np.asarray(delta.mu))
    top_ids = sorted(delta.id_scores, key=lambda i: (-delta.id_scores[i], i))[:TOP_TYPE_COUNT]
    color = delta.color_estimate[0]

    candidates: list[CandidateTask] = []
    for dz in (-1, 0, 1):
        for dy in (-1, 0, 1):
            for dx in (-1, 0, 1):
                p = (int(center[0]) + dx, int(center[1]) + dy, int(center[2]) + dz)
                if p[2] < 1 or p[2] > Z:
                    continue
                f_p = position_likelihood(p, delta.mu)
                for brick_id in top_ids:
                    ex, ey = xy_extent(catalog, brick_id, 0)
                    # A square brick occupies the same cells either way; only
                    # the canonical orientation is a distinct candidate.
                    omegas = (0,) if ex == ey else (0, 1)
                    for omega in omegas:
                        w, h = (ex, ey) if omega == 0 else (ey, ex)
                        if not (1 <= p[0] and p[0] + w - 1 <= X and 1 <= p[1] and p[1] + h - 1 <= Y):
                            continue
                        candidates.append(
                            CandidateTask(
                                placement=BrickPlacement(p, brick_id, omega, color),
                                f_p=f_p,
                                f_id=delta.id_scores[brick_id],
                                f_omega=delta.omega_scores[omega],
                            )
                        )

    if not candidates:
        raise ExtractionError("no geometrically valid candidate near the estimate")
    candidates.sort(key=lambda c: (-c.f, c.placement.sort_key()))
    return candidates[:k_max]
