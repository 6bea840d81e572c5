"""End-to-end learning pipeline and the verified-vs-unverified metrics harness.

``learn`` runs the full loop on a demonstration trace: expand to frames,
detect keyframes, extract and rank candidates per keyframe pair, then either
verify candidates in simulation (the full pipeline) or take the top-ranked
feasible candidate unchecked (the ablation). ``run_metrics`` sweeps fixtures,
noise points, and paired seeds into a machine-readable comparison table.
"""

from __future__ import annotations

import json
import time
from dataclasses import dataclass, field, replace

from .assembly import DEFAULT_BOUNDS, Assembly, Bounds, BrickPlacement
from .catalog import DEFAULT_CATALOG, BrickCatalog
from .extraction import (
    DEFAULT_CHANGE_THRESHOLD,
    ExtractionError,
    estimate_delta,
    rank_candidates,
)
from .keyframes import classify_frame, sliding_filter
from .plan import ASSEMBLE, ConstructionPlan, StructureCost, Task, structure_cost
from .sensor import DemonstrationTrace, NoiseConfig, expand_demo, with_seed
from .verification import (
    DEFAULT_DEPTH_TOLERANCE,
    DEFAULT_ROI_MARGIN,
    ShadowState,
    VerificationError,
    VerificationOutcome,
    verify_candidates,
)

#: Pipeline occlusion threshold. The hand blob of a small brick near a board
#: corner covers under 1% of a 48x48 board, so the keyframe classifier's
#: generic 0.05 default would wave occluded frames through; the pipeline
#: needs every occlusion segment detected to keep one keyframe per settled
#: segment.
DEFAULT_PIPELINE_OCCLUSION_THRESHOLD = 0.005

#: Calibrated standard-noise operating point: the smallest depth-jitter grid
#: point at which the unverified ablation's mean fixture success lands in
#: [40%, 90%] (see calibration.py; frozen from the calibration sweep, where
#: sigma_d=0.10 scored 0.95 and sigma_d=0.12 scored 0.77).
STANDARD_NOISE = NoiseConfig(sigma_d=0.12, sigma_b=0.05, p_dark=0.05, p_flip=0.01, seed=0)

#: Similarity threshold used at the standard-noise point. Early acceptance
#: must clear near-miss candidates (a long brick shifted by one stud
#: disagrees on only a sliver of its region of interest, scoring ~0.97), so
#: the threshold sits high and noisy steps mostly resolve through the
#: argmax fallback, which compares candidates under shared noise.
STANDARD_DELTA_S = 0.985


@dataclass(frozen=True)
class PipelineConfig:
    bounds: Bounds = DEFAULT_BOUNDS
    catalog: BrickCatalog = field(default=DEFAULT_CATALOG, compare=False)
    noise: NoiseConfig = NoiseConfig()
    theta_h: float = DEFAULT_PIPELINE_OCCLUSION_THRESHOLD
    tau_c: float = DEFAULT_CHANGE_THRESHOLD
    k_max: int = 24
    delta_s: float = 0.9
    tau_d: float = DEFAULT_DEPTH_TOLERANCE
    margin: int = DEFAULT_ROI_MARGIN
    verification_enabled: bool = True

    def __post_init__(self) -> None:
        if not 0.0 < self.theta_h < 1.0:
            raise ValueError("theta_h must be in (0, 1)")
        if not 0.0 < self.tau_c < 1.0:
            raise ValueError("tau_c must be in (0, 1)")
        if self.k_max < 1:
            raise ValueError("k_max must be >= 1")
        if not 0.0 < self.delta_s < 1.0:
            raise ValueError("delta_s must be in (0, 1)")
        if self.tau_d < 0:
            raise ValueError("tau_d must be >= 0")
        if self.margin < 0:
            raise ValueError("margin must be >= 0")


def standard_config(verification_enabled: bool = True) -> PipelineConfig:
    """The frozen standard-noise operating point for robustness comparisons."""
    return PipelineConfig(
        noise=STANDARD_NOISE,
        delta_s=STANDARD_DELTA_S,
        verification_enabled=verification_enabled,
    )


@dataclass
class LearnReport:
    """Outcome of learning one demonstration."""

    plan: ConstructionPlan
    per_step: list[VerificationOutcome | None]
    success: bool
    elapsed: float
    cost: StructureCost
    learned: Assembly
    step_errors: list[str]
    keyframe_count: int

    @property
    def mean_trials_per_step(self) -> float:
        counts = [len(o.trials) for o in self.per_step if o is not None]
        return sum(counts) / len(counts) if counts else 0.0


def _first_feasible(state: ShadowState, candidates) -> BrickPlacement | None:
    for c in candidates:
        if state.assembly.is_feasible(c.placement):
            return c.placement
    return None


def learn(trace: DemonstrationTrace, cfg: PipelineConfig | None = None) -> LearnReport:
    """Learn a construction plan from a demonstration trace.

    With verification disabled the pipeline reduces to its ablation: the
    top-ranked geometrically feasible candidate is accepted unchecked.
    Success means the learned structure matches the demonstrated one exactly
    (structure cost zero). Per-step failures are recorded, not raised.
    """
    if cfg is None:
        cfg = PipelineConfig()
    t0 = time.perf_counter()

    frames = expand_demo(trace)
    labels = [classify_frame(f, cfg.theta_h) for f in frames]
    keyframes = sliding_filter(frames, labels)

    errors: list[str] = []
    expected = len(trace.events) + 1
    if len(keyframes) != expected:
        errors.append(f"detected {len(keyframes)} keyframes, expected {expected} settled segments")

    state = ShadowState(Assembly.empty(trace.bounds, trace.catalog))
    tasks: list[Task] = []
    outcomes: list[VerificationOutcome | None] = []

    for i, (prev, nxt) in enumerate(zip(keyframes, keyframes[1:]), start=1):
        try:
            delta = estimate_delta(prev, nxt, cfg.tau_c, trace.catalog)
            candidates = rank_candidates(delta, cfg.k_max, trace.bounds, trace.catalog)
        except ExtractionError as e:
            errors.append(f"step {i}: {e}")
            continue
        if cfg.verification_enabled:
            try:
                outcome = verify_candidates(state, candidates, nxt, cfg.delta_s, cfg.tau_d, cfg.margin)
            except VerificationError as e:
                errors.append(f"step {i}: {e}")
                continue
            outcomes.append(outcome)
            accepted = outcome.accepted
        else:
            accepted = _first_feasible(state, candidates)
            if accepted is None:
                errors.append(f"step {i}: no feasible candidate")
                continue
            state.advance(accepted)
            outcomes.append(None)
        tasks.append(Task(len(tasks) + 1, ASSEMBLE, accepted))

    plan = ConstructionPlan(tuple(tasks), trace.bounds)
    cost = structure_cost(trace.target_assembly(), state.assembly)
    return LearnReport(
        plan=plan,
        per_step=outcomes,
        success=cost.total == 0,
        elapsed=time.perf_counter() - t0,
        cost=cost,
        learned=state.assembly,
        step_errors=errors,
        keyframe_count=len(keyframes),
    )


# -- metrics harness ----------------------------------------------------------

MODE_VERIFIED = "verified"
MODE_UNVERIFIED = "unverified"


@dataclass(frozen=True)
class MetricsRow:
    fixture: str
    noise: NoiseConfig
    mode: str
    success_rate: float
    mean_cost: float
    mean_trials_per_step: float
    trials: int


@dataclass
class MetricsReport:
    rows: list[MetricsRow]
    seeds: list[int]

    def success_rate(self, fixture: str, mode: str, noise: NoiseConfig | None = None) -> float:
        for r in self.rows:
            if r.fixture == fixture and r.mode == mode and (noise is None or r.noise == noise):
                return r.success_rate
        raise KeyError((fixture, mode))

    def to_json(self) -> str:
        doc = {
            "seeds": self.seeds,
            "rows": [
                {
                    "fixture": r.fixture,
                    "noise": {
                        "sigma_d": r.noise.sigma_d,
                        "sigma_b": r.noise.sigma_b,
                        "p_dark": r.noise.p_dark,
                        "p_flip": r.noise.p_flip,
                    },
                    "mode": r.mode,
                    "success_rate": round(r.success_rate, 6),
                    "mean_cost": round(r.mean_cost, 6),
                    "mean_trials_per_step": round(r.mean_trials_per_step, 6),
                    "trials": r.trials,
                }
                for r in self.rows
            ],
        }
        return json.dumps(doc, indent=2) + "\n"


def run_metrics(
    fixtures: dict[str, tuple[BrickPlacement, ...]],
    noise_grid: list[NoiseConfig],
    seeds: int | list[int],
    cfg: PipelineConfig | None = None,
    frames_per_state: int = 3,
    occlusion_frames_per_event: int = 2,
) -> MetricsReport:
    """Paired success-rate sweep over fixtures, noise points, and seeds.

    For one (fixture, noise, seed) triple both modes consume the identical
    frame stream: the trace fixes the noise draw before the mode branches, so
    the verified/unverified comparison is paired. Deterministic given seeds.
    """
    if not fixtures:
        raise ValueError("need at least one fixture")
    if not noise_grid:
        raise ValueError("need at least one noise point")
    if cfg is None:
        cfg = standard_config()
    seed_list = list(range(seeds)) if isinstance(seeds, int) else list(seeds)

    rows: list[MetricsRow] = []
    for name, events in fixtures.items():
        for noise in noise_grid:
            traces = [
                DemonstrationTrace(
                    events=events,
                    sensor=with_seed(noise, s),
                    frames_per_state=frames_per_state,
                    occlusion_frames_per_event=occlusion_frames_per_event,
                    bounds=cfg.bounds,
                    catalog=cfg.catalog,
                )
                for s in seed_list
            ]
            for mode in (MODE_UNVERIFIED, MODE_VERIFIED):
                mode_cfg = replace(cfg, verification_enabled=mode == MODE_VERIFIED)
                reports = [learn(t, mode_cfg) for t in traces]
                rows.append(
                    MetricsRow(
                        fixture=name,
                        noise=noise,
                        mode=mode,
                        success_rate=sum(r.success for r in reports) / len(reports),
                        mean_cost=sum(r.cost.total for r in reports) / len(reports),
                        mean_trials_per_step=sum(r.mean_trials_per_step for r in reports) / len(reports),
                        trials=len(reports),
                    )
                )
    return MetricsReport(rows=rows, seeds=seed_list)


# -- config files --------------------------------------------------------------


def config_from_json(data: str | bytes) -> PipelineConfig:
    """Build a PipelineConfig from a JSON document of overrides."""
    doc = json.loads(data) if data else {}
    kwargs = {}
    if "bounds" in doc:
        kwargs["bounds"] = tuple(doc["bounds"])
    if "noise" in doc:
        kwargs["noise"] = NoiseConfig(**doc["noise"])
    for key in ("theta_h", "tau_c", "k_max", "delta_s", "tau_d", "margin", "verification_enabled"):
        if key in doc:
            kwargs[key] = doc[key]
    return PipelineConfig(**kwargs)
