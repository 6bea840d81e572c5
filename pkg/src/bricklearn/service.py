"""HTTP API for live demonstration sessions.

A session mirrors one demonstrator at a board: each posted placement is
validated against the session's ground-truth structure, rendered through the
virtual sensor, and learned incrementally, returning the step's verification
outcome so the demonstrator sees whether the system captured the move.
Sessions are isolated; operations within one session are serialized.
"""

from __future__ import annotations

import threading
import uuid
from dataclasses import dataclass, field, replace
from pathlib import Path

import numpy as np
from fastapi import FastAPI, HTTPException, Response
from fastapi.staticfiles import StaticFiles
from pydantic import BaseModel

from .assembly import Assembly, BrickPlacement
from .catalog import PALETTE
from .extraction import ExtractionError, estimate_delta, rank_candidates
from .keyframes import classify_frame, sliding_filter
from .pipeline import PipelineConfig
from .plan import (
    ASSEMBLE,
    ConstructionPlan,
    Task,
    parse_placement,
    reverse_plan,
    serialize,
)
from .sensor import (
    NoiseConfig,
    ObservationFrame,
    corrupt,
    occlusion_blob,
    placement_to_json,
    render_clean,
)
from .verification import ShadowState, VerificationError, VerificationOutcome, verify_candidates


class SessionCreate(BaseModel):
    noise: dict | None = None
    verification: bool = True
    seed: int = 0
    frames_per_state: int = 3
    occlusion_frames_per_event: int = 2


class PlaceRequest(BaseModel):
    brick: str
    omega: int
    position: list[int]
    color: str


@dataclass
class StepRecord:
    demonstrated: BrickPlacement
    accepted: BrickPlacement | None
    outcome: VerificationOutcome | None
    error: str | None = None


@dataclass
class Session:
    id: str
    cfg: PipelineConfig
    frames_per_state: int
    occlusion_frames_per_event: int
    demonstrated: Assembly
    shadow: ShadowState
    last_keyframe: ObservationFrame
    rng: np.random.Generator
    biases: list[float] = field(default_factory=list)
    frames: list[ObservationFrame] = field(default_factory=list)
    steps: list[StepRecord] = field(default_factory=list)
    lock: threading.Lock = field(default_factory=threading.Lock)

    def plan(self) -> ConstructionPlan:
        accepted = [r.accepted for r in self.steps if r.accepted is not None]
        tasks = tuple(Task(i, ASSEMBLE, b) for i, b in enumerate(accepted, start=1))
        return ConstructionPlan(tasks, self.cfg.bounds)


def step_to_json(step_index: int, record: StepRecord) -> dict:
    out: dict = {
        "step": step_index,
        "demonstrated": placement_to_json(record.demonstrated),
        "accepted": placement_to_json(record.accepted) if record.accepted else None,
        "divergent": record.accepted != record.demonstrated,
    }
    if record.error:
        out["error"] = record.error
    o = record.outcome
    if o is None:
        out.update({"s": None, "via": "unverified" if record.accepted else "failed", "trials": [], "skips": []})
    else:
        out.update(
            {
                "s": o.s,
                "via": o.via,
                "trials": [{"placement": placement_to_json(t.placement), "s": t.score} for t in o.trials],
                "skips": [{"placement": placement_to_json(k.placement), "reason": k.reason} for k in o.skips],
            }
        )
    return out


def create_app(cfg: PipelineConfig | None = None, frontend_dir: str | None = None) -> FastAPI:
    base_cfg = cfg if cfg is not None else PipelineConfig()
    app = FastAPI(title="bricklearn")
    sessions: dict[str, Session] = {}
    registry_lock = threading.Lock()

    def get_session(session_id: str) -> Session:
        with registry_lock:
            session = sessions.get(session_id)
        if session is None:
            raise HTTPException(status_code=404, detail=f"unknown session {session_id!r}")
        return session

    @app.post("/sessions")
    def create_session(body: SessionCreate | None = None):
        body = body or SessionCreate()
        try:
            noise_kwargs = dict(body.noise or {})
            noise_kwargs.setdefault("seed", body.seed)
            noise = NoiseConfig(**noise_kwargs)
        except (TypeError, ValueError) as e:
            raise HTTPException(status_code=422, detail={"kind": "config", "message": str(e)})
        session_cfg = replace(base_cfg, noise=noise, verification_enabled=body.verification)
        empty = Assembly.empty(session_cfg.bounds, session_cfg.catalog)
        rng = np.random.default_rng(noise.seed)
        first = corrupt(render_clean(empty, timestamp=0), noise, None, rng)
        session = Session(
            id=uuid.uuid4().hex[:12],
            cfg=session_cfg,
            frames_per_state=max(1, body.frames_per_state),
            occlusion_frames_per_event=max(0, body.occlusion_frames_per_event),
            demonstrated=empty,
            shadow=ShadowState(empty),
            last_keyframe=first,
            rng=rng,
        )
        session.frames.append(first)
        with registry_lock:
            sessions[session.id] = session
        return {"id": session.id}

    @app.post("/sessions/{session_id}/place")
    def place(session_id: str, body: PlaceRequest):
        session = get_session(session_id)
        try:
            placement = parse_placement(body.model_dump(), "placement", session.cfg.catalog)
        except ValueError as e:
            raise HTTPException(status_code=422, detail={"kind": "format", "message": str(e)})

        with session.lock:
            verdict = session.demonstrated.is_feasible(placement)
            if not verdict:
                raise HTTPException(
                    status_code=422,
                    detail={
                        "kind": verdict.kind,
                        "cells": [list(c) for c in verdict.cells],
                        "message": verdict.describe(),
                    },
                )
            session.demonstrated = session.demonstrated.apply(placement)
            noise = session.cfg.noise
            session.biases.append(float(session.rng.normal(0.0, noise.sigma_b)))
            biases = np.array(session.biases)

            post = render_clean(session.demonstrated)
            blob = occlusion_blob(placement, session.cfg.bounds, session.cfg.catalog)
            t = session.frames[-1].timestamp + 1
            new_frames: list[ObservationFrame] = []
            for _ in range(session.occlusion_frames_per_event):
                f = corrupt(post, noise, biases, session.rng)
                new_frames.append(ObservationFrame(f.color, f.depth, blob.copy(), f.top_index.copy(), t))
                t += 1
            for _ in range(session.frames_per_state):
                f = corrupt(post, noise, biases, session.rng)
                new_frames.append(ObservationFrame(f.color, f.depth, f.occlusion, f.top_index.copy(), t))
                t += 1
            session.frames.extend(new_frames)

            labels = [classify_frame(f, session.cfg.theta_h) for f in new_frames]
            keyframe = sliding_filter(new_frames, labels)[-1]
            prev_keyframe = session.last_keyframe
            session.last_keyframe = keyframe

            record = StepRecord(demonstrated=placement, accepted=None, outcome=None)
            session.steps.append(record)
            step_index = len(session.steps)
            try:
                delta = estimate_delta(prev_keyframe, keyframe, session.cfg.tau_c, session.cfg.catalog)
                candidates = rank_candidates(delta, session.cfg.k_max, session.cfg.bounds, session.cfg.catalog)
                if session.cfg.verification_enabled:
                    outcome = verify_candidates(
                        session.shadow,
                        candidates,
                        keyframe,
                        session.cfg.delta_s,
                        session.cfg.tau_d,
                        session.cfg.margin,
                    )
                    record.outcome = outcome
                    record.accepted = outcome.accepted
                else:
                    accepted = next(
                        (c.placement for c in candidates if session.shadow.assembly.is_feasible(c.placement)),
                        None,
                    )
                    if accepted is None:
                        raise VerificationError("no feasible candidate")
                    session.shadow.advance(accepted)
                    record.accepted = accepted
            except (ExtractionError, VerificationError) as e:
                # The demonstrated move stands; the learner missed this one.
                record.error = str(e)
            return step_to_json(step_index, record)

    @app.get("/sessions/{session_id}/plan")
    def get_plan(session_id: str, reversed: bool = False):
        session = get_session(session_id)
        with session.lock:
            plan = session.plan()
            if reversed:
                plan = reverse_plan(plan)
            return Response(content=serialize(plan, session.cfg.catalog), media_type="application/json")

    @app.get("/sessions/{session_id}/trace")
    def get_trace(session_id: str):
        session = get_session(session_id)
        with session.lock:
            return {"steps": [step_to_json(i, r) for i, r in enumerate(session.steps, start=1)]}

    @app.get("/sessions/{session_id}/state")
    def get_state(session_id: str):
        session = get_session(session_id)
        with session.lock:
            asm = session.demonstrated
            return {
                "bounds": list(asm.bounds),
                "palette": list(PALETTE),
                "placements": [placement_to_json(b, asm.catalog) for b in asm.placements],
                "top_depth": asm.top_heights().tolist(),
                "top_color": [
                    [asm.placements[i].color if i >= 0 else None for i in row]
                    for row in asm.top_placement_indices().tolist()
                ],
            }

    @app.delete("/sessions/{session_id}")
    def delete_session(session_id: str):
        with registry_lock:
            if session_id not in sessions:
                raise HTTPException(status_code=404, detail=f"unknown session {session_id!r}")
            del sessions[session_id]
        return {"deleted": True}

    ui_dir = Path(frontend_dir) if frontend_dir else Path(__file__).resolve().parents[2] / "frontend" / "dist"
    if ui_dir.is_dir():
        app.mount("/ui", StaticFiles(directory=str(ui_dir), html=True), name="ui")

    return app
