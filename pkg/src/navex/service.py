"""Local HTTP service exposing live episode state and the question interface.

Single session per process, local-only.  Asking a question never advances the
simulation; answers are computed from stored decision records.
"""
from __future__ import annotations

import random
import uuid

from fastapi import FastAPI
from fastapi.responses import JSONResponse
from pydantic import BaseModel

from .advisors import DecisionState
from .config import SimConfig
from .controller import DecisionRecord, decide, record_to_dict
from .explain import (explain_confidence, explain_hypothetical, explain_why,
                      explain_why_not)
from .phrases import DEFAULT_TABLE
from .spatial import SpatialModel, learn_from_path, learn_region
from .world import Action, Pose, World, apply_action, ray_cast


class Session:
    """Owns the episode loop; requests are serialized by the ASGI worker."""

    def __init__(self, world: World, config: SimConfig, seed: int,
                 start: Pose | None = None):
        self.id = uuid.uuid4().hex[:12]
        self.world = world
        self.config = config
        self.rng = random.Random(seed)
        self.model = SpatialModel()
        minx, miny, maxx, maxy = world.bounds
        self.pose = start or Pose((minx + maxx) / 2, (miny + maxy) / 2, 0.0)
        self.target: tuple[float, float] | None = None
        self.records: list[DecisionRecord] = []
        self.episode_path: list[DecisionState] = []
        self.transcript: list[dict] = []
        self.mode = "paused"
        self.phase = "turn"
        self.prev_orientation: float | None = None
        self.arrived = False
        self.cycle = 0

    def _finish_episode(self) -> None:
        if len(self.episode_path) >= 2:
            learn_from_path(self.model, self.episode_path, self.world,
                            self.config.door_arc_length,
                            self.config.conveyor_cell_size,
                            self.config.max_range)
        self.episode_path = []

    def set_target(self, x: float, y: float) -> None:
        self._finish_episode()
        self.target = (x, y)
        self.arrived = False
        self.phase = "turn"

    def step(self) -> DecisionRecord:
        if self.target is None:
            raise SessionError("no target set")
        if self.arrived:
            raise SessionError("target already reached; set a new target")
        cfg = self.config
        scan = ray_cast(self.world, self.pose, cfg.beam_count, cfg.fov,
                        cfg.max_range)
        state = DecisionState(pose=self.pose, scan=scan, target=self.target,
                              previous_orientation=self.prev_orientation)
        learn_region(self.model, state)
        rec = decide(state, self.model, self.phase, self.rng, cfg,
                     cycle_index=self.cycle)
        outcome = apply_action(self.world, self.pose, rec.chosen,
                               cfg.safety_margin)
        rec.truncated = outcome.truncated
        if rec.chosen.kind == "turn":
            self.prev_orientation = self.pose.theta
        self.pose = outcome.pose
        self.records.append(rec)
        self.episode_path.append(state)
        self.cycle += 1
        dx = self.pose.x - self.target[0]
        dy = self.pose.y - self.target[1]
        if (dx * dx + dy * dy) ** 0.5 <= cfg.arrival_radius:
            self.arrived = True
            self._finish_episode()
        else:
            self.phase = "move" if self.phase == "turn" else "turn"
        return rec

    def ask(self, kind: str, alternative: dict | None = None,
            pose: list | None = None) -> dict:
        if kind == "hypothetical":
            if pose is None:
                raise SessionError("hypothetical needs a pose")
            p = Pose(*pose)
            if not self.world.contains(p.x, p.y):
                raise SessionError("hypothetical pose outside world")
            target = self.target or (p.x, p.y)
            scan = ray_cast(self.world, p, self.config.beam_count,
                            self.config.fov, self.config.max_range)
            state = DecisionState(pose=p, scan=scan, target=target)
            exp = explain_hypothetical(state, self.model, self.config,
                                       DEFAULT_TABLE)
        else:
            if not self.records:
                raise SessionError("no decision yet")
            rec = self.records[-1]
            if kind == "why":
                exp = explain_why(rec, DEFAULT_TABLE)
            elif kind == "confidence":
                exp = explain_confidence(rec, DEFAULT_TABLE)
            elif kind == "why_not":
                if alternative is None:
                    raise SessionError("why_not needs an alternative action")
                alt = _find_action(rec, alternative)
                exp = explain_why_not(rec, alt, DEFAULT_TABLE)
            else:
                raise SessionError(f"unknown question kind {kind!r}")
        entry = {"cycle": max(self.cycle - 1, 0), "question": kind,
                 **exp.to_dict()}
        self.transcript.append({"cycle": entry["cycle"], "question": kind,
                                "text": exp.text})
        return entry

    def state_dict(self) -> dict:
        last = self.records[-1] if self.records else None
        return {
            "session": self.id,
            "world": self.world.name,
            "mode": self.mode,
            "pose": [self.pose.x, self.pose.y, self.pose.theta],
            "target": list(self.target) if self.target else None,
            "cycle": self.cycle,
            "arrived": self.arrived,
            "phase": self.phase,
            "last_record": record_to_dict(last) if last else None,
            "transcript": self.transcript,
            "regions": len(self.model.regions),
            "trails": len(self.model.trails),
        }

    def model_dict(self) -> dict:
        out = {"regions": [], "trails": [], "conveyors": [], "skeleton": []}
        for i, r in enumerate(self.model.regions):
            out["regions"].append({
                "id": i, "center": list(r.center), "radius": r.radius,
                "exits": [list(e) for e in r.exits],
                "doors": [{"start": d.start, "extent": d.extent}
                          for d in r.doors],
            })
        for t in self.model.trails:
            out["trails"].append([list(p) for p in t.points()])
        grid = self.model.conveyors
        if grid is not None:
            nx, ny = grid.counts.shape
            for ix in range(nx):
                for iy in range(ny):
                    c = int(grid.counts[ix, iy])
                    if c:
                        cx, cy = grid.cell_center(ix, iy)
                        out["conveyors"].append(
                            {"cell": [ix, iy], "center": [cx, cy],
                             "size": grid.cell_size, "count": c})
        for e in sorted(tuple(sorted(e)) for e in self.model.skeleton.edges):
            out["skeleton"].append(list(e))
        return out


class SessionError(ValueError):
    pass


def _find_action(rec: DecisionRecord, spec: dict) -> Action:
    kind = spec.get("kind")
    index = spec.get("index")
    for a in rec.candidates:
        if a.kind == kind and a.intensity_index == index:
            return a
    raise SessionError(f"unknown alternative {spec!r}")


class TargetRequest(BaseModel):
    x: float
    y: float


class StepRequest(BaseModel):
    steps: int = 1


class AutoRequest(BaseModel):
    enabled: bool


class AskRequest(BaseModel):
    kind: str
    alternative: dict | None = None
    pose: list[float] | None = None


def create_app(world: World, config: SimConfig, seed: int,
               start: Pose | None = None) -> FastAPI:
    app = FastAPI(title="navex")
    session = Session(world, config, seed, start)
    app.state.session = session

    @app.exception_handler(SessionError)
    async def _session_error(request, exc):
        return JSONResponse(status_code=400, content={"error": str(exc)})

    @app.get("/state")
    def get_state():
        return session.state_dict()

    @app.get("/world")
    def get_world():
        return {"name": world.name, "bounds": list(world.bounds),
                "segments": world.segments.tolist()}

    @app.get("/model")
    def get_model():
        return session.model_dict()

    @app.get("/records")
    def get_records():
        return {"records": [record_to_dict(r) for r in session.records]}

    @app.post("/target")
    def post_target(req: TargetRequest):
        if not world.contains(req.x, req.y):
            raise SessionError("target outside world bounds")
        session.set_target(req.x, req.y)
        return session.state_dict()

    @app.post("/step")
    def post_step(req: StepRequest = StepRequest()):
        recs = []
        for _ in range(max(req.steps, 1)):
            recs.append(record_to_dict(session.step()))
            if session.arrived:
                break
        return {"records": recs, "arrived": session.arrived,
                "state": session.state_dict()}

    @app.post("/auto")
    def post_auto(req: AutoRequest):
        session.mode = "auto" if req.enabled else "paused"
        return {"mode": session.mode}

    @app.post("/ask")
    def post_ask(req: AskRequest):
        return session.ask(req.kind, req.alternative, req.pose)

    return app
