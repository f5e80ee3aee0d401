"""Decision cycle: tier-1 rules, tier-3 strength summation, episode loop."""
from __future__ import annotations

import json
import math
import random
import time
from dataclasses import dataclass, field

import numpy as np

from .advisors import (DecisionState, Tier1Outcome, active_advisors,
                       tier1_evaluate, tier3_comment)
from .config import SimConfig
from .spatial import SpatialModel, learn_from_path, learn_region
from .world import Action, Pose, World, apply_action, ray_cast


class ControllerError(RuntimeError):
    pass


@dataclass
class CommentMatrix:
    advisors: list[str]
    actions: list[Action]
    strengths: np.ndarray  # (n_advisors, n_actions)

    def __post_init__(self):
        s = np.asarray(self.strengths, dtype=np.float64)
        if s.shape != (len(self.advisors), len(self.actions)):
            raise ValueError("comment matrix dimensions inconsistent")
        if s.size and (s.min() < 0 or s.max() > 10):
            raise ValueError("comment strengths must lie in [0, 10]")
        self.strengths = s

    def column_sums(self) -> np.ndarray:
        return self.strengths.sum(axis=0)


@dataclass
class DecisionRecord:
    phase: str  # "move" | "turn"
    candidates: list[Action]
    tier1: Tier1Outcome
    chosen: Action
    decided_by: str  # tier1_mandate | tier1_lastleft | tier3
    cycle_index: int
    comments: CommentMatrix | None = None
    tie_broken: bool = False
    truncated: bool = False
    elapsed_us: float = 0.0
    state: DecisionState | None = None

    def chosen_index(self) -> int:
        return next(i for i, a in enumerate(self.candidates)
                    if a.key() == self.chosen.key())


def candidate_actions(phase: str, config: SimConfig) -> list[Action]:
    if phase == "move":
        return [Action("move", i, m) for i, m in enumerate(config.moves)]
    if phase == "turn":
        return [Action("turn", i, t) for i, t in enumerate(config.turns)]
    raise ValueError(f"unknown phase {phase!r}")


def decide(state: DecisionState, model: SpatialModel, phase: str,
           rng: random.Random, config: SimConfig,
           cycle_index: int = 0) -> DecisionRecord:
    """One decision cycle over the phase's candidate set."""
    t0 = time.perf_counter()
    actions = candidate_actions(phase, config)
    tier1 = tier1_evaluate(state, actions, config.epsilon_wall)

    if tier1.mandate is not None:
        rec = DecisionRecord(phase=phase, candidates=actions, tier1=tier1,
                             chosen=tier1.mandate, decided_by="tier1_mandate",
                             cycle_index=cycle_index, state=state)
        rec.elapsed_us = (time.perf_counter() - t0) * 1e6
        return rec

    unvetoed = tier1.unvetoed(actions)
    if not unvetoed:
        raise ControllerError(f"all {phase} actions vetoed; configuration bug")
    if len(unvetoed) == 1:
        rec = DecisionRecord(phase=phase, candidates=actions, tier1=tier1,
                             chosen=unvetoed[0], decided_by="tier1_lastleft",
                             cycle_index=cycle_index, state=state)
        rec.elapsed_us = (time.perf_counter() - t0) * 1e6
        return rec

    ids = list(active_advisors(config))
    strengths = np.empty((len(ids), len(unvetoed)))
    for i, aid in enumerate(ids):
        comments = tier3_comment(aid, state, model, unvetoed, config)
        strengths[i] = [c.strength for c in comments]
    matrix = CommentMatrix(advisors=ids, actions=unvetoed, strengths=strengths)

    sums = matrix.column_sums()
    best = sums.max()
    ties = [j for j, s in enumerate(sums) if s >= best - 1e-12]
    tie_broken = len(ties) > 1
    chosen = unvetoed[ties[rng.randrange(len(ties))]] if tie_broken else unvetoed[ties[0]]

    rec = DecisionRecord(phase=phase, candidates=actions, tier1=tier1,
                         chosen=chosen, decided_by="tier3", comments=matrix,
                         tie_broken=tie_broken, cycle_index=cycle_index,
                         state=state)
    rec.elapsed_us = (time.perf_counter() - t0) * 1e6
    return rec


@dataclass
class EpisodeResult:
    records: list[DecisionRecord]
    reached: bool
    final_pose: Pose
    target: tuple[float, float] = (0.0, 0.0)


def run_episode(world: World, start: Pose, target: tuple[float, float],
                model: SpatialModel, config: SimConfig,
                rng: random.Random) -> EpisodeResult:
    """Alternate turn/move cycles until arrival or the cycle cap.

    Regions are learned online; exits, doors, trails, conveyors, and the
    skeleton are learned once the path completes.
    """
    if not world.contains(start.x, start.y):
        raise ValueError("start pose outside world bounds")
    pose = start
    prev_orientation: float | None = None

    def arrived(p: Pose) -> bool:
        return math.hypot(p.x - target[0], p.y - target[1]) <= config.arrival_radius

    if arrived(pose):
        return EpisodeResult(records=[], reached=True, final_pose=pose, target=target)

    records: list[DecisionRecord] = []
    phase = "turn"
    reached = False
    for cycle in range(config.cycle_cap):
        scan = ray_cast(world, pose, config.beam_count, config.fov, config.max_range)
        state = DecisionState(pose=pose, scan=scan, target=target,
                              previous_orientation=prev_orientation)
        learn_region(model, state)
        rec = decide(state, model, phase, rng, config, cycle_index=cycle)
        outcome = apply_action(world, pose, rec.chosen, config.safety_margin)
        rec.truncated = outcome.truncated
        if rec.chosen.kind == "turn":
            prev_orientation = pose.theta
        pose = outcome.pose
        records.append(rec)
        if arrived(pose):
            reached = True
            break
        phase = "move" if phase == "turn" else "turn"

    path = [r.state for r in records]
    if records:
        final_scan = ray_cast(world, pose, config.beam_count, config.fov,
                              config.max_range)
        final_state = DecisionState(pose=pose, scan=final_scan, target=target,
                                    previous_orientation=prev_orientation)
        learn_region(model, final_state)
        path = path + [final_state]
        learn_from_path(model, path, world, config.door_arc_length,
                        config.conveyor_cell_size, config.max_range)
    return EpisodeResult(records=records, reached=reached, final_pose=pose,
                         target=target)


# ---------------------------------------------------------------------------
# decision-log serialization (JSON lines)


def _action_to_dict(a: Action) -> dict:
    return {"kind": a.kind, "index": a.intensity_index, "magnitude": a.magnitude}


def _action_from_dict(d: dict) -> Action:
    return Action(d["kind"], d["index"], d["magnitude"])


def record_to_dict(rec: DecisionRecord) -> dict:
    idx = {a.key(): i for i, a in enumerate(rec.candidates)}
    out = {
        "cycle": rec.cycle_index,
        "phase": rec.phase,
        "candidates": [_action_to_dict(a) for a in rec.candidates],
        "tier1": {
            "mandate": idx[rec.tier1.mandate.key()] if rec.tier1.mandate else None,
            "vetoes": {str(idx[k]): adv for k, adv in rec.tier1.vetoes.items()},
            "deciding_advisor": rec.tier1.deciding_advisor,
        },
        "comments": None,
        "chosen": idx[rec.chosen.key()],
        "decided_by": rec.decided_by,
        "tie_broken": rec.tie_broken,
        "truncated": rec.truncated,
    }
    if rec.comments is not None:
        out["comments"] = {
            "advisors": rec.comments.advisors,
            "actions": [idx[a.key()] for a in rec.comments.actions],
            "strengths": rec.comments.strengths.tolist(),
        }
    if rec.state is not None:
        out["pose"] = [rec.state.pose.x, rec.state.pose.y, rec.state.pose.theta]
        out["target"] = list(rec.state.target)
        out["previous_orientation"] = rec.state.previous_orientation
    return out


def record_from_dict(d: dict) -> DecisionRecord:
    candidates = [_action_from_dict(a) for a in d["candidates"]]
    t1 = d["tier1"]
    tier1 = Tier1Outcome(
        mandate=candidates[t1["mandate"]] if t1["mandate"] is not None else None,
        vetoes={candidates[int(i)].key(): adv for i, adv in t1["vetoes"].items()},
        deciding_advisor=t1["deciding_advisor"],
    )
    comments = None
    if d["comments"] is not None:
        c = d["comments"]
        comments = CommentMatrix(
            advisors=list(c["advisors"]),
            actions=[candidates[i] for i in c["actions"]],
            strengths=np.array(c["strengths"]),
        )
    return DecisionRecord(
        phase=d["phase"], candidates=candidates, tier1=tier1,
        chosen=candidates[d["chosen"]], decided_by=d["decided_by"],
        cycle_index=d["cycle"], comments=comments,
        tie_broken=d["tie_broken"], truncated=d["truncated"],
    )


def write_log(records: list[DecisionRecord], path: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for rec in records:
            fh.write(json.dumps(record_to_dict(rec), sort_keys=True) + "\n")


def read_log(path: str) -> list[DecisionRecord]:
    records = []
    with open(path, "r", encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if line:
                records.append(record_from_dict(json.loads(line)))
    return records
