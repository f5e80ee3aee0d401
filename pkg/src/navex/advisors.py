"""Tier-1 rule advisors (mandate/veto) and the eleven tier-3 heuristics.

Each tier-3 advisor scores the unvetoed actions with its own rationale, then
the raw scores are rescaled linearly so the best action gets 10 and the worst
gets 0 (all 5 when the advisor is indifferent).
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .config import SimConfig
from .kernels import segment_point_min_distance
from .spatial import SpatialModel
from .world import Action, LaserScan, Pose, wrap_angle

_NOT_OPPOSITE_TOL = 0.05
_ALL_EQUAL = 1e-12


@dataclass(frozen=True)
class DecisionState:
    pose: Pose
    scan: LaserScan
    target: tuple[float, float]
    previous_orientation: float | None = None

    def target_distance(self) -> float:
        return math.hypot(self.target[0] - self.pose.x, self.target[1] - self.pose.y)

    def target_bearing(self) -> float:
        return math.atan2(self.target[1] - self.pose.y, self.target[0] - self.pose.x)

    def point_visible(self, x: float, y: float, slack: float = 0.1) -> bool:
        """Point within the scan's field of view and not behind a sensed wall."""
        dist = math.hypot(x - self.pose.x, y - self.pose.y)
        if dist > self.scan.max_range:
            return False
        if dist < 1e-9:
            return True
        bearing = math.atan2(y - self.pose.y, x - self.pose.x)
        return self.scan.range_toward(bearing) >= dist - slack


@dataclass(frozen=True)
class Comment:
    advisor: str
    action: Action
    strength: float

    def __post_init__(self):
        if not (0.0 <= self.strength <= 10.0):
            raise ValueError(f"comment strength {self.strength} outside [0, 10]")


@dataclass(frozen=True)
class Tier1Outcome:
    mandate: Action | None = None
    vetoes: dict = None  # action key -> vetoing advisor id
    deciding_advisor: str | None = None

    def __post_init__(self):
        if self.vetoes is None:
            object.__setattr__(self, "vetoes", {})
        if self.mandate is not None and self.mandate.key() in self.vetoes:
            raise ValueError("a mandated action must not be vetoed")

    def unvetoed(self, actions: list[Action]) -> list[Action]:
        return [a for a in actions if a.key() not in self.vetoes]


@dataclass(frozen=True)
class AdvisorMeta:
    id: str
    tier: int
    support: str = ""
    oppose: str = ""
    prefer: str = ""


TIER1_ADVISORS = {
    "victory": AdvisorMeta("victory", 1),
    "avoidwalls": AdvisorMeta("avoidwalls", 1),
    "notopposite": AdvisorMeta("notopposite", 1),
}

# Rationale fragments complete "I [phrase] to [fragment]" clauses.
TIER3_ADVISORS = {
    "greedy": AdvisorMeta(
        "greedy", 3, "get close to our target", "get farther from our target",
        "get closer to our target"),
    "bigstep": AdvisorMeta(
        "bigstep", 3, "take a big step", "take a small step", "take a big step"),
    "elbowroom": AdvisorMeta(
        "elbowroom", 3, "stay away from that wall", "go close to that wall",
        "stay away from that wall"),
    "goaround": AdvisorMeta(
        "goaround", 3, "get around this wall", "turn towards this wall",
        "get around this wall"),
    "explorer": AdvisorMeta(
        "explorer", 3, "go somewhere new", "go somewhere I've been",
        "go somewhere new"),
    "access": AdvisorMeta(
        "access", 3, "go somewhere with many ways out",
        "go somewhere with few ways out", "go somewhere with many ways out"),
    "convey": AdvisorMeta(
        "convey", 3, "go to an area I've been to a lot",
        "go to an area I haven't been to much", "go to an area I've been to a lot"),
    "enter": AdvisorMeta(
        "enter", 3, "go into the area our target is in",
        "go into an area without our target", "go into the area our target is in"),
    "exit": AdvisorMeta(
        "exit", 3, "leave since our target isn't here",
        "stay here even though our target isn't here",
        "leave since our target isn't here"),
    "trailer": AdvisorMeta(
        "trailer", 3, "follow a familiar route that gets me closer to our target",
        "leave a familiar route",
        "follow a familiar route that gets me closer to our target"),
    "unlikely": AdvisorMeta(
        "unlikely", 3, "stay out of a dead end", "go into a dead end",
        "stay out of a dead end"),
}

TIER3_ORDER = tuple(TIER3_ADVISORS)

VETO_RATIONALES = {
    "avoidwalls": "the wall was in the way",
    "notopposite": "we just came from that direction",
}


def advisor_rationale(advisor_id: str, role: str = "support") -> str:
    """Grammatical fragment for an advisor in a given clause role."""
    meta = TIER3_ADVISORS.get(advisor_id)
    if meta is None:
        raise KeyError(f"unknown tier-3 advisor {advisor_id!r}")
    if role not in ("support", "oppose", "prefer"):
        raise ValueError(f"unknown rationale role {role!r}")
    return getattr(meta, role)


def action_endpoint(state: DecisionState, action: Action,
                    lookahead: float) -> tuple[float, float, float]:
    """Projected (x, y, theta) after the action.

    Turns project one lookahead step along the new heading (shortened when a
    wall is closer than that) so location-based advisors can rank them.
    """
    x, y, theta = state.pose.x, state.pose.y, state.pose.theta
    if action.kind == "move":
        return (x + action.magnitude * math.cos(theta),
                y + action.magnitude * math.sin(theta), theta)
    t2 = wrap_angle(theta + action.magnitude)
    clear = state.scan.range_toward(t2)
    step = min(lookahead, max(clear - 0.2, 0.0))
    return (x + step * math.cos(t2), y + step * math.sin(t2), t2)


# ---------------------------------------------------------------------------
# tier 1


def target_visible(state: DecisionState) -> bool:
    """Target within sensor range along an unobstructed, sensed line."""
    dist = state.target_distance()
    if dist > state.scan.max_range:
        return False
    if dist < 1e-9:
        return True
    return state.scan.range_toward(state.target_bearing()) >= dist - 0.05


def tier1_evaluate(state: DecisionState, actions: list[Action],
                   epsilon_wall: float) -> Tier1Outcome:
    """Run Victory, AvoidWalls, NotOpposite in order."""
    if not actions:
        raise ValueError("tier 1 needs a nonempty candidate set")

    # Victory: mandate the largest forward move that approaches a visible
    # target without overshooting it and without hitting anything first.
    if target_visible(state):
        dist = state.target_distance()
        clearance = state.scan.range_toward(state.pose.theta)
        best = None
        for a in actions:
            if a.kind != "move" or a.magnitude <= 0:
                continue
            if a.magnitude > dist or a.magnitude > clearance - epsilon_wall:
                continue
            ex, ey, _ = action_endpoint(state, a, 0.0)
            if math.hypot(ex - state.target[0], ey - state.target[1]) < dist - 1e-9:
                if best is None or a.magnitude > best.magnitude:
                    best = a
        if best is not None:
            return Tier1Outcome(mandate=best, deciding_advisor="victory")

    vetoes: dict = {}
    hits = state.scan.hit_points()
    for a in actions:
        if a.kind == "move" and a.magnitude > 0:
            ex, ey, _ = action_endpoint(state, a, 0.0)
            d = segment_point_min_distance(state.pose.x, state.pose.y, ex, ey, hits)
            if d < epsilon_wall:
                vetoes[a.key()] = "avoidwalls"
        elif a.kind == "turn" and state.previous_orientation is not None:
            landing = wrap_angle(state.pose.theta + a.magnitude)
            if abs(wrap_angle(landing - state.previous_orientation)) <= _NOT_OPPOSITE_TOL:
                vetoes[a.key()] = "notopposite"
    return Tier1Outcome(vetoes=vetoes)


# ---------------------------------------------------------------------------
# tier 3 scoring (raw scores; rescaled in tier3_comment)


def _nearest_hit_distance(ep, hits, max_range):
    if hits.shape[0] == 0:
        return max_range
    return float(np.hypot(hits[:, 0] - ep[0], hits[:, 1] - ep[1]).min())


def _score_greedy(state, model, actions, eps, config):
    return np.array([-math.hypot(e[0] - state.target[0], e[1] - state.target[1])
                     for e in eps])


def _score_bigstep(state, model, actions, eps, config):
    return np.array([float(a.intensity_index) if a.kind == "move" else 0.0
                     for a in actions])


# obstacles farther than this no longer worry the obstacle advisors
_COMFORT_RADIUS = 1.5


def _score_elbowroom(state, model, actions, eps, config):
    hits = state.scan.hit_points()
    return np.array([min(_nearest_hit_distance(e, hits, state.scan.max_range),
                         _COMFORT_RADIUS) for e in eps])


def _score_goaround(state, model, actions, eps, config):
    hits = state.scan.hit_points()
    if hits.shape[0] == 0:
        return np.zeros(len(actions))
    d = np.hypot(hits[:, 0] - state.pose.x, hits[:, 1] - state.pose.y)
    if d.min() > _COMFORT_RADIUS:
        return np.zeros(len(actions))
    nearest = hits[int(np.argmin(d))]
    bearing = math.atan2(nearest[1] - state.pose.y, nearest[0] - state.pose.x)
    return np.array([abs(wrap_angle(e[2] - bearing)) if a.kind == "turn" else 0.0
                     for a, e in zip(actions, eps)])


def _score_explorer(state, model, actions, eps, config):
    if model.conveyors is None:
        return np.zeros(len(actions))
    return np.array([-float(model.conveyors.count_at(e[0], e[1])) for e in eps])


def _score_convey(state, model, actions, eps, config):
    if model.conveyors is None:
        return np.zeros(len(actions))
    out = []
    for e in eps:
        c = model.conveyors.count_at(e[0], e[1])
        out.append(c * math.hypot(e[0] - state.pose.x, e[1] - state.pose.y))
    return np.array(out)


def _score_access(state, model, actions, eps, config):
    out = []
    for e in eps:
        r = model.region_at(e[0], e[1])
        out.append(float(len(r.doors)) if r is not None else 0.0)
    return np.array(out)


def _score_enter(state, model, actions, eps, config):
    tx, ty = state.target
    out = []
    for e in eps:
        r = model.region_at(e[0], e[1])
        out.append(10.0 if r is not None and r.contains(tx, ty) else 0.0)
    return np.array(out)


def _score_exit(state, model, actions, eps, config):
    cur = model.region_at(state.pose.x, state.pose.y)
    tx, ty = state.target
    if cur is None or cur.contains(tx, ty) or not cur.doors:
        return np.zeros(len(actions))
    # only doors the sensor can actually see; an occluded door would pull us
    # straight into the wall hiding it
    doors = [d for d in cur.door_points() if state.point_visible(d[0], d[1])]
    if not doors:
        return np.zeros(len(actions))
    return np.array([-min(math.hypot(e[0] - dx, e[1] - dy) for dx, dy in doors)
                     for e in eps])


def _best_trail_marker(state, model):
    """Furthest visible marker of the trail whose end lies nearest the target."""
    tx, ty = state.target
    best, best_d = None, state.target_distance()
    for trail in model.trails:
        pts = trail.points()
        end = pts[-1]
        d = math.hypot(end[0] - tx, end[1] - ty)
        if d < best_d:
            best, best_d = trail, d
    if best is None:
        return None
    # head for the furthest-along marker we can see, so the trail routes us
    # around corners instead of pointing through them
    for p in reversed(best.points()):
        if state.point_visible(p[0], p[1]):
            return p
    return None


def _score_trailer(state, model, actions, eps, config):
    marker = _best_trail_marker(state, model)
    if marker is None:
        return np.zeros(len(actions))
    return np.array([-math.hypot(e[0] - marker[0], e[1] - marker[1]) for e in eps])


def _score_unlikely(state, model, actions, eps, config):
    tx, ty = state.target
    out = []
    for e in eps:
        i = model.region_index_at(e[0], e[1])
        dead_end = (i is not None and model.skeleton.is_leaf(i)
                    and not model.regions[i].contains(tx, ty))
        out.append(-1.0 if dead_end else 0.0)
    return np.array(out)


_SCORERS = {
    "greedy": _score_greedy,
    "bigstep": _score_bigstep,
    "elbowroom": _score_elbowroom,
    "goaround": _score_goaround,
    "explorer": _score_explorer,
    "convey": _score_convey,
    "access": _score_access,
    "enter": _score_enter,
    "exit": _score_exit,
    "trailer": _score_trailer,
    "unlikely": _score_unlikely,
}


def rescale(raw: np.ndarray) -> np.ndarray:
    """Best action 10, worst 0, linear in between; all 5 when indifferent."""
    lo, hi = float(raw.min()), float(raw.max())
    if hi - lo < _ALL_EQUAL:
        return np.full(raw.shape, 5.0)
    return np.clip(10.0 * (raw - lo) / (hi - lo), 0.0, 10.0)


def tier3_comment(advisor_id: str, state: DecisionState, model: SpatialModel,
                  actions: list[Action], config: SimConfig) -> list[Comment]:
    """One comment per unvetoed action, strengths in [0, 10]."""
    if advisor_id not in _SCORERS:
        raise KeyError(f"unknown tier-3 advisor {advisor_id!r}")
    if not actions:
        raise ValueError("tier 3 needs a nonempty action set")
    eps = [action_endpoint(state, a, config.turn_lookahead) for a in actions]
    raw = _SCORERS[advisor_id](state, model, actions, eps, config)
    strengths = rescale(np.asarray(raw, dtype=np.float64))
    return [Comment(advisor=advisor_id, action=a, strength=float(s))
            for a, s in zip(actions, strengths)]


def active_advisors(config: SimConfig) -> tuple[str, ...]:
    if config.advisors:
        unknown = [a for a in config.advisors if a not in TIER3_ADVISORS]
        if unknown:
            raise KeyError(f"unknown advisors in config: {unknown}")
        return config.advisors
    return TIER3_ORDER
