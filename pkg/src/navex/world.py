"""Static 2D world, range-sensor simulation, and action application."""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .kernels import cast_rays, first_hit, point_segment_distances


class WorldFormatError(ValueError):
    pass


class WorldValidationError(ValueError):
    pass


class OutOfBoundsError(ValueError):
    """The robot pose left the world; indicates a simulation bug."""


def wrap_angle(theta: float) -> float:
    """Normalize an angle into [-pi, pi)."""
    return (theta + math.pi) % (2.0 * math.pi) - math.pi


@dataclass(frozen=True)
class Pose:
    x: float
    y: float
    theta: float

    def __post_init__(self):
        object.__setattr__(self, "theta", wrap_angle(self.theta))

    @property
    def xy(self) -> tuple[float, float]:
        return (self.x, self.y)


@dataclass(frozen=True)
class Action:
    kind: str  # "move" | "turn"
    intensity_index: int
    magnitude: float

    def __post_init__(self):
        if self.kind not in ("move", "turn"):
            raise ValueError(f"unknown action kind {self.kind!r}")
        if self.kind == "move" and self.magnitude < 0:
            raise ValueError("move magnitude must be >= 0")

    @property
    def is_pause(self) -> bool:
        return self.kind == "move" and self.magnitude == 0.0

    def key(self) -> tuple[str, float]:
        return (self.kind, self.magnitude)


@dataclass(frozen=True)
class LaserScan:
    ranges: np.ndarray
    fov: float
    max_range: float
    origin: Pose

    @property
    def angles(self) -> np.ndarray:
        n = len(self.ranges)
        return self.origin.theta - self.fov / 2 + np.arange(n) * self.fov / (n - 1)

    def hit_points(self) -> np.ndarray:
        """World coordinates of beams that actually hit an obstacle, (N, 2)."""
        mask = self.ranges < self.max_range - 1e-9
        a = self.angles[mask]
        r = self.ranges[mask]
        return np.column_stack((self.origin.x + r * np.cos(a),
                                self.origin.y + r * np.sin(a)))

    def range_toward(self, bearing: float) -> float:
        """Range of the beam closest to an absolute bearing (nearest beam)."""
        rel = wrap_angle(bearing - self.origin.theta)
        if abs(rel) > self.fov / 2:
            return 0.0
        n = len(self.ranges)
        step = self.fov / (n - 1)
        idx = int(round((rel + self.fov / 2) / step))
        return float(self.ranges[min(max(idx, 0), n - 1)])


@dataclass(frozen=True)
class World:
    segments: np.ndarray  # (S, 4): x1 y1 x2 y2
    bounds: tuple[float, float, float, float]  # minx miny maxx maxy
    name: str = "world"

    def __post_init__(self):
        minx, miny, maxx, maxy = self.bounds
        if not (maxx > minx and maxy > miny):
            raise WorldValidationError("bounds must have positive width and height")
        segs = np.asarray(self.segments, dtype=np.float64).reshape(-1, 4)
        object.__setattr__(self, "segments", segs)
        for i, (x1, y1, x2, y2) in enumerate(segs):
            for x, y in ((x1, y1), (x2, y2)):
                if not (minx <= x <= maxx and miny <= y <= maxy):
                    raise WorldValidationError(
                        f"segment {i} endpoint ({x}, {y}) outside bounds {self.bounds}")

    def contains(self, x: float, y: float) -> bool:
        minx, miny, maxx, maxy = self.bounds
        return minx <= x <= maxx and miny <= y <= maxy

    def clearance(self, x: float, y: float) -> float:
        """Distance from a point to the nearest wall segment."""
        d = point_segment_distances(x, y, self.segments)
        return float(d.min()) if d.size else math.inf


def load_world(text: str, name: str = "world") -> World:
    """Parse the world file format: a ``bounds`` line then ``wall`` lines."""
    bounds = None
    segs: list[list[float]] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        try:
            if parts[0] == "bounds":
                if bounds is not None:
                    raise WorldFormatError(f"line {lineno}: duplicate bounds")
                if len(parts) != 5:
                    raise WorldFormatError(f"line {lineno}: bounds needs 4 numbers")
                bounds = tuple(float(p) for p in parts[1:])
            elif parts[0] == "wall":
                if bounds is None:
                    raise WorldFormatError(f"line {lineno}: wall before bounds")
                if len(parts) != 5:
                    raise WorldFormatError(f"line {lineno}: wall needs 4 numbers")
                segs.append([float(p) for p in parts[1:]])
            else:
                raise WorldFormatError(f"line {lineno}: unknown directive {parts[0]!r}")
        except ValueError as exc:
            if isinstance(exc, (WorldFormatError, WorldValidationError)):
                raise
            raise WorldFormatError(f"line {lineno}: bad number in {raw!r}") from exc
    if bounds is None:
        raise WorldFormatError("missing bounds line")
    return World(segments=np.array(segs, dtype=np.float64).reshape(-1, 4),
                 bounds=bounds, name=name)


def ray_cast(world: World, pose: Pose, beam_count: int, fov: float,
             max_range: float) -> LaserScan:
    """Simulate the range sensor: beam i at theta - fov/2 + i*fov/(n-1)."""
    if beam_count < 2:
        raise ValueError("beam_count must be >= 2")
    if not (0 < fov <= 2 * math.pi):
        raise ValueError("fov must be in (0, 2*pi]")
    if not world.contains(pose.x, pose.y):
        raise OutOfBoundsError(f"pose ({pose.x}, {pose.y}) outside world bounds")
    angles = pose.theta - fov / 2 + np.arange(beam_count) * fov / (beam_count - 1)
    ranges = cast_rays(pose.x, pose.y, angles, world.segments, max_range)
    # a range of exactly 0 would violate the scan invariant; floor at epsilon
    ranges = np.maximum(ranges, 1e-9)
    return LaserScan(ranges=ranges, fov=fov, max_range=max_range, origin=pose)


@dataclass(frozen=True)
class MoveOutcome:
    pose: Pose
    truncated: bool = False


def apply_action(world: World, pose: Pose, action: Action,
                 safety_margin: float = 0.1) -> MoveOutcome:
    """Apply a turn or a forward move; moves truncate before obstacles."""
    if action.kind == "turn":
        return MoveOutcome(Pose(pose.x, pose.y, pose.theta + action.magnitude))
    d = action.magnitude
    if d == 0.0:
        return MoveOutcome(pose)
    hit = first_hit(pose.x, pose.y, pose.theta, world.segments, math.inf)
    truncated = hit <= d
    if truncated:
        d = max(hit - safety_margin, 0.0)
    new = Pose(pose.x + d * math.cos(pose.theta),
               pose.y + d * math.sin(pose.theta), pose.theta)
    return MoveOutcome(new, truncated)


def line_of_sight(world: World, a: tuple[float, float], b: tuple[float, float],
                  max_range: float | None = None) -> bool:
    """True when b is visible from a: unobstructed and within sensor range."""
    dist = math.hypot(b[0] - a[0], b[1] - a[1])
    if max_range is not None and dist > max_range:
        return False
    if dist < 1e-12:
        return True
    angle = math.atan2(b[1] - a[1], b[0] - a[0])
    hit = first_hit(a[0], a[1], angle, world.segments, math.inf)
    return hit >= dist - 1e-9
