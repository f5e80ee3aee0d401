"""Learned spatial affordances: regions, exits/doors, trails, conveyors, skeleton."""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .world import World, Pose, line_of_sight, wrap_angle

_TANGENCY_TOL = 1e-6
_TWO_PI = 2.0 * math.pi


@dataclass
class Door:
    """Arc along a region circumference, start angle plus extent (radians ccw)."""
    start: float
    extent: float

    @property
    def end(self) -> float:
        return self.start + self.extent

    def contains(self, angle: float, tol: float = 1e-9) -> bool:
        rel = (angle - self.start) % _TWO_PI
        if rel > math.pi * 2 - tol:
            rel = 0.0
        return rel <= self.extent + tol


@dataclass
class Region:
    center: tuple[float, float]
    radius: float
    exits: list[tuple[float, float]] = field(default_factory=list)
    doors: list[Door] = field(default_factory=list)

    def __post_init__(self):
        if self.radius <= 0:
            raise ValueError("region radius must be > 0")

    def contains(self, x: float, y: float) -> bool:
        return math.hypot(x - self.center[0], y - self.center[1]) <= self.radius

    def exit_angle(self, pt: tuple[float, float]) -> float:
        return math.atan2(pt[1] - self.center[1], pt[0] - self.center[0])

    def door_points(self) -> list[tuple[float, float]]:
        """Midpoint of each door arc, in world coordinates."""
        cx, cy = self.center
        out = []
        for d in self.doors:
            a = d.start + d.extent / 2
            out.append((cx + self.radius * math.cos(a), cy + self.radius * math.sin(a)))
        return out


@dataclass
class Trail:
    markers: list  # DecisionStates (anything with a .pose)

    def points(self) -> list[tuple[float, float]]:
        return [m.pose.xy for m in self.markers]


@dataclass
class ConveyorGrid:
    bounds: tuple[float, float, float, float]
    cell_size: float
    counts: np.ndarray = None

    def __post_init__(self):
        minx, miny, maxx, maxy = self.bounds
        nx = max(1, math.ceil((maxx - minx) / self.cell_size))
        ny = max(1, math.ceil((maxy - miny) / self.cell_size))
        if self.counts is None:
            self.counts = np.zeros((nx, ny), dtype=np.int64)

    def cell_of(self, x: float, y: float) -> tuple[int, int]:
        minx, miny, _, _ = self.bounds
        ix = int((x - minx) // self.cell_size)
        iy = int((y - miny) // self.cell_size)
        nx, ny = self.counts.shape
        return (min(max(ix, 0), nx - 1), min(max(iy, 0), ny - 1))

    def count_at(self, x: float, y: float) -> int:
        ix, iy = self.cell_of(x, y)
        return int(self.counts[ix, iy])

    def cell_center(self, ix: int, iy: int) -> tuple[float, float]:
        minx, miny, _, _ = self.bounds
        return (minx + (ix + 0.5) * self.cell_size, miny + (iy + 0.5) * self.cell_size)

    def conveyor_threshold(self) -> float:
        """Cells at or above the median nonzero count act as conveyors."""
        nz = self.counts[self.counts > 0]
        return float(np.median(nz)) if nz.size else math.inf

    def cells_crossed(self, a: tuple[float, float], b: tuple[float, float]) -> set[tuple[int, int]]:
        """All cells the segment a-b passes through (gridline-crossing walk)."""
        minx, miny, _, _ = self.bounds
        (x0, y0), (x1, y1) = a, b
        dx, dy = x1 - x0, y1 - y0
        ts = [0.0, 1.0]
        for (o, d, lo) in ((x0, dx, minx), (y0, dy, miny)):
            if abs(d) < 1e-12:
                continue
            k0 = math.floor((o - lo) / self.cell_size)
            k1 = math.floor((o + d - lo) / self.cell_size)
            for k in range(min(k0, k1) + 1, max(k0, k1) + 1):
                t = (lo + k * self.cell_size - o) / d
                if 0.0 < t < 1.0:
                    ts.append(t)
        ts.sort()
        cells = set()
        for t0, t1 in zip(ts, ts[1:]):
            tm = (t0 + t1) / 2
            cells.add(self.cell_of(x0 + tm * dx, y0 + tm * dy))
        return cells


@dataclass
class Skeleton:
    nodes: set[int] = field(default_factory=set)
    edges: set[frozenset] = field(default_factory=set)

    def add_edge(self, a: int, b: int) -> None:
        if a == b:
            return
        self.nodes.add(a)
        self.nodes.add(b)
        self.edges.add(frozenset((a, b)))

    def degree(self, node: int) -> int:
        return sum(1 for e in self.edges if node in e)

    def is_leaf(self, node: int) -> bool:
        return node in self.nodes and self.degree(node) <= 1


@dataclass
class SpatialModel:
    regions: list[Region] = field(default_factory=list)
    trails: list[Trail] = field(default_factory=list)
    conveyors: ConveyorGrid | None = None
    skeleton: Skeleton = field(default_factory=Skeleton)

    def region_index_at(self, x: float, y: float) -> int | None:
        """Containing region; nearest center wins when circles overlap."""
        best, best_d = None, math.inf
        for i, r in enumerate(self.regions):
            d = math.hypot(x - r.center[0], y - r.center[1])
            if d <= r.radius and d < best_d:
                best, best_d = i, d
        return best

    def region_at(self, x: float, y: float) -> Region | None:
        i = self.region_index_at(x, y)
        return self.regions[i] if i is not None else None


def learn_region(model: SpatialModel, state) -> Region | None:
    """Add a free-space circle at the state's pose unless already covered."""
    x, y = state.pose.x, state.pose.y
    if model.region_index_at(x, y) is not None:
        return None
    radius = float(np.min(state.scan.ranges))
    region = Region(center=(x, y), radius=radius)
    model.regions.append(region)
    return region


def learn_exits(region: Region, path_points: list[tuple[float, float]]) -> None:
    """Append circumference crossing points of the path as exits."""
    cx, cy = region.center
    r = region.radius
    for (x0, y0), (x1, y1) in zip(path_points, path_points[1:]):
        dx, dy = x1 - x0, y1 - y0
        fx, fy = x0 - cx, y0 - cy
        a = dx * dx + dy * dy
        if a < 1e-18:
            continue
        b = 2 * (fx * dx + fy * dy)
        c = fx * fx + fy * fy - r * r
        disc = b * b - 4 * a * c
        if disc <= 0:
            continue
        sq = math.sqrt(disc)
        # chord length inside the circle; ignore tangential grazes
        if sq / math.sqrt(a) < _TANGENCY_TOL:
            continue
        for t in ((-b - sq) / (2 * a), (-b + sq) / (2 * a)):
            if 0.0 <= t <= 1.0:
                region.exits.append((x0 + t * dx, y0 + t * dy))


def merge_doors(region: Region, epsilon: float) -> None:
    """Group exits whose arc separation is within epsilon into door arcs."""
    region.doors = []
    if not region.exits:
        return
    angles = sorted(region.exit_angle(p) for p in region.exits)
    n = len(angles)
    if n == 1:
        region.doors = [Door(start=angles[0], extent=0.0)]
        return
    gaps = [(angles[(i + 1) % n] - angles[i]) % _TWO_PI for i in range(n)]
    if all(g <= epsilon for g in gaps):
        region.doors = [Door(start=angles[0], extent=_TWO_PI)]
        return
    # start each walk right after a wide gap so groups never straddle one
    start = max(range(n), key=lambda i: gaps[i]) + 1
    order = [angles[(start + i) % n] for i in range(n)]
    group = [order[0]]
    for prev, cur in zip(order, order[1:]):
        if (cur - prev) % _TWO_PI <= epsilon:
            group.append(cur)
        else:
            region.doors.append(_group_to_door(group))
            group = [cur]
    region.doors.append(_group_to_door(group))


def _group_to_door(group: list[float]) -> Door:
    extent = (group[-1] - group[0]) % _TWO_PI if len(group) > 1 else 0.0
    return Door(start=group[0], extent=extent)


def learn_trail(path: list, world: World, max_range: float) -> Trail:
    """Compress a path into line-of-sight trail markers, working backward."""
    if len(path) < 2:
        raise ValueError("trail learning needs a path of length >= 2")
    markers = [path[-1]]
    cur_idx = len(path) - 1
    while cur_idx > 0:
        cur_pt = path[cur_idx].pose.xy
        found = None
        for i in range(cur_idx):
            if line_of_sight(world, path[i].pose.xy, cur_pt, max_range):
                found = i
                break
        if found is None:
            # adjacent states may lack formal visibility in degenerate geometry;
            # fall back one step so the walk always terminates
            found = cur_idx - 1
        markers.append(path[found])
        cur_idx = found
    markers.reverse()
    return Trail(markers=markers)


def update_conveyors(trail: Trail, grid: ConveyorGrid) -> ConveyorGrid:
    """Increment each cell crossed by the trail by 1 (once per trail)."""
    pts = trail.points()
    cells: set[tuple[int, int]] = set()
    for a, b in zip(pts, pts[1:]):
        cells |= grid.cells_crossed(a, b)
    for ix, iy in cells:
        grid.counts[ix, iy] += 1
    return grid


def update_skeleton(path: list, model: SpatialModel) -> Skeleton:
    """Add an edge whenever consecutive states occupy different regions."""
    prev = None
    for state in path:
        cur = model.region_index_at(state.pose.x, state.pose.y)
        if cur is not None:
            model.skeleton.nodes.add(cur)
        if prev is not None and cur is not None and cur != prev:
            model.skeleton.add_edge(prev, cur)
        if cur is not None:
            prev = cur
    return model.skeleton


def learn_from_path(model: SpatialModel, path: list, world: World,
                    door_arc_length: float, cell_size: float,
                    max_range: float) -> None:
    """Path-completion learning: exits, doors, trail, conveyors, skeleton."""
    if len(path) < 2:
        return
    pts = [s.pose.xy for s in path]
    for region in model.regions:
        learn_exits(region, pts)
        merge_doors(region, door_arc_length / region.radius)
    trail = learn_trail(path, world, max_range)
    model.trails.append(trail)
    if model.conveyors is None:
        model.conveyors = ConveyorGrid(bounds=world.bounds, cell_size=cell_size)
    update_conveyors(trail, model.conveyors)
    update_skeleton(path, model)


def export_text(model: SpatialModel) -> str:
    """Structured text dump, one record per affordance."""
    lines: list[str] = []
    for i, r in enumerate(model.regions):
        lines.append(f"region {i} {r.center[0]:.6f} {r.center[1]:.6f} {r.radius:.6f}")
        for (x, y) in r.exits:
            lines.append(f"exit {i} {x:.6f} {y:.6f}")
        for d in r.doors:
            lines.append(f"door {i} {d.start:.6f} {d.extent:.6f}")
    for j, t in enumerate(model.trails):
        for (x, y) in t.points():
            lines.append(f"trail {j} {x:.6f} {y:.6f}")
    if model.conveyors is not None:
        nx, ny = model.conveyors.counts.shape
        for ix in range(nx):
            for iy in range(ny):
                c = int(model.conveyors.counts[ix, iy])
                if c:
                    lines.append(f"conveyor {ix} {iy} {c}")
    for e in sorted(tuple(sorted(e)) for e in model.skeleton.edges):
        lines.append(f"skeleton {e[0]} {e[1]}")
    return "\n".join(lines) + ("\n" if lines else "")
