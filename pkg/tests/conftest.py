"""Shared fixtures: small worlds, a fast sensor config, and state builders."""
import math
import os

import numpy as np
import pytest

from navex.advisors import DecisionState
from navex.config import SimConfig
from navex.world import Pose, World, load_world, ray_cast

REPO_ROOT = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))
OFFICE_WORLD = os.path.join(REPO_ROOT, "worlds", "office.world")
TARGETS_FILE = os.path.join(REPO_ROOT, "worlds", "targets.txt")

BOX_TEXT = """
bounds 0 0 10 10
wall 0 0 10 0
wall 10 0 10 10
wall 10 10 0 10
wall 0 10 0 0
"""


@pytest.fixture(scope="session")
def box_world() -> World:
    """Empty 10x10 box."""
    return load_world(BOX_TEXT, name="box")


@pytest.fixture(scope="session")
def office_world() -> World:
    with open(OFFICE_WORLD, "r", encoding="utf-8") as fh:
        return load_world(fh.read(), name="office")


@pytest.fixture(scope="session")
def fast_config() -> SimConfig:
    """Fewer beams than the default so per-test ray casts stay cheap."""
    return SimConfig(beam_count=181)


def make_state(world: World, pose: Pose, target, config: SimConfig,
               previous_orientation=None) -> DecisionState:
    scan = ray_cast(world, pose, config.beam_count, config.fov, config.max_range)
    return DecisionState(pose=pose, scan=scan, target=target,
                         previous_orientation=previous_orientation)


def box_distance_oracle(x: float, y: float, angle: float, w=10.0, h=10.0) -> float:
    """Analytic distance from an interior point to the walls of [0,w]x[0,h]."""
    dx, dy = math.cos(angle), math.sin(angle)
    best = math.inf
    for t in ((w - x) / dx if dx > 0 else math.inf,
              (0 - x) / dx if dx < 0 else math.inf,
              (h - y) / dy if dy > 0 else math.inf,
              (0 - y) / dy if dy < 0 else math.inf):
        if 0 <= t < best:
            best = t
    return best


def random_matrix(rng: np.random.Generator, max_n=6, max_m=8) -> np.ndarray:
    n = int(rng.integers(2, max_n + 1))
    m = int(rng.integers(2, max_m + 1))
    return np.round(rng.uniform(0.0, 10.0, size=(n, m)), 2)
