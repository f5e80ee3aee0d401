"""Phrase catalog: metric-interval phrase mappings and action phrases.

Every metric's intervals partition the reals with right-inclusive boundaries,
so lookup is total and single-valued.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

from .world import Action

INF = math.inf


@dataclass(frozen=True)
class Interval:
    upper: float  # value belongs to this interval when value <= upper
    phrase: str
    label: str  # low | medium | high (confidence ordering); "" when unused


@dataclass(frozen=True)
class PhraseTable:
    metrics: dict = field(default_factory=dict)

    def map_phrase(self, metric: str, value: float) -> str:
        return self._lookup(metric, value).phrase

    def label(self, metric: str, value: float) -> str:
        return self._lookup(metric, value).label

    def _lookup(self, metric: str, value: float) -> Interval:
        try:
            intervals = self.metrics[metric]
        except KeyError:
            raise KeyError(f"unknown metric {metric!r}") from None
        for iv in intervals:
            if value <= iv.upper:
                return iv
        return intervals[-1]


def default_phrase_table() -> PhraseTable:
    return PhraseTable(metrics={
        "t_support": (
            Interval(-1.5, "really don't want", ""),
            Interval(-0.75, "don't want", ""),
            Interval(0.0, "somewhat don't want", ""),
            Interval(0.75, "somewhat want", ""),
            Interval(1.5, "want", ""),
            Interval(INF, "really want", ""),
        ),
        # agreement runs low -> high as the numeric value falls
        "agreement": (
            Interval(0.25, "I've got many reasons", "high"),
            Interval(0.45, "I've only got a few reasons", "medium"),
            Interval(INF, "my reasons conflict", "low"),
        ),
        "overall_support": (
            Interval(0.75, "don't really want", "low"),
            Interval(1.5, "somewhat want", "medium"),
            Interval(INF, "really want", "high"),
        ),
        "confidence": (
            Interval(0.0375, "not", "low"),
            Interval(0.375, "only somewhat", "medium"),
            Interval(INF, "really", "high"),
        ),
        "support_diff": (
            Interval(0.75, "slightly more", "low"),
            Interval(1.5, "more", "medium"),
            Interval(INF, "much more", "high"),
        ),
        # pairwise t-support differences, bucketed by the clear-preference rule
        "t_diff": (
            Interval(-1.0, "", "low"),
            Interval(1.0, "", "medium"),
            Interval(INF, "", "high"),
        ),
    })


DEFAULT_TABLE = default_phrase_table()


def map_phrase(table: PhraseTable, metric: str, value: float) -> str:
    return table.map_phrase(metric, value)


# ---------------------------------------------------------------------------
# action phrases

_MOVE_PHRASES = {
    0.0: ("wait", "waiting"),
    0.2: ("inch forward", "inching forward"),
    0.4: ("move forward", "moving forward"),
    0.8: ("move far forward", "moving far forward"),
    1.6: ("move forward a lot", "moving forward a lot"),
}

# positive turn magnitude = left
_TURN_PHRASES = {
    0.25: ("shift {d} a bit", "shifting {d} a bit"),
    0.5: ("turn {d}", "turning {d}"),
    1.0: ("bear {d}", "bearing {d}"),
    1.57: ("turn hard {d}", "turning hard {d}"),
}


def action_phrase(action: Action, form: str = "base") -> str:
    """Descriptive phrase for an action; ``form`` is 'base' or 'gerund'."""
    fi = 0 if form == "base" else 1
    if action.kind == "move":
        entry = _MOVE_PHRASES.get(round(action.magnitude, 6))
        if entry is None:
            raise KeyError(f"no phrase for move magnitude {action.magnitude}")
        return entry[fi]
    entry = _TURN_PHRASES.get(round(abs(action.magnitude), 6))
    if entry is None:
        raise KeyError(f"no phrase for turn magnitude {action.magnitude}")
    direction = "left" if action.magnitude > 0 else "right"
    return entry[fi].format(d=direction)


def join_clauses(clauses: list[str]) -> str:
    """'A' / 'A and B' / 'A, B, and C' (Oxford comma)."""
    if not clauses:
        return ""
    if len(clauses) == 1:
        return clauses[0]
    if len(clauses) == 2:
        return f"{clauses[0]} and {clauses[1]}"
    return ", ".join(clauses[:-1]) + f", and {clauses[-1]}"
