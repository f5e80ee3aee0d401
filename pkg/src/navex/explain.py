"""The explanation engine: support statistics and the three question templates."""
from __future__ import annotations

import math
import random
from dataclasses import dataclass, field

import numpy as np

from .advisors import VETO_RATIONALES, DecisionState, advisor_rationale
from .config import SimConfig
from .controller import CommentMatrix, DecisionRecord, decide
from .phrases import PhraseTable, DEFAULT_TABLE, action_phrase, join_clauses
from .spatial import SpatialModel
from .world import Action

# advisors with chosen-action t-support inside this interval are omitted
OMISSION_LOW, OMISSION_HIGH = -0.75, 0.75
CLEAR_PREFERENCE = 1.0

_LABEL_ORDER = {"low": 0, "medium": 1, "high": 2}


@dataclass
class SupportStats:
    t_support: np.ndarray       # (n, m)
    column_sums: np.ndarray     # (m,)
    mean_total: float
    sd_total: float
    agreement: np.ndarray       # G_k
    overall: np.ndarray         # T_k
    confidence: np.ndarray      # L_k
    degenerate: bool = False    # single action or zero spread across actions


def compute_stats(matrix: CommentMatrix | np.ndarray) -> SupportStats:
    """Row-wise t-supports, column sums, agreement, overall support, confidence.

    All standard deviations are sample (n-1) deviations; zero-spread rows get
    t = 0 everywhere.
    """
    c = matrix.strengths if isinstance(matrix, CommentMatrix) else np.asarray(matrix, float)
    if c.ndim != 2 or c.size == 0:
        raise ValueError("comment matrix must be a nonempty 2D array")
    n, m = c.shape

    t = np.zeros_like(c)
    if m > 1:
        means = c.mean(axis=1, keepdims=True)
        sds = c.std(axis=1, ddof=1, keepdims=True)
        nonzero = sds[:, 0] > 0
        t[nonzero] = (c[nonzero] - means[nonzero]) / sds[nonzero]

    sums = c.sum(axis=0)
    mu = float(sums.mean())
    sd = float(sums.std(ddof=1)) if m > 1 else 0.0
    degenerate = m == 1 or sd == 0.0
    overall = (sums - mu) / sd if not degenerate else np.zeros(m)

    frac = sums / (10.0 * n)
    agreement = 2.0 * frac * (1.0 - frac)
    confidence = (0.5 - agreement) * overall
    return SupportStats(t_support=t, column_sums=sums, mean_total=mu,
                        sd_total=sd, agreement=agreement, overall=overall,
                        confidence=confidence, degenerate=degenerate)


@dataclass
class Explanation:
    question: str  # why | confidence | why_not | hypothetical
    text: str
    stats: SupportStats | None = None
    contributors: dict = field(default_factory=lambda: {"support": [], "oppose": []})

    def __post_init__(self):
        if not self.text or self.text[-1] not in ".!?":
            raise ValueError("explanation text must end with terminal punctuation")

    def to_dict(self) -> dict:
        out = {"question": self.question, "text": self.text,
               "contributors": self.contributors, "metrics": None}
        if self.stats is not None:
            out["metrics"] = {
                "column_sums": self.stats.column_sums.tolist(),
                "agreement": self.stats.agreement.tolist(),
                "overall": self.stats.overall.tolist(),
                "confidence": self.stats.confidence.tolist(),
                "t_support": self.stats.t_support.tolist(),
            }
        return out


def _mandate_sentence(action: Action) -> str:
    return (f"I could see our target and {action_phrase(action, 'gerund')} "
            "would get us closer to it.")


def _lastleft_sentence(action: Action, stem: str) -> str:
    if action.is_pause:
        return f"{stem} wait because there's not enough room to move forward."
    return f"{stem} {action_phrase(action)} because my rules left no other option."


def _matrix_index(matrix: CommentMatrix, action: Action) -> int:
    for i, a in enumerate(matrix.actions):
        if a.key() == action.key():
            return i
    raise ValueError(f"action {action} not in comment matrix")


def explain_why(record: DecisionRecord, table: PhraseTable = DEFAULT_TABLE,
                stem: str = "I decided to",
                question: str = "why") -> Explanation:
    """Answer 'Why did you decide to do that?'."""
    if record.decided_by == "tier1_mandate":
        return Explanation(question, _mandate_sentence(record.chosen))
    if record.decided_by == "tier1_lastleft":
        return Explanation(question, _lastleft_sentence(record.chosen, stem))

    stats = compute_stats(record.comments)
    k = _matrix_index(record.comments, record.chosen)
    tcol = stats.t_support[:, k]
    ids = record.comments.advisors

    supporters = [(i, tcol[i]) for i in range(len(ids)) if tcol[i] > OMISSION_HIGH]
    opposers = [(i, tcol[i]) for i in range(len(ids)) if tcol[i] <= OMISSION_LOW]
    if not supporters:
        # no clause survives the omission filter on the supporting side:
        # fall back to the single strongest advisor
        top = int(np.argmax(tcol))
        opposers = [(i, t) for i, t in opposers if i != top]
        supporters = [(top, tcol[top])]

    def clause(i: int, t: float) -> str:
        phrase = table.map_phrase("t_support", t)
        role = "support" if t > 0 else "oppose"
        return f"I {phrase} to {advisor_rationale(ids[i], role)}"

    sup_text = join_clauses([clause(i, t) for i, t in supporters])
    text = f"{stem} {action_phrase(record.chosen)} because {sup_text}."
    if opposers:
        opp_text = join_clauses([clause(i, t) for i, t in opposers])
        text = f"Although {opp_text}, {text}"
    return Explanation(question, text, stats=stats,
                       contributors={"support": [ids[i] for i, _ in supporters],
                                     "oppose": [ids[i] for i, _ in opposers]})


def explain_confidence(record: DecisionRecord,
                       table: PhraseTable = DEFAULT_TABLE) -> Explanation:
    """Answer 'How sure are you that this is the right decision?'."""
    if record.decided_by == "tier1_mandate":
        return Explanation("confidence",
                           "Highly confident, since our target is in sensor range "
                           "and this would get us closer to it.")
    if record.decided_by == "tier1_lastleft":
        return Explanation("confidence",
                           "Highly confident, since there is not enough room "
                           "to move forward.")

    stats = compute_stats(record.comments)
    k = _matrix_index(record.comments, record.chosen)
    G, T, L = stats.agreement[k], stats.overall[k], stats.confidence[k]
    g_label = table.label("agreement", G)
    t_label = table.label("overall_support", T)
    l_label = table.label("confidence", L)
    l_adverb = table.map_phrase("confidence", L)
    g_frag = table.map_phrase("agreement", G)
    t_phrase = table.map_phrase("overall_support", T)

    head = f"I'm {l_adverb} sure about my decision because"
    if g_label == l_label and t_label == l_label:
        text = f"{head} {g_frag}. I {t_phrase} to do this more than anything else."
    elif g_label == l_label:
        text = f"{head} {g_frag}."
    elif t_label == l_label:
        text = f"{head} I {t_phrase} to do this the most."
    else:
        frags = {"g": g_frag, "t": f"I {t_phrase} to do this the most"}
        if _LABEL_ORDER[g_label] <= _LABEL_ORDER[t_label]:
            lower, higher = frags["g"], frags["t"]
        else:
            lower, higher = frags["t"], frags["g"]
        text = f"{head}, even though {lower}, {higher}."
    return Explanation("confidence", text, stats=stats)


def explain_why_not(record: DecisionRecord, alternative: Action,
                    table: PhraseTable = DEFAULT_TABLE) -> Explanation:
    """Answer 'Why not do something else?' for a rejected alternative."""
    keys = [a.key() for a in record.candidates]
    if alternative.key() not in keys:
        raise ValueError(f"{alternative} is not in the candidate set")
    if alternative.key() == record.chosen.key():
        raise ValueError("alternative equals the chosen action")

    alt_phrase = action_phrase(alternative)
    if record.decided_by == "tier1_mandate":
        return Explanation("why_not",
                           f"I decided not to {alt_phrase} because I sense our goal "
                           "and another action would get us closer to it.")
    if alternative.key() in record.tier1.vetoes:
        advisor = record.tier1.vetoes[alternative.key()]
        return Explanation("why_not",
                           f"I decided not to {alt_phrase} because "
                           f"{VETO_RATIONALES[advisor]}.",
                           contributors={"support": [], "oppose": [advisor]})
    if record.comments is None:
        raise ValueError("record has no comment matrix for a tier-3 why-not")

    stats = compute_stats(record.comments)
    k = _matrix_index(record.comments, record.chosen)
    j = _matrix_index(record.comments, alternative)
    ids = record.comments.advisors
    diffs = stats.t_support[:, k] - stats.t_support[:, j]

    prefer_k = [i for i in range(len(ids)) if diffs[i] > CLEAR_PREFERENCE]
    prefer_j = [i for i in range(len(ids)) if diffs[i] < -CLEAR_PREFERENCE]
    if not prefer_k:
        prefer_k = [int(np.argmax(stats.t_support[:, k]))]
    strength = table.map_phrase("support_diff", stats.overall[k] - stats.overall[j])

    k_frags = join_clauses([advisor_rationale(ids[i], "prefer") for i in prefer_k])
    text = f"I thought about {action_phrase(alternative, 'gerund')}"
    if prefer_j:
        j_frags = join_clauses([advisor_rationale(ids[i], "prefer") for i in prefer_j])
        text += f" because it would let us {j_frags}"
    text += (f", but I felt {strength} strongly about "
             f"{action_phrase(record.chosen, 'gerund')} since it lets us {k_frags}.")
    return Explanation("why_not", text, stats=stats,
                       contributors={"support": [ids[i] for i in prefer_k],
                                     "oppose": [ids[i] for i in prefer_j]})


def explain_hypothetical(state: DecisionState, model: SpatialModel,
                         config: SimConfig, table: PhraseTable = DEFAULT_TABLE,
                         phase: str = "move",
                         rng: random.Random | None = None) -> Explanation:
    """Answer 'What would you do here?' without touching the episode or model."""
    rec = decide(state, model, phase, rng or random.Random(0), config)
    out = explain_why(rec, table, stem="I would", question="hypothetical")
    return out
