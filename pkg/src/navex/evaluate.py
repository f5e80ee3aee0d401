"""Evaluation harness: timing, unique phrasings, readability, metric histograms."""
from __future__ import annotations

import time
from dataclasses import dataclass, field

import numpy as np

from .controller import DecisionRecord
from .explain import compute_stats, explain_confidence, explain_why, explain_why_not
from .phrases import PhraseTable, DEFAULT_TABLE

_TERMINAL = ".!?"

METRIC_KEYS = ("agreement", "overall", "confidence", "t_diff", "support_diff")
_BUCKETS = ("low", "medium", "high")


def coleman_liau(text: str) -> float:
    """Coleman-Liau grade: 0.0588*L - 0.296*S - 15.8.

    L is letters per 100 words, S sentences per 100 words.  Letters are
    alphabetic characters, words are whitespace-separated tokens, sentences
    are runs of terminal punctuation.
    """
    words = text.split()
    if not words:
        raise ValueError("cannot score empty text")
    letters = sum(1 for ch in text if ch.isalpha())
    sentences = 0
    in_run = False
    for ch in text:
        if ch in _TERMINAL:
            if not in_run:
                sentences += 1
            in_run = True
        else:
            in_run = False
    sentences = max(sentences, 1)
    L = 100.0 * letters / len(words)
    S = 100.0 * sentences / len(words)
    return 0.0588 * L - 0.296 * S - 15.8


def _bucket(table: PhraseTable, metric: str, value: float) -> str:
    return table.label(metric, value)


@dataclass
class EvalReport:
    decision_counts: dict = field(default_factory=dict)   # tier -> count
    latency_ms: dict = field(default_factory=dict)        # tier -> mean ms per ask
    unique_phrasings: dict = field(default_factory=dict)  # question -> count
    readability: dict = field(default_factory=dict)       # question -> mean grade
    histograms: dict = field(default_factory=dict)        # metric -> {bucket: pct}
    skipped: int = 0

    def to_dict(self) -> dict:
        return {"decision_counts": self.decision_counts,
                "latency_ms": self.latency_ms,
                "unique_phrasings": self.unique_phrasings,
                "readability": self.readability,
                "histograms": self.histograms,
                "skipped": self.skipped}

    def to_text(self) -> str:
        lines = ["# evaluation report",
                 "# readability averaged per explanation, then per question",
                 ""]
        lines.append("decisions: " + ", ".join(
            f"tier{t}={c}" for t, c in sorted(self.decision_counts.items())))
        if self.latency_ms:
            lines.append("mean ask latency (ms): " + ", ".join(
                f"tier{t}={v:.3f}" for t, v in sorted(self.latency_ms.items())))
        lines.append("unique phrasings: " + ", ".join(
            f"{q}={c}" for q, c in sorted(self.unique_phrasings.items())))
        lines.append("readability (grade): " + ", ".join(
            f"{q}={v:.2f}" for q, v in sorted(self.readability.items())))
        lines.append("")
        for metric in METRIC_KEYS:
            row = self.histograms.get(metric)
            if row is None:
                continue
            lines.append(f"{metric:>13}: " + "  ".join(
                f"{b}={row[b]:6.2f}%" for b in _BUCKETS))
        if self.skipped:
            lines.append(f"skipped malformed records: {self.skipped}")
        return "\n".join(lines) + "\n"


def corpus_report(records: list[DecisionRecord],
                  table: PhraseTable = DEFAULT_TABLE) -> EvalReport:
    """Pure fold over a decision log: Table-style metrics at desk scale."""
    if not records:
        raise ValueError("log is empty")
    report = EvalReport()
    counts = {1: 0, 3: 0}
    lat: dict[int, list[float]] = {1: [], 3: []}
    texts: dict[str, list[str]] = {"why": [], "confidence": [], "why_not": []}
    hist = {m: {b: 0 for b in _BUCKETS} for m in METRIC_KEYS}

    for rec in records:
        try:
            tier = 3 if rec.decided_by == "tier3" else 1
            asks: list[tuple[str, object]] = []
            t0 = time.perf_counter()
            asks.append(("why", explain_why(rec, table)))
            asks.append(("confidence", explain_confidence(rec, table)))
            for alt in rec.candidates:
                if alt.key() != rec.chosen.key():
                    asks.append(("why_not", explain_why_not(rec, alt, table)))
            elapsed_ms = (time.perf_counter() - t0) * 1e3
            lat[tier].append(elapsed_ms / len(asks))
            for q, exp in asks:
                texts[q].append(exp.text)
            counts[tier] += 1

            if tier == 3:
                stats = compute_stats(rec.comments)
                k = next(i for i, a in enumerate(rec.comments.actions)
                         if a.key() == rec.chosen.key())
                hist["agreement"][_bucket(table, "agreement", stats.agreement[k])] += 1
                hist["overall"][_bucket(table, "overall_support", stats.overall[k])] += 1
                hist["confidence"][_bucket(table, "confidence", stats.confidence[k])] += 1
                for j in range(len(rec.comments.actions)):
                    if j == k:
                        continue
                    for i in range(len(rec.comments.advisors)):
                        d = stats.t_support[i, k] - stats.t_support[i, j]
                        hist["t_diff"][_bucket(table, "t_diff", d)] += 1
                    td = stats.overall[k] - stats.overall[j]
                    hist["support_diff"][_bucket(table, "support_diff", td)] += 1
        except (ValueError, KeyError, StopIteration):
            report.skipped += 1

    report.decision_counts = {t: c for t, c in counts.items() if c}
    report.latency_ms = {t: float(np.mean(v)) for t, v in lat.items() if v}
    report.unique_phrasings = {q: len(set(v)) for q, v in texts.items()}
    report.readability = {q: float(np.mean([coleman_liau(t) for t in v]))
                          for q, v in texts.items() if v}
    all_texts = [t for v in texts.values() for t in v]
    if all_texts:
        report.readability["overall"] = float(
            np.mean([coleman_liau(t) for t in all_texts]))
    for metric, row in hist.items():
        total = sum(row.values())
        report.histograms[metric] = (
            {b: 100.0 * c / total for b, c in row.items()} if total
            else {b: 0.0 for b in _BUCKETS})
    return report
