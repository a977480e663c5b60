"""Meaningfulness metrics: total signal, shot-noise SNR bound, relative
signal, Spearman rank correlation, and the definition-validation harness.

Only shot noise is quantified, so the reported SNR is an upper bound; other
noise sources (careless answers, ambiguous questions, false events, drift
over the integration window) are real but not modeled.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import (
    DegenerateConstantRanking,
    EmptySymbol,
    MismatchedIdSets,
)
from .history import (
    DEFAULT_SMOOTHING,
    GlobalBaseline,
    HistoryStore,
    SymbolHistory,
    probabilities,
)
from .lexicon import InverseHistory, Lexicon, signal_of
from .ranker import BASE_CATEGORY, score

DEFAULT_MIN_MEMBERS = 4


@dataclass(frozen=True)
class SymbolMetrics:
    symbol_id: str
    category: str
    total_signal: float
    snr: float  # shot-noise upper bound: sqrt(total_signal)
    relative_signal: float
    history_events: int
    member_count: int = 1
    snr_is_upper_bound: bool = True


def total_signal(h: SymbolHistory | InverseHistory, b: GlobalBaseline) -> float:
    """Root sum of squares of the per-(question, response) signal."""
    return float(np.sqrt((signal_of(h, b) ** 2).sum()))


def snr(h: SymbolHistory | InverseHistory, b: GlobalBaseline) -> float:
    """Shot-noise-only signal-to-noise bound: sqrt of the total signal."""
    return float(np.sqrt(total_signal(h, b)))


def relative_signal(h: SymbolHistory | InverseHistory, b: GlobalBaseline) -> float:
    """Total signal with each cell normalized by the history size; invariant
    under uniform scaling of the history."""
    if h.n < 1:
        raise EmptySymbol(f"symbol {h.symbol_id!r} has no history")
    return float(np.sqrt(((signal_of(h, b) / h.n) ** 2).sum()))


def symbol_metrics(
    h: SymbolHistory | InverseHistory,
    b: GlobalBaseline,
    category: str = BASE_CATEGORY,
    member_count: int = 1,
) -> SymbolMetrics:
    ts = total_signal(h, b)
    return SymbolMetrics(
        symbol_id=h.symbol_id,
        category=category,
        total_signal=ts,
        snr=float(np.sqrt(ts)),
        relative_signal=relative_signal(h, b),
        history_events=h.n,
        member_count=member_count,
    )


def _rank_average(values: np.ndarray) -> np.ndarray:
    """Ranks 1..n with ties assigned the average of their positions."""
    values = np.asarray(values, dtype=np.float64)
    order = np.argsort(values, kind="stable")
    ranks = np.empty(len(values), dtype=np.float64)
    i = 0
    while i < len(values):
        j = i
        while j + 1 < len(values) and values[order[j + 1]] == values[order[i]]:
            j += 1
        ranks[order[i : j + 1]] = (i + j) / 2.0 + 1.0
        i = j + 1
    return ranks


def spearman(a, b) -> float:
    """Spearman rank correlation with average-rank tie handling.

    Accepts RankedLists (position is rank), {id: value} maps over the same
    ids, or two aligned numeric arrays.
    """
    xa, xb = _to_aligned_values(a, b)
    if len(xa) < 2:
        raise DegenerateConstantRanking("need at least 2 items")
    ra, rb = _rank_average(xa), _rank_average(xb)
    if np.all(ra == ra[0]) or np.all(rb == rb[0]):
        raise DegenerateConstantRanking("all-tied ranking has no defined correlation")
    ra -= ra.mean()
    rb -= rb.mean()
    return float((ra * rb).sum() / np.sqrt((ra**2).sum() * (rb**2).sum()))


def _to_aligned_values(a, b) -> tuple[np.ndarray, np.ndarray]:
    da, db = _as_rank_map(a), _as_rank_map(b)
    if da is not None or db is not None:
        if da is None or db is None or set(da) != set(db):
            raise MismatchedIdSets("inputs must rank the same id sets")
        ids = sorted(da)
        return (
            np.array([da[i] for i in ids], dtype=np.float64),
            np.array([db[i] for i in ids], dtype=np.float64),
        )
    xa = np.asarray(a, dtype=np.float64)
    xb = np.asarray(b, dtype=np.float64)
    if xa.shape != xb.shape:
        raise MismatchedIdSets("arrays must have the same length")
    return xa, xb


def _as_rank_map(x):
    if hasattr(x, "entries"):  # RankedList: position is the rank
        return {e.id: pos for pos, e in enumerate(x.entries, start=1)}
    if isinstance(x, dict):
        return dict(x)
    return None


@dataclass(frozen=True)
class ValidationResult:
    per_user: list[float]
    mean: float
    pairs_used: list[tuple[str, str]]


def validate_definitions(
    store: HistoryStore,
    lexicon: Lexicon,
    pairs: list[tuple[str, str]],
    users: list[dict[str, str]],
    alpha: float,
    smoothing: float = DEFAULT_SMOOTHING,
    min_members: int = DEFAULT_MIN_MEMBERS,
) -> ValidationResult:
    """Compare how users rank native items against their defined meta-symbol
    counterparts.

    ``pairs`` maps each native base symbol to the meta-symbol defined to
    stand in for it. Defined symbols flattening to fewer than ``min_members``
    base symbols are filtered out (with their native partner). Returns the
    per-user Spearman correlations and their mean.
    """
    kept = [
        (native, defined)
        for native, defined in pairs
        if len(lexicon.flatten(defined)) >= min_members
    ]
    if len(kept) < 2:
        raise MismatchedIdSets(
            f"fewer than 2 pairs survive the min_members={min_members} filter"
        )

    n_users = store.event_user_count
    native_pvs = [store.probabilities(nid, smoothing) for nid, _ in kept]
    defined_pvs = [
        probabilities(lexicon.materialize(did, store), store.schema, n_users, smoothing)
        for _, did in kept
    ]

    per_user = []
    for answers in users:
        idx = store.schema.answer_indices(answers)
        native_scores = [score(pv, idx, alpha) for pv in native_pvs]
        defined_scores = [score(pv, idx, alpha) for pv in defined_pvs]
        per_user.append(spearman(native_scores, defined_scores))
    return ValidationResult(
        per_user=per_user,
        mean=float(np.mean(per_user)),
        pairs_used=kept,
    )


@dataclass(frozen=True)
class CategoryRow:
    category: str
    abstraction_level: float
    mean_relative_signal: float
    mean_snr: float
    mean_history: float
    count: int


@dataclass(frozen=True)
class MetricsReport:
    symbols: list[SymbolMetrics]
    categories: list[CategoryRow]

    def to_dict(self) -> dict:
        return {
            "symbols": [vars(m) | {} for m in self.symbols],
            "categories": [vars(c) | {} for c in self.categories],
            "snr_is_upper_bound": True,
        }

    def to_csv(self) -> str:
        lines = ["id,category,relative_signal,snr,history_events,member_count"]
        for m in self.symbols:
            lines.append(
                f"{m.symbol_id},{m.category},{m.relative_signal:.6g},"
                f"{m.snr:.6g},{m.history_events},{m.member_count}"
            )
        return "\n".join(lines) + "\n"


def metrics_report(store: HistoryStore, lexicon: Lexicon | None) -> MetricsReport:
    """Per-symbol metrics and per-category averages, most abstract first."""
    b = store.baseline()
    rows: list[SymbolMetrics] = []
    level_of: dict[str, list[float]] = {BASE_CATEGORY: [0.0]}
    for sid in store.symbol_ids:
        rows.append(symbol_metrics(store.history(sid), b, BASE_CATEGORY))
    if lexicon is not None:
        for mid in sorted(lexicon.defs):
            d = lexicon.defs[mid]
            h = lexicon.materialize(mid, store)
            rows.append(
                symbol_metrics(h, b, d.category, member_count=len(lexicon.flatten(mid)))
            )
            level_of.setdefault(d.category, []).append(
                float(d.abstraction_level) if d.abstraction_level is not None else 1.0
            )

    cats = []
    for cat, levels in level_of.items():
        members = [m for m in rows if m.category == cat]
        if not members:
            continue
        cats.append(
            CategoryRow(
                category=cat,
                abstraction_level=float(np.mean(levels)),
                mean_relative_signal=float(np.mean([m.relative_signal for m in members])),
                mean_snr=float(np.mean([m.snr for m in members])),
                mean_history=float(np.mean([m.history_events for m in members])),
                count=len(members),
            )
        )
    cats.sort(key=lambda c: (-c.abstraction_level, c.category))
    return MetricsReport(symbols=rows, categories=cats)
