"""Log-space Naive Bayes scoring and ranking of symbols and meta-symbols.

One scoring path serves base symbols, materialized meta-symbols, and inverse
synthetic symbols alike; the prior's influence is an exponent weight alpha
(alpha = 1 strict Bayes, alpha = 0 popularity-blind).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import IncompleteAnswers, UnknownFocusCategory
from .history import DEFAULT_SMOOTHING, HistoryStore, ProbabilityVector
from .lexicon import INVERSE_PREFIX, Lexicon, invert, pseudo_probabilities
from .schema import SurveySchema

DEFAULT_ALPHA = 0.25
PROB_FLOOR = 1e-9
BASE_CATEGORY = "base"


@dataclass(frozen=True)
class RankEntry:
    id: str
    log_score: float
    category: str


@dataclass(frozen=True)
class RankedList:
    entries: tuple[RankEntry, ...]
    alpha: float
    focus: frozenset[str] | None = None

    @property
    def ids(self) -> list[str]:
        return [e.id for e in self.entries]


def score(
    pv: ProbabilityVector,
    answer_idx: np.ndarray,
    alpha: float,
    floor: float = PROB_FLOOR,
) -> float:
    """alpha-weighted log prior plus summed log response probabilities.

    ``answer_idx`` holds one option index per question; -1 marks an
    unanswered question, which is skipped (partial ranking). Probabilities
    are clamped at ``floor`` so zero and negative (pseudo) values rank as
    maximally unlikely instead of blowing up the log.
    """
    answered = answer_idx >= 0
    if not answered.any():
        raise IncompleteAnswers("no questions answered")
    q = np.nonzero(answered)[0]
    p = pv.p[q, answer_idx[q]]
    return alpha * np.log(max(pv.prior, floor)) + float(
        np.log(np.maximum(p, floor)).sum()
    )


def _known_categories(lexicon: Lexicon | None) -> set[str]:
    cats = {BASE_CATEGORY}
    if lexicon is not None:
        cats |= lexicon.categories
    cats |= {INVERSE_PREFIX + c for c in set(cats)}
    return cats


def rank(
    store: HistoryStore,
    lexicon: Lexicon | None,
    answers: dict[str, str],
    alpha: float = DEFAULT_ALPHA,
    focus: set[str] | None = None,
    limit: int | None = None,
    smoothing: float = DEFAULT_SMOOTHING,
    partial: bool = False,
) -> RankedList:
    """Score every base symbol and meta-symbol, sort descending.

    Inverse symbols are analyst-facing: they enter the list only when the
    focus explicitly names an ``inverse:<category>``. Ties break by
    ascending id so repeated runs agree exactly.
    """
    schema = store.schema
    answer_idx = schema.answer_indices(answers, partial=partial)

    if focus is not None:
        unknown = set(focus) - _known_categories(lexicon)
        if unknown:
            raise UnknownFocusCategory(f"unknown focus categories: {sorted(unknown)}")

    def wanted(category: str) -> bool:
        return focus is None or category in focus

    inverse_wanted = focus is not None and any(
        c.startswith(INVERSE_PREFIX) for c in focus
    )

    candidates: list[tuple[str, str, ProbabilityVector]] = []
    baseline = store.baseline() if inverse_wanted else None

    def add(entry_id: str, category: str, pv: ProbabilityVector) -> None:
        candidates.append((entry_id, category, pv))

    for sid in store.symbol_ids:
        if wanted(BASE_CATEGORY):
            add(sid, BASE_CATEGORY, store.probabilities(sid, smoothing))
        if focus is not None and (INVERSE_PREFIX + BASE_CATEGORY) in focus:
            inv = invert(store.history(sid), baseline)
            pv = store.probabilities(sid, smoothing)
            add(
                inv.symbol_id,
                INVERSE_PREFIX + BASE_CATEGORY,
                ProbabilityVector(inv.symbol_id, pseudo_probabilities(inv), pv.prior),
            )

    if lexicon is not None:
        from .history import probabilities as _probabilities

        for mid in sorted(lexicon.defs):
            d = lexicon.defs[mid]
            h = lexicon.materialize(mid, store)
            if wanted(d.category):
                add(
                    mid,
                    d.category,
                    _probabilities(h, schema, store.event_user_count, smoothing),
                )
            if focus is not None and (INVERSE_PREFIX + d.category) in focus:
                inv = invert(h, baseline)
                add(
                    inv.symbol_id,
                    INVERSE_PREFIX + d.category,
                    ProbabilityVector(
                        inv.symbol_id,
                        pseudo_probabilities(inv),
                        h.n / store.event_user_count,
                    ),
                )

    entries = [
        RankEntry(id=eid, log_score=score(pv, answer_idx, alpha), category=cat)
        for eid, cat, pv in candidates
    ]
    entries.sort(key=lambda e: (-e.log_score, e.id))
    if limit is not None:
        entries = entries[:limit]
    return RankedList(
        entries=tuple(entries),
        alpha=alpha,
        focus=frozenset(focus) if focus is not None else None,
    )
