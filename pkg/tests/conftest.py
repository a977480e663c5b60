"""Shared fixtures: tiny deterministic corpora and brute-force oracles."""

from __future__ import annotations

import math

import numpy as np
import pytest

from symbolrec.history import InteractionRecord, ingest
from symbolrec.schema import Question, SurveySchema


def small_schema(n_questions: int = 3, options=("yes", "sometimes", "no")) -> SurveySchema:
    return SurveySchema(
        questions=tuple(
            Question(f"q{i}", f"question {i}", tuple(options)) for i in range(n_questions)
        )
    )


def random_records(
    rng: np.random.Generator,
    schema: SurveySchema,
    n_symbols: int,
    n_users: int,
    event_prob: float = 0.9,
) -> list[InteractionRecord]:
    symbols = [f"S{i}" for i in range(n_symbols)]
    records = []
    for u in range(n_users):
        answers = {
            q.id: q.options[rng.integers(0, len(q.options))] for q in schema.questions
        }
        satisfied = frozenset(
            s for s in symbols if rng.random() < event_prob / max(n_symbols / 2, 1)
        )
        records.append(InteractionRecord(f"u{u:04d}", answers, satisfied))
    return records


def brute_force_scores(
    records: list[InteractionRecord],
    schema: SurveySchema,
    answers: dict[str, str],
    alpha: float = 1.0,
    floor: float = 1e-9,
) -> dict[str, float]:
    """Direct Bayes enumeration with naive nested loops; no shared code with
    the ranking path beyond the clamping policy."""
    seen = {}
    for rec in records:
        seen[rec.user_id] = rec
    event_users = [r for r in seen.values() if r.satisfied]
    symbols = sorted({s for r in event_users for s in r.satisfied})
    scores = {}
    for s in symbols:
        contributors = [r for r in event_users if s in r.satisfied]
        n = len(contributors)
        prior = n / len(event_users)
        total = alpha * math.log(max(prior, floor))
        for q in schema.questions:
            hits = sum(1 for r in contributors if r.answers[q.id] == answers[q.id])
            total += math.log(max(hits / n, floor))
        scores[s] = total
    return scores


@pytest.fixture
def schema3():
    return small_schema(3)


@pytest.fixture
def fixture_corpus(schema3):
    rng = np.random.default_rng(42)
    records = random_records(rng, schema3, n_symbols=5, n_users=200)
    return records, ingest(records, schema3)
