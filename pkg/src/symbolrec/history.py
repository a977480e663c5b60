"""Historical model: tabulated survey responses per symbol, baseline, priors.

Ingest is batch-only; a completed HistoryStore is immutable and is the single
shared input for ranking, metrics, and projection.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Iterable, Iterator

import numpy as np

from .errors import (
    ConflictingDuplicateUser,
    EmptyHistory,
    EmptySymbol,
    FormatError,
    IncompleteAnswers,
    UnknownOption,
)
from .schema import FORMAT_VERSION, SurveySchema

DEFAULT_SMOOTHING = 0.5


@dataclass(frozen=True)
class InteractionRecord:
    """One user's complete survey plus the symbols they showed interest in."""

    user_id: str
    answers: dict[str, str]
    satisfied: frozenset[str] = frozenset()


@dataclass(frozen=True)
class SymbolHistory:
    """Response-count matrix for the users who created events for one symbol."""

    symbol_id: str
    counts: np.ndarray  # (Q, max_options) float64, zero outside valid options
    users: frozenset[str]

    @property
    def n(self) -> int:
        return len(self.users)


@dataclass(frozen=True)
class GlobalBaseline:
    """Population response fractions; rows are per-question simplices."""

    fractions: np.ndarray  # (Q, max_options)
    total_users: int


@dataclass(frozen=True)
class ProbabilityVector:
    symbol_id: str
    p: np.ndarray  # (Q, max_options), per-question rows sum to 1
    prior: float


def tabulate(answer_rows: np.ndarray, question_count: int, max_options: int) -> np.ndarray:
    """Count option picks per question over a block of answer-index rows."""
    counts = np.zeros((question_count, max_options), dtype=np.float64)
    if len(answer_rows):
        q_idx = np.broadcast_to(np.arange(question_count), answer_rows.shape)
        np.add.at(counts, (q_idx.ravel(), answer_rows.ravel()), 1.0)
    return counts


class HistoryStore:
    """Immutable result of ingest.

    Keeps the raw answer matrix of event-creating users so that meta-symbol
    histories can be rebuilt from deduplicated user sets.
    """

    def __init__(
        self,
        schema: SurveySchema,
        user_ids: list[str],
        answer_matrix: np.ndarray,
        symbol_rows: dict[str, np.ndarray],
        total_survey_takers: int,
    ):
        self.schema = schema
        self.user_ids = list(user_ids)
        self.answer_matrix = answer_matrix  # (n_event_users, Q) option indices
        self._row_of = {u: i for i, u in enumerate(self.user_ids)}
        self.symbol_rows = {s: np.asarray(r, dtype=np.int64) for s, r in symbol_rows.items()}
        self.total_survey_takers = total_survey_takers
        self._histories: dict[str, SymbolHistory] = {}
        self._baseline: GlobalBaseline | None = None

    @property
    def event_user_count(self) -> int:
        """Users with at least one satisfaction event: the baseline population."""
        return len(self.user_ids)

    @property
    def symbol_ids(self) -> list[str]:
        return sorted(self.symbol_rows)

    def rows_for_users(self, users: Iterable[str]) -> np.ndarray:
        return np.array(sorted(self._row_of[u] for u in users), dtype=np.int64)

    def history(self, symbol_id: str) -> SymbolHistory:
        if symbol_id not in self.symbol_rows:
            raise EmptySymbol(f"no history for symbol {symbol_id!r}")
        if symbol_id not in self._histories:
            rows = self.symbol_rows[symbol_id]
            self._histories[symbol_id] = SymbolHistory(
                symbol_id=symbol_id,
                counts=tabulate(
                    self.answer_matrix[rows],
                    self.schema.question_count,
                    self.schema.max_options,
                ),
                users=frozenset(self.user_ids[i] for i in rows),
            )
        return self._histories[symbol_id]

    def history_for_users(self, symbol_id: str, users: frozenset[str]) -> SymbolHistory:
        """Tabulate an arbitrary (deduplicated) user set, e.g. a meta-symbol's."""
        rows = self.rows_for_users(users)
        return SymbolHistory(
            symbol_id=symbol_id,
            counts=tabulate(
                self.answer_matrix[rows],
                self.schema.question_count,
                self.schema.max_options,
            ),
            users=users,
        )

    def baseline(self) -> GlobalBaseline:
        """Response fractions over all event-creating users."""
        if self.event_user_count == 0:
            raise EmptyHistory("no satisfaction events ingested")
        if self._baseline is None:
            counts = tabulate(
                self.answer_matrix,
                self.schema.question_count,
                self.schema.max_options,
            )
            self._baseline = GlobalBaseline(
                fractions=counts / self.event_user_count,
                total_users=self.event_user_count,
            )
        return self._baseline

    def probabilities(self, symbol_id: str, smoothing: float = DEFAULT_SMOOTHING) -> ProbabilityVector:
        return probabilities(
            self.history(symbol_id), self.schema, self.event_user_count, smoothing
        )


def probabilities(
    h: SymbolHistory,
    schema: SurveySchema,
    total_event_users: int,
    smoothing: float = DEFAULT_SMOOTHING,
) -> ProbabilityVector:
    """Per-question response probabilities with additive smoothing.

    smoothing = 0 gives the raw maximum-likelihood frequencies and requires a
    non-empty history.
    """
    if h.n == 0 and smoothing <= 0:
        raise EmptySymbol(f"symbol {h.symbol_id!r} has no history and no smoothing")
    mask = schema.option_mask()
    opts = schema.options_per_question.astype(np.float64)
    p = np.zeros_like(h.counts)
    denom = h.n + smoothing * opts  # (Q,)
    p[mask] = ((h.counts + smoothing * mask)[mask]) / np.repeat(denom, opts.astype(int))
    prior = h.n / total_event_users if total_event_users else 0.0
    return ProbabilityVector(symbol_id=h.symbol_id, p=p, prior=prior)


def ingest(records: Iterable[InteractionRecord], schema: SurveySchema) -> HistoryStore:
    """Build the historical model from a stream of interaction records.

    Deterministic regardless of record order: users are canonicalized by id.
    Duplicate user_ids are allowed only when the duplicate records agree.
    """
    seen: dict[str, tuple[tuple[int, ...], frozenset[str]]] = {}
    survey_takers = 0
    for rec in records:
        idx = tuple(int(v) for v in schema.answer_indices(rec.answers))
        sat = frozenset(rec.satisfied)
        if rec.user_id in seen:
            if seen[rec.user_id] != (idx, sat):
                raise ConflictingDuplicateUser(
                    f"user {rec.user_id!r} appears twice with different data"
                )
            continue
        seen[rec.user_id] = (idx, sat)
        survey_takers += 1

    event_users = sorted(u for u, (_, sat) in seen.items() if sat)
    answer_matrix = np.array(
        [seen[u][0] for u in event_users], dtype=np.int64
    ).reshape(len(event_users), schema.question_count)

    symbol_rows: dict[str, list[int]] = {}
    for i, u in enumerate(event_users):
        for s in seen[u][1]:
            symbol_rows.setdefault(s, []).append(i)

    return HistoryStore(
        schema=schema,
        user_ids=event_users,
        answer_matrix=answer_matrix,
        symbol_rows={s: np.array(r, dtype=np.int64) for s, r in symbol_rows.items()},
        total_survey_takers=survey_takers,
    )


def ingest_arrays(
    schema: SurveySchema,
    user_ids: list[str],
    answer_matrix: np.ndarray,
    satisfied: list[frozenset[str]],
) -> HistoryStore:
    """Fast-path ingest from pre-validated parallel arrays (one row per user)."""
    order = np.argsort(np.array(user_ids))
    has_event = np.array([bool(satisfied[i]) for i in order])
    event_order = order[has_event]
    event_users = [user_ids[i] for i in event_order]
    matrix = np.asarray(answer_matrix, dtype=np.int64)[event_order]
    symbol_rows: dict[str, list[int]] = {}
    for row, i in enumerate(event_order):
        for s in satisfied[i]:
            symbol_rows.setdefault(s, []).append(row)
    return HistoryStore(
        schema=schema,
        user_ids=event_users,
        answer_matrix=matrix,
        symbol_rows={s: np.array(r, dtype=np.int64) for s, r in symbol_rows.items()},
        total_survey_takers=len(user_ids),
    )


def read_event_log(path, schema: SurveySchema) -> Iterator[InteractionRecord]:
    """Parse the line-delimited event log; first line is the format header."""
    with open(path) as f:
        header_line = f.readline()
        if not header_line.strip():
            raise FormatError("empty event log")
        header = json.loads(header_line)
        if header.get("format_version") != FORMAT_VERSION:
            raise FormatError(
                f"unsupported event log format_version {header.get('format_version')!r}"
            )
        for lineno, line in enumerate(f, start=2):
            if not line.strip():
                continue
            obj = json.loads(line)
            idx = obj["answers"]
            if len(idx) != schema.question_count:
                raise IncompleteAnswers(
                    f"line {lineno}: expected {schema.question_count} answers, got {len(idx)}"
                )
            answers = {}
            for q, v in zip(schema.questions, idx):
                if not 0 <= v < len(q.options):
                    raise UnknownOption(
                        f"line {lineno}: option index {v} out of range for {q.id}"
                    )
                answers[q.id] = q.options[v]
            yield InteractionRecord(
                user_id=obj["user_id"],
                answers=answers,
                satisfied=frozenset(obj.get("satisfied", [])),
            )


def write_event_log(path, schema: SurveySchema, records: Iterable[InteractionRecord]) -> None:
    with open(path, "w") as f:
        f.write(json.dumps({"format_version": FORMAT_VERSION}) + "\n")
        for rec in records:
            idx = [int(v) for v in schema.answer_indices(rec.answers)]
            f.write(
                json.dumps(
                    {
                        "user_id": rec.user_id,
                        "answers": idx,
                        "satisfied": sorted(rec.satisfied),
                    }
                )
                + "\n"
            )
