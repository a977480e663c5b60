"""Model snapshots: lossless persistence of a built store plus its lexicon.

The snapshot keeps exact per-symbol user lists (and the event users' answer
rows), so reloading reproduces every ranking, metric, and embedding bit for
bit given the same seeds.
"""

from __future__ import annotations

import json
import time
from dataclasses import dataclass

import numpy as np

from .errors import FormatError
from .history import DEFAULT_SMOOTHING, HistoryStore
from .lexicon import Lexicon
from .ranker import DEFAULT_ALPHA
from .schema import FORMAT_VERSION, SurveySchema


@dataclass
class ModelSnapshot:
    store: HistoryStore
    lexicon: Lexicon | None = None
    smoothing: float = DEFAULT_SMOOTHING
    alpha: float = DEFAULT_ALPHA

    def to_dict(self) -> dict:
        s = self.store
        return {
            "format_version": FORMAT_VERSION,
            "metadata": {
                "record_count": s.total_survey_takers,
                "event_user_count": s.event_user_count,
                "timestamp": time.strftime("%Y-%m-%dT%H:%M:%SZ", time.gmtime()),
                "smoothing": self.smoothing,
                "alpha_default": self.alpha,
            },
            "schema": s.schema.to_dict(),
            "user_ids": s.user_ids,
            "answer_matrix": s.answer_matrix.tolist(),
            "symbol_rows": {
                sid: rows.tolist() for sid, rows in sorted(s.symbol_rows.items())
            },
            "total_survey_takers": s.total_survey_takers,
            "lexicon": self.lexicon.to_dict() if self.lexicon is not None else None,
        }

    def save(self, path) -> None:
        with open(path, "w") as f:
            json.dump(self.to_dict(), f)

    @classmethod
    def from_dict(cls, doc: dict) -> "ModelSnapshot":
        if doc.get("format_version") != FORMAT_VERSION:
            raise FormatError(
                f"unsupported snapshot format_version {doc.get('format_version')!r}"
            )
        schema = SurveySchema.from_dict(doc["schema"])
        store = HistoryStore(
            schema=schema,
            user_ids=doc["user_ids"],
            answer_matrix=np.array(doc["answer_matrix"], dtype=np.int64).reshape(
                len(doc["user_ids"]), schema.question_count
            ),
            symbol_rows={
                sid: np.array(rows, dtype=np.int64)
                for sid, rows in doc["symbol_rows"].items()
            },
            total_survey_takers=doc["total_survey_takers"],
        )
        lex = None
        if doc.get("lexicon") is not None:
            lex = Lexicon.from_dict(doc["lexicon"], base_symbols=set(store.symbol_rows))
        meta = doc.get("metadata", {})
        return cls(
            store=store,
            lexicon=lex,
            smoothing=meta.get("smoothing", DEFAULT_SMOOTHING),
            alpha=meta.get("alpha_default", DEFAULT_ALPHA),
        )

    @classmethod
    def load(cls, path) -> "ModelSnapshot":
        with open(path) as f:
            return cls.from_dict(json.load(f))
