"""Survey schema: the questions, their answer options, and answer vectors.

The knowledge space is the product of one simplex per question; its total
dimension D is the sum of option counts over all questions.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from .errors import (
    FormatError,
    IncompleteAnswers,
    SchemaError,
    UnknownOption,
    UnknownQuestion,
)

DEFAULT_OPTIONS = ("yes", "sometimes", "no")

FORMAT_VERSION = 1


@dataclass(frozen=True)
class Question:
    id: str
    text: str
    options: tuple[str, ...] = DEFAULT_OPTIONS

    def __post_init__(self):
        if len(self.options) < 2:
            raise SchemaError(f"question {self.id!r} needs >= 2 options")
        if len(set(self.options)) != len(self.options):
            raise SchemaError(f"question {self.id!r} has duplicate options")


@dataclass(frozen=True)
class SurveySchema:
    """Ordered list of questions; every user answers all of them."""

    questions: tuple[Question, ...]
    _q_index: dict = field(default_factory=dict, repr=False, compare=False)
    _opt_index: dict = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self):
        if not self.questions:
            raise SchemaError("schema needs at least one question")
        ids = [q.id for q in self.questions]
        if len(set(ids)) != len(ids):
            raise SchemaError("duplicate question ids")
        self._q_index.update({q.id: i for i, q in enumerate(self.questions)})
        for q in self.questions:
            for j, opt in enumerate(q.options):
                self._opt_index[(q.id, opt)] = j

    @property
    def question_count(self) -> int:
        return len(self.questions)

    @property
    def options_per_question(self) -> np.ndarray:
        return np.array([len(q.options) for q in self.questions])

    @property
    def max_options(self) -> int:
        return max(len(q.options) for q in self.questions)

    @property
    def dimension(self) -> int:
        """D = sum of option counts; 26 x 3 = 78 in the default survey."""
        return int(self.options_per_question.sum())

    def option_mask(self) -> np.ndarray:
        """Boolean (Q, max_options) mask of valid option slots."""
        mask = np.zeros((self.question_count, self.max_options), dtype=bool)
        for i, q in enumerate(self.questions):
            mask[i, : len(q.options)] = True
        return mask

    def question_index(self, question_id: str) -> int:
        try:
            return self._q_index[question_id]
        except KeyError:
            raise UnknownQuestion(f"unknown question id {question_id!r}") from None

    def option_index(self, question_id: str, option_id: str) -> int:
        self.question_index(question_id)
        try:
            return self._opt_index[(question_id, option_id)]
        except KeyError:
            raise UnknownOption(
                f"question {question_id!r} has no option {option_id!r}"
            ) from None

    def answer_indices(self, answers: dict[str, str], partial: bool = False) -> np.ndarray:
        """Map {question_id: option_id} to an option-index array over questions.

        Missing questions raise IncompleteAnswers unless ``partial`` is set,
        in which case their slot is -1.
        """
        idx = np.full(self.question_count, -1, dtype=np.int64)
        for qid, oid in answers.items():
            idx[self.question_index(qid)] = self.option_index(qid, oid)
        if not partial and (idx < 0).any():
            missing = [q.id for q, v in zip(self.questions, idx) if v < 0]
            raise IncompleteAnswers(f"missing answers for questions: {missing}")
        if not answers and partial:
            raise IncompleteAnswers("no questions answered")
        return idx

    def answers_from_indices(self, idx) -> dict[str, str]:
        out = {}
        for q, v in zip(self.questions, idx):
            if v >= 0:
                out[q.id] = q.options[int(v)]
        return out

    def to_dict(self) -> dict:
        return {
            "format_version": FORMAT_VERSION,
            "questions": [
                {"id": q.id, "text": q.text, "options": list(q.options)}
                for q in self.questions
            ],
        }

    @classmethod
    def from_dict(cls, doc: dict) -> "SurveySchema":
        if doc.get("format_version") != FORMAT_VERSION:
            raise FormatError(
                f"unsupported schema format_version {doc.get('format_version')!r}"
            )
        return cls(
            questions=tuple(
                Question(q["id"], q.get("text", q["id"]), tuple(q["options"]))
                for q in doc["questions"]
            )
        )

    def save(self, path) -> None:
        with open(path, "w") as f:
            json.dump(self.to_dict(), f, indent=2)

    @classmethod
    def load(cls, path) -> "SurveySchema":
        with open(path) as f:
            return cls.from_dict(json.load(f))


def default_schema(question_count: int = 26) -> SurveySchema:
    """Yes/sometimes/no interest survey with the production question count."""
    return SurveySchema(
        questions=tuple(
            Question(id=f"q{i + 1:02d}", text=f"Interest question {i + 1}")
            for i in range(question_count)
        )
    )
