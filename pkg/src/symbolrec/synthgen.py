"""Seeded synthetic populations with ground-truth interest archetypes.

Each archetype is a latent interest profile: a per-question response
distribution and an affinity boost toward its own symbols. Symbol
popularity is drawn log-uniform over three orders of magnitude, matching
the skew real recommenders see. Every output is fully determined by the
seed.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from .errors import InvalidDistribution
from .history import HistoryStore, InteractionRecord, ingest_arrays, write_event_log
from .lexicon import Lexicon, MetaSymbolDef
from .schema import SurveySchema, default_schema

CAREER_PREFIX = "career:"


@dataclass(frozen=True)
class SynthConfig:
    question_count: int = 26
    options_per_question: int = 3
    archetype_count: int = 10
    base_symbol_count: int = 100
    career_count: int = 8
    users: int = 50_000
    mean_events_per_user: float = 3.0
    concentration: float = 6.0  # peakedness of archetype answer distributions
    affinity_boost: float = 2.0  # own-archetype symbol preference multiplier
    own_exponent: float = 0.6  # devotee attention vs popularity, sublinear
    casual_exponent: float = 1.5  # cross-archetype attention vs popularity
    career_affinity_boost: float = 8.0
    career_event_fraction: float = 0.25
    seed: int = 0

    def validate(self) -> None:
        if self.archetype_count < 1 or self.base_symbol_count < self.archetype_count:
            raise InvalidDistribution("need >= 1 archetype and >= 1 symbol each")
        if self.mean_events_per_user <= 0 or self.concentration <= 0:
            raise InvalidDistribution("rates must be positive")

    def to_dict(self) -> dict:
        return vars(self) | {}

    @classmethod
    def from_dict(cls, doc: dict) -> "SynthConfig":
        return cls(**doc)

    @classmethod
    def load(cls, path) -> "SynthConfig":
        with open(path) as f:
            return cls.from_dict(json.load(f))


@dataclass(frozen=True)
class GroundTruth:
    symbol_archetype: dict[str, int]
    user_archetype: dict[str, int]
    career_span: dict[str, tuple[int, ...]]  # career id -> archetypes it spans
    answer_dists: np.ndarray  # (K, Q, R) archetype response distributions

    def symbols_of(self, archetype: int) -> list[str]:
        return sorted(s for s, a in self.symbol_archetype.items() if a == archetype)


@dataclass(frozen=True)
class SynthCorpus:
    schema: SurveySchema
    user_ids: list[str]
    answers: np.ndarray  # (users, Q) option indices
    satisfied: list[frozenset[str]]
    store: HistoryStore
    truth: GroundTruth
    lexicon: Lexicon
    config: SynthConfig

    def iter_records(self):
        for i, u in enumerate(self.user_ids):
            yield InteractionRecord(
                user_id=u,
                answers=self.schema.answers_from_indices(self.answers[i]),
                satisfied=self.satisfied[i],
            )

    def answer_vector(self, user_id: str) -> dict[str, str]:
        i = self.user_ids.index(user_id)
        return self.schema.answers_from_indices(self.answers[i])


def _archetype_answer_dists(rng, cfg: SynthConfig) -> np.ndarray:
    k, q, r = cfg.archetype_count, cfg.question_count, cfg.options_per_question
    dists = rng.dirichlet(np.ones(r), size=(k, q))
    # sharpen: push mass toward each archetype's favored option per question
    favored = rng.integers(0, r, size=(k, q))
    boost = np.zeros((k, q, r))
    boost[np.arange(k)[:, None], np.arange(q)[None, :], favored] = 1.0
    dists = dists + cfg.concentration * boost * rng.uniform(0.3, 1.0, size=(k, q, 1))
    return dists / dists.sum(axis=-1, keepdims=True)


def reference_lexicon(truth: GroundTruth, cfg: SynthConfig, present: set[str]) -> Lexicon:
    """Per-archetype 'area' groupings, an all-symbols aggregate, and
    cross-archetype 'career' groupings.

    Only symbols that actually accumulated history are usable as members, so
    definitions are filtered to ``present``.
    """
    defs = []
    for a in range(cfg.archetype_count):
        members = [s for s in truth.symbols_of(a) if s in present]
        if members:
            defs.append(
                MetaSymbolDef(
                    id=f"area:{a}",
                    name=f"Area {a}",
                    category="area",
                    members=tuple(members),
                    abstraction_level=2,
                )
            )
    defs.append(
        MetaSymbolDef(
            id="all_symbols",
            name="Everything",
            category="aggregate",
            members=tuple(sorted(present)),
            abstraction_level=3,
        )
    )
    for cid, span in truth.career_span.items():
        members = []
        for a in span:
            members += [s for s in truth.symbols_of(a) if s in present]
        if members:
            defs.append(
                MetaSymbolDef(
                    id=f"defined:{cid}",
                    name=f"Defined {cid}",
                    category="career",
                    members=tuple(members),
                    abstraction_level=2,
                )
            )
    return Lexicon(defs, base_symbols=present)


def generate(cfg: SynthConfig) -> SynthCorpus:
    """Draw a full population: archetyped users, answers, satisfaction events.

    Project symbols carry a log-uniform popularity over 3 decades. Users
    prefer their own archetype's symbols by ``affinity_boost``, spread
    nearly evenly over them (``own_exponent``), while their out-of-area
    picks chase popular symbols (``casual_exponent``). Career symbols span
    two archetypes each and receive a fixed fraction of events, giving them
    native histories to validate defined counterparts against.
    """
    cfg.validate()
    rng = np.random.default_rng(cfg.seed)
    k, q, r = cfg.archetype_count, cfg.question_count, cfg.options_per_question

    schema = default_schema(q)
    if r != 3:
        raise InvalidDistribution("only the 3-option survey is generated")

    symbol_ids = [f"s{i:03d}" for i in range(cfg.base_symbol_count)]
    symbol_arch = np.arange(cfg.base_symbol_count) % k
    popularity = 10.0 ** rng.uniform(-3.0, 0.0, size=cfg.base_symbol_count)

    career_ids = [f"{CAREER_PREFIX}{i}" for i in range(cfg.career_count)]
    career_span = {
        cid: tuple(int(a) for a in sorted(rng.choice(k, size=min(2, k), replace=False)))
        for cid in career_ids
    }
    career_pop = 10.0 ** rng.uniform(-1.5, 0.0, size=cfg.career_count)

    answer_dists = _archetype_answer_dists(rng, cfg)

    user_arch = rng.integers(0, k, size=cfg.users)
    user_ids = [f"u{i:06d}" for i in range(cfg.users)]

    # vectorized answer sampling: per archetype block, per question
    answers = np.empty((cfg.users, q), dtype=np.int64)
    for a in range(k):
        rows = np.nonzero(user_arch == a)[0]
        if not len(rows):
            continue
        u = rng.random(size=(len(rows), q))
        cdf = answer_dists[a].cumsum(axis=-1)  # (Q, R)
        answers[rows] = (u[:, :, None] > cdf[None, :, :]).sum(axis=-1)

    # event counts and symbol choices
    n_events = rng.poisson(cfg.mean_events_per_user, size=cfg.users)
    # per-archetype symbol choice distributions
    # devotees spread over their own area's symbols almost evenly (sublinear
    # popularity exponent); casual outside interest chases popularity
    # superlinearly, so popular symbols fill up with weakly matched users
    sym_weight = np.empty((k, cfg.base_symbol_count))
    for a in range(k):
        w = np.where(
            symbol_arch == a,
            cfg.affinity_boost * popularity**cfg.own_exponent,
            popularity**cfg.casual_exponent,
        )
        sym_weight[a] = w / w.sum()
    car_weight = np.empty((k, cfg.career_count))
    for a in range(k):
        w = career_pop * np.array(
            [cfg.career_affinity_boost if a in career_span[c] else 1.0 for c in career_ids]
        )
        car_weight[a] = w / w.sum()

    n_career = rng.binomial(n_events, cfg.career_event_fraction)
    n_project = n_events - n_career
    picks: list[set[str]] = [set() for _ in range(cfg.users)]
    for a in range(k):
        rows = np.nonzero(user_arch == a)[0]
        if not len(rows):
            continue
        proj_counts = n_project[rows]
        total = int(proj_counts.sum())
        if total:
            drawn = rng.choice(cfg.base_symbol_count, size=total, p=sym_weight[a])
            owner = np.repeat(rows, proj_counts)
            for row, j in zip(owner, drawn):
                picks[row].add(symbol_ids[j])
        car_counts = n_career[rows]
        total = int(car_counts.sum())
        if total:
            drawn = rng.choice(cfg.career_count, size=total, p=car_weight[a])
            owner = np.repeat(rows, car_counts)
            for row, j in zip(owner, drawn):
                picks[row].add(career_ids[j])
    satisfied = [frozenset(p) for p in picks]

    store = ingest_arrays(schema, user_ids, answers, satisfied)
    truth = GroundTruth(
        symbol_archetype={s: int(a) for s, a in zip(symbol_ids, symbol_arch)},
        user_archetype={u: int(a) for u, a in zip(user_ids, user_arch)},
        career_span=career_span,
        answer_dists=answer_dists,
    )
    lexicon = reference_lexicon(truth, cfg, set(store.symbol_rows))
    return SynthCorpus(
        schema=schema,
        user_ids=user_ids,
        answers=answers,
        satisfied=satisfied,
        store=store,
        truth=truth,
        lexicon=lexicon,
        config=cfg,
    )


def write_corpus(corpus: SynthCorpus, out_dir) -> None:
    """Emit event log, schema, lexicon, and ground truth to a directory."""
    import os

    os.makedirs(out_dir, exist_ok=True)
    corpus.schema.save(os.path.join(out_dir, "schema.json"))
    write_event_log(
        os.path.join(out_dir, "events.jsonl"), corpus.schema, corpus.iter_records()
    )
    corpus.lexicon.save(os.path.join(out_dir, "lexicon.json"))
    with open(os.path.join(out_dir, "ground_truth.json"), "w") as f:
        json.dump(
            {
                "symbol_archetype": corpus.truth.symbol_archetype,
                "user_archetype": corpus.truth.user_archetype,
                "career_span": {c: list(s) for c, s in corpus.truth.career_span.items()},
            },
            f,
            indent=2,
        )
    with open(os.path.join(out_dir, "config.json"), "w") as f:
        json.dump(corpus.config.to_dict(), f, indent=2)
