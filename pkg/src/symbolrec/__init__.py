"""Naive Bayes survey recommender with a recursive meta-symbol lexicon,
meaningfulness metrics, and knowledge-space projection."""

from .history import (
    GlobalBaseline,
    HistoryStore,
    InteractionRecord,
    ProbabilityVector,
    SymbolHistory,
    ingest,
    probabilities,
)
from .lexicon import (
    InverseHistory,
    Lexicon,
    MetaSymbolDef,
    invert,
    pseudo_probabilities,
    signal_of,
)
from .metrics import (
    SymbolMetrics,
    metrics_report,
    relative_signal,
    snr,
    spearman,
    total_signal,
    validate_definitions,
)
from .projection import Embedding, PointCloud, distances, embed, place_point, sammon, vectorize
from .ranker import RankedList, RankEntry, rank, score
from .schema import Question, SurveySchema, default_schema
from .snapshot import ModelSnapshot
from .synthgen import SynthConfig, generate

__version__ = "0.1.0"
