"""Meta-symbol lexicon: recursive definitions, materialized histories, signal,
and inverse (antonym) synthetic symbols.

A meta-symbol's history is the deduplicated union of its members' user sets,
re-tabulated, so per-question counts always sum to the user count.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from graphlib import CycleError, TopologicalSorter

import numpy as np

from .errors import (
    CycleDetected,
    EmptySymbol,
    FormatError,
    LexiconError,
    UnknownBaseSymbol,
    UnknownId,
)
from .history import GlobalBaseline, HistoryStore, SymbolHistory
from .schema import FORMAT_VERSION

INVERSE_PREFIX = "inverse:"


@dataclass(frozen=True)
class MetaSymbolDef:
    id: str
    name: str
    category: str
    members: tuple[str, ...]
    abstraction_level: int | None = None

    def __post_init__(self):
        if not self.members:
            raise LexiconError([f"meta-symbol {self.id!r} has no members"])
        if self.id in self.members:
            raise LexiconError([f"meta-symbol {self.id!r} references itself"])


class Lexicon:
    """Validated DAG of meta-symbol definitions over a set of base symbols."""

    def __init__(self, defs: list[MetaSymbolDef], base_symbols: set[str] | None = None):
        self.defs: dict[str, MetaSymbolDef] = {}
        problems = []
        for d in defs:
            if d.id in self.defs:
                problems.append(f"duplicate definition id {d.id!r}")
            self.defs[d.id] = d
        if base_symbols is not None:
            clash = set(self.defs) & base_symbols
            problems += [f"meta-symbol id {i!r} collides with a base symbol" for i in sorted(clash)]
            for d in defs:
                for m in d.members:
                    if m not in self.defs and m not in base_symbols:
                        problems.append(f"{d.id!r} references unknown id {m!r}")
        cycles = self._find_cycles()
        problems += [f"cycle: {' -> '.join(c)}" for c in cycles]
        if problems:
            raise LexiconError(problems)
        self._flat_cache: dict[str, frozenset[str]] = {}

    def _find_cycles(self) -> list[list[str]]:
        graph = {
            d.id: [m for m in d.members if m in self.defs] for d in self.defs.values()
        }
        cycles = []
        remaining = dict(graph)
        while True:
            ts = TopologicalSorter(remaining)
            try:
                ts.prepare()
                break
            except CycleError as e:
                cycle = list(e.args[1])
                cycles.append(cycle)
                for node in set(cycle):
                    remaining.pop(node, None)
                remaining = {
                    k: [m for m in v if m in remaining or m not in graph]
                    for k, v in remaining.items()
                }
        return cycles

    @property
    def categories(self) -> set[str]:
        return {d.category for d in self.defs.values()}

    def __contains__(self, meta_id: str) -> bool:
        return meta_id in self.defs

    def __len__(self) -> int:
        return len(self.defs)

    def flatten(self, meta_id: str) -> frozenset[str]:
        """Recursive union of members down to base symbols (set semantics)."""
        if meta_id not in self.defs:
            raise UnknownId(f"unknown meta-symbol {meta_id!r}")
        if meta_id not in self._flat_cache:
            out: set[str] = set()
            stack = [meta_id]
            seen = set()
            while stack:
                cur = stack.pop()
                if cur in seen:
                    continue
                seen.add(cur)
                for m in self.defs[cur].members:
                    if m in self.defs:
                        stack.append(m)
                    else:
                        out.add(m)
            self._flat_cache[meta_id] = frozenset(out)
        return self._flat_cache[meta_id]

    def materialize(self, meta_id: str, store: HistoryStore) -> SymbolHistory:
        """History of the deduplicated union of the flattened members' users."""
        users: set[str] = set()
        for base in self.flatten(meta_id):
            if base not in store.symbol_rows:
                raise UnknownBaseSymbol(
                    f"{meta_id!r} flattens to {base!r}, absent from the history"
                )
            users |= store.history(base).users
        return store.history_for_users(meta_id, frozenset(users))

    def to_dict(self) -> dict:
        return {
            "format_version": FORMAT_VERSION,
            "defs": [
                {
                    "id": d.id,
                    "name": d.name,
                    "category": d.category,
                    "members": list(d.members),
                    **(
                        {"abstraction_level": d.abstraction_level}
                        if d.abstraction_level is not None
                        else {}
                    ),
                }
                for d in self.defs.values()
            ],
        }

    @classmethod
    def from_dict(cls, doc: dict, base_symbols: set[str] | None = None) -> "Lexicon":
        if doc.get("format_version") != FORMAT_VERSION:
            raise FormatError(
                f"unsupported lexicon format_version {doc.get('format_version')!r}"
            )
        defs = [
            MetaSymbolDef(
                id=d["id"],
                name=d.get("name", d["id"]),
                category=d["category"],
                members=tuple(d["members"]),
                abstraction_level=d.get("abstraction_level"),
            )
            for d in doc["defs"]
        ]
        return cls(defs, base_symbols=base_symbols)

    def save(self, path) -> None:
        with open(path, "w") as f:
            json.dump(self.to_dict(), f, indent=2)

    @classmethod
    def load(cls, path, base_symbols: set[str] | None = None) -> "Lexicon":
        with open(path) as f:
            return cls.from_dict(json.load(f), base_symbols=base_symbols)


@dataclass(frozen=True)
class InverseHistory:
    """Reflection of a history through the baseline; counts may go negative."""

    source_id: str
    pseudo_counts: np.ndarray  # (Q, max_options) reals
    n: int

    @property
    def symbol_id(self) -> str:
        return INVERSE_PREFIX + self.source_id

    @property
    def counts(self) -> np.ndarray:
        return self.pseudo_counts


def signal_of(h: SymbolHistory | InverseHistory, b: GlobalBaseline) -> np.ndarray:
    """Per-(question, response) deviation from the baseline-predicted counts."""
    return h.counts - b.fractions * h.n


def invert(h: SymbolHistory | InverseHistory, b: GlobalBaseline) -> InverseHistory:
    """Antonym: responses reflected through the baseline prediction.

    Applying it twice recovers the original counts exactly (an involution).
    """
    sid = h.symbol_id
    source = sid[len(INVERSE_PREFIX):] if sid.startswith(INVERSE_PREFIX) else sid
    predicted = b.fractions * h.n
    return InverseHistory(
        source_id=source,
        pseudo_counts=2.0 * predicted - h.counts,
        n=h.n,
    )


def pseudo_probabilities(inv: InverseHistory) -> np.ndarray:
    """Pseudo-counts normalized by history size; rows sum to 1 but entries may
    fall outside [0, 1]."""
    if inv.n < 1:
        raise EmptySymbol(f"inverse of {inv.source_id!r} has empty history")
    return inv.pseudo_counts / inv.n
