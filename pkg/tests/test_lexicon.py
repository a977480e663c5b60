import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from symbolrec.errors import LexiconError, UnknownBaseSymbol, UnknownId
from symbolrec.history import GlobalBaseline, SymbolHistory, ingest, probabilities
from symbolrec.lexicon import (
    Lexicon,
    MetaSymbolDef,
    invert,
    pseudo_probabilities,
    signal_of,
)

from .conftest import random_records, small_schema


def meta(mid, members, category="area"):
    return MetaSymbolDef(id=mid, name=mid, category=category, members=tuple(members))


class TestFlatten:
    def test_singleton(self):
        lex = Lexicon([meta("A", ["S1"])], base_symbols={"S1"})
        assert lex.flatten("A") == {"S1"}

    def test_union_collapses_duplicates(self):
        lex = Lexicon(
            [meta("A", ["S1", "S2"]), meta("B", ["A", "S2", "S3"])],
            base_symbols={"S1", "S2", "S3"},
        )
        assert lex.flatten("B") == {"S1", "S2", "S3"}

    def test_unknown_id(self):
        lex = Lexicon([meta("A", ["S1"])], base_symbols={"S1"})
        with pytest.raises(UnknownId):
            lex.flatten("Z")

    def test_cycle_reported_with_path(self):
        with pytest.raises(LexiconError) as exc:
            Lexicon(
                [meta("A", ["B"]), meta("B", ["A"])],
                base_symbols=set(),
            )
        assert any("cycle" in p for p in exc.value.problems)

    def test_all_problems_reported_at_once(self):
        with pytest.raises(LexiconError) as exc:
            Lexicon(
                [meta("A", ["B"]), meta("B", ["A"]), meta("C", ["nope"])],
                base_symbols=set(),
            )
        text = " ".join(exc.value.problems)
        assert "cycle" in text and "nope" in text

    def test_self_reference_rejected(self):
        with pytest.raises(LexiconError):
            meta("A", ["A"])

    def test_matches_exhaustive_reachability(self):
        rng = np.random.default_rng(3)
        base = {f"S{i}" for i in range(8)}
        level1 = [meta(f"L1_{i}", rng.choice(sorted(base), 3, replace=False)) for i in range(4)]
        level2 = [
            meta(f"L2_{i}", [f"L1_{j}" for j in rng.choice(4, 2, replace=False)] + ["S0"])
            for i in range(3)
        ]
        lex = Lexicon(level1 + level2, base_symbols=base)

        def reach(mid):
            out = set()
            defs = {d.id: d for d in level1 + level2}
            def walk(x):
                if x in defs:
                    for m in defs[x].members:
                        walk(m)
                else:
                    out.add(x)
            walk(mid)
            return out

        for d in level1 + level2:
            assert lex.flatten(d.id) == reach(d.id)

    def test_unrelated_definition_does_not_change_flatten(self):
        defs = [meta("A", ["S1", "S2"])]
        lex1 = Lexicon(defs, base_symbols={"S1", "S2", "S3"})
        before = lex1.flatten("A")
        lex2 = Lexicon(defs + [meta("B", ["S3"])], base_symbols={"S1", "S2", "S3"})
        assert lex2.flatten("A") == before


class TestMaterialize:
    def setup_method(self):
        self.schema = small_schema(3)
        rng = np.random.default_rng(11)
        self.records = random_records(rng, self.schema, n_symbols=4, n_users=60)
        self.store = ingest(self.records, self.schema)

    def test_single_member_identity(self):
        sid = self.store.symbol_ids[0]
        lex = Lexicon([meta("M", [sid])], base_symbols=set(self.store.symbol_rows))
        h = lex.materialize("M", self.store)
        src = self.store.history(sid)
        assert h.users == src.users
        assert np.array_equal(h.counts, src.counts)

    def test_disjoint_union_adds(self, schema3):
        from symbolrec.history import InteractionRecord

        recs = []
        for i in range(10):
            recs.append(InteractionRecord(f"a{i}", {q.id: "yes" for q in schema3.questions}, frozenset({"S1"})))
        for i in range(15):
            recs.append(InteractionRecord(f"b{i}", {q.id: "no" for q in schema3.questions}, frozenset({"S2"})))
        store = ingest(recs, schema3)
        lex = Lexicon([meta("M", ["S1", "S2"])], base_symbols={"S1", "S2"})
        h = lex.materialize("M", store)
        assert h.n == 25
        assert np.array_equal(
            h.counts, store.history("S1").counts + store.history("S2").counts
        )

    def test_shared_users_deduplicated(self, schema3):
        from symbolrec.history import InteractionRecord

        recs = []
        for i in range(5):  # shared between S1 and S2
            recs.append(InteractionRecord(f"s{i}", {q.id: "yes" for q in schema3.questions}, frozenset({"S1", "S2"})))
        for i in range(5):
            recs.append(InteractionRecord(f"x{i}", {q.id: "no" for q in schema3.questions}, frozenset({"S1"})))
        for i in range(5):
            recs.append(InteractionRecord(f"y{i}", {q.id: "sometimes" for q in schema3.questions}, frozenset({"S2"})))
        store = ingest(recs, schema3)
        lex = Lexicon([meta("M", ["S1", "S2"])], base_symbols={"S1", "S2"})
        h = lex.materialize("M", store)
        assert h.n == 15
        # per-user recount from raw records
        users = {r.user_id: r for r in recs if r.satisfied & {"S1", "S2"}}
        grid = np.zeros((3, 3))
        for rec in users.values():
            for qi, q in enumerate(schema3.questions):
                grid[qi][q.options.index(rec.answers[q.id])] += 1
        assert np.array_equal(h.counts, grid)

    def test_duplicate_members_idempotent(self):
        sids = self.store.symbol_ids[:2]
        base = set(self.store.symbol_rows)
        a = Lexicon([meta("M", sids + [sids[0]])], base_symbols=base).materialize("M", self.store)
        b = Lexicon([meta("M", sids)], base_symbols=base).materialize("M", self.store)
        assert a.users == b.users
        assert np.array_equal(a.counts, b.counts)

    def test_union_monotone_and_subadditive(self):
        sids = self.store.symbol_ids
        base = set(self.store.symbol_rows)
        lex = Lexicon(
            [meta("A", sids[:2]), meta("AB", sids[:3])], base_symbols=base
        )
        ha = lex.materialize("A", self.store)
        hab = lex.materialize("AB", self.store)
        assert ha.users <= hab.users
        assert hab.n <= ha.n + self.store.history(sids[2]).n

    def test_unknown_base_symbol(self):
        lex = Lexicon([meta("M", ["ghost"])])
        with pytest.raises(UnknownBaseSymbol):
            lex.materialize("M", self.store)

    def test_per_question_sums_equal_n(self):
        base = set(self.store.symbol_rows)
        lex = Lexicon([meta("M", self.store.symbol_ids)], base_symbols=base)
        h = lex.materialize("M", self.store)
        assert np.array_equal(h.counts.sum(axis=1), np.full(3, h.n))


class TestSignalAndInverse:
    def baseline_45_37_18(self):
        return GlobalBaseline(
            fractions=np.array([[0.18, 0.37, 0.45]]), total_users=100
        )

    def history_30_40_30(self):
        return SymbolHistory(
            "S", np.array([[30.0, 40.0, 30.0]]), frozenset(f"u{i}" for i in range(100))
        )

    def test_signal_arithmetic(self):
        # actual (30,40,30) vs baseline (0.45,0.37,0.18) scaled by N=100
        h = SymbolHistory(
            "S", np.array([[30.0, 40.0, 30.0]]), frozenset(f"u{i}" for i in range(100))
        )
        b = GlobalBaseline(fractions=np.array([[0.45, 0.37, 0.18]]), total_users=100)
        assert signal_of(h, b)[0] == pytest.approx([-15.0, 3.0, 12.0], abs=1e-12)

    def test_zero_signal_at_baseline(self):
        b = self.baseline_45_37_18()
        h = SymbolHistory(
            "S", b.fractions * 50, frozenset(f"u{i}" for i in range(50))
        )
        assert np.allclose(signal_of(h, b), 0.0, atol=1e-12)

    def test_signal_rows_sum_to_zero(self, fixture_corpus):
        _, store = fixture_corpus
        b = store.baseline()
        for s in store.symbol_rows:
            h = store.history(s)
            assert np.allclose(signal_of(h, b).sum(axis=1), 0.0, atol=1e-9 * max(h.n, 1))

    def test_invert_arithmetic(self):
        # counts (30,40,30), predicted (45,37,18) -> pseudo (60,34,6)
        h = self.history_30_40_30()
        b = GlobalBaseline(fractions=np.array([[0.45, 0.37, 0.18]]), total_users=100)
        inv = invert(h, b)
        assert inv.pseudo_counts[0] == pytest.approx([60.0, 34.0, 6.0], abs=1e-12)

    def test_invert_formula_edges(self):
        h = SymbolHistory("S", np.array([[0.0, 30.0, 70.0]]), frozenset(f"u{i}" for i in range(100)))
        b = GlobalBaseline(fractions=np.array([[0.1, 0.1, 0.8]]), total_users=100)
        inv = invert(h, b)
        assert inv.pseudo_counts[0][0] == pytest.approx(20.0)  # actual 0, predicted 10
        assert inv.pseudo_counts[0][1] == pytest.approx(-10.0)  # actual 30, predicted 10

    def test_zero_signal_fixed_point(self):
        b = self.baseline_45_37_18()
        h = SymbolHistory("S", b.fractions * 40, frozenset(f"u{i}" for i in range(40)))
        inv = invert(h, b)
        assert np.allclose(inv.pseudo_counts, h.counts, atol=1e-12)

    def test_row_sums_preserved(self, fixture_corpus):
        _, store = fixture_corpus
        b = store.baseline()
        for s in store.symbol_rows:
            h = store.history(s)
            inv = invert(h, b)
            assert np.allclose(inv.pseudo_counts.sum(axis=1), h.n, atol=1e-9)

    def test_pseudo_probability_division(self):
        from symbolrec.lexicon import InverseHistory

        inv = InverseHistory("S", np.array([[60.0, 34.0, 6.0]]), 100)
        assert pseudo_probabilities(inv)[0] == pytest.approx([0.6, 0.34, 0.06])

    def test_pseudo_probability_negative_rows_sum_to_one(self):
        from symbolrec.lexicon import InverseHistory

        inv = InverseHistory("S", np.array([[-10.0, 60.0, 50.0]]), 100)
        pp = pseudo_probabilities(inv)
        assert pp[0] == pytest.approx([-0.1, 0.6, 0.5])
        assert pp[0].sum() == pytest.approx(1.0)

    def test_involution_recovers_probabilities(self, fixture_corpus):
        _, store = fixture_corpus
        b = store.baseline()
        for s in store.symbol_rows:
            h = store.history(s)
            twice = invert(invert(h, b), b)
            pv = probabilities(h, store.schema, store.event_user_count, smoothing=0.0)
            assert np.allclose(
                pseudo_probabilities(twice), pv.p, atol=1e-12
            )

    @given(st.integers(min_value=0, max_value=10**6))
    @settings(max_examples=50, deadline=None)
    def test_involution_random_histories(self, seed):
        rng = np.random.default_rng(seed)
        n = int(rng.integers(1, 500))
        q = 4
        counts = rng.multinomial(n, rng.dirichlet(np.ones(3)), size=q).astype(float)
        h = SymbolHistory("S", counts, frozenset(f"u{i}" for i in range(n)))
        fr = rng.dirichlet(np.ones(3), size=q)
        b = GlobalBaseline(fractions=fr, total_users=n)
        twice = invert(invert(h, b), b)
        assert np.allclose(twice.pseudo_counts, counts, atol=1e-12 * max(n, 1))
