import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from aneseg.lexicon import (
    AlignmentEntry,
    build_lexicon,
    filter_by_ane,
    filter_types_by_ane,
    rank_types,
    types_from_pairs,
)
from aneseg.segmenter import Segmentation, Token


def seg_of(sid, tokens):
    spans = []
    pos = 0
    toks = []
    for phones, word, ane in tokens:
        span = (pos, pos + len(phones))
        pos = span[1]
        toks.append(Token(phones=tuple(phones), span=span, aligned_word_index=0,
                          aligned_word=word, token_ane=ane))
        spans.append(span)
    bounds = frozenset(s[0] for s in spans[1:])
    return Segmentation(id=sid, tokens=tuple(toks), boundary_set=bounds)


class TestBuildLexicon:
    def test_two_occurrences_one_pair(self):
        segs = [
            seg_of("s1", [(("K", "IH1", "S"), "embrasse", 0.2)]),
            seg_of("s2", [(("K", "IH1", "S"), "embrasse", 0.4)]),
        ]
        types, pairs = build_lexicon(segs)
        assert len(types) == 1 and len(pairs) == 1
        assert types[0].count == 2
        assert types[0].type_ane == pytest.approx(0.3, abs=1e-12)
        assert pairs[0].count == 2
        assert pairs[0].alignment_ane == pytest.approx(0.3, abs=1e-12)

    def test_single_token(self):
        types, pairs = build_lexicon([seg_of("s1", [(("A",), "mot", 0.125)])])
        assert types == [type(types[0])(("A",), 1, 0.125)]
        assert pairs[0].count == 1
        assert pairs[0].alignment_ane == 0.125

    def test_one_type_two_translations(self):
        segs = [
            seg_of("s1", [(("SER1",), "sir", 0.1)]),
            seg_of("s2", [(("SER1",), "chut", 0.3)]),
        ]
        types, pairs = build_lexicon(segs)
        assert len(types) == 1
        assert types[0].count == 2
        assert len(pairs) == 2
        assert all(p.count == 1 for p in pairs)
        assert {p.translation for p in pairs} == {"sir", "chut"}

    def test_sorted_ascending_by_ane(self):
        segs = [seg_of("s1", [(("B",), "b", 0.9), (("A",), "a", 0.1), (("C",), "c", 0.5)])]
        types, pairs = build_lexicon(segs)
        assert [t.type_ane for t in types] == sorted(t.type_ane for t in types)
        assert [p.alignment_ane for p in pairs] == sorted(p.alignment_ane for p in pairs)

    def test_conservation(self):
        rnd = random.Random(0)
        forms = [("a",), ("b", "c"), ("d",), ("e", "f", "g")]
        words = ["u", "v", "w"]
        segs = []
        total = 0
        for i in range(20):
            toks = [(rnd.choice(forms), rnd.choice(words), rnd.random())
                    for _ in range(rnd.randint(1, 6))]
            total += len(toks)
            segs.append(seg_of(f"s{i}", toks))
        types, pairs = build_lexicon(segs)
        assert sum(t.count for t in types) == total
        assert sum(p.count for p in pairs) == total
        # per-type pair counts add up
        for t in types:
            assert sum(p.count for p in pairs if p.type_form == t.type_form) == t.count

    def test_type_ane_is_weighted_mean_of_pairs(self):
        rnd = random.Random(1)
        segs = []
        for i in range(30):
            toks = [(("x", str(rnd.randint(0, 3))), f"w{rnd.randint(0, 2)}", rnd.random())
                    for _ in range(rnd.randint(1, 4))]
            segs.append(seg_of(f"s{i}", toks))
        types, pairs = build_lexicon(segs)
        for t in types:
            mine = [p for p in pairs if p.type_form == t.type_form]
            weighted = sum(p.count * p.alignment_ane for p in mine) / sum(p.count for p in mine)
            assert t.type_ane == pytest.approx(weighted, abs=1e-9)

    def test_types_from_pairs_matches_build(self):
        rnd = random.Random(2)
        segs = []
        for i in range(15):
            toks = [(("y", str(rnd.randint(0, 2))), f"w{rnd.randint(0, 3)}", rnd.random())
                    for _ in range(rnd.randint(1, 5))]
            segs.append(seg_of(f"s{i}", toks))
        types, pairs = build_lexicon(segs)
        rebuilt = types_from_pairs(pairs)
        assert {(t.type_form, t.count) for t in rebuilt} == \
               {(t.type_form, t.count) for t in types}
        by_form = {t.type_form: t.type_ane for t in rebuilt}
        for t in types:
            assert by_form[t.type_form] == pytest.approx(t.type_ane, abs=1e-9)


def entry(form, word, ane, count=1):
    return AlignmentEntry(type_form=form, translation=word, count=count, alignment_ane=ane)


class TestFilterByAne:
    def test_hand_filter(self):
        pairs = [entry(("a",), "u", 0.05), entry(("b",), "v", 0.35), entry(("c",), "w", 0.9)]
        assert filter_by_ane(pairs, 0.4) == {("a",), ("b",)}

    def test_all_keeps_everything(self):
        pairs = [entry(("a",), "u", 0.05), entry(("c",), "w", 0.9)]
        assert filter_by_ane(pairs, "all") == {("a",), ("c",)}

    def test_zero_keeps_exact_zero_only(self):
        pairs = [entry(("a",), "u", 0.0), entry(("b",), "v", 1e-9)]
        assert filter_by_ane(pairs, 0.0) == {("a",)}

    def test_any_pair_semantics(self):
        pairs = [entry(("a",), "u", 0.05), entry(("a",), "v", 0.95)]
        assert filter_by_ane(pairs, 0.1) == {("a",)}
        assert filter_by_ane(pairs, 0.1, require_all_pairs=True) == set()

    def test_monotone_in_threshold(self):
        rnd = random.Random(3)
        pairs = [entry((f"t{i}",), f"w{rnd.randint(0, 4)}", rnd.random())
                 for i in range(40)]
        kept = [filter_by_ane(pairs, t / 10) for t in range(11)]
        for small, big in zip(kept, kept[1:]):
            assert small <= big
        assert kept[-1] == filter_by_ane(pairs, "all")

    def test_threshold_out_of_range(self):
        with pytest.raises(ValueError, match="threshold"):
            filter_by_ane([entry(("a",), "u", 0.5)], 1.5)

    def test_type_level_filter(self):
        types = types_from_pairs([entry(("a",), "u", 0.2, count=3),
                                  entry(("a",), "v", 0.8, count=1),
                                  entry(("b",), "w", 0.9)])
        # type ANE of "a" = (3*0.2 + 0.8)/4 = 0.35
        assert filter_types_by_ane(types, 0.4) == {("a",)}
        assert filter_types_by_ane(types, "all") == {("a",), ("b",)}


class TestRankTypes:
    def test_ascending_limit(self):
        pairs = [entry(("a",), "u", 0.3), entry(("b",), "v", 0.1), entry(("c",), "w", 0.2)]
        got = rank_types(pairs, "ascending", 2)
        assert [e.alignment_ane for e in got] == [0.1, 0.2]

    def test_limit_zero(self):
        assert rank_types([entry(("a",), "u", 0.3)], "ascending", 0) == []

    def test_descending_reverses_distinct(self):
        pairs = [entry((f"t{i}",), "w", ane) for i, ane in enumerate((0.4, 0.1, 0.9, 0.6))]
        asc = rank_types(pairs, "ascending")
        desc = rank_types(pairs, "descending")
        assert desc == list(reversed(asc))

    def test_input_order_irrelevant(self):
        rnd = random.Random(4)
        pairs = [entry((f"t{i % 5}",), f"w{i % 3}", round(rnd.random(), 2))
                 for i in range(20)]
        ref = rank_types(pairs, "ascending")
        shuffled = pairs[:]
        rnd.shuffle(shuffled)
        assert rank_types(shuffled, "ascending") == ref

    def test_ties_lexicographic(self):
        pairs = [entry(("b",), "v", 0.5), entry(("a",), "u", 0.5)]
        got = rank_types(pairs, "ascending")
        assert [e.type_form for e in got] == [("a",), ("b",)]

    def test_bad_direction(self):
        with pytest.raises(ValueError, match="direction"):
            rank_types([], "sideways")

    def test_negative_limit(self):
        with pytest.raises(ValueError, match="limit"):
            rank_types([], "ascending", -1)
