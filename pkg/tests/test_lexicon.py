"""Translation-lexicon estimation and the title merge."""

import numpy as np
import pytest

from bimine.lexicon import Lexicon, build_lexicon, merge_title_lexicon, read_lexicon, write_lexicon
from bimine.text import tokenize

from oracles import em_translation_oracle

# Frozen from the EM oracle on [("a b","x y"), ("a","x")] at 10 iterations.
TWO_PAIR_P_X_GIVEN_A = 0.99951171875
TWO_PAIR_P_Y_GIVEN_A = 0.00048828125


class TestBuildLexicon:
    def test_single_cooccurrence_is_certain(self):
        lexicon = build_lexicon([("a", "x")], iterations=5)
        assert lexicon.prob("a", "x") == 1.0

    def test_two_pair_corpus_matches_oracle(self):
        lexicon = build_lexicon([("a b", "x y"), ("a", "x")], iterations=10)
        assert lexicon.prob("a", "x") == pytest.approx(TWO_PAIR_P_X_GIVEN_A, abs=1e-12)
        assert lexicon.prob("a", "y") == pytest.approx(TWO_PAIR_P_Y_GIVEN_A, abs=1e-12)
        assert lexicon.prob("a", "x") > lexicon.prob("a", "y")
        # b never gets disambiguating evidence in this direction
        assert lexicon.prob("b", "x") == pytest.approx(0.5, abs=1e-12)

    def test_cyclic_corpus_argmax(self):
        lexicon = build_lexicon(
            [("a b", "x y"), ("b c", "y z"), ("c a", "z x")], iterations=10
        )
        for s, expected in (("a", "x"), ("b", "y"), ("c", "z")):
            row = lexicon.translations(s)
            assert max(row, key=row.get) == expected

    def test_matches_oracle_on_random_corpus(self):
        rng = np.random.default_rng(8)
        vocab_s = [f"s{i}" for i in range(6)]
        vocab_t = [f"t{i}" for i in range(6)]
        pairs = []
        for _ in range(30):
            idx = rng.integers(0, 6, size=rng.integers(2, 6))
            pairs.append(
                (" ".join(vocab_s[i] for i in idx), " ".join(vocab_t[i] for i in idx))
            )
        lexicon = build_lexicon(pairs, iterations=7, prune_threshold=0.0)
        oracle = em_translation_oracle(
            [(tokenize(s), tokenize(t)) for s, t in pairs], iterations=7
        )
        for s, row in oracle.items():
            for t, p in row.items():
                assert lexicon.prob(s, t) == pytest.approx(p, abs=1e-9)

    def test_rows_sum_to_one_before_pruning(self):
        pairs = [("a b c", "x y z"), ("a", "x"), ("b c", "y z")]
        lexicon = build_lexicon(pairs, iterations=6, prune_threshold=0.0)
        for s in lexicon.source_tokens():
            assert sum(lexicon.translations(s).values()) == pytest.approx(1.0, abs=1e-9)

    def test_pruning_drops_tiny_entries(self):
        lexicon = build_lexicon([("a b", "x y"), ("a", "x")] * 3, iterations=25)
        assert lexicon.prob("a", "y") == 0.0  # fell below the prune threshold
        assert lexicon.prob("a", "x") > 0.999

    def test_empty_input_is_an_error(self):
        with pytest.raises(ValueError, match="no training pairs"):
            build_lexicon([], iterations=3)
        with pytest.raises(ValueError, match="no training pairs"):
            build_lexicon([("...", "!!!")], iterations=3)


class TestMergeTitles:
    def test_title_into_empty_lexicon(self):
        merged, skipped = merge_title_lexicon(Lexicon({}), [("Dog", "Pies")])
        assert skipped == 0
        assert merged.prob("dog", "pies") == 1.0

    def test_renormalizes_existing_row(self):
        merged, _ = merge_title_lexicon(Lexicon({"dog": {"cat": 1.0}}), [("Dog", "Pies")])
        row = merged.translations("dog")
        assert row["cat"] == pytest.approx(2.0 / 3.0)
        assert row["pies"] == pytest.approx(1.0 / 3.0)
        assert sum(row.values()) == pytest.approx(1.0)

    def test_multi_token_title_skipped(self):
        original = Lexicon({"dog": {"cat": 1.0}})
        merged, skipped = merge_title_lexicon(original, [("New York", "Nowy Jork")])
        assert skipped == 1
        assert merged == original

    def test_existing_higher_probability_kept(self):
        merged, _ = merge_title_lexicon(Lexicon({"dog": {"pies": 0.8}}), [("Dog", "Pies")])
        assert merged.prob("dog", "pies") == 1.0  # 0.8 kept, row renormalized


class TestLexiconFile:
    def test_exact_line_format(self, tmp_path):
        path = tmp_path / "lex.tsv"
        write_lexicon(build_lexicon([("a", "x")], iterations=2), path)
        assert path.read_text(encoding="utf-8") == "a\tx\t1.000000\n"

    def test_sorted_by_source_then_descending_probability(self, tmp_path):
        lexicon = Lexicon({"b": {"q": 0.25, "p": 0.75}, "a": {"z": 1.0}})
        path = tmp_path / "lex.tsv"
        write_lexicon(lexicon, path)
        lines = path.read_text(encoding="utf-8").splitlines()
        assert lines == ["a\tz\t1.000000", "b\tp\t0.750000", "b\tq\t0.250000"]

    def test_probability_ties_sort_by_target(self, tmp_path):
        path = tmp_path / "lex.tsv"
        write_lexicon(Lexicon({"a": {"y": 0.5, "x": 0.5}}), path)
        lines = path.read_text(encoding="utf-8").splitlines()
        assert lines == ["a\tx\t0.500000", "a\ty\t0.500000"]

    def test_round_trip(self, tmp_path):
        lexicon = build_lexicon([("a b", "x y"), ("b c", "y z")], iterations=5)
        path = tmp_path / "lex.tsv"
        write_lexicon(lexicon, path)
        loaded = read_lexicon(path)
        for s, t, p in lexicon.items():
            assert loaded.prob(s, t) == pytest.approx(p, abs=5e-7)

    def test_transposed_swaps_roles(self):
        lexicon = Lexicon({"a": {"x": 0.5, "y": 0.5}})
        flipped = lexicon.transposed()
        assert flipped.prob("x", "a") == 1.0
        assert flipped.prob("y", "a") == 1.0
