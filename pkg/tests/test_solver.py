from __future__ import annotations

from itertools import combinations, product

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracle
from strnim.position import (
    CodingMap,
    EMPTY,
    Move,
    Position,
    from_word,
    parse,
    position_from_runs,
    recode,
    render,
    reverse,
)
from strnim.solver import (
    BudgetExhaustedError,
    CacheFormatError,
    ConsistencyError,
    SolveStats,
    TranspositionTable,
    classify,
    enumerate_table,
    grundy,
    load_cache,
    mex,
    save_cache,
    solve_batch,
    unique_extension,
    winning_moves,
)

words = st.text(alphabet="abc", max_size=9)

# Property tests share one table: entries are facts about positions, so
# reuse across examples cannot leak state between cases.
_TABLE = TranspositionTable()


class TestMex:
    def test_empty(self):
        assert mex(set()) == 0

    def test_contiguous(self):
        assert mex({0, 1, 2}) == 3

    def test_with_gap(self):
        assert mex({1, 0, 2, 5}) == 3


class TestGrundy:
    def test_terminal(self, shared_table):
        assert grundy(EMPTY, shared_table) == 0

    def test_single_heap(self, shared_table):
        assert grundy(parse("aaaa"), shared_table) == 4

    def test_two_singletons(self, shared_table):
        assert grundy(parse("ab"), shared_table) == 0

    def test_matches_oracle_two_letters(self, shared_table):
        for n in range(9):
            for chars in product("ab", repeat=n):
                word = "".join(chars)
                assert grundy(from_word(word), shared_table) == oracle.grundy(word), word

    def test_matches_oracle_three_letters(self, shared_table):
        for n in range(7):
            for chars in product("abc", repeat=n):
                word = "".join(chars)
                assert grundy(from_word(word), shared_table) == oracle.grundy(word), word

    @given(words)
    @settings(max_examples=150, deadline=None)
    def test_invariant_under_reverse_and_recode(self, word):
        table = _TABLE
        pos = from_word(word)
        value = grundy(pos, table)
        assert grundy(reverse(pos), table) == value
        for perm in ((1, 0, 2), (2, 1, 0), (1, 2, 0)):
            f = CodingMap({i: perm[i] for i in range(3)})
            assert grundy(recode(pos, f), table) == value

    def test_deep_position_no_recursion_limit(self):
        # One run of length 1200: the solve path is 1200 frames deep, past
        # CPython's default recursion limit, so this fails if the search
        # ever becomes recursive.
        assert grundy(position_from_runs([(0, 1200)])) == 1200

    def test_budget_exhaustion_is_loud(self):
        with pytest.raises(BudgetExhaustedError):
            grundy(parse("abcabcabc"), budget=5)

    def test_stats_populated(self):
        stats = SolveStats()
        grundy(parse("abcab"), stats=stats)
        assert stats.nodes_expanded > 0
        assert stats.peak_table_size > 0
        assert stats.wall_time >= 0


class TestNimEmbedding:
    def test_distinct_symbol_runs_are_nim(self, shared_table):
        # Exhaustive for up to 3 runs with lengths <= 8.
        for n_runs in range(4):
            for symbols in combinations(range(3), n_runs):
                for lengths in product(range(1, 9), repeat=n_runs):
                    pos = position_from_runs(list(zip(symbols, lengths)))
                    expected = 0
                    for x in lengths:
                        expected ^= x
                    assert grundy(pos, shared_table) == expected, (symbols, lengths)


class TestClassify:
    def test_p_position(self, shared_table):
        assert classify(parse("ba"), shared_table).kind == "P"

    def test_n_position_from_corollary_example(self, shared_table):
        verdict = classify(parse("abbccaaaaaa"), shared_table)
        assert verdict.kind == "N"
        assert verdict.certificate is not None

    def test_complementary_palindrome_example(self, shared_table):
        assert classify(parse("abccaacb"), shared_table).kind == "P"

    def test_certificate_reaches_p(self, shared_table):
        from strnim.position import apply_move

        for word in ["a", "aaba", "abcab", "abbccaaaaaa", "bbabb"]:
            verdict = classify(from_word(word), shared_table)
            if verdict.kind == "N":
                after = apply_move(from_word(word), verdict.certificate)
                assert classify(after, shared_table).kind == "P"

    @given(words)
    @settings(max_examples=100, deadline=None)
    def test_definition_audit(self, word):
        # P iff every successor is N; N iff some successor is P.
        from strnim.position import successors

        table = _TABLE
        pos = from_word(word)
        kinds = {classify(s, table).kind for s in successors(pos)}
        if classify(pos, table).kind == "P":
            assert "P" not in kinds
        else:
            assert "P" in kinds

    def test_verdict_validation(self):
        from strnim.solver import Verdict

        with pytest.raises(ValueError):
            Verdict("X")
        with pytest.raises(ValueError):
            Verdict("N")  # missing certificate
        with pytest.raises(ValueError):
            Verdict("P", Move(1, 1))


class TestWinningMoves:
    def test_forced_win(self, shared_table):
        assert winning_moves(parse("b"), shared_table) == [Move(1, 1)]

    def test_p_position_has_none(self, shared_table):
        assert winning_moves(parse("ba"), shared_table) == []

    def test_frozen_example(self, shared_table):
        # Brute force says the only winning removal from aaba is both a's
        # up front, reaching ba.
        assert winning_moves(parse("aaba"), shared_table) == [Move(1, 2)]


class TestUniqueExtension:
    def test_examples(self, shared_table):
        assert unique_extension(parse("b"), 0, shared_table) == 1
        assert unique_extension(parse("ab"), 0, shared_table) == 0
        assert unique_extension(parse("aab"), 0, shared_table) == 2

    def test_precondition_empty(self, shared_table):
        with pytest.raises(ValueError):
            unique_extension(EMPTY, 0, shared_table)

    def test_precondition_same_symbol(self, shared_table):
        with pytest.raises(ValueError):
            unique_extension(parse("ab"), 1, shared_table)

    def test_sweep_two_letters(self, shared_table):
        # Every admissible extension over {a,b,c} of every {a,b} word <= 7
        # has exactly one P length; unique_extension raises otherwise.
        for n in range(1, 8):
            for chars in product("ab", repeat=n):
                pos = from_word("".join(chars))
                for c in (0, 1, 2):
                    if c != pos.runs[-1].symbol:
                        assert 0 <= unique_extension(pos, c, shared_table) <= n


class TestCorollary:
    def test_dominant_outer_run_is_n(self, shared_table):
        import random

        rng = random.Random(4242)
        for _ in range(100):
            n_runs = rng.randint(1, 4)
            symbols = [rng.randrange(3)]
            while len(symbols) < n_runs:
                s = rng.randrange(3)
                if s != symbols[-1]:
                    symbols.append(s)
            lengths = [rng.randint(1, 3) for _ in range(n_runs - 1)]
            lengths.append(sum(lengths) + rng.randint(1, 3))
            pos = position_from_runs(list(zip(symbols, lengths)))
            assert classify(pos, shared_table).kind == "N"
            assert classify(reverse(pos), shared_table).kind == "N"


class TestEnumerateTable:
    def test_single_letter(self, shared_table):
        rows = enumerate_table(1, 3, shared_table)
        assert [(render(p), g) for p, g in rows] == [
            ("", 0), ("a", 1), ("aa", 2), ("aaa", 3),
        ]

    def test_two_letters_len_one(self, shared_table):
        rows = enumerate_table(2, 1, shared_table)
        assert [(render(p), g) for p, g in rows] == [("", 0), ("a", 1), ("b", 1)]

    def test_two_letters_len_two(self, shared_table):
        rows = dict(
            (render(p), g) for p, g in enumerate_table(2, 2, shared_table)
        )
        assert rows == {
            "": 0, "a": 1, "b": 1, "aa": 2, "ab": 0, "ba": 0, "bb": 2,
        }

    def test_canonical_only_dedupes(self, shared_table):
        from strnim.position import canonical_key

        rows = enumerate_table(2, 4, shared_table, canonical_only=True)
        keys = [canonical_key(p) for p, _ in rows]
        assert len(keys) == len(set(keys))
        full = enumerate_table(2, 4, shared_table)
        assert len(set(canonical_key(p) for p, _ in full)) == len(rows)

    def test_bad_alphabet_size(self):
        with pytest.raises(ValueError):
            enumerate_table(0, 2)


class TestCachePersistence:
    def test_round_trip(self, tmp_path, shared_table):
        table = TranspositionTable()
        for word in ["", "a", "ab", "abcab", "aabbbca"]:
            grundy(from_word(word), table)
        path = tmp_path / "cache.tsv"
        save_cache(table, path)
        assert load_cache(path).entries == table.entries

    def test_byte_stable(self, tmp_path):
        table = TranspositionTable()
        grundy(parse("abcab"), table)
        first = tmp_path / "one.tsv"
        second = tmp_path / "two.tsv"
        save_cache(table, first)
        save_cache(load_cache(first), second)
        assert first.read_bytes() == second.read_bytes()

    def test_known_entry_format(self, tmp_path):
        path = tmp_path / "cache.tsv"
        path.write_text("STRNIMCACHE 1\na^1b^1\t0\n")
        assert load_cache(path).entries == {"a^1b^1": 0}

    def test_rejects_unknown_version(self, tmp_path):
        path = tmp_path / "cache.tsv"
        path.write_text("STRNIMCACHE 2\n")
        with pytest.raises(CacheFormatError):
            load_cache(path)

    def test_rejects_malformed_line_with_number(self, tmp_path):
        path = tmp_path / "cache.tsv"
        path.write_text("STRNIMCACHE 1\na^1\tnope\n")
        with pytest.raises(CacheFormatError, match="line 2"):
            load_cache(path)

    def test_rejects_duplicate_key(self, tmp_path):
        path = tmp_path / "cache.tsv"
        path.write_text("STRNIMCACHE 1\na^1\t1\na^1\t1\n")
        with pytest.raises(CacheFormatError, match="line 3"):
            load_cache(path)

    def test_rejects_missing_trailing_newline(self, tmp_path):
        path = tmp_path / "cache.tsv"
        path.write_text("STRNIMCACHE 1\na^1\t1")
        with pytest.raises(CacheFormatError):
            load_cache(path)

    def test_loaded_entries_are_trusted(self, tmp_path):
        table = TranspositionTable()
        grundy(parse("abab"), table)
        path = tmp_path / "cache.tsv"
        save_cache(table, path)
        loaded = load_cache(path)
        assert loaded.audit_sample() == []


class TestBatch:
    def test_worker_counts_agree(self):
        positions = [from_word(w) for w in ["abab", "aabb", "abcab", "bbaa", "ccc"]]
        single = solve_batch(positions, TranspositionTable(), workers=1)
        multi = solve_batch(positions, TranspositionTable(), workers=4)
        assert single == multi

    def test_results_in_input_order(self, shared_table):
        positions = [parse("aaa"), parse("a"), parse("aa")]
        assert solve_batch(positions, shared_table) == [3, 1, 2]
