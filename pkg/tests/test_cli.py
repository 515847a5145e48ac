from __future__ import annotations

import csv
import io
import json

import pytest

from strnim import cli


def run(capsys, *argv) -> tuple[int, str]:
    code = cli.main(list(argv))
    return code, capsys.readouterr().out


class TestClassify:
    def test_p_position(self, capsys):
        code, out = run(capsys, "classify", "ba")
        assert code == 0
        assert "verdict: P" in out

    def test_n_position(self, capsys):
        code, out = run(capsys, "classify", "abbccaaaaaa")
        assert code == 0
        assert "verdict: N" in out
        assert "winning moves" in out

    def test_empty_position(self, capsys):
        code, out = run(capsys, "classify", "")
        assert code == 0
        assert "verdict: P" in out

    def test_json_format(self, capsys):
        code, out = run(capsys, "classify", "abccaacb", "--format", "json")
        assert code == 0
        payload = json.loads(out)
        assert payload["verdict"] == "P"
        assert payload["grundy"] == 0
        assert payload["winning_moves"] == []
        families = {f["family"] for f in payload["families"]}
        assert "comp_palindrome" in families

    def test_parse_error_exit_code(self, capsys):
        assert cli.main(["classify", "x2y_"]) == cli.EXIT_USAGE

    def test_budget_exit_code(self, capsys):
        assert cli.main(["classify", "abcabcabcabc", "--budget", "3"]) == cli.EXIT_BUDGET


class TestGrundyNextMoves:
    def test_grundy(self, capsys):
        code, out = run(capsys, "grundy", "aaaa")
        assert code == 0 and out.strip() == "4"

    def test_next_lists_successors(self, capsys):
        code, out = run(capsys, "next", "abbccb")
        lines = out.strip().splitlines()
        assert code == 0
        assert sorted(lines) == sorted(
            ["bbccb", "abccb", "accb", "abbcb", "abbb", "abbcc"]
        )

    def test_moves_json(self, capsys):
        code, out = run(capsys, "moves", "aaa", "--format", "json")
        payload = json.loads(out)
        assert [m["count"] for m in payload["moves"]] == [1, 2, 3]
        assert payload["moves"][2]["result"] == ""


class TestTable:
    def test_csv_to_stdout(self, capsys):
        code, out = run(capsys, "table", "--alphabet", "a", "--max-len", "3")
        rows = list(csv.reader(io.StringIO(out)))
        assert rows[0] == ["position", "length", "grundy", "verdict"]
        assert rows[1:] == [
            ["", "0", "0", "P"],
            ["a", "1", "1", "N"],
            ["aa", "2", "2", "N"],
            ["aaa", "3", "3", "N"],
        ]

    def test_csv_file_and_plot(self, tmp_path, capsys):
        out_csv = tmp_path / "table.csv"
        out_png = tmp_path / "table.png"
        code = cli.main([
            "table", "--alphabet", "ab", "--max-len", "4",
            "--out", str(out_csv), "--plot", str(out_png),
        ])
        assert code == 0
        rows = list(csv.reader(out_csv.open()))
        assert ["ab", "2", "0", "P"] in rows
        assert out_png.stat().st_size > 0

    def test_canonical_only_dedupes(self, tmp_path):
        full = tmp_path / "full.csv"
        dedup = tmp_path / "dedup.csv"
        assert cli.main(["table", "--alphabet", "ab", "--max-len", "3", "--out", str(full)]) == 0
        assert cli.main([
            "table", "--alphabet", "ab", "--max-len", "3", "--out", str(dedup),
            "--canonical-only",
        ]) == 0
        assert len(list(csv.reader(dedup.open()))) < len(list(csv.reader(full.open())))

    def test_rejects_bad_alphabet(self, capsys):
        assert cli.main(["table", "--alphabet", "AB"]) == cli.EXIT_USAGE


class TestAba:
    def test_lose_row(self, capsys):
        code, out = run(capsys, "aba", "-j", "2", "--max-i", "5")
        assert code == 0
        assert "[2, 1, 0, 4, 3, 6]" in out

    def test_period_and_paper_check(self, capsys):
        code, out = run(capsys, "aba", "-j", "4", "--period", "--check-paper")
        assert code == 0
        assert "period 4" in out
        assert "agrees" in out

    def test_exports(self, tmp_path, capsys):
        out_csv = tmp_path / "lose.csv"
        out_json = tmp_path / "pairs.json"
        out_png = tmp_path / "pairs.png"
        code = cli.main([
            "aba", "-j", "1", "--max-i", "6",
            "--csv", str(out_csv), "--json-out", str(out_json), "--plot", str(out_png),
        ])
        assert code == 0
        rows = list(csv.reader(out_csv.open()))
        assert rows[0] == ["i", "lose"]
        assert rows[1] == ["0", "1"]
        payload = json.loads(out_json.read_text())
        assert payload == {
            "j": 1, "base": [[0, 1]], "repeating": [[2, 2]], "period": 1,
        }
        assert out_png.stat().st_size > 0

    def test_rejects_bad_j(self, capsys):
        assert cli.main(["aba", "-j", "0"]) == cli.EXIT_USAGE

    def test_no_period_exit_code(self, capsys):
        code = cli.main(["aba", "-j", "1", "--period", "--search-bound", "3"])
        assert code == cli.EXIT_NO_PERIOD


class TestVerify:
    def test_single_suite(self, capsys):
        code, out = run(capsys, "verify", "nim-xor", "--max-heap", "3")
        assert code == 0
        assert "nim-xor: ok" in out

    def test_json_report(self, capsys):
        code, out = run(
            capsys, "verify", "thue-morse", "--max-len", "10", "--format", "json"
        )
        assert code == 0
        payload = json.loads(out)
        assert payload["ok"] is True
        assert payload["suites"][0]["suite"] == "thue-morse"
        assert payload["suites"][0]["failures"] == []

    def test_unknown_suite(self, capsys):
        assert cli.main(["verify", "nonesuch"]) == cli.EXIT_USAGE


class TestPlay:
    def test_scripted_game(self, capsys, monkeypatch):
        monkeypatch.setattr("sys.stdin", io.StringIO("2 2\n1 2\nq\n"))
        code, out = run(capsys, "play", "aabbbca")
        assert code == 0
        assert "human removes (run 2, take 2)" in out
        assert "engine removes" in out

    def test_interval_input(self, capsys, monkeypatch):
        monkeypatch.setattr("sys.stdin", io.StringIO("3-4\nq\n"))
        code, out = run(capsys, "play", "aabbbca")
        assert code == 0
        assert "human removes (run 2, take 2)" in out

    def test_game_to_completion(self, capsys, monkeypatch):
        # From b the human takes the one character and wins immediately.
        monkeypatch.setattr("sys.stdin", io.StringIO("1 1\n"))
        code, out = run(capsys, "play", "b")
        assert code == 0
        assert "game over: human took the last character and wins" in out

    def test_engine_first_flags_expected_loss(self, capsys, monkeypatch):
        monkeypatch.setattr("sys.stdin", io.StringIO("q\n"))
        code, out = run(capsys, "play", "ba", "--engine-first")
        assert code == 0
        assert "expecting to lose" in out

    def test_illegal_input_reprompts(self, capsys, monkeypatch):
        monkeypatch.setattr("sys.stdin", io.StringIO("9 9\nbogus\n1 1\n"))
        code, out = run(capsys, "play", "a")
        assert code == 0
        assert out.count("illegal move") == 2
        assert "game over" in out

    def test_json_transcript(self, capsys, monkeypatch):
        monkeypatch.setattr("sys.stdin", io.StringIO("1 1\n"))
        code, out = run(capsys, "play", "b", "--format", "json")
        assert code == 0
        payload = json.loads(out[out.index("{"):])
        assert payload["winner"] == "human"
        assert payload["transcript"] == [
            {"player": "human", "move": {"run": 1, "count": 1}, "position": ""}
        ]


class TestCacheFlag:
    def test_cache_persists_between_runs(self, tmp_path, capsys):
        cache = tmp_path / "cache.tsv"
        assert cli.main(["grundy", "abcab", "--cache", str(cache)]) == 0
        first = cache.read_text()
        assert first.startswith("STRNIMCACHE 1\n")
        assert cli.main(["grundy", "abcab", "--cache", str(cache)]) == 0
        assert cache.read_text() == first  # byte-stable reload + resave

    def test_engine_uses_mirror_strategy(self, capsys, monkeypatch):
        # abccaacb is a complementary palindrome; after removing cc at 3-4
        # the engine answers with the mirrored aa block.
        monkeypatch.setattr("sys.stdin", io.StringIO("3-4\nq\n"))
        code, out = run(capsys, "play", "abccaacb")
        assert code == 0
        assert "[mirror]" in out
        assert "-> abcb" in out
