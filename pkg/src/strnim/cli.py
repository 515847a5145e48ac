"""Command-line front end: classification, tables, verification suites,
interactive play, and the HTTP service.

Exit codes: 0 ok, 1 suite failure, 2 usage/parse error, 3 budget
exhausted, 4 no period found.
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys

from . import aba, families, verify
from .position import (
    Move,
    ParseError,
    Position,
    apply_move,
    interval_to_move,
    legal_moves,
    move_to_interval,
    parse,
    render,
)
from .solver import (
    BudgetExhaustedError,
    DEFAULT_NODE_BUDGET,
    TranspositionTable,
    classify,
    enumerate_table,
    grundy,
    load_cache,
    save_cache,
    winning_moves,
)

EXIT_OK = 0
EXIT_SUITE_FAILURE = 1
EXIT_USAGE = 2
EXIT_BUDGET = 3
EXIT_NO_PERIOD = 4


def _move_json(mv: Move) -> dict:
    return {"run": mv.run_index, "count": mv.count}


def _load_table(args) -> TranspositionTable:
    if args.cache and os.path.exists(args.cache):
        return load_cache(args.cache)
    return TranspositionTable()


def _store_table(args, table: TranspositionTable) -> None:
    if args.cache:
        save_cache(table, args.cache)


def _parse_position(text: str) -> Position:
    try:
        return parse(text)
    except ParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE) from None


def _emit(args, payload: dict, text_lines: list[str]) -> None:
    if args.format == "json":
        print(json.dumps(payload, indent=2))
    else:
        for line in text_lines:
            print(line)


def cmd_classify(args) -> int:
    pos = _parse_position(args.position)
    table = _load_table(args)
    value = grundy(pos, table, budget=args.budget)
    verdict = "P" if value == 0 else "N"
    wins = winning_moves(pos, table, budget=args.budget)
    verdicts = families.family_verdicts(pos)
    payload = {
        "position": render(pos),
        "verdict": verdict,
        "grundy": value,
        "winning_moves": [_move_json(m) for m in wins],
        "families": [v.to_json() for v in verdicts if v.applicable],
    }
    lines = [
        f"position: {render(pos) or 'ε'}",
        f"verdict: {verdict}",
        f"grundy: {value}",
    ]
    if wins:
        lines.append(
            "winning moves: "
            + ", ".join(f"(run {m.run_index}, take {m.count})" for m in wins)
        )
    for v in verdicts:
        if v.applicable:
            lines.append(f"family {v.family}: {v.verdict}")
    _emit(args, payload, lines)
    _store_table(args, table)
    return EXIT_OK


def cmd_grundy(args) -> int:
    pos = _parse_position(args.position)
    table = _load_table(args)
    value = grundy(pos, table, budget=args.budget)
    _emit(args, {"position": render(pos), "grundy": value}, [str(value)])
    _store_table(args, table)
    return EXIT_OK


def cmd_next(args) -> int:
    pos = _parse_position(args.position)
    seen: dict[str, Move] = {}
    for mv in legal_moves(pos):
        seen.setdefault(render(apply_move(pos, mv)), mv)
    ordered = sorted(seen, key=lambda w: (len(w), w))
    payload = {
        "position": render(pos),
        "successors": [
            {"position": w, "move": _move_json(seen[w])} for w in ordered
        ],
    }
    _emit(args, payload, [w or "ε" for w in ordered])
    return EXIT_OK


def cmd_moves(args) -> int:
    pos = _parse_position(args.position)
    moves = legal_moves(pos)
    payload = {
        "position": render(pos),
        "moves": [
            {**_move_json(mv), "result": render(apply_move(pos, mv))}
            for mv in moves
        ],
    }
    lines = [
        f"(run {mv.run_index}, take {mv.count}) -> {render(apply_move(pos, mv)) or 'ε'}"
        for mv in moves
    ]
    _emit(args, payload, lines)
    return EXIT_OK


def cmd_table(args) -> int:
    alphabet = args.alphabet
    if not alphabet or not alphabet.isascii() or not alphabet.islower():
        print("error: --alphabet must be nonempty lowercase letters", file=sys.stderr)
        return EXIT_USAGE
    table = _load_table(args)
    rows = enumerate_table(
        len(set(alphabet)),
        args.max_len,
        table,
        canonical_only=args.canonical_only,
        budget=args.budget,
        letters=alphabet,
    )
    out = open(args.out, "w", newline="") if args.out else sys.stdout
    try:
        writer = csv.writer(out)
        writer.writerow(["position", "length", "grundy", "verdict"])
        for pos, value in rows:
            writer.writerow([render(pos), len(pos), value, "P" if value == 0 else "N"])
    finally:
        if args.out:
            out.close()
    if args.plot:
        from . import plots

        plots.plot_grundy_table(rows, args.plot)
    _store_table(args, table)
    return EXIT_OK


def cmd_aba(args) -> int:
    if args.j < 1:
        print("error: -j must be >= 1", file=sys.stderr)
        return EXIT_USAGE
    lose = aba.build_lose_table(args.j, args.max_i)
    payload: dict = {"j": args.j, "lose": lose.values}
    lines = [f"lose[{args.j}][0..{args.max_i}] = {lose.values}"]

    pairs = None
    if args.period or args.check_paper or args.json_out or args.plot:
        try:
            pairs = aba.detect_period(args.j, args.search_bound, args.margin)
        except aba.NoPeriodError as exc:
            print(f"error: {exc}", file=sys.stderr)
            return EXIT_NO_PERIOD
        payload.update(pairs.to_json())
        lines.append(
            f"period {pairs.period}, base {sorted(pairs.base)}, "
            f"repeating {sorted(pairs.repeating)}"
        )
    if args.check_paper:
        if args.j > 6:
            print("error: --check-paper only covers 1 <= j <= 6", file=sys.stderr)
            return EXIT_USAGE
        golden = aba.known_tables()[args.j]
        bound = max(200, args.max_i)
        mismatches = [
            (i, k)
            for i in range(bound + 1)
            for k in range(bound + 1)
            if pairs.member(i, k) != golden.member(i, k)
        ]
        payload["paper_mismatches"] = mismatches
        lines.append(
            f"paper comparison up to {bound}: "
            + ("agrees" if not mismatches else f"MISMATCHES {mismatches[:10]}")
        )
        if mismatches:
            _emit(args, payload, lines)
            return EXIT_SUITE_FAILURE
    if args.csv:
        with open(args.csv, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["i", "lose"])
            for i, value in enumerate(lose.values):
                writer.writerow([i, value])
    if args.json_out:
        with open(args.json_out, "w") as fh:
            json.dump({"j": args.j, **pairs.to_json()}, fh, indent=2)
            fh.write("\n")
    if args.plot:
        from . import plots

        plots.plot_lose_table(lose, args.plot, pairs)
    _emit(args, payload, lines)
    return EXIT_OK


def cmd_verify(args) -> int:
    bounds = {
        "max_len": args.max_len,
        "max_i": args.max_i,
        "samples": args.samples,
        "random_samples": args.samples,
        "seed": args.seed,
        "search_bound": args.search_bound,
        "margin": args.margin,
        "max_heap": args.max_heap,
    }
    table = _load_table(args)
    if args.suite == "all":
        reports = verify.run_all(table=table, **bounds)
    else:
        try:
            reports = [verify.run_suite(args.suite, table=table, **bounds)]
        except KeyError as exc:
            print(f"error: {exc.args[0]}", file=sys.stderr)
            return EXIT_USAGE
    payload = {"suites": [r.to_json() for r in reports], "ok": all(r.ok for r in reports)}
    lines = []
    for r in reports:
        status = "ok" if r.ok else f"FAIL ({len(r.failures)} failures)"
        lines.append(f"{r.suite}: {status}, {r.cases} cases, {r.wall_time:.1f}s")
        for failure in r.failures[:5]:
            lines.append(f"  {failure}")
    _emit(args, payload, lines)
    _store_table(args, table)
    return EXIT_OK if payload["ok"] else EXIT_SUITE_FAILURE


def _read_human_move(pos: Position, stream) -> Move | None:
    """Prompt until a legal move or EOF (None).  Accepts `run count` pairs
    or expanded `start-end` intervals."""
    while True:
        print("your move (run count | start-end | q): ", end="", flush=True)
        line = stream.readline()
        if not line:
            return None
        line = line.strip()
        if line in ("q", "quit", "exit"):
            return None
        try:
            if "-" in line:
                start_s, end_s = line.split("-", 1)
                mv = interval_to_move(pos, int(start_s), int(end_s))
            else:
                run_s, count_s = line.split()
                mv = Move(int(run_s), int(count_s))
                apply_move(pos, mv)  # legality check
            return mv
        except (ValueError, IndexError) as exc:
            print(f"illegal move: {exc}")


def _engine_move(
    prev: Position | None,
    prev_move: Move | None,
    pos: Position,
    table: TranspositionTable,
    budget: int,
) -> tuple[Move, str]:
    """Pick the engine's reply and say which strategy produced it.

    Family strategies answer the opponent's last move when the previous
    position is in a family we can defend; otherwise fall back to the
    solver's winning move, then to the smallest legal move.
    """
    if prev is not None and prev_move is not None:
        if families.comp_palindrome_witness(prev) is not None:
            o_start, o_end = move_to_interval(prev, prev_move)
            r_start, r_end = families.mirror_response(prev, (o_start, o_end))
            if r_start > o_end:  # response sits right of the removed block
                shift = o_end - o_start + 1
                r_start, r_end = r_start - shift, r_end - shift
            return interval_to_move(pos, r_start, r_end), "mirror"
        if (
            all(r.length == 1 for r in prev.runs)
            and len(prev) % 2 == 0
            and len(prev) > 0
        ):
            return families.alternating_response(prev, prev_move), "alternating"
        if prev.symbols() <= {0, 1} and families.lstar_member(prev) is not None:
            return families.lstar_response(prev, pos), "block-language"
    wins = winning_moves(pos, table, budget=budget)
    if wins:
        return wins[0], "solver"
    return legal_moves(pos)[0], "first-legal (expected loss under perfect play)"


def cmd_play(args) -> int:
    pos = _parse_position(args.position)
    table = _load_table(args)
    transcript: list[dict] = []
    human_turn = not args.engine_first
    prev: Position | None = None
    prev_move: Move | None = None
    verdict = classify(pos, table, budget=args.budget)
    print(f"starting position: {render(pos) or 'ε'}  [{verdict.kind}]")
    if args.engine_first and verdict.kind == "P":
        print("engine to move from a P position: expecting to lose under perfect play")
    while pos:
        if human_turn:
            print(f"position: {render(pos)}   runs: "
                  + " ".join(f"{i}:{render(Position((r,)))}"
                             for i, r in enumerate(pos.runs, start=1)))
            mv = _read_human_move(pos, sys.stdin)
            if mv is None:
                print("goodbye")
                return EXIT_OK
            mover = "human"
            note = ""
        else:
            mv, strategy = _engine_move(prev, prev_move, pos, table, args.budget)
            mover = "engine"
            note = f" [{strategy}]"
        try:
            after = apply_move(pos, mv)
        except ValueError as exc:
            print(f"illegal move: {exc}")
            continue
        print(f"{mover} removes (run {mv.run_index}, take {mv.count}) -> "
              f"{render(after) or 'ε'}{note}")
        transcript.append(
            {"player": mover, "move": _move_json(mv), "position": render(after)}
        )
        prev, prev_move = pos, mv
        pos = after
        human_turn = not human_turn
    winner = "engine" if human_turn else "human"
    print(f"game over: {winner} took the last character and wins")
    if args.format == "json":
        print(json.dumps({"transcript": transcript, "winner": winner}, indent=2))
    _store_table(args, table)
    return EXIT_OK


def cmd_serve(args) -> int:
    from . import server

    table = _load_table(args)
    try:
        server.serve(args.port, args.static, table, budget=args.budget)
    finally:
        _store_table(args, table)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--cache", metavar="FILE", help="transposition cache file")
    common.add_argument("--format", choices=["text", "json"], default="text")
    common.add_argument(
        "--budget", type=int, default=DEFAULT_NODE_BUDGET,
        help="solver node budget (explicit failure when exceeded)",
    )

    parser = argparse.ArgumentParser(
        prog="strnim",
        description="Engine and analysis toolkit for the string-shrinking Nim variant",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("classify", parents=[common], help="P/N verdict and Grundy value")
    p.add_argument("position")
    p.set_defaults(fn=cmd_classify)

    p = sub.add_parser("grundy", parents=[common], help="Grundy value only")
    p.add_argument("position")
    p.set_defaults(fn=cmd_grundy)

    p = sub.add_parser("next", parents=[common], help="distinct successors")
    p.add_argument("position")
    p.set_defaults(fn=cmd_next)

    p = sub.add_parser("moves", parents=[common], help="legal moves and their results")
    p.add_argument("position")
    p.set_defaults(fn=cmd_moves)

    p = sub.add_parser("table", parents=[common], help="Grundy table as CSV (+ figure)")
    p.add_argument("--alphabet", default="ab")
    p.add_argument("--max-len", type=int, default=6)
    p.add_argument("--out", metavar="FILE", help="CSV destination (default stdout)")
    p.add_argument("--canonical-only", action="store_true")
    p.add_argument("--plot", metavar="FILE", help="figure destination (png/pdf/svg)")
    p.set_defaults(fn=cmd_table)

    p = sub.add_parser(
        "aba", parents=[common],
        help="losing-extension table and period of a^i b^j a^k positions",
    )
    p.add_argument("-j", type=int, required=True, help="middle-run length")
    p.add_argument("--max-i", type=int, default=30)
    p.add_argument("--period", action="store_true", help="detect the eventual period")
    p.add_argument("--check-paper", action="store_true",
                   help="compare against the published tables (j <= 6)")
    p.add_argument("--search-bound", type=int, default=10_000)
    p.add_argument("--margin", type=int, default=3)
    p.add_argument("--csv", metavar="FILE", help="export `i,lose` rows")
    p.add_argument("--json-out", metavar="FILE", help="export pair-set JSON")
    p.add_argument("--plot", metavar="FILE", help="figure destination")
    p.set_defaults(fn=cmd_aba)

    p = sub.add_parser("verify", parents=[common], help="run a verification suite")
    p.add_argument("suite", help="suite id or 'all'")
    p.add_argument("--max-len", type=int, default=None)
    p.add_argument("--max-i", type=int, default=None)
    p.add_argument("--samples", type=int, default=None)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--search-bound", type=int, default=None)
    p.add_argument("--margin", type=int, default=None)
    p.add_argument("--max-heap", type=int, default=None)
    p.set_defaults(fn=cmd_verify)

    p = sub.add_parser("play", parents=[common], help="interactive terminal game")
    p.add_argument("position")
    p.add_argument("--engine-first", action="store_true")
    p.set_defaults(fn=cmd_play)

    p = sub.add_parser("serve", parents=[common], help="JSON-over-HTTP service")
    p.add_argument("--port", type=int, default=8420)
    p.add_argument("--static", metavar="DIR", help="static files for the browser UI")
    p.set_defaults(fn=cmd_serve)

    return parser


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
        return args.fn(args)
    except BudgetExhaustedError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except SystemExit as exc:  # argparse / parse failures carry their code
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
