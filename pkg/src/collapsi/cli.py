"""Command-line interface.

Exit codes: 0 success, 1 bad input, 2 I/O failure.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import deals, engine, harness


class _Parser(argparse.ArgumentParser):
    # argparse exits 2 on usage errors; the CLI contract reserves 2 for I/O
    def error(self, message: str) -> None:  # type: ignore[override]
        self.exit(1, f"{self.prog}: error: {message}\n")


def _shard(text: str) -> tuple[int, int]:
    try:
        k, n = text.split("/", 1)
        shard = int(k), int(n)
    except ValueError:
        raise argparse.ArgumentTypeError(f"shard must look like k/n, got {text!r}")
    if not 0 <= shard[0] < shard[1]:
        raise argparse.ArgumentTypeError(f"shard must satisfy 0 <= k < n, got {text!r}")
    return shard


def _move_json(move: engine.Move | None) -> dict | None:
    if move is None:
        return None
    return {"dest": list(move.dest), "path": [list(c) for c in move.path], "length": move.length}


def _write_out(text: str, out: str | None) -> None:
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _cmd_solve(args: argparse.Namespace) -> int:
    from . import solver

    state = engine.parse_state(args.state)
    if args.win_only:
        mover_wins, witness = solver.solve_win(state)
        doc = {
            "state": engine.format_state(state),
            "mover_wins": mover_wins,
            "witness": _move_json(witness),
        }
    else:
        result = solver.solve_score(state, pv=True)
        doc = {
            "state": engine.format_state(state),
            "score": result.score,
            "winner": "r" if result.score > 0 else "b",
            "mover_wins": (result.score > 0) == (state.to_move is engine.Player.RED),
            "best_move": _move_json(result.best_move),
            "principal_variation": [_move_json(m) for m in result.principal_variation or ()],
        }
        if state.face_up_count == engine.CELLS:
            doc["plies"] = solver.plies_to_end(state, result)
    print(json.dumps(doc))
    return 0


def _cmd_enumerate(args: argparse.Namespace) -> int:
    k, n = args.shard
    if args.count_only:
        count, weight = deals.count_enumerated(k, n)
        print(json.dumps({"deals": count, "total_weight": weight, "shard": f"{k}/{n}"}))
        return 0
    for index, deal, weight in deals.enumerate_deals(k, n):
        print(f"{index},{engine.format_deal(deal)},{weight}")
    return 0


def _cmd_exhaustive(args: argparse.Namespace) -> int:
    k, n = args.shard
    stats, _completed = harness.run_exhaustive(
        k,
        n,
        workers=args.workers,
        checkpoint_path=args.checkpoint,
        block_size=args.block_size,
        progress=True,
    )
    metadata = {"shard": f"{k}/{n}", "kind": "exhaustive"}
    _write_out(harness.emit_report(stats, args.format, metadata=metadata), args.out)
    return 0


def _cmd_sample(args: argparse.Namespace) -> int:
    result = harness.run_sample(args.n, args.seed, workers=args.workers, progress=True)
    metadata = {"kind": "sample", "n": args.n, "seed": args.seed}
    _write_out(
        harness.emit_report(
            result.stats, args.format, metadata=metadata, std_errors=result.standard_errors
        ),
        args.out,
    )
    return 0


def _cmd_count_games(args: argparse.Namespace) -> int:
    from . import solver

    deal = engine.parse_deal(args.deal)
    print(solver.count_games(deals.initial_state(deal)))
    return 0


def _cmd_serve(args: argparse.Namespace) -> int:
    import uvicorn

    from .service import app

    uvicorn.run(app, host=args.host, port=args.port)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="collapsi", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", help="perfect-play evaluation of a state")
    p.add_argument("state", help='e.g. "JA2A/3JA4/2323/34A2 r(0,0) b(1,1) r"')
    p.add_argument("--win-only", action="store_true", help="win/loss search only (faster)")
    p.set_defaults(func=_cmd_solve)

    p = sub.add_parser("enumerate", help="stream the symmetry-reduced deal enumeration")
    p.add_argument("--shard", type=_shard, default=(0, 1), metavar="K/N")
    p.add_argument("--count-only", action="store_true")
    p.set_defaults(func=_cmd_enumerate)

    p = sub.add_parser("exhaustive", help="solve every enumerated deal of a shard")
    p.add_argument("--shard", type=_shard, default=(0, 1), metavar="K/N")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--checkpoint", metavar="PATH")
    p.add_argument("--out", metavar="PATH")
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--block-size", type=int, default=harness.CHECKPOINT_BLOCK)
    p.set_defaults(func=_cmd_exhaustive)

    p = sub.add_parser("sample", help="solve uniform random deals")
    p.add_argument("-n", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--out", metavar="PATH")
    p.add_argument("--format", choices=("csv", "json"), default="json")
    p.set_defaults(func=_cmd_sample)

    p = sub.add_parser("count-games", help="count distinct complete games of a deal")
    p.add_argument("deal", help='e.g. "A223/4A2J/3A23/J3A4"')
    p.set_defaults(func=_cmd_count_games)

    p = sub.add_parser("serve", help="run the HTTP analysis service")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)
    p.set_defaults(func=_cmd_serve)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except harness.CheckpointError as exc:
        print(f"collapsi: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"collapsi: {exc}", file=sys.stderr)
        return 2
    except (engine.CollapsiError, ValueError) as exc:
        print(f"collapsi: {exc}", file=sys.stderr)
        return 1
    except KeyboardInterrupt:
        print("collapsi: interrupted", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
