"""MindCell: memory-restricted Mastermind codebreakers and their experiment bench.

Usage:
    python main.py --strategy size-two --n 256,1024 --trials 20 --csv out.csv
    python main.py --strategy size-one --codemaker devil --n 10,12
    python main.py --strategy size-one --codemaker interactive --n 12
    python main.py --serve --port 9000
"""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

import uvicorn
from fastapi import FastAPI
from fastapi.middleware.cors import CORSMiddleware
from pydantic import ValidationError

from app.api.routes import api_router
from app.core.app_meta import APP_DESCRIPTION, APP_NAME, APP_VERSION
from app.core.codec import describe_layout, size_one_layout, size_two_layout
from app.core.config import DATA_DIR, load_config, section
from app.core.errors import MastermindError
from app.core.experiments import ExperimentConfig, GridResult, run_grid, write_csv
from app.core.game import GameParams
from app.core.interactive import interactive_game
from app.core.notifications import get_notifications
from app.core.strategies import STRATEGY_NAMES

_log = logging.getLogger(__name__)

DEFAULT_CSV = Path("-")


def create_app() -> FastAPI:
    app = FastAPI(title=APP_NAME, description=APP_DESCRIPTION, version=APP_VERSION)

    app.add_middleware(
        CORSMiddleware,
        allow_origins=["http://127.0.0.1", "http://localhost"],
        allow_origin_regex=r"^https?://(127\.0\.0\.1|localhost)(:\d+)?$",
        allow_credentials=True,
        allow_methods=["*"],
        allow_headers=["*"],
    )
    app.include_router(api_router)
    return app


# ── Argument parsing ──────────────────────────────────────────────────────


def _int_list(text: str) -> list[int]:
    try:
        values = [int(part) for part in text.split(",") if part.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"not a comma-separated list of integers: {text!r}") from exc
    if not values:
        raise argparse.ArgumentTypeError("empty list")
    return values


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="mindcell", description=APP_DESCRIPTION)
    parser.add_argument("--strategy", choices=STRATEGY_NAMES, default="size-two")
    parser.add_argument(
        "--codemaker", choices=("fixed", "random", "devil", "interactive"), default="random"
    )
    parser.add_argument("--n", type=_int_list, default=[256], help="comma-separated code lengths")
    parser.add_argument("--k", type=int, default=2, help="number of colors")
    parser.add_argument("--mu", type=int, default=None, help="memory size (strategy default if omitted)")
    parser.add_argument("--trials", type=int, default=None, help="trials per cell")
    parser.add_argument("--seed", type=int, default=None, help="base seed")
    parser.add_argument("--secret", default=None, help="code text for the fixed codemaker")
    parser.add_argument("--epsilon", type=float, default=None)
    parser.add_argument("--bigk", type=float, default=None, dest="big_k")
    parser.add_argument("--block-size", type=int, default=None)
    parser.add_argument("--samples", type=int, default=None, help="random samples per block")
    parser.add_argument("--query-cap", type=int, default=None)
    parser.add_argument("--workers", type=int, default=None)
    parser.add_argument(
        "--csv", type=Path, nargs="?", const=DEFAULT_CSV, default=None,
        help="CSV output path (bare flag: data/<strategy>_<codemaker>_k<k>.csv)",
    )
    parser.add_argument("--transcript", type=Path, default=None, help="directory for per-trial transcripts")
    parser.add_argument(
        "--log-level", default="WARNING", choices=("DEBUG", "INFO", "WARNING", "ERROR")
    )
    parser.add_argument("--serve", action="store_true", help="start the HTTP API instead of a grid")
    parser.add_argument("--port", type=int, default=None)
    return parser


# ── Commands ──────────────────────────────────────────────────────────────


def _print_layouts(args: argparse.Namespace) -> None:
    if args.strategy not in ("size-one", "size-two"):
        return
    for n in args.n:
        try:
            if args.strategy == "size-one":
                layout = size_one_layout(
                    n, args.k, epsilon=args.epsilon, big_k=args.big_k,
                    block_size=args.block_size, samples=args.samples,
                )
            else:
                layout = size_two_layout(
                    n, args.k, epsilon=args.epsilon,
                    block_size=args.block_size, samples=args.samples,
                )
        except MastermindError as exc:
            print(f"# n={n}: no layout ({exc})")
            continue
        info = describe_layout(layout)
        fields = info.pop("fields")
        print("# layout " + " ".join(f"{key}={value}" for key, value in info.items()))
        print("# fields " + " ".join(f"{key}={lo}..{hi}" for key, (lo, hi) in fields.items()))


def _print_summary(result: GridResult) -> None:
    for s in result.summaries:
        print(
            f"{s.strategy:>12} {s.codemaker:>7} n={s.n:<6} k={s.k} mu={s.mu:<4} "
            f"won {s.won}/{s.trials}  mean={s.mean:.1f} median={s.median:.1f} max={s.max} "
            f"normalized={s.normalized:.3f}"
        )
    for cell in result.skipped:
        print(f"skipped n={cell.n} k={cell.k}: {cell.reason}")
    if result.slope is not None:
        print(f"log-log slope of mean queries vs n: {result.slope:.3f}")


def run_experiments(args: argparse.Namespace) -> int:
    defaults = section("experiment", load_config())
    try:
        config = ExperimentConfig(
            strategy=args.strategy,
            codemaker=args.codemaker,
            ns=args.n,
            k=args.k,
            mu=args.mu,
            trials=int(defaults["trials"]) if args.trials is None else args.trials,
            seed=int(defaults["seed"]) if args.seed is None else args.seed,
            epsilon=args.epsilon,
            big_k=args.big_k,
            block_size=args.block_size,
            samples=args.samples,
            query_cap=args.query_cap,
            secret=args.secret,
            workers=args.workers,
            transcript_dir=args.transcript,
        )
    except ValidationError as exc:
        print(f"invalid experiment: {exc}", file=sys.stderr)
        return 2

    _print_layouts(args)
    try:
        result = run_grid(config)
    except MastermindError as exc:
        print(f"experiment failed: {exc}", file=sys.stderr)
        return 2

    if args.csv is not None:
        target = args.csv
        if target == DEFAULT_CSV:
            target = DATA_DIR / f"{args.strategy}_{args.codemaker}_k{args.k}.csv"
        path = write_csv(result.records, target)
        print(f"wrote {len(result.records)} rows to {path}")
    _print_summary(result)
    # Skipped cells are already listed in the summary.
    get_notifications(clear=True)
    return 0 if result.all_won else 1


def run_interactive(args: argparse.Namespace) -> int:
    if len(args.n) != 1:
        print("the interactive game takes a single --n", file=sys.stderr)
        return 2
    n = args.n[0]
    defaults = section("experiment", load_config())
    cap = args.query_cap or int(defaults["query_cap_factor"]) * n
    try:
        return interactive_game(
            args.strategy,
            GameParams(n, args.k),
            args.mu,
            seed=int(defaults["seed"]) if args.seed is None else args.seed,
            query_cap=cap,
            epsilon=args.epsilon,
            big_k=args.big_k,
            block_size=args.block_size,
            samples=args.samples,
        )
    except MastermindError as exc:
        print(f"cannot play: {exc}", file=sys.stderr)
        return 2


def serve(args: argparse.Namespace) -> int:
    server_cfg = section("server", load_config())
    host = str(server_cfg.get("host", "127.0.0.1"))
    try:
        port = int(args.port or server_cfg.get("port", 8731))
    except (TypeError, ValueError):
        port = 8731
    _log.info("%s v%s on http://%s:%d (docs at /docs)", APP_NAME, APP_VERSION, host, port)
    uvicorn.run(create_app(), host=host, port=port, log_level=args.log_level.lower())
    return 0


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=getattr(logging, args.log_level),
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
    )
    if args.serve:
        return serve(args)
    if args.codemaker == "interactive":
        return run_interactive(args)
    return run_experiments(args)


if __name__ == "__main__":
    sys.exit(main())
