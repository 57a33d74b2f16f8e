"""Command-line interface.

Subcommands:
    validate-rrt  check a tree document and print violations
    select        rank a catalog's candidates for a task against a tree
    profit        score a single offer against a payable price
    generate      emit a synthetic travel catalog
    serve         run the HTTP broker

Exit codes: 0 success, 1 usage error, 2 validation or schema error,
3 no feasible service.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from . import __version__
from .engine import NoFeasibleServiceError, evaluate, report_to_json
from .offers import InvalidOfferError, offer_from_json, profit, validate_offer
from .registry import (
    CatalogSchemaError,
    DuplicateIdError,
    load_catalog,
    find_by_keyword,
)
from .rrt import RrtError, parse_rrt, validate_rrt
from .scenario import ScenarioSpec, generate

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_INVALID = 2
EXIT_NO_FEASIBLE = 3


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    """argparse that reports usage problems as exit code 1, not 2."""

    def error(self, message):
        raise _UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="rrtselect", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"rrtselect {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate-rrt", help="validate a requirement tree document")
    p.add_argument("--rrt", required=True, metavar="FILE")
    p.set_defaults(func=cmd_validate_rrt)

    p = sub.add_parser("select", help="rank services for a task")
    p.add_argument("--catalog", required=True, metavar="FILE")
    p.add_argument("--rrt", required=True, metavar="FILE")
    p.add_argument("--task", required=True, metavar="KEYWORD")
    p.add_argument("--report", metavar="OUT", help="write the report JSON to a file")
    p.add_argument("--trace", action="store_true", help="print per-node score tables")
    p.set_defaults(func=cmd_select)

    p = sub.add_parser("profit", help="score one offer against a payable price")
    p.add_argument("--offer", required=True, metavar="JSON")
    p.add_argument("--price", required=True, type=float, metavar="AMOUNT")
    p.set_defaults(func=cmd_profit)

    p = sub.add_parser("generate", help="generate a synthetic catalog")
    p.add_argument("--scenario", default="travel", choices=["travel"])
    p.add_argument("--seed", required=True, type=int)
    p.add_argument("--out", required=True, metavar="FILE")
    p.add_argument("--candidates-per-task", type=int, default=5)
    p.add_argument("--offer-density", type=float, default=0.6)
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("serve", help="run the HTTP broker")
    p.add_argument("--catalog", metavar="FILE", help="catalog path (or RRT_BROKER_CATALOG)")
    p.add_argument("--port", type=int, default=8000)
    p.add_argument("--host", default="127.0.0.1")
    p.set_defaults(func=cmd_serve)
    return parser


def cmd_validate_rrt(args) -> int:
    try:
        text = Path(args.rrt).read_text(encoding="utf-8")
        tree = parse_rrt(text)
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except RrtError as exc:
        print(f"invalid: {exc}", file=sys.stderr)
        return EXIT_INVALID
    violations = validate_rrt(tree)
    if violations:
        for violation in violations:
            print(f"violation: {violation}")
        return EXIT_INVALID
    print("ok")
    return EXIT_OK


def cmd_select(args) -> int:
    try:
        catalog = load_catalog(args.catalog)
        tree = parse_rrt(Path(args.rrt).read_text(encoding="utf-8"))
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except (CatalogSchemaError, DuplicateIdError, RrtError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    violations = validate_rrt(tree)
    if violations:
        for violation in violations:
            print(f"violation: {violation}", file=sys.stderr)
        return EXIT_INVALID

    candidates = find_by_keyword(catalog, args.task)
    try:
        report = evaluate(tree, candidates, args.task)
    except NoFeasibleServiceError as exc:
        print(f"no feasible service: {exc}", file=sys.stderr)
        return EXIT_NO_FEASIBLE

    print(f"task: {report.task}")
    for position, (sid, score) in enumerate(report.ranked, start=1):
        print(f"{position:3d}. {sid}  {score:.9f}")
    print(f"best: {report.best}")
    if args.trace:
        for path in sorted(report.trace):
            table = report.trace[path]
            row = ", ".join(f"{sid}={table[sid]:.9f}" for sid in sorted(table))
            print(f"node {path}: {row}")
    if args.report:
        Path(args.report).write_text(report_to_json(report), encoding="utf-8")
    return EXIT_OK


def cmd_profit(args) -> int:
    try:
        offer = offer_from_json(json.loads(args.offer))
    except (ValueError, TypeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    violations = validate_offer(offer)
    if violations:
        for violation in violations:
            print(f"violation: {violation}", file=sys.stderr)
        return EXIT_INVALID
    try:
        value = profit(offer, args.price)
    except InvalidOfferError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    print(value)
    return EXIT_OK


def cmd_generate(args) -> int:
    from .registry import save_catalog

    try:
        spec = ScenarioSpec(
            seed=args.seed,
            candidates_per_task=args.candidates_per_task,
            offer_density=args.offer_density,
        )
        catalog = generate(spec)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    save_catalog(catalog, args.out)
    print(f"wrote {len(catalog.services)} services to {args.out}")
    return EXIT_OK


def cmd_serve(args) -> int:
    catalog_path = args.catalog or os.environ.get("RRT_BROKER_CATALOG")
    if not catalog_path:
        print("error: no catalog given (use --catalog or RRT_BROKER_CATALOG)", file=sys.stderr)
        return EXIT_USAGE
    try:
        from .broker import create_app

        app = create_app(Path(catalog_path))
    except (OSError, CatalogSchemaError, DuplicateIdError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    import uvicorn

    uvicorn.run(app, host=args.host, port=args.port, log_level="info")
    return EXIT_OK


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except _UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    return args.func(args)


if __name__ == "__main__":
    raise SystemExit(main())
