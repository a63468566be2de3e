"""Command-line interface: build, search, query, rel, matrix.

Exit codes: 0 success (including empty result sets), 1 input or validation
errors, 2 usage errors.  Every subcommand accepts --format text|structured;
structured output is canonical JSON and lists the same result ids in the
same order as the text form.
"""

from __future__ import annotations

import argparse
import json
import sys

from .errors import DocforgeError
from .ingest import canonical_json, load_file
from .layout import (
    DEFAULT_WIDTH,
    GROUPINGS,
    build_method_matrix,
    compact_signature,
    render_matrix_text,
)
from .model import FunctionDef, InterfaceDef, ModuleDef, TypeDef
from .relations import RELATION_KINDS, build_relation_index, relation_query
from .search import (
    DEFAULT_LIMIT,
    FilterSpec,
    build_keyword_index,
    keyword_search,
    type_search,
)
from .sitegen import SiteConfig, generate_site
from .typeexpr import MatchOptions, parse_type_query

RECEIVER_FILTER_VALUES = {
    "ro": "readonly",
    "mut": "mutating",
    "own": "consuming",
    "static": "static",
    "fn": "none",
    "none": "none",
    "readonly": "readonly",
    "mutating": "mutating",
    "consuming": "consuming",
}

FILTER_KEYS = ("receiver", "owner", "returns", "takes")


class _UsageError(Exception):
    pass


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="docforge", description="API documentation toolchain"
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--input", required=True, help="interchange document path")
        p.add_argument(
            "--format",
            choices=("text", "structured"),
            default="text",
            help="output style",
        )

    p = sub.add_parser("build", help="generate the static site")
    common(p)
    p.add_argument("--out", required=True, help="output directory")
    p.add_argument("--group-by", choices=GROUPINGS, default="first-arg")
    p.add_argument("--title", default="API Documentation")
    p.add_argument("--include-private", action="store_true")
    p.set_defaults(func=_cmd_build)

    p = sub.add_parser("search", help="keyword search")
    p.add_argument("query", nargs="+", metavar="QUERY")
    common(p)
    p.add_argument(
        "--filter",
        action="append",
        default=[],
        metavar="KEY=VALUE",
        help="receiver=ro|mut|own|static, owner=T, returns=T, takes=T",
    )
    p.add_argument("--limit", type=int, default=DEFAULT_LIMIT)
    p.add_argument("--synonyms", help="JSON file mapping token to synonyms")
    p.set_defaults(func=_cmd_search)

    p = sub.add_parser("query", help="type-shape search")
    p.add_argument("typeexpr", metavar="TYPEEXPR")
    common(p)
    p.add_argument("--filter", action="append", default=[], metavar="KEY=VALUE")
    p.add_argument("--no-permute", action="store_true")
    p.add_argument("--subtype-hops", type=int, default=1)
    p.add_argument("--limit", type=int, default=None)
    p.set_defaults(func=_cmd_query)

    p = sub.add_parser("rel", help="relational lookup")
    common(p)
    group = p.add_mutually_exclusive_group(required=True)
    for kind in RELATION_KINDS:
        group.add_argument(f"--{kind}", metavar="NAME")
    p.set_defaults(func=_cmd_rel)

    p = sub.add_parser("matrix", help="two-dimensional method table")
    p.add_argument("type", metavar="TYPE")
    common(p)
    p.add_argument("--group-by", choices=GROUPINGS, default="first-arg")
    p.add_argument("--width", type=int, default=DEFAULT_WIDTH)
    p.set_defaults(func=_cmd_matrix)

    return parser


def _parse_filters(pairs: list[str]) -> FilterSpec:
    receiver: set[str] = set()
    named: dict[str, str] = {}
    for pair in pairs:
        key, eq, value = pair.partition("=")
        if not eq or key not in FILTER_KEYS or not value:
            raise _UsageError(f"invalid filter '{pair}'")
        if key == "receiver":
            for item in value.split(","):
                kind = RECEIVER_FILTER_VALUES.get(item)
                if kind is None:
                    raise _UsageError(f"invalid receiver filter value '{item}'")
                receiver.add(kind)
        else:
            named[key] = value
    return FilterSpec(
        receiver=frozenset(receiver) if receiver else None,
        owner=named.get("owner"),
        returns=named.get("returns"),
        takes=named.get("takes"),
    )


def _entity_marker(graph, qname: str) -> str:
    e = graph.entities_by_qualified.get(qname)
    if isinstance(e, FunctionDef):
        return compact_signature(e)
    if isinstance(e, TypeDef):
        return f"({e.kind})"
    if isinstance(e, InterfaceDef):
        return "(interface)"
    if isinstance(e, ModuleDef):
        return "(module)"
    return ""


def _print_results(graph, results, fmt: str, *, score_field: str) -> None:
    if fmt == "structured":
        payload = {
            "results": [
                {
                    "entity": r.entity,
                    score_field: getattr(r, score_field),
                    "explanation": r.explanation,
                }
                for r in results
            ]
        }
        print(canonical_json(payload), end="")
        return
    if not results:
        print("no results")
        return
    for r in results:
        marker = _entity_marker(graph, r.entity)
        middle = f"  {marker}" if marker else ""
        print(f"{r.entity}{middle}  [{score_field} {getattr(r, score_field)}]")


def _cmd_build(args) -> int:
    graph = load_file(args.input)
    rel = build_relation_index(graph)
    config = SiteConfig(
        out_dir=args.out,
        grouping=args.group_by,
        title=args.title,
        include_private=args.include_private,
    )
    manifest = generate_site(graph, rel, config)
    if args.format == "structured":
        print(canonical_json({"manifest": manifest}), end="")
    else:
        for path in manifest:
            print(path)
    return 0


def _cmd_search(args) -> int:
    graph = load_file(args.input)
    filters = _parse_filters(args.filter)
    synonyms = None
    if args.synonyms:
        with open(args.synonyms, encoding="utf-8") as fh:
            synonyms = json.load(fh)
    index = build_keyword_index(graph)
    results = keyword_search(
        index, " ".join(args.query), filters, args.limit, synonyms
    )
    _print_results(graph, results, args.format, score_field="score")
    return 0


def _cmd_query(args) -> int:
    graph = load_file(args.input)
    rel = build_relation_index(graph)
    filters = _parse_filters(args.filter)
    query = parse_type_query(args.typeexpr)
    opts = MatchOptions(
        allow_permutation=not args.no_permute,
        max_subtype_hops=args.subtype_hops,
    )
    results = type_search(graph, rel, query, opts, filters, args.limit)
    _print_results(graph, results, args.format, score_field="penalty")
    return 0


def _cmd_rel(args) -> int:
    graph = load_file(args.input)
    index = build_relation_index(graph)
    kind = next(k for k in RELATION_KINDS if getattr(args, k) is not None)
    ids = relation_query(index, kind, getattr(args, kind))
    if args.format == "structured":
        print(canonical_json({"results": ids}), end="")
    elif not ids:
        print("no results")
    else:
        for i in ids:
            print(i)
    return 0


def _cmd_matrix(args) -> int:
    graph = load_file(args.input)
    matrix = build_method_matrix(graph, args.type, args.group_by)
    if args.format == "structured":
        payload = {
            "subject": matrix.subject,
            "grouping": matrix.grouping,
            "rows": [
                {
                    "label": label,
                    "cells": [
                        {"name": c.name, "signature": c.signature, "target": c.target}
                        for c in cells
                    ],
                }
                for label, cells in matrix.rows
            ],
        }
        print(canonical_json(payload), end="")
    else:
        print(render_matrix_text(matrix, args.width), end="")
    return 0


def run(argv: list[str]) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    try:
        return args.func(args)
    except _UsageError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except DocforgeError as e:
        print(f"error: {e.kind}: {e.message}", file=sys.stderr)
        return 1
    except OSError as e:
        print(f"error: io-failure: {e}", file=sys.stderr)
        return 1
    except json.JSONDecodeError as e:
        print(f"error: malformed-document: {e}", file=sys.stderr)
        return 1


def main() -> None:
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
