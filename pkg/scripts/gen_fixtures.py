#!/usr/bin/env python3
"""Regenerate committed fixtures.

Rewrites the large generated interchange document, the published search
indexes consumed by the browser frontend, and the parity corpora that pin
the frontend's reimplemented ranking to the CLI's structured output.
"""

import io
import json
import re
import sys
from contextlib import redirect_stdout
from pathlib import Path

ROOT = Path(__file__).resolve().parents[1]
sys.path.insert(0, str(ROOT / "tests"))

from generators import veclike_document  # noqa: E402

from docforge.cli import run  # noqa: E402
from docforge.errors import DocforgeError  # noqa: E402
from docforge.ingest import canonical_json, emit_text, load_document, load_file  # noqa: E402
from docforge.model import doc_prose, doc_summary  # noqa: E402
from docforge.relations import build_relation_index  # noqa: E402
from docforge.sitegen import emit_search_index  # noqa: E402
from docforge.typeexpr import parse_type_query  # noqa: E402

FIXTURES = ROOT / "tests" / "fixtures"
FRONTEND_FIXTURES = ROOT / "frontend" / "fixtures"

PARITY_QUERIES = [
    "[a] -> int",
    "(a) -> int",
    "Set<a> -> List<a>",
    "(Fn1<a, Bool>, List<a>) -> Int",
    "SortedSet<a> -> Int",
    "(a) -> Iterable<b>",
    "a",
    "[a]",
    "List<a>",
    "(a, b) -> c",
    "(s: Set<a>) -> List<a>",
    "list<a> -> set<a>",
    "(List<a>) -> b",
    "Set<a>",
    "(a) -> a",
    "[b] -> b",
    "Iterable<a> -> Int",
    "fn1<a, Bool> -> Int",
    "find",
    "index",
    "list",
    "set",
    "sorted",
    "push",
    "of",
    "size length count",
    "list find predicate",
    "first",
    "convert",
    "append",
    "element",
    "ITERABLE",
    "toSet",
    "index of",
    "Int",
    "sorted set",
    "List<",
    "Set<a",
]

_WORD_RE = re.compile(r"[A-Za-z0-9_]+")


def detect_mode(text: str) -> str:
    """Type mode iff the text parses under the query grammar and carries a
    shape marker: an arrow, list sugar, type arguments, or a lone lowercase
    variable token."""
    try:
        parse_type_query(text)
    except DocforgeError:
        return "keyword"
    if "->" in text or "[" in text or "<" in text:
        return "type"
    for word in _WORD_RE.findall(text):
        if len(word) == 1 and word.isalpha() and word.islower():
            return "type"
    return "keyword"


def _cli_json(argv: list[str]) -> dict:
    buf = io.StringIO()
    with redirect_stdout(buf):
        code = run(argv)
    if code != 0:
        raise SystemExit(f"cli {argv} exited {code}")
    return json.loads(buf.getvalue())


def write_veclike() -> Path:
    doc, _ = veclike_document()
    target = FIXTURES / "veclike.json"
    target.write_text(emit_text(load_document(doc)), encoding="utf-8")
    return target


def assert_single_line_docs(path: Path) -> None:
    # browser keyword scoring reads doc_summary; the parity corpus is only
    # valid while every doc in it is a single prose line
    graph = load_file(path)
    for e in graph.all_entities():
        doc = getattr(e, "doc", None)
        if doc_prose(doc) != doc_summary(doc):
            raise SystemExit(f"{path.name}: multi-line doc on {e!r}")


def write_indexes() -> None:
    for name in ("collections", "veclike"):
        graph = load_file(FIXTURES / f"{name}.json")
        blob = emit_search_index(graph, build_relation_index(graph))
        out = FRONTEND_FIXTURES / (
            "search-index.json" if name == "collections" else "veclike-index.json"
        )
        out.write_bytes(blob)


def write_parity() -> None:
    input_path = str(FIXTURES / "collections.json")
    entries = []
    for query in PARITY_QUERIES:
        mode = detect_mode(query)
        if mode == "type":
            payload = _cli_json(
                ["query", query, "--input", input_path, "--format", "structured"]
            )
        else:
            payload = _cli_json(
                ["search", query, "--input", input_path, "--format", "structured"]
            )
        ids = [r["entity"] for r in payload["results"]]
        entries.append({"query": query, "mode": mode, "ids": ids})
    out = FRONTEND_FIXTURES / "parity.json"
    out.write_text(canonical_json({"queries": entries}), encoding="utf-8")


def write_matrix_parity() -> None:
    input_path = str(FIXTURES / "collections.json")
    groupings = {}
    for grouping in ("first-arg", "receiver", "return", "annotation"):
        payload = _cli_json(
            [
                "matrix", "List",
                "--input", input_path,
                "--group-by", grouping,
                "--format", "structured",
            ]
        )
        groupings[grouping] = [
            {
                "label": row["label"],
                "targets": [cell["target"] for cell in row["cells"]],
            }
            for row in payload["rows"]
        ]
    out = FRONTEND_FIXTURES / "matrix-parity.json"
    out.write_text(
        canonical_json({"subject": "List", "groupings": groupings}),
        encoding="utf-8",
    )


def main() -> None:
    FRONTEND_FIXTURES.mkdir(parents=True, exist_ok=True)
    veclike = write_veclike()
    assert_single_line_docs(FIXTURES / "collections.json")
    assert_single_line_docs(veclike)
    write_indexes()
    write_parity()
    write_matrix_parity()
    print("fixtures regenerated")


if __name__ == "__main__":
    main()
