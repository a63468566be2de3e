"""Two-dimensional method tables for scanning: grouped rows of compact cells.

A matrix partitions (or, for annotation grouping, covers) the public methods
of one subject type.  Rows are ordered by label with the "ungrouped"
catch-all last, cells by method name, so renderings are deterministic.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import DocforgeError
from .model import (
    ApiGraph,
    FunctionDef,
    RECEIVER_MARKERS,
    doc_groups,
    qualified_name,
)
from .typeexpr import render_signature, render_type

GROUPINGS = ("first-arg", "receiver", "return", "annotation")
UNGROUPED_LABEL = "ungrouped"
NO_ARG_LABEL = "(none)"

CELL_SEPARATOR = "    "
DEFAULT_WIDTH = 100


class UnknownSubjectError(DocforgeError):
    kind = "unknown-subject"

    def __init__(self, name: str):
        super().__init__(f"no type named '{name}'")
        self.name = name


@dataclass(frozen=True)
class MethodCell:
    name: str
    signature: str
    target: str


@dataclass(frozen=True)
class MethodMatrix:
    subject: str
    grouping: str
    rows: tuple[tuple[str, tuple[MethodCell, ...]], ...]


def compact_signature(f: FunctionDef) -> str:
    """Leading receiver marker, then the plain signature; everything after
    the first space re-parses as a signature."""
    marker = RECEIVER_MARKERS[f.receiver]
    return f"({marker}) {render_signature(f.params, f.ret)}"


def _cell(f: FunctionDef) -> MethodCell:
    return MethodCell(f.name, compact_signature(f), qualified_name(f))


def _group_labels(f: FunctionDef, grouping: str) -> list[str]:
    if grouping == "first-arg":
        return [render_type(f.params[0][1]) if f.params else NO_ARG_LABEL]
    if grouping == "receiver":
        return [f.receiver]
    if grouping == "return":
        return [render_type(f.ret)]
    if grouping == "annotation":
        return doc_groups(f.doc) or [UNGROUPED_LABEL]
    raise ValueError(f"unknown grouping: {grouping}")


def build_method_matrix(graph: ApiGraph, subject: str, grouping: str) -> MethodMatrix:
    heads = graph.declared_head_names
    name = subject
    if name not in heads:
        hits = sorted(h for h in heads if h.lower() == subject.lower())
        if len(hits) == 1:
            name = hits[0]
    t = graph.find_type_def(name)
    if t is None:
        raise UnknownSubjectError(subject)

    grouped: dict[str, list[MethodCell]] = {}
    for f in graph.methods_of(t):
        for label in _group_labels(f, grouping):
            grouped.setdefault(label, []).append(_cell(f))

    ordered = sorted(grouped, key=lambda l: (l == UNGROUPED_LABEL, l))
    rows = tuple(
        (label, tuple(sorted(grouped[label], key=lambda c: (c.name, c.target))))
        for label in ordered
    )
    return MethodMatrix(t.name, grouping, rows)


def render_matrix_text(matrix: MethodMatrix, width: int = DEFAULT_WIDTH) -> str:
    """One header line per row, then cells flowing left to right; a cell
    longer than the width gets its own line, never truncated."""
    lines: list[str] = []
    for label, cells in matrix.rows:
        lines.append(f"== {label} ==")
        line = ""
        for cell in cells:
            text = f"{cell.name}  {cell.signature}"
            if not line:
                line = text
            elif len(line) + len(CELL_SEPARATOR) + len(text) <= width:
                line += CELL_SEPARATOR + text
            else:
                lines.append(line)
                line = text
        if line:
            lines.append(line)
    return "\n".join(lines) + "\n" if lines else ""
