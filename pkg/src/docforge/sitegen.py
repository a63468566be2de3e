"""Static site generation plus the machine-readable search index.

Every page is plain HTML with relative links and flat dot-joined file names
(collections.List.len.html), so qualified-name uniqueness guarantees
collision-free paths.  Output is byte-deterministic: identical graph and
config produce identical file trees.
"""

from __future__ import annotations

import html
from dataclasses import dataclass
from pathlib import Path

from .errors import DocforgeError
from .ingest import canonical_json
from .layout import GROUPINGS, build_method_matrix
from .model import (
    ApiGraph,
    FunctionDef,
    InterfaceDef,
    ModuleDef,
    TypeDef,
    doc_groups,
    doc_prose,
    doc_summary,
    desugar_method,
    qualified_name,
)
from .relations import RelationIndex, TreeNode, inheritance_tree
from .search import tokenize_identifier
from .typeexpr import iter_named, render_type
from .layout import compact_signature

INDEX_VERSION = 1


class SiteWriteError(DocforgeError):
    kind = "io-failure"

    def __init__(self, path: str, cause: str):
        super().__init__(f"cannot write {path}: {cause}")
        self.path = path


@dataclass(frozen=True)
class SiteConfig:
    out_dir: str
    grouping: str = "first-arg"
    title: str = "API Documentation"
    include_private: bool = False


def _entity_name(e) -> str:
    if isinstance(e, ModuleDef):
        return e.path[-1] if e.path else ""
    return e.name


def _owner_id(f: FunctionDef) -> str | None:
    if f.owner is None:
        return None
    return "::".join((*f.module, f.owner))


def search_index_document(
    graph: ApiGraph, rel: RelationIndex, include_private: bool = False
) -> dict:
    entities = []
    included: set[str] = set()
    for e in graph.all_entities():
        if (
            isinstance(e, FunctionDef)
            and e.visibility != "public"
            and not include_private
        ):
            continue
        q = qualified_name(e)
        included.add(q)
        name = _entity_name(e)
        entry = {
            "id": q,
            "kind": "module",
            "name": name,
            "tokens": tokenize_identifier(name),
            "owner": None,
            "receiver": None,
            "params": [],
            "ret": None,
            "doc_summary": doc_summary(getattr(e, "doc", None)),
            "groups": doc_groups(getattr(e, "doc", None)),
            "module": "::".join(e.path if isinstance(e, ModuleDef) else e.module),
        }
        if isinstance(e, TypeDef):
            entry["kind"] = e.kind
            entry["params"] = list(e.type_params)
        elif isinstance(e, InterfaceDef):
            entry["kind"] = "interface"
            entry["params"] = list(e.type_params)
        elif isinstance(e, FunctionDef):
            shape = desugar_method(e, graph)
            entry["kind"] = "function"
            entry["owner"] = _owner_id(e)
            entry["receiver"] = e.receiver
            entry["params"] = [render_type(p) for p in shape.params]
            entry["ret"] = render_type(e.ret)
        entities.append(entry)
    entities.sort(key=lambda e: e["id"])

    def keep(table: dict[str, list[str]]) -> dict[str, list[str]]:
        out = {}
        for key, ids in table.items():
            kept = [i for i in ids if i in included]
            if kept:
                out[key] = kept
        return out

    return {
        "version": INDEX_VERSION,
        "aliases": dict(sorted(graph.aliases.items())),
        "entities": entities,
        "relations": {
            "inputs": keep(rel.inputs),
            "outputs": keep(rel.outputs),
            "implements": keep(rel.implements),
            "inherits": keep(rel.inherits_up),
        },
    }


def emit_search_index(
    graph: ApiGraph, rel: RelationIndex, include_private: bool = False
) -> bytes:
    doc = search_index_document(graph, rel, include_private)
    return canonical_json(doc).encode("utf-8")


# ---------------------------------------------------------------------------
# pages


def page_name(qualified: str) -> str:
    return qualified.replace("::", ".") + ".html"


def _esc(text: str) -> str:
    return html.escape(text, quote=True)


def _link(target: str, label: str) -> str:
    return f'<a href="{_esc(target)}">{_esc(label)}</a>'


def _entity_link(e) -> str:
    q = qualified_name(e)
    return _link(page_name(q), q)


def _page(title: str, body: list[str]) -> str:
    lines = [
        "<!DOCTYPE html>",
        "<html>",
        "<head>",
        '<meta charset="utf-8">',
        f"<title>{_esc(title)}</title>",
        "</head>",
        "<body>",
        f"<h1>{_esc(title)}</h1>",
        *body,
        "</body>",
        "</html>",
    ]
    return "\n".join(lines) + "\n"


def _doc_block(doc: str | None) -> list[str]:
    prose = doc_prose(doc)
    if not prose:
        return []
    return [f"<p>{_esc(prose)}</p>"]


def _section(title: str, items: list[str]) -> list[str]:
    if not items:
        return []
    body = [f"<h2>{_esc(title)}</h2>", "<ul>"]
    body.extend(f"<li>{item}</li>" for item in items)
    body.append("</ul>")
    return body


def _type_heads(exprs) -> list[str]:
    heads = set()
    for e in exprs:
        heads.update(n.name for n in iter_named(e))
    return sorted(heads)


def _matrix_body(graph: ApiGraph, subject: str, grouping: str) -> list[str]:
    matrix = build_method_matrix(graph, subject, grouping)
    body: list[str] = []
    if not matrix.rows:
        return body
    body.append(f"<h2>Methods by {_esc(grouping)}</h2>")
    for label, cells in matrix.rows:
        body.append(f"<h3>{_esc(label)}</h3>")
        body.append("<ul>")
        for cell in cells:
            link = _link(page_name(cell.target), cell.name)
            body.append(f"<li>{link} <code>{_esc(cell.signature)}</code></li>")
        body.append("</ul>")
    return body


def generate_site(graph: ApiGraph, rel: RelationIndex, config: SiteConfig) -> list[str]:
    """Write the site into config.out_dir and return the sorted manifest of
    relative paths written."""
    if config.grouping not in GROUPINGS:
        raise ValueError(f"unknown grouping: {config.grouping}")
    out = Path(config.out_dir)
    written: dict[str, bytes] = {}

    functions = [
        f
        for f in graph.functions
        if f.visibility == "public" or config.include_private
    ]
    modules = sorted(graph.modules, key=qualified_name)
    types = sorted(graph.types, key=qualified_name)
    interfaces = sorted(graph.interfaces, key=qualified_name)
    functions = sorted(functions, key=qualified_name)

    # front page
    body = _section("Modules", [_entity_link(m) for m in modules])
    body.extend(_section("Hierarchy", [_link("tree.html", "inheritance tree")]))
    written["index.html"] = _page(config.title, body).encode("utf-8")

    for m in modules:
        q = qualified_name(m)
        in_module = lambda e: e.module == m.path
        body = _doc_block(m.doc)
        body += _section("Types", [_entity_link(t) for t in types if in_module(t)])
        body += _section(
            "Interfaces", [_entity_link(i) for i in interfaces if in_module(i)]
        )
        body += _section(
            "Functions",
            [_entity_link(f) for f in functions if in_module(f) and f.owner is None],
        )
        written[page_name(q)] = _page(q, body).encode("utf-8")

    subtypes_of: dict[str, list[TypeDef]] = {}
    for t in graph.types:
        for s in t.supertypes:
            parent = graph.find_type_def(s, t.module)
            if parent is not None:
                subtypes_of.setdefault(qualified_name(parent), []).append(t)

    for t in types:
        q = qualified_name(t)
        body = [f"<p><em>{_esc(t.kind)}</em></p>"]
        body += _doc_block(t.doc)
        body += _section(
            "Fields",
            [f"{_esc(n)}: <code>{_esc(render_type(ft))}</code>" for n, ft in t.fields],
        )
        supers = []
        for s in t.supertypes:
            parent = graph.find_type(s, t.module)
            supers.append(_entity_link(parent) if parent is not None else _esc(s))
        body += _section("Inherits", supers)
        body += _section(
            "Subtypes",
            [
                _entity_link(c)
                for c in sorted(subtypes_of.get(q, []), key=qualified_name)
            ],
        )
        impls = []
        for i in t.implements:
            target = graph.find_type(i, t.module)
            impls.append(_entity_link(target) if target is not None else _esc(i))
        body += _section("Implements", impls)
        body += _matrix_body(graph, t.name, config.grouping)
        written[page_name(q)] = _page(q, body).encode("utf-8")

    for i in interfaces:
        q = qualified_name(i)
        body = ["<p><em>interface</em></p>"]
        body += _doc_block(i.doc)
        exts = []
        for e in i.extends:
            target = graph.find_type(e, i.module)
            exts.append(_entity_link(target) if target is not None else _esc(e))
        body += _section("Extends", exts)
        body += _section(
            "Required methods",
            [
                f"{_esc(s.name)} <code>{_esc(compact_signature(s))}</code>"
                for s in sorted(i.method_shapes, key=lambda s: s.name)
            ],
        )
        implementors = []
        for impl_id in rel.implements.get(i.name, ()):
            e = graph.entities_by_qualified.get(impl_id)
            if e is not None:
                implementors.append(_entity_link(e))
        body += _section("Implementors", implementors)
        written[page_name(q)] = _page(q, body).encode("utf-8")

    for f in functions:
        q = qualified_name(f)
        body = [f"<p><code>{_esc(compact_signature(f))}</code></p>"]
        if f.visibility != "public":
            body.append("<p><em>private</em></p>")
        body += _doc_block(f.doc)
        if f.owner is not None:
            owner = graph.find_type(f.owner, f.module)
            if owner is not None:
                body += _section("Owner", [_entity_link(owner)])
        shape = desugar_method(f, graph)
        takes = []
        for head in _type_heads(shape.params):
            target = graph.find_type(head)
            if target is not None:
                takes.append(_entity_link(target))
        returns = []
        for head in _type_heads([shape.ret]):
            target = graph.find_type(head)
            if target is not None:
                returns.append(_entity_link(target))
        body += _section("Takes", takes)
        body += _section("Returns", returns)
        written[page_name(q)] = _page(q, body).encode("utf-8")

    def tree_items(nodes: list[TreeNode]) -> list[str]:
        items = ["<ul>"]
        for node in nodes:
            children = tree_items(node.children) if node.children else []
            items.append(
                f"<li>{_link(page_name(node.qualified), node.name)}"
                + "".join(children)
                + "</li>"
            )
        items.append("</ul>")
        return items

    forest = inheritance_tree(rel, graph)
    tree_body = tree_items(forest) if forest else ["<p>no types</p>"]
    written["tree.html"] = _page("Inheritance tree", tree_body).encode("utf-8")

    written["search-index.json"] = emit_search_index(
        graph, rel, config.include_private
    )

    try:
        out.mkdir(parents=True, exist_ok=True)
        for path, content in sorted(written.items()):
            (out / path).write_bytes(content)
    except OSError as e:
        raise SiteWriteError(str(e.filename or out), e.strerror or str(e)) from e
    return sorted(written)
