"""Interchange document loading and canonical emission.

A document is one JSON object describing one API surface.  Loading parses
every embedded type string, resolves aliases, and validates the resulting
graph; emission renders the graph back to canonical JSON (sorted keys,
two-space indent, sorted entity lists, trailing newline) so that
emit(load(emit(g))) is byte-identical to emit(load(g)).
"""

from __future__ import annotations

import json
from pathlib import Path

from .errors import DocforgeError
from .model import (
    ApiGraph,
    DEFAULT_PRIMITIVES,
    FunctionDef,
    InterfaceDef,
    ModuleDef,
    TypeDef,
    qualified_name,
    validate_graph,
)
from .typeexpr import (
    Signature,
    TypeExpr,
    TypeParseError,
    mark_vars,
    parse_signature,
    parse_type_text,
    render_signature,
    render_type,
)

FORMAT_VERSION = 1


class DocumentError(DocforgeError):
    """A document failed to load.  reason is one of malformed-document,
    unknown-version, signature-parse-error, validation-failure."""

    kind = "document-error"

    def __init__(
        self,
        reason: str,
        message: str,
        *,
        entity: str | None = None,
        offset: int | None = None,
        violations=None,
    ):
        super().__init__(message)
        self.kind = reason
        self.reason = reason
        self.entity = entity
        self.offset = offset
        self.violations = violations or []


def _malformed(message: str) -> DocumentError:
    return DocumentError("malformed-document", message)


def _obj(value, what: str) -> dict:
    if not isinstance(value, dict):
        raise _malformed(f"{what} must be an object")
    return value


def _array(value, what: str) -> list:
    if value is None:
        return []
    if not isinstance(value, list):
        raise _malformed(f"{what} must be an array")
    return value


def _string(value, what: str, *, optional: bool = False) -> str | None:
    if value is None and optional:
        return None
    if not isinstance(value, str):
        raise _malformed(f"{what} must be a string")
    return value


def _names(value, what: str) -> tuple[str, ...]:
    return tuple(_string(v, f"{what} entry") for v in _array(value, what))


def _module_path(value, what: str) -> tuple[str, ...]:
    text = _string(value, what)
    return tuple(text.split("::")) if text else ()


def _parse_expr(text: str, aliases, scope: set[str], entity: str) -> TypeExpr:
    try:
        parsed = parse_type_text(text, aliases)
    except TypeParseError as e:
        raise DocumentError(
            "signature-parse-error",
            f"{entity}: {e.message}",
            entity=entity,
            offset=e.offset,
        ) from e
    return mark_vars(parsed, scope)


def _parse_sig(text: str, aliases, scope: set[str], entity: str) -> Signature:
    try:
        sig = parse_signature(text, aliases)
    except TypeParseError as e:
        raise DocumentError(
            "signature-parse-error",
            f"{entity}: {e.message}",
            entity=entity,
            offset=e.offset,
        ) from e
    params = tuple((n, mark_vars(t, scope)) for n, t in sig.params)
    return Signature(params, mark_vars(sig.ret, scope))


def _load_function(
    entry: dict,
    aliases,
    *,
    module: tuple[str, ...] | None = None,
    owner: str | None = None,
    owner_params: tuple[str, ...] = (),
    default_receiver: str = "none",
) -> FunctionDef:
    name = _string(entry.get("name"), "function name")
    if module is None:
        module = _module_path(entry.get("module"), f"module of function '{name}'")
        owner = _string(entry.get("owner"), f"owner of '{name}'", optional=True)
    type_params = _names(entry.get("type_params"), f"type_params of '{name}'")
    receiver = entry.get("receiver", default_receiver)
    receiver = _string(receiver, f"receiver of '{name}'")
    visibility = _string(entry.get("visibility", "public"), f"visibility of '{name}'")
    doc = _string(entry.get("doc"), f"doc of '{name}'", optional=True)
    stub = FunctionDef(name=name, module=module, owner=owner, receiver=receiver)
    entity = qualified_name(stub)
    scope = set(type_params) | set(owner_params)
    sig_text = _string(entry.get("signature"), f"signature of '{entity}'")
    sig = _parse_sig(sig_text, aliases, scope, entity)
    return FunctionDef(
        name=name,
        module=module,
        owner=owner,
        receiver=receiver,
        params=sig.params,
        ret=sig.ret,
        type_params=type_params,
        visibility=visibility,
        doc=doc,
    )


def load_document(
    doc: object, *, primitives: frozenset[str] = DEFAULT_PRIMITIVES
) -> ApiGraph:
    """Build a validated graph from a parsed document object.

    The primitive type names are loader configuration, not document content;
    they seed name resolution alongside the declared types and interfaces.
    """
    doc = _obj(doc, "document")
    version = doc.get("format_version")
    if version is None:
        raise _malformed("missing format_version")
    if version != FORMAT_VERSION:
        raise DocumentError(
            "unknown-version", f"unsupported format_version {version!r}"
        )

    aliases_raw = doc.get("aliases") or {}
    aliases = {
        _string(k, "alias key"): _string(v, "alias value")
        for k, v in _obj(aliases_raw, "aliases").items()
    }

    modules = []
    for entry in _array(doc.get("modules"), "modules"):
        entry = _obj(entry, "module entry")
        modules.append(
            ModuleDef(
                path=_module_path(entry.get("path"), "module path"),
                doc=_string(entry.get("doc"), "module doc", optional=True),
            )
        )

    types = []
    for entry in _array(doc.get("types"), "types"):
        entry = _obj(entry, "type entry")
        name = _string(entry.get("name"), "type name")
        module = _module_path(entry.get("module"), f"module of type '{name}'")
        type_params = _names(entry.get("type_params"), f"type_params of '{name}'")
        entity = "::".join((*module, name))
        scope = set(type_params)
        fields = []
        for pair in _array(entry.get("fields"), f"fields of '{name}'"):
            if not (isinstance(pair, list) and len(pair) == 2):
                raise _malformed(f"field of '{name}' must be a [name, type] pair")
            fname = _string(pair[0], f"field name of '{name}'")
            fields.append((fname, _parse_expr(pair[1], aliases, scope, entity)))
        types.append(
            TypeDef(
                name=name,
                module=module,
                kind=_string(entry.get("kind", "class"), f"kind of '{name}'"),
                type_params=type_params,
                fields=tuple(fields),
                supertypes=_names(entry.get("supertypes"), f"supertypes of '{name}'"),
                implements=_names(entry.get("implements"), f"implements of '{name}'"),
                doc=_string(entry.get("doc"), f"doc of '{name}'", optional=True),
            )
        )

    interfaces = []
    for entry in _array(doc.get("interfaces"), "interfaces"):
        entry = _obj(entry, "interface entry")
        name = _string(entry.get("name"), "interface name")
        module = _module_path(entry.get("module"), f"module of interface '{name}'")
        type_params = _names(entry.get("type_params"), f"type_params of '{name}'")
        shapes = []
        for shape in _array(entry.get("method_shapes"), f"method_shapes of '{name}'"):
            shapes.append(
                _load_function(
                    _obj(shape, f"method shape of '{name}'"),
                    aliases,
                    module=module,
                    owner=name,
                    owner_params=type_params,
                    default_receiver="readonly",
                )
            )
        interfaces.append(
            InterfaceDef(
                name=name,
                module=module,
                type_params=type_params,
                extends=_names(entry.get("extends"), f"extends of '{name}'"),
                method_shapes=tuple(shapes),
                doc=_string(entry.get("doc"), f"doc of '{name}'", optional=True),
            )
        )

    # owner type parameters are in scope inside method signatures, so types
    # and interfaces are read before any function signature is parsed
    owner_params: dict[str, tuple[str, ...]] = {}
    for t in (*types, *interfaces):
        owner_params.setdefault(t.name, t.type_params)

    functions = []
    for entry in _array(doc.get("functions"), "functions"):
        entry = _obj(entry, "function entry")
        owner = entry.get("owner")
        functions.append(
            _load_function(
                entry,
                aliases,
                owner_params=owner_params.get(owner, ()) if owner else (),
            )
        )

    graph = ApiGraph(
        modules=tuple(modules),
        types=tuple(types),
        functions=tuple(functions),
        interfaces=tuple(interfaces),
        aliases=aliases,
        primitives=primitives,
    )
    report = validate_graph(graph)
    if report:
        lines = "; ".join(f"{v.entity}: {v.rule} ({v.detail})" for v in report[:5])
        raise DocumentError(
            "validation-failure",
            f"{len(report)} violation(s): {lines}",
            violations=report,
        )
    return graph


def load_text(text: str, **kwargs) -> ApiGraph:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise _malformed(f"invalid JSON: {e.msg} at position {e.pos}") from e
    return load_document(doc, **kwargs)


def load_file(path: str | Path, **kwargs) -> ApiGraph:
    return load_text(Path(path).read_text(encoding="utf-8"), **kwargs)


# ---------------------------------------------------------------------------
# emission


def canonical_json(doc: object) -> str:
    return json.dumps(doc, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def _emit_function(f: FunctionDef, *, nested: bool) -> dict:
    out = {
        "name": f.name,
        "receiver": f.receiver,
        "signature": render_signature(f.params, f.ret),
        "type_params": list(f.type_params),
        "visibility": f.visibility,
        "doc": f.doc,
    }
    if not nested:
        out["module"] = "::".join(f.module)
        out["owner"] = f.owner
    return out


def emit_document(graph: ApiGraph) -> dict:
    modules = sorted(graph.modules, key=qualified_name)
    types = sorted(graph.types, key=qualified_name)
    interfaces = sorted(graph.interfaces, key=qualified_name)
    functions = sorted(graph.functions, key=qualified_name)
    return {
        "format_version": FORMAT_VERSION,
        "aliases": dict(sorted(graph.aliases.items())),
        "modules": [
            {"path": "::".join(m.path), "doc": m.doc} for m in modules
        ],
        "types": [
            {
                "name": t.name,
                "module": "::".join(t.module),
                "kind": t.kind,
                "type_params": list(t.type_params),
                "fields": [[n, render_type(ft)] for n, ft in t.fields],
                "supertypes": sorted(t.supertypes),
                "implements": sorted(t.implements),
                "doc": t.doc,
            }
            for t in types
        ],
        "interfaces": [
            {
                "name": i.name,
                "module": "::".join(i.module),
                "type_params": list(i.type_params),
                "extends": sorted(i.extends),
                "method_shapes": [
                    _emit_function(s, nested=True)
                    for s in sorted(i.method_shapes, key=lambda s: s.name)
                ],
                "doc": i.doc,
            }
            for i in interfaces
        ],
        "functions": [_emit_function(f, nested=False) for f in functions],
    }


def emit_text(graph: ApiGraph) -> str:
    return canonical_json(emit_document(graph))


def save_file(graph: ApiGraph, path: str | Path) -> None:
    Path(path).write_text(emit_text(graph), encoding="utf-8")
