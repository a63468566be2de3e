"""Language-neutral API model: entities, validation, method desugaring.

The model covers the primitives any mainstream surface exports: data
structures, callables (with a receiver kind), interfaces, and module
hierarchies, plus the relations between them.  Exporters for concrete
languages are expected to map into these types; everything downstream
(search, relations, layout, site generation) consumes only this model.
"""

from __future__ import annotations

import re
from collections import Counter
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterator, Union

from .typeexpr import (
    FunctionShape,
    Named,
    TypeExpr,
    Var,
    iter_named,
    iter_vars,
)

RECEIVER_KINDS = ("none", "readonly", "mutating", "consuming", "static")
FOLDED_RECEIVERS = ("readonly", "mutating", "consuming")
RECEIVER_MARKERS = {
    "none": "fn",
    "readonly": "ro",
    "mutating": "mut",
    "consuming": "own",
    "static": "static",
}
TYPE_KINDS = ("struct", "enum", "class")
VISIBILITIES = ("public", "private")
DEFAULT_PRIMITIVES = frozenset({"Int", "Bool", "Unit", "String"})

GROUP_PREFIX = "@group "

_IDENT_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_]*\Z")
_FN_CTOR_RE = re.compile(r"Fn([0-9]+)\Z")


def doc_groups(doc: str | None) -> list[str]:
    """Annotation tags: doc lines starting with "@group ", in order, deduped."""
    if not doc:
        return []
    seen: list[str] = []
    for line in doc.splitlines():
        if line.startswith(GROUP_PREFIX):
            tag = line[len(GROUP_PREFIX):].strip()
            if tag and tag not in seen:
                seen.append(tag)
    return seen


def doc_prose(doc: str | None) -> str:
    """Documentation text with @group annotation lines removed."""
    if not doc:
        return ""
    lines = [l for l in doc.splitlines() if not l.startswith(GROUP_PREFIX)]
    return "\n".join(lines).strip()


def doc_summary(doc: str | None) -> str:
    prose = doc_prose(doc)
    return prose.splitlines()[0] if prose else ""


@dataclass
class ModuleDef:
    path: tuple[str, ...]
    doc: str | None = None


@dataclass
class TypeDef:
    name: str
    module: tuple[str, ...]
    kind: str = "class"
    type_params: tuple[str, ...] = ()
    fields: tuple[tuple[str, TypeExpr], ...] = ()
    supertypes: tuple[str, ...] = ()
    implements: tuple[str, ...] = ()
    doc: str | None = None


@dataclass
class FunctionDef:
    name: str
    module: tuple[str, ...]
    owner: str | None = None
    receiver: str = "none"
    params: tuple[tuple[str, TypeExpr], ...] = ()
    ret: TypeExpr = Named("Unit")
    type_params: tuple[str, ...] = ()
    visibility: str = "public"
    doc: str | None = None

    @property
    def groups(self) -> list[str]:
        return doc_groups(self.doc)


@dataclass
class InterfaceDef:
    name: str
    module: tuple[str, ...]
    type_params: tuple[str, ...] = ()
    extends: tuple[str, ...] = ()
    method_shapes: tuple[FunctionDef, ...] = ()
    doc: str | None = None


Entity = Union[ModuleDef, TypeDef, FunctionDef, InterfaceDef]


def qualified_name(entity: Entity) -> str:
    """Module path joined with "::", then owner (for methods), then name."""
    if isinstance(entity, ModuleDef):
        return "::".join(entity.path)
    prefix = "::".join(entity.module)
    if isinstance(entity, FunctionDef) and entity.owner:
        return f"{prefix}::{entity.owner}::{entity.name}"
    return f"{prefix}::{entity.name}"


def _sorted_key(entity: Entity) -> tuple:
    if isinstance(entity, ModuleDef):
        return (entity.path, entity.doc)
    if isinstance(entity, TypeDef):
        return (
            entity.module,
            entity.name,
            entity.kind,
            entity.type_params,
            tuple((n, t) for n, t in entity.fields),
            tuple(sorted(entity.supertypes)),
            tuple(sorted(entity.implements)),
            entity.doc,
        )
    if isinstance(entity, InterfaceDef):
        return (
            entity.module,
            entity.name,
            entity.type_params,
            tuple(sorted(entity.extends)),
            tuple(_sorted_key(s) for s in sorted(entity.method_shapes, key=qualified_name)),
            entity.doc,
        )
    return (
        entity.module,
        entity.name,
        entity.owner,
        entity.receiver,
        tuple((n, t) for n, t in entity.params),
        entity.ret,
        entity.type_params,
        entity.visibility,
        entity.doc,
    )


@dataclass(eq=False)
class ApiGraph:
    """One documented API surface.  Treat as immutable after construction."""

    modules: tuple[ModuleDef, ...] = ()
    types: tuple[TypeDef, ...] = ()
    functions: tuple[FunctionDef, ...] = ()
    interfaces: tuple[InterfaceDef, ...] = ()
    aliases: dict[str, str] = field(default_factory=dict)
    primitives: frozenset[str] = DEFAULT_PRIMITIVES

    def __eq__(self, other) -> bool:
        # entity-set equality: list order never matters
        if not isinstance(other, ApiGraph):
            return NotImplemented
        for mine, theirs in (
            (self.modules, other.modules),
            (self.types, other.types),
            (self.functions, other.functions),
            (self.interfaces, other.interfaces),
        ):
            if sorted(map(_sorted_key, mine)) != sorted(map(_sorted_key, theirs)):
                return False
        return self.aliases == other.aliases and self.primitives == other.primitives

    def all_entities(self) -> Iterator[Entity]:
        yield from self.modules
        yield from self.types
        yield from self.interfaces
        yield from self.functions

    def public_functions(self) -> Iterator[FunctionDef]:
        for f in self.functions:
            if f.visibility == "public":
                yield f

    @cached_property
    def declared_head_names(self) -> frozenset[str]:
        names = {t.name for t in self.types}
        names.update(i.name for i in self.interfaces)
        names.update(self.primitives)
        return frozenset(names)

    @cached_property
    def declared_arities(self) -> dict[str, set[int]]:
        arities: dict[str, set[int]] = {}
        for t in self.types:
            arities.setdefault(t.name, set()).add(len(t.type_params))
        for i in self.interfaces:
            arities.setdefault(i.name, set()).add(len(i.type_params))
        for p in self.primitives:
            arities.setdefault(p, set()).add(0)
        return arities

    @cached_property
    def _named_types(self) -> dict[str, list[TypeDef | InterfaceDef]]:
        by_name: dict[str, list[TypeDef | InterfaceDef]] = {}
        for t in (*self.types, *self.interfaces):
            by_name.setdefault(t.name, []).append(t)
        for lst in by_name.values():
            lst.sort(key=qualified_name)
        return by_name

    def find_type(
        self, name: str, module: tuple[str, ...] | None = None
    ) -> TypeDef | InterfaceDef | None:
        """Resolve a simple type or interface name, preferring the given
        module, then the smallest qualified name."""
        candidates = self._named_types.get(name)
        if not candidates:
            return None
        if module is not None:
            for c in candidates:
                if c.module == module:
                    return c
        return candidates[0]

    def find_type_def(
        self, name: str, module: tuple[str, ...] | None = None
    ) -> TypeDef | None:
        found = [t for t in self._named_types.get(name, []) if isinstance(t, TypeDef)]
        if not found:
            return None
        if module is not None:
            for c in found:
                if c.module == module:
                    return c
        return found[0]

    @cached_property
    def entities_by_qualified(self) -> dict[str, Entity]:
        return {qualified_name(e): e for e in self.all_entities()}

    def methods_of(self, t: TypeDef) -> list[FunctionDef]:
        out = [
            f
            for f in self.functions
            if f.owner == t.name and f.module == t.module and f.visibility == "public"
        ]
        out.sort(key=lambda f: (f.name, qualified_name(f)))
        return out


def desugar_method(f: FunctionDef, graph: ApiGraph) -> FunctionShape:
    """The searchable shape of a function.  readonly/mutating/consuming
    receivers prepend the owner type applied to its own type parameters as
    the first parameter; none/static prepend nothing."""
    params = [t for _, t in f.params]
    if f.receiver in FOLDED_RECEIVERS and f.owner:
        owner = graph.find_type(f.owner, f.module)
        if owner is not None:
            recv = Named(owner.name, tuple(Var(p) for p in owner.type_params))
        else:
            recv = Named(f.owner)
        params.insert(0, recv)
    return FunctionShape(tuple(params), f.ret)


# ---------------------------------------------------------------------------
# validation


@dataclass(frozen=True, order=True)
class Violation:
    entity: str
    rule: str
    detail: str = ""


ValidationReport = list[Violation]


def _tarjan_sccs(nodes: list[str], edges: dict[str, list[str]]) -> list[list[str]]:
    index: dict[str, int] = {}
    low: dict[str, int] = {}
    on_stack: set[str] = set()
    stack: list[str] = []
    counter = 0
    sccs: list[list[str]] = []

    def visit(v: str):
        nonlocal counter
        index[v] = low[v] = counter
        counter += 1
        stack.append(v)
        on_stack.add(v)
        for w in edges.get(v, ()):
            if w not in index:
                visit(w)
                low[v] = min(low[v], low[w])
            elif w in on_stack:
                low[v] = min(low[v], index[w])
        if low[v] == index[v]:
            scc = []
            while True:
                w = stack.pop()
                on_stack.discard(w)
                scc.append(w)
                if w == v:
                    break
            sccs.append(scc)

    for v in nodes:
        if v not in index:
            visit(v)
    return sccs


def _cycle_violations(
    nodes: list[str], edges: dict[str, list[str]], rule: str
) -> set[Violation]:
    out = set()
    for scc in _tarjan_sccs(sorted(nodes), edges):
        cyclic = len(scc) > 1 or scc[0] in edges.get(scc[0], ())
        if cyclic:
            members = sorted(scc)
            out.add(Violation(members[0], rule, ", ".join(members)))
    return out


def _check_expr(
    expr: TypeExpr,
    scope: set[str],
    entity: str,
    graph: ApiGraph,
    out: set[Violation],
):
    for v in iter_vars(expr):
        if v.name not in scope:
            out.add(Violation(entity, "undeclared-type-var", v.name))
    for node in iter_named(expr):
        head = node.name
        nargs = len(node.args)
        if head in scope:
            if nargs:
                out.add(
                    Violation(
                        entity,
                        "unresolved-name",
                        f"type parameter '{head}' cannot take arguments",
                    )
                )
            continue
        m = _FN_CTOR_RE.match(head)
        if m:
            expected = int(m.group(1)) + 1
            if head not in graph.declared_arities and nargs != expected:
                out.add(
                    Violation(
                        entity,
                        "arity-mismatch",
                        f"{head} used with {nargs} argument(s), expects {expected}",
                    )
                )
            if head not in graph.declared_arities:
                continue
        arities = graph.declared_arities.get(head)
        if arities is None:
            out.add(Violation(entity, "unresolved-name", head))
        elif nargs not in arities:
            declared = ", ".join(str(a) for a in sorted(arities))
            out.add(
                Violation(
                    entity,
                    "arity-mismatch",
                    f"{head} used with {nargs} argument(s), declared with {declared}",
                )
            )


def _check_function(
    f: FunctionDef, graph: ApiGraph, out: set[Violation], *, owner_scope: set[str]
):
    q = qualified_name(f)
    if f.receiver not in RECEIVER_KINDS:
        out.add(Violation(q, "invalid-receiver", f.receiver))
    if f.visibility not in VISIBILITIES:
        out.add(Violation(q, "invalid-visibility", f.visibility))
    if f.receiver != "none" and f.owner is None:
        out.add(Violation(q, "receiver-without-owner", f.receiver))
    if f.receiver == "none" and f.owner is not None:
        out.add(Violation(q, "owner-without-receiver", f.owner))
    if len(set(f.type_params)) != len(f.type_params):
        out.add(Violation(q, "type-params-duplicate", ", ".join(f.type_params)))
    scope = set(f.type_params) | owner_scope
    for _, t in f.params:
        _check_expr(t, scope, q, graph, out)
    _check_expr(f.ret, scope, q, graph, out)


def validate_graph(graph: ApiGraph) -> ValidationReport:
    """Check every structural invariant; an empty report means valid.

    Deterministic and order-insensitive: permuting entity lists yields the
    same report.  Violations are sorted by (entity, rule, detail).
    """
    out: set[Violation] = set()

    shapes = [s for i in graph.interfaces for s in i.method_shapes]
    counts = Counter(
        qualified_name(e)
        for e in (*graph.all_entities(), *shapes)
    )
    for name, n in counts.items():
        if n > 1:
            out.add(Violation(name, "duplicate-name", f"declared {n} times"))

    for m in graph.modules:
        q = qualified_name(m)
        if not m.path:
            out.add(Violation(q, "module-empty-path"))
        for seg in m.path:
            if not _IDENT_RE.match(seg):
                out.add(Violation(q, "module-bad-segment", seg))

    for t in graph.types:
        q = qualified_name(t)
        if t.kind not in TYPE_KINDS:
            out.add(Violation(q, "invalid-kind", t.kind))
        if len(set(t.type_params)) != len(t.type_params):
            out.add(Violation(q, "type-params-duplicate", ", ".join(t.type_params)))
        field_names = [n for n, _ in t.fields]
        if len(set(field_names)) != len(field_names):
            out.add(Violation(q, "field-names-duplicate", ", ".join(field_names)))
        scope = set(t.type_params)
        for _, ft in t.fields:
            _check_expr(ft, scope, q, graph, out)
        for s in t.supertypes:
            if (
                graph.find_type(s, t.module) is None
                and s not in graph.primitives
            ):
                out.add(Violation(q, "unresolved-name", s))
        for i in t.implements:
            target = graph.find_type(i, t.module)
            if target is None:
                out.add(Violation(q, "unresolved-name", i))
            elif not isinstance(target, InterfaceDef):
                out.add(Violation(q, "implements-non-interface", i))

    for i in graph.interfaces:
        q = qualified_name(i)
        if len(set(i.type_params)) != len(i.type_params):
            out.add(Violation(q, "type-params-duplicate", ", ".join(i.type_params)))
        for e in i.extends:
            target = graph.find_type(e, i.module)
            if target is None:
                out.add(Violation(q, "unresolved-name", e))
            elif not isinstance(target, InterfaceDef):
                out.add(Violation(q, "extends-non-interface", e))
        for s in i.method_shapes:
            _check_function(s, graph, out, owner_scope=set(i.type_params))

    for f in graph.functions:
        owner_scope: set[str] = set()
        if f.owner is not None:
            owner = graph.find_type(f.owner, f.module)
            if owner is None:
                out.add(
                    Violation(
                        qualified_name(f),
                        "unresolved-name",
                        f"owner '{f.owner}' is not a declared type",
                    )
                )
            else:
                owner_scope = set(owner.type_params)
        _check_function(f, graph, out, owner_scope=owner_scope)

    type_nodes = [qualified_name(t) for t in graph.types]
    type_edges: dict[str, list[str]] = {}
    for t in graph.types:
        targets = []
        for s in t.supertypes:
            parent = graph.find_type_def(s, t.module)
            if parent is not None:
                targets.append(qualified_name(parent))
        type_edges[qualified_name(t)] = sorted(targets)
    out |= _cycle_violations(type_nodes, type_edges, "inherits-cycle")

    iface_nodes = [qualified_name(i) for i in graph.interfaces]
    iface_edges: dict[str, list[str]] = {}
    for i in graph.interfaces:
        targets = []
        for e in i.extends:
            target = graph.find_type(e, i.module)
            if isinstance(target, InterfaceDef):
                targets.append(qualified_name(target))
        iface_edges[qualified_name(i)] = sorted(targets)
    out |= _cycle_violations(iface_nodes, iface_edges, "extends-cycle")

    return sorted(out)
