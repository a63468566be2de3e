"""Relational index over an API graph: inputs, outputs, contains, inherits,
implements, plus subtype reachability and the inheritance forest.

Occurrence is syntactic and deep: a function taking Fn1<List<T>, Bool> is an
inputs hit for Fn1, List, and Bool.  Inputs and outputs are computed over
desugared shapes, so a readonly/mutating/consuming receiver counts as an
input of the owner type.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field

from .model import ApiGraph, TypeDef, desugar_method, qualified_name
from .typeexpr import iter_named

RELATION_KINDS = ("inputs", "outputs", "contains", "inherits", "implements")


@dataclass
class RelationIndex:
    inputs: dict[str, list[str]] = field(default_factory=dict)
    outputs: dict[str, list[str]] = field(default_factory=dict)
    contains: dict[str, list[tuple[str, str]]] = field(default_factory=dict)
    inherits_up: dict[str, list[str]] = field(default_factory=dict)
    implements: dict[str, list[str]] = field(default_factory=dict)
    subtype_reach: dict[tuple[str, str], int] = field(default_factory=dict)

    def subtype_distance(self, sub: str, sup: str) -> int | None:
        if sub == sup:
            return 0
        return self.subtype_reach.get((sub, sup))


def _heads(exprs) -> set[str]:
    out: set[str] = set()
    for e in exprs:
        out.update(n.name for n in iter_named(e))
    return out


def build_relation_index(graph: ApiGraph) -> RelationIndex:
    """All relations cover every visibility; search applies its own
    visibility filtering downstream."""
    inputs: dict[str, set[str]] = {}
    outputs: dict[str, set[str]] = {}
    contains: dict[str, set[tuple[str, str]]] = {}

    for f in graph.functions:
        q = qualified_name(f)
        shape = desugar_method(f, graph)
        for head in _heads(shape.params):
            inputs.setdefault(head, set()).add(q)
        for head in _heads([shape.ret]):
            outputs.setdefault(head, set()).add(q)

    for t in graph.types:
        container = qualified_name(t)
        for fname, ftype in t.fields:
            for head in _heads([ftype]):
                contains.setdefault(head, set()).add((container, fname))

    inherits_up: dict[str, list[str]] = {}
    implements: dict[str, set[str]] = {}
    edges: dict[str, set[str]] = {}
    for t in graph.types:
        parents = []
        for s in t.supertypes:
            target = graph.find_type(s, t.module)
            if target is not None:
                parents.append(qualified_name(target))
                edges.setdefault(t.name, set()).add(target.name)
        if parents:
            inherits_up[t.name] = sorted(set(parents))
        for i in t.implements:
            target = graph.find_type(i, t.module)
            if target is not None:
                implements.setdefault(target.name, set()).add(qualified_name(t))
                edges.setdefault(t.name, set()).add(target.name)

    reach: dict[tuple[str, str], int] = {}
    declared = (
        {t.name for t in graph.types}
        | {i.name for i in graph.interfaces}
        | set(graph.primitives)
    )
    for name in declared:
        reach[(name, name)] = 0
    for start in declared:
        frontier = deque([(start, 0)])
        while frontier:
            node, d = frontier.popleft()
            for parent in edges.get(node, ()):
                key = (start, parent)
                if key not in reach or reach[key] > d + 1:
                    reach[key] = d + 1
                    frontier.append((parent, d + 1))

    return RelationIndex(
        inputs={k: sorted(v) for k, v in sorted(inputs.items())},
        outputs={k: sorted(v) for k, v in sorted(outputs.items())},
        contains={k: sorted(v) for k, v in sorted(contains.items())},
        inherits_up=dict(sorted(inherits_up.items())),
        implements={k: sorted(v) for k, v in sorted(implements.items())},
        subtype_reach=reach,
    )


def relation_query(index: RelationIndex, kind: str, name: str) -> list[str]:
    """Exact lookup; unknown names return an empty list.  Contains hits are
    rendered as container::field."""
    if kind == "inputs":
        return list(index.inputs.get(name, ()))
    if kind == "outputs":
        return list(index.outputs.get(name, ()))
    if kind == "contains":
        return [f"{c}::{f}" for c, f in index.contains.get(name, ())]
    if kind == "inherits":
        return list(index.inherits_up.get(name, ()))
    if kind == "implements":
        return list(index.implements.get(name, ()))
    raise ValueError(f"unknown relation kind: {kind}")


@dataclass
class TreeNode:
    name: str
    qualified: str
    children: list["TreeNode"] = field(default_factory=list)


def inheritance_tree(index: RelationIndex, graph: ApiGraph) -> list[TreeNode]:
    """Forest over the inherits relation only (interface edges excluded).

    Roots are types with no supertype resolving to another type; a type with
    several type supertypes appears once under each.  Children sort by name.
    """
    parents_of: dict[str, list[TypeDef]] = {}
    for t in graph.types:
        resolved = []
        for s in t.supertypes:
            parent = graph.find_type_def(s, t.module)
            if parent is not None:
                resolved.append(parent)
        parents_of[qualified_name(t)] = resolved

    children_of: dict[str, list[TypeDef]] = {}
    for t in graph.types:
        for parent in parents_of[qualified_name(t)]:
            children_of.setdefault(qualified_name(parent), []).append(t)

    def build(t: TypeDef) -> TreeNode:
        kids = children_of.get(qualified_name(t), [])
        kids = sorted(kids, key=lambda c: (c.name, qualified_name(c)))
        return TreeNode(t.name, qualified_name(t), [build(c) for c in kids])

    roots = [t for t in graph.types if not parents_of[qualified_name(t)]]
    roots.sort(key=lambda t: (t.name, qualified_name(t)))
    return [build(t) for t in roots]
