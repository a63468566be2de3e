"""Type expressions: grammar, normalization, unification, signature matching.

One small grammar serves every surface: signature strings inside interchange
documents, type patterns typed as search queries, and the compact signatures
rendered into method tables.

    type    := var | named | list | fnshape
    var     := single lowercase letter
    named   := Ident ("<" type ("," type)* ">")?
    list    := "[" type "]"              # sugar for List<type>
    fnshape := "(" (name ":" type ("," name ":" type)*)? ")" "->" type
    Ident   := [A-Za-z_][A-Za-z0-9_]*

Query strings additionally allow unnamed parameters, a bare single parameter
before "->", and grouping parentheses, so "(a) -> int" and "Set<a> -> List<a>"
both parse.  Parse errors carry the 0-based character offset of the first
invalid token.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field
from typing import TYPE_CHECKING, Iterator, Mapping

from .errors import DocforgeError

if TYPE_CHECKING:  # pragma: no cover
    from .model import ApiGraph

DEFAULT_LIST_CTOR = "List"

# Query parameter orderings are only enumerated up to this arity; beyond it
# only the written order is tried.
PERMUTATION_CAP = 6

_IDENT_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_]*")
_FN_CTOR_RE = re.compile(r"[Ff][Nn]([0-9]+)\Z")
_CANONICAL_VAR_RE = re.compile(r"v[0-9]+\Z")


class TypeParseError(DocforgeError):
    """A type or signature string failed to parse; offset is 0-based."""

    kind = "parse-error"

    def __init__(self, reason: str, offset: int):
        super().__init__(f"{reason} at offset {offset}")
        self.reason = reason
        self.offset = offset


class AmbiguousNameError(DocforgeError):
    """A query head matches several declared names case-insensitively."""

    kind = "ambiguous-name"

    def __init__(self, head: str, candidates: list[str]):
        joined = ", ".join(sorted(candidates))
        super().__init__(f"name '{head}' is ambiguous between {joined}")
        self.head = head
        self.candidates = sorted(candidates)


@dataclass(frozen=True)
class Var:
    """A type variable.  Single lowercase letters in queries; declarations
    may use any identifier declared as a type parameter."""

    name: str


@dataclass(frozen=True)
class Named:
    """A named type constructor applied to zero or more arguments."""

    name: str
    args: tuple["TypeExpr", ...] = ()


@dataclass(frozen=True)
class FnShape:
    """A function-typed value written literally in a signature."""

    params: tuple["TypeExpr", ...]
    ret: "TypeExpr"


TypeExpr = Var | Named | FnShape


@dataclass(frozen=True)
class FunctionShape:
    """The searchable shape of a callable: parameter types plus return."""

    params: tuple[TypeExpr, ...]
    ret: TypeExpr


@dataclass(frozen=True)
class Signature:
    """A parsed declaration signature: named parameters plus return type."""

    params: tuple[tuple[str, TypeExpr], ...]
    ret: TypeExpr

    @property
    def shape(self) -> FunctionShape:
        return FunctionShape(tuple(t for _, t in self.params), self.ret)


# ---------------------------------------------------------------------------
# scanning and parsing


def _scan(text: str) -> list[tuple[str, str, int]]:
    tokens = []
    i, n = 0, len(text)
    while i < n:
        c = text[i]
        if c.isspace():
            i += 1
            continue
        if text.startswith("->", i):
            tokens.append(("->", "->", i))
            i += 2
            continue
        if c in "<>[](),:":
            tokens.append((c, c, i))
            i += 1
            continue
        m = _IDENT_RE.match(text, i)
        if m:
            tokens.append(("ident", m.group(0), i))
            i = m.end()
            continue
        tokens.append(("invalid", c, i))
        i += 1
    tokens.append(("end", "", n))
    return tokens


class _Parser:
    def __init__(self, text: str, require_param_names: bool):
        self.text = text
        self.tokens = _scan(text)
        self.pos = 0
        self.require_param_names = require_param_names

    def peek(self) -> tuple[str, str, int]:
        return self.tokens[self.pos]

    def advance(self) -> tuple[str, str, int]:
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def fail(self, reason: str):
        raise TypeParseError(reason, self.peek()[2])

    def expect(self, kind: str, what: str) -> tuple[str, str, int]:
        if self.peek()[0] != kind:
            self.fail(f"expected {what}")
        return self.advance()

    def expect_end(self):
        if self.peek()[0] != "end":
            self.fail("unexpected trailing input")

    def parse_type(self) -> TypeExpr:
        kind, value, _ = self.peek()
        if kind == "[":
            self.advance()
            inner = self.parse_type()
            self.expect("]", "']'")
            return Named(DEFAULT_LIST_CTOR, (inner,))
        if kind == "(":
            params, _ = self.parse_param_list()
            self.expect("->", "'->'")
            return FnShape(tuple(params), self.parse_type())
        if kind == "ident":
            self.advance()
            if len(value) == 1 and value.islower():
                return Var(value)
            args: list[TypeExpr] = []
            if self.peek()[0] == "<":
                self.advance()
                args.append(self.parse_type())
                while self.peek()[0] == ",":
                    self.advance()
                    args.append(self.parse_type())
                self.expect(">", "'>'")
            return Named(value, tuple(args))
        self.fail("expected a type")

    def parse_param_list(self) -> tuple[list[TypeExpr], list[str | None]]:
        self.expect("(", "'('")
        types: list[TypeExpr] = []
        names: list[str | None] = []
        if self.peek()[0] != ")":
            while True:
                name, t = self.parse_param()
                names.append(name)
                types.append(t)
                if self.peek()[0] != ",":
                    break
                self.advance()
        self.expect(")", "')'")
        return types, names

    def parse_param(self) -> tuple[str | None, TypeExpr]:
        if self.peek()[0] == "ident" and self.tokens[self.pos + 1][0] == ":":
            name = self.advance()[1]
            self.advance()
            return name, self.parse_type()
        if self.require_param_names:
            self.fail("expected 'name: type' parameter")
        return None, self.parse_type()


def parse_type_text(text: str, aliases: Mapping[str, str] | None = None) -> TypeExpr:
    """Parse a bare type in the declaration grammar (used for field types)."""
    p = _Parser(text, require_param_names=True)
    t = p.parse_type()
    p.expect_end()
    return apply_aliases(t, aliases or {})


def parse_signature(text: str, aliases: Mapping[str, str] | None = None) -> Signature:
    """Parse a declaration signature "(name: Type, ...) -> Type"."""
    p = _Parser(text, require_param_names=True)
    types, names = p.parse_param_list()
    p.expect("->", "'->'")
    ret = p.parse_type()
    p.expect_end()
    aliases = aliases or {}
    params = tuple(
        (name, apply_aliases(t, aliases)) for name, t in zip(names, types)
    )
    return Signature(params, apply_aliases(ret, aliases))


def parse_type_query(
    text: str, aliases: Mapping[str, str] | None = None
) -> FunctionShape | TypeExpr:
    """Parse a search query: either a function shape or a bare type pattern.

    Parameter names are optional and discarded; a single unparenthesized
    type before "->" is accepted as a one-parameter shape.
    """
    aliases = aliases or {}
    p = _Parser(text, require_param_names=False)
    if p.peek()[0] == "(":
        items, _ = p.parse_param_list()
        if p.peek()[0] == "->":
            p.advance()
            ret = p.parse_type()
            p.expect_end()
            shape = FunctionShape(tuple(items), ret)
            return apply_aliases_shape(shape, aliases)
        if len(items) == 1:
            # grouping parentheses around one type
            expr = items[0]
        else:
            p.fail("expected '->' after parameter list")
    else:
        expr = p.parse_type()
    if p.peek()[0] == "->":
        p.advance()
        ret = p.parse_type()
        p.expect_end()
        return apply_aliases_shape(FunctionShape((expr,), ret), aliases)
    p.expect_end()
    return apply_aliases(expr, aliases)


# ---------------------------------------------------------------------------
# rendering


def render_type(t: TypeExpr) -> str:
    if isinstance(t, Var):
        return t.name
    if isinstance(t, Named):
        if not t.args:
            return t.name
        return f"{t.name}<{', '.join(render_type(a) for a in t.args)}>"
    params = ", ".join(f"p{i}: {render_type(p)}" for i, p in enumerate(t.params))
    return f"({params}) -> {render_type(t.ret)}"


def render_signature(params: tuple[tuple[str, TypeExpr], ...], ret: TypeExpr) -> str:
    inner = ", ".join(f"{name}: {render_type(t)}" for name, t in params)
    return f"({inner}) -> {render_type(ret)}"


# ---------------------------------------------------------------------------
# structural helpers


def apply_aliases(t: TypeExpr, aliases: Mapping[str, str]) -> TypeExpr:
    if isinstance(t, Var):
        return t
    if isinstance(t, Named):
        return Named(
            aliases.get(t.name, t.name),
            tuple(apply_aliases(a, aliases) for a in t.args),
        )
    return FnShape(
        tuple(apply_aliases(p, aliases) for p in t.params),
        apply_aliases(t.ret, aliases),
    )


def apply_aliases_shape(shape: FunctionShape, aliases: Mapping[str, str]) -> FunctionShape:
    return FunctionShape(
        tuple(apply_aliases(p, aliases) for p in shape.params),
        apply_aliases(shape.ret, aliases),
    )


def mark_vars(t: TypeExpr, names: set[str]) -> TypeExpr:
    """Turn zero-argument Named nodes whose head is a declared type parameter
    into Var nodes.  Used when loading declaration signatures."""
    if isinstance(t, Var):
        return t
    if isinstance(t, Named):
        if not t.args and t.name in names:
            return Var(t.name)
        return Named(t.name, tuple(mark_vars(a, names) for a in t.args))
    return FnShape(
        tuple(mark_vars(p, names) for p in t.params), mark_vars(t.ret, names)
    )


def iter_named(t: TypeExpr) -> Iterator[Named]:
    if isinstance(t, Named):
        yield t
        for a in t.args:
            yield from iter_named(a)
    elif isinstance(t, FnShape):
        for p in t.params:
            yield from iter_named(p)
        yield from iter_named(t.ret)


def iter_vars(t: TypeExpr) -> Iterator[Var]:
    if isinstance(t, Var):
        yield t
    elif isinstance(t, Named):
        for a in t.args:
            yield from iter_vars(a)
    elif isinstance(t, FnShape):
        for p in t.params:
            yield from iter_vars(p)
        yield from iter_vars(t.ret)


def node_count(t: TypeExpr) -> int:
    if isinstance(t, Var):
        return 1
    if isinstance(t, Named):
        return 1 + sum(node_count(a) for a in t.args)
    return 1 + sum(node_count(p) for p in t.params) + node_count(t.ret)


# ---------------------------------------------------------------------------
# normalization


def _canonical_head(name: str, graph: "ApiGraph") -> str:
    heads = graph.declared_head_names
    if name in heads:
        return name
    lowered = name.lower()
    hits = sorted({h for h in heads if h.lower() == lowered})
    if len(hits) == 1:
        return hits[0]
    if len(hits) > 1:
        raise AmbiguousNameError(name, hits)
    m = _FN_CTOR_RE.match(name)
    if m:
        return f"Fn{m.group(1)}"
    return name


def _canonicalize(t: TypeExpr, graph: "ApiGraph") -> TypeExpr:
    if isinstance(t, Var):
        return t
    if isinstance(t, Named):
        return Named(
            _canonical_head(t.name, graph),
            tuple(_canonicalize(a, graph) for a in t.args),
        )
    return FnShape(
        tuple(_canonicalize(p, graph) for p in t.params),
        _canonicalize(t.ret, graph),
    )


def _rename_vars(t: TypeExpr, mapping: dict[str, str]) -> TypeExpr:
    if isinstance(t, Var):
        if t.name not in mapping:
            mapping[t.name] = f"v{len(mapping)}"
        return Var(mapping[t.name])
    if isinstance(t, Named):
        return Named(t.name, tuple(_rename_vars(a, mapping) for a in t.args))
    return FnShape(
        tuple(_rename_vars(p, mapping) for p in t.params),
        _rename_vars(t.ret, mapping),
    )


def normalize(t: TypeExpr, graph: "ApiGraph", *, declaration: bool = False) -> TypeExpr:
    """Apply the alias map, canonicalize head case against declared names,
    and (on the declaration side) rename variables to v0, v1, ... in first
    occurrence order.

    Raises AmbiguousNameError when a head matches two or more declared names
    ignoring case and none exactly.
    """
    t = apply_aliases(t, graph.aliases)
    t = _canonicalize(t, graph)
    if declaration:
        t = _rename_vars(t, {})
    return t


def normalize_shape(
    shape: FunctionShape, graph: "ApiGraph", *, declaration: bool = False
) -> FunctionShape:
    """Shape-level normalize: variable renaming is shared across parameters
    and return so one declaration variable maps to one canonical name."""
    params = [apply_aliases(p, graph.aliases) for p in shape.params]
    params = [_canonicalize(p, graph) for p in params]
    ret = _canonicalize(apply_aliases(shape.ret, graph.aliases), graph)
    if declaration:
        mapping: dict[str, str] = {}
        params = [_rename_vars(p, mapping) for p in params]
        ret = _rename_vars(ret, mapping)
    return FunctionShape(tuple(params), ret)


# ---------------------------------------------------------------------------
# unification

Substitution = dict[str, TypeExpr]


def apply_subst(t: TypeExpr, subst: Substitution) -> TypeExpr:
    if isinstance(t, Var):
        return subst.get(t.name, t)
    if isinstance(t, Named):
        return Named(t.name, tuple(apply_subst(a, subst) for a in t.args))
    return FnShape(
        tuple(apply_subst(p, subst) for p in t.params), apply_subst(t.ret, subst)
    )


def occurs_in(name: str, t: TypeExpr) -> bool:
    return any(v.name == name for v in iter_vars(t))


def _bind(subst: Substitution, name: str, t: TypeExpr) -> bool:
    if occurs_in(name, t):
        return False
    one = {name: t}
    for k in list(subst):
        subst[k] = apply_subst(subst[k], one)
    subst[name] = t
    return True


def unify_pairs(pairs: list[tuple[TypeExpr, TypeExpr]]) -> Substitution | None:
    """Most general unifier for a list of equations, or None.

    The result is resolved: no binding mentions a bound variable, so
    applying it twice equals applying it once.
    """
    subst: Substitution = {}
    work = list(pairs)
    while work:
        a, b = work.pop()
        a = apply_subst(a, subst)
        b = apply_subst(b, subst)
        if a == b:
            continue
        if isinstance(a, Var):
            if not _bind(subst, a.name, b):
                return None
            continue
        if isinstance(b, Var):
            if not _bind(subst, b.name, a):
                return None
            continue
        if isinstance(a, Named) and isinstance(b, Named):
            if a.name != b.name or len(a.args) != len(b.args):
                return None
            work.extend(zip(a.args, b.args))
            continue
        if isinstance(a, FnShape) and isinstance(b, FnShape):
            if len(a.params) != len(b.params):
                return None
            work.extend(zip(a.params, b.params))
            work.append((a.ret, b.ret))
            continue
        return None
    return subst


def unify(a: TypeExpr, b: TypeExpr) -> Substitution | None:
    return unify_pairs([(a, b)])


def subst_cost(subst: Substitution) -> int:
    """Penalty contribution of a unifier: total node count over all bound
    expressions (a plain variable-to-variable binding costs 1)."""
    return sum(node_count(t) for t in subst.values())


# ---------------------------------------------------------------------------
# signature matching


@dataclass(frozen=True)
class MatchOptions:
    allow_permutation: bool = True
    max_subtype_hops: int = 1


@dataclass
class MatchResult:
    matched: bool
    penalty: int = 0
    permutation_used: bool = False
    bindings: Substitution = field(default_factory=dict)


def _hop_pairs(q, t, max_hops, rel, *, param_side):
    """If heads differ but are within max_hops (query reaches target for
    parameters, target reaches query for returns), return the argument
    equations plus the hop count; otherwise None."""
    if rel is None or max_hops <= 0:
        return None
    if not (isinstance(q, Named) and isinstance(t, Named)):
        return None
    if q.name == t.name or len(q.args) != len(t.args):
        return None
    if param_side:
        d = rel.subtype_distance(q.name, t.name)
    else:
        d = rel.subtype_distance(t.name, q.name)
    if d is None or d == 0 or d > max_hops:
        return None
    return list(zip(q.args, t.args)), d


def _attempt(query, target, perm, max_hops, rel):
    pairs: list[tuple[TypeExpr, TypeExpr]] = []
    hops = 0
    for i, tparam in enumerate(target.params):
        qparam = query.params[perm[i]]
        adjusted = _hop_pairs(qparam, tparam, max_hops, rel, param_side=True)
        if adjusted is None:
            pairs.append((qparam, tparam))
        else:
            extra, d = adjusted
            pairs.extend(extra)
            hops += d
    adjusted = _hop_pairs(query.ret, target.ret, max_hops, rel, param_side=False)
    if adjusted is None:
        pairs.append((query.ret, target.ret))
    else:
        extra, d = adjusted
        pairs.extend(extra)
        hops += d
    subst = unify_pairs(pairs)
    if subst is None:
        return None
    return subst, hops


def signature_match(
    query: FunctionShape,
    target: FunctionShape,
    opts: MatchOptions | None = None,
    rel=None,
) -> MatchResult:
    """Match a query shape against a target shape.

    Arities must be equal.  With allow_permutation, every ordering of the
    query parameters is tried up to arity PERMUTATION_CAP.  A concrete query
    parameter may sit max_subtype_hops below the target parameter in the
    inherits/implements graph (the target generalizes); a target return may
    sit the same distance below the query return (the target specializes).

    penalty = subst_cost(bindings) + 2 * (non-identity permutation)
            + 3 * (total subtype hops); the minimum-penalty ordering wins,
    ties broken by the lexicographically smallest permutation.
    """
    opts = opts or MatchOptions()
    n = len(query.params)
    if n != len(target.params):
        return MatchResult(False)
    identity = tuple(range(n))
    if opts.allow_permutation and n <= PERMUTATION_CAP:
        perms = itertools.permutations(range(n))
    else:
        perms = iter([identity])
    best: tuple[int, tuple[int, ...], Substitution] | None = None
    for perm in perms:
        outcome = _attempt(query, target, perm, opts.max_subtype_hops, rel)
        if outcome is None:
            continue
        subst, hops = outcome
        penalty = subst_cost(subst) + (0 if perm == identity else 2) + 3 * hops
        if best is None or (penalty, perm) < (best[0], best[1]):
            best = (penalty, perm, subst)
    if best is None:
        return MatchResult(False)
    penalty, perm, subst = best
    return MatchResult(True, penalty, perm != identity, subst)
