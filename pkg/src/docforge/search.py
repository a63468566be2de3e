"""Keyword search, type-shape search, and filter application.

Keyword scoring is a fixed constant table so that independent
reimplementations (the browser frontend) can reproduce rankings exactly:

    exact full-name match (case-insensitive)   +100
    query token equals a name token             +40
    query token is a prefix of a name token     +25
    query token is a substring of a name token  +10
    query token equals an owner-name token      +15
    query token equals a doc token               +5

Per query token and entity the best class wins (never summed within one
token); token scores sum across the query.  Synonym tokens, when a table is
supplied, add a flat +5 per matching synonym.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from .errors import DocforgeError
from .model import (
    ApiGraph,
    FunctionDef,
    InterfaceDef,
    ModuleDef,
    TypeDef,
    desugar_method,
    doc_prose,
    qualified_name,
)
from .relations import RelationIndex, build_relation_index
from .typeexpr import (
    AmbiguousNameError,
    FunctionShape,
    MatchOptions,
    TypeExpr,
    normalize,
    normalize_shape,
    render_type,
    signature_match,
    subst_cost,
    unify,
)

SCORE_EXACT_NAME = 100
SCORE_NAME_TOKEN = 40
SCORE_NAME_PREFIX = 25
SCORE_NAME_SUBSTRING = 10
SCORE_OWNER_TOKEN = 15
SCORE_DOC_TOKEN = 5

DEFAULT_LIMIT = 20

_IDENT_TOKEN_RE = re.compile(r"[A-Z]+(?![a-z])|[A-Z][a-z]*|[a-z]+|[0-9]+")
_DOC_TOKEN_RE = re.compile(r"[a-z0-9]+")


class UnknownFilterNameError(DocforgeError):
    kind = "unknown-filter-name"

    def __init__(self, name: str):
        super().__init__(f"filter name '{name}' does not resolve")
        self.name = name


def tokenize_identifier(name: str) -> list[str]:
    """Split an identifier on underscores, lower-to-upper case boundaries,
    letter/digit boundaries, and before the last uppercase of an acronym run
    ("HTTPServer" -> http, server); tokens are lowercased."""
    return [t.lower() for t in _IDENT_TOKEN_RE.findall(name)]


def tokenize_doc(text: str) -> list[str]:
    return _DOC_TOKEN_RE.findall(text.lower())


@dataclass(frozen=True)
class FilterSpec:
    receiver: frozenset[str] | None = None
    owner: str | None = None
    returns: str | None = None
    takes: str | None = None
    visibility: tuple[str, ...] = ("public",)

    def is_empty(self) -> bool:
        return self == FilterSpec(visibility=self.visibility)


@dataclass
class SearchResult:
    entity: str
    score: int = 0
    penalty: int = 0
    explanation: list[str] = field(default_factory=list)


@dataclass
class _EntityTokens:
    simple: str
    name_tokens: tuple[str, ...]
    owner_tokens: tuple[str, ...]
    doc_tokens: tuple[str, ...]


@dataclass
class KeywordIndex:
    graph: ApiGraph
    postings: dict[str, list[tuple[str, str]]] = field(default_factory=dict)
    entity_tokens: dict[str, _EntityTokens] = field(default_factory=dict)


def _entity_name(e) -> str:
    if isinstance(e, ModuleDef):
        return e.path[-1] if e.path else ""
    return e.name


def build_keyword_index(graph: ApiGraph) -> KeywordIndex:
    postings: dict[str, set[tuple[str, str]]] = {}
    entity_tokens: dict[str, _EntityTokens] = {}
    for e in graph.all_entities():
        if isinstance(e, FunctionDef) and e.visibility != "public":
            continue
        q = qualified_name(e)
        name = _entity_name(e)
        name_tokens = tuple(tokenize_identifier(name))
        owner_tokens: tuple[str, ...] = ()
        if isinstance(e, FunctionDef) and e.owner:
            owner_tokens = tuple(tokenize_identifier(e.owner))
        doc = getattr(e, "doc", None)
        doc_tokens = tuple(tokenize_doc(doc_prose(doc)))
        entity_tokens[q] = _EntityTokens(
            name.lower(), name_tokens, owner_tokens, doc_tokens
        )
        for tok in name_tokens:
            postings.setdefault(tok, set()).add((q, "name"))
        for tok in owner_tokens:
            postings.setdefault(tok, set()).add((q, "owner"))
        for tok in doc_tokens:
            postings.setdefault(tok, set()).add((q, "doc"))
    return KeywordIndex(
        graph,
        {tok: sorted(pairs) for tok, pairs in sorted(postings.items())},
        entity_tokens,
    )


def _token_score(tok: str, info: _EntityTokens) -> tuple[int, str]:
    best, why = 0, ""
    if tok == info.simple:
        best, why = SCORE_EXACT_NAME, f"name '{info.simple}'"
    if best < SCORE_NAME_TOKEN and tok in info.name_tokens:
        best, why = SCORE_NAME_TOKEN, f"name token '{tok}'"
    if best < SCORE_NAME_PREFIX and any(
        t.startswith(tok) for t in info.name_tokens
    ):
        best, why = SCORE_NAME_PREFIX, f"name prefix '{tok}'"
    if best < SCORE_NAME_SUBSTRING and any(tok in t for t in info.name_tokens):
        best, why = SCORE_NAME_SUBSTRING, f"name substring '{tok}'"
    if best < SCORE_OWNER_TOKEN and tok in info.owner_tokens:
        best, why = SCORE_OWNER_TOKEN, f"owner token '{tok}'"
    if best < SCORE_DOC_TOKEN and tok in info.doc_tokens:
        best, why = SCORE_DOC_TOKEN, f"doc token '{tok}'"
    return best, why


def keyword_search(
    index: KeywordIndex,
    query: str,
    filters: FilterSpec | None = None,
    limit: int | None = DEFAULT_LIMIT,
    synonyms: dict[str, list[str]] | None = None,
    rel: RelationIndex | None = None,
) -> list[SearchResult]:
    tokens = tokenize_doc(query)
    results: list[SearchResult] = []
    for q, info in index.entity_tokens.items():
        score = 0
        explanation: list[str] = []
        for tok in tokens:
            got, why = _token_score(tok, info)
            if got:
                score += got
                explanation.append(f"{why} +{got}")
            if synonyms:
                for syn in synonyms.get(tok, ()):
                    syn_got, _ = _token_score(syn, info)
                    if syn_got:
                        score += SCORE_DOC_TOKEN
                        explanation.append(
                            f"synonym '{syn}' of '{tok}' +{SCORE_DOC_TOKEN}"
                        )
        if score > 0:
            results.append(SearchResult(q, score=score, explanation=explanation))
    if filters is not None:
        kept = apply_filters(
            index.graph, [r.entity for r in results], filters, rel=rel
        )
        keep = set(kept)
        results = [r for r in results if r.entity in keep]
    results.sort(key=lambda r: (-r.score, r.entity))
    return results[:limit] if limit is not None else results


def type_search(
    graph: ApiGraph,
    rel: RelationIndex,
    query: FunctionShape | TypeExpr,
    opts: MatchOptions | None = None,
    filters: FilterSpec | None = None,
    limit: int | None = None,
) -> list[SearchResult]:
    """Shape queries match every public function's desugared shape via
    signature_match; bare type patterns match return types by unification
    (an outputs lead with variables)."""
    results: list[SearchResult] = []
    if isinstance(query, FunctionShape):
        nq = normalize_shape(query, graph)
        for f in graph.public_functions():
            shape = normalize_shape(desugar_method(f, graph), graph, declaration=True)
            r = signature_match(nq, shape, opts, rel)
            if not r.matched:
                continue
            explanation = [
                f"{name} = {render_type(t)}"
                for name, t in sorted(r.bindings.items())
            ]
            if r.permutation_used:
                explanation.append("parameter order permuted")
            results.append(
                SearchResult(qualified_name(f), penalty=r.penalty, explanation=explanation)
            )
    else:
        nq = normalize(query, graph)
        for f in graph.public_functions():
            ret = normalize(f.ret, graph, declaration=True)
            subst = unify(nq, ret)
            if subst is None:
                continue
            explanation = [
                f"{name} = {render_type(t)}" for name, t in sorted(subst.items())
            ]
            results.append(
                SearchResult(
                    qualified_name(f), penalty=subst_cost(subst), explanation=explanation
                )
            )
    if filters is not None:
        kept = set(apply_filters(graph, [r.entity for r in results], filters, rel=rel))
        results = [r for r in results if r.entity in kept]
    results.sort(key=lambda r: (r.penalty, r.entity))
    return results[:limit] if limit is not None else results


def _resolve_filter_name(name: str, graph: ApiGraph) -> str:
    heads = graph.declared_head_names
    if name in heads:
        return name
    lowered = name.lower()
    hits = sorted(h for h in heads if h.lower() == lowered)
    if len(hits) == 1:
        return hits[0]
    if len(hits) > 1:
        raise AmbiguousNameError(name, hits)
    raise UnknownFilterNameError(name)


def apply_filters(
    graph: ApiGraph,
    candidates: list[str],
    filters: FilterSpec,
    rel: RelationIndex | None = None,
) -> list[str]:
    """Keep candidates (qualified names) satisfying every present
    constraint, preserving input order."""
    owner = _resolve_filter_name(filters.owner, graph) if filters.owner else None
    returns = _resolve_filter_name(filters.returns, graph) if filters.returns else None
    takes = _resolve_filter_name(filters.takes, graph) if filters.takes else None
    if rel is None and (returns or takes):
        rel = build_relation_index(graph)

    out: list[str] = []
    for q in candidates:
        e = graph.entities_by_qualified.get(q)
        if e is None:
            continue
        visibility = getattr(e, "visibility", "public")
        if visibility not in filters.visibility:
            continue
        if filters.receiver is not None:
            if not isinstance(e, FunctionDef) or e.receiver not in filters.receiver:
                continue
        if owner is not None:
            if not isinstance(e, FunctionDef) or e.owner != owner:
                continue
        if returns is not None and q not in rel.outputs.get(returns, ()):
            continue
        if takes is not None and q not in rel.inputs.get(takes, ()):
            continue
        out.append(q)
    return out
