"""docforge: an API documentation toolchain.

Ingests a language-neutral interchange document describing an API surface,
builds a relational model over it, answers keyword, type-shape, relational,
and modifier queries, and emits a deterministic static documentation site
with two-dimensional method tables for scanning.
"""

from .errors import DocforgeError
from .ingest import (
    DocumentError,
    emit_document,
    emit_text,
    load_document,
    load_file,
    load_text,
    save_file,
)
from .layout import (
    MethodCell,
    MethodMatrix,
    UnknownSubjectError,
    build_method_matrix,
    render_matrix_text,
)
from .model import (
    ApiGraph,
    FunctionDef,
    InterfaceDef,
    ModuleDef,
    TypeDef,
    Violation,
    desugar_method,
    qualified_name,
    validate_graph,
)
from .relations import (
    RelationIndex,
    build_relation_index,
    inheritance_tree,
    relation_query,
)
from .search import (
    FilterSpec,
    KeywordIndex,
    SearchResult,
    UnknownFilterNameError,
    apply_filters,
    build_keyword_index,
    keyword_search,
    tokenize_identifier,
    type_search,
)
from .sitegen import SiteConfig, emit_search_index, generate_site, search_index_document
from .typeexpr import (
    AmbiguousNameError,
    FnShape,
    FunctionShape,
    MatchOptions,
    MatchResult,
    Named,
    Substitution,
    TypeExpr,
    TypeParseError,
    Var,
    normalize,
    normalize_shape,
    parse_signature,
    parse_type_query,
    parse_type_text,
    render_signature,
    render_type,
    signature_match,
    unify,
)

__version__ = "0.1.0"

__all__ = [
    "AmbiguousNameError",
    "ApiGraph",
    "DocforgeError",
    "DocumentError",
    "FilterSpec",
    "FnShape",
    "FunctionDef",
    "FunctionShape",
    "InterfaceDef",
    "KeywordIndex",
    "MatchOptions",
    "MatchResult",
    "MethodCell",
    "MethodMatrix",
    "ModuleDef",
    "Named",
    "RelationIndex",
    "SearchResult",
    "SiteConfig",
    "Substitution",
    "TypeDef",
    "TypeExpr",
    "TypeParseError",
    "UnknownFilterNameError",
    "UnknownSubjectError",
    "Var",
    "Violation",
    "apply_filters",
    "build_keyword_index",
    "build_method_matrix",
    "build_relation_index",
    "desugar_method",
    "emit_document",
    "emit_search_index",
    "emit_text",
    "generate_site",
    "inheritance_tree",
    "keyword_search",
    "load_document",
    "load_file",
    "load_text",
    "normalize",
    "normalize_shape",
    "parse_signature",
    "parse_type_query",
    "parse_type_text",
    "qualified_name",
    "relation_query",
    "render_matrix_text",
    "render_signature",
    "render_type",
    "save_file",
    "search_index_document",
    "signature_match",
    "tokenize_identifier",
    "type_search",
    "unify",
    "validate_graph",
]
