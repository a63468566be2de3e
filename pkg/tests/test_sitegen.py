import json
import re
from pathlib import Path

import pytest

from docforge.model import ApiGraph, ModuleDef
from docforge.relations import build_relation_index
from docforge.search import tokenize_identifier
from docforge.sitegen import (
    INDEX_VERSION,
    SiteConfig,
    SiteWriteError,
    emit_search_index,
    generate_site,
    page_name,
    search_index_document,
)

COLLECTIONS_MANIFEST = [
    "collections.Iterable.html",
    "collections.List.fromSet.html",
    "collections.List.html",
    "collections.List.indexOf.html",
    "collections.List.len.html",
    "collections.List.push.html",
    "collections.List.toSet.html",
    "collections.Set.html",
    "collections.Set.size.html",
    "collections.Set.toList.html",
    "collections.SortedSet.html",
    "collections.html",
    "index.html",
    "search-index.json",
    "tree.html",
]


def _build(graph, rel, tmp_path, **cfg):
    out = tmp_path / "site"
    manifest = generate_site(graph, rel, SiteConfig(out_dir=str(out), **cfg))
    return out, manifest


# ---------------------------------------------------------------------------
# pages and manifest


def test_page_name_flattens_qualified_names():
    assert page_name("collections::List::len") == "collections.List.len.html"
    assert page_name("geo::util") == "geo.util.html"


def test_collections_manifest(collections, collections_rel, tmp_path):
    out, manifest = _build(collections, collections_rel, tmp_path)
    assert manifest == COLLECTIONS_MANIFEST
    on_disk = sorted(p.name for p in out.iterdir())
    assert on_disk == COLLECTIONS_MANIFEST


def test_private_functions_get_no_page_by_default(shapes, shapes_rel, tmp_path):
    out, manifest = _build(shapes, shapes_rel, tmp_path)
    assert "geo.util.hidden.html" not in manifest
    _, with_private = _build(
        shapes, shapes_rel, tmp_path / "p", include_private=True
    )
    assert "geo.util.hidden.html" in with_private


def test_empty_graph_still_builds_three_files(tmp_path):
    g = ApiGraph()
    manifest = generate_site(
        g, build_relation_index(g), SiteConfig(out_dir=str(tmp_path / "e"))
    )
    assert manifest == ["index.html", "search-index.json", "tree.html"]


def test_site_build_is_deterministic(collections, collections_rel, tmp_path):
    a, manifest_a = _build(collections, collections_rel, tmp_path / "a")
    b, manifest_b = _build(collections, collections_rel, tmp_path / "b")
    assert manifest_a == manifest_b
    for name in manifest_a:
        assert (a / name).read_bytes() == (b / name).read_bytes()


def test_unwritable_directory_raises_site_write_error(collections, collections_rel, tmp_path):
    blocker = tmp_path / "blocked"
    blocker.write_text("a file, not a directory")
    with pytest.raises(SiteWriteError) as e:
        generate_site(
            collections, collections_rel, SiteConfig(out_dir=str(blocker / "x"))
        )
    assert e.value.kind == "io-failure"


def test_tree_page_nests_subtypes(collections, collections_rel, tmp_path):
    out, _ = _build(collections, collections_rel, tmp_path)
    tree = (out / "tree.html").read_text(encoding="utf-8")
    assert tree.index("collections.Set.html") < tree.index("collections.SortedSet.html")


def test_matrix_appears_on_type_page(collections, collections_rel, tmp_path):
    out, _ = _build(collections, collections_rel, tmp_path, grouping="receiver")
    page = (out / "collections.List.html").read_text(encoding="utf-8")
    assert "mutating" in page and "indexOf" in page


def test_unknown_grouping_is_rejected(collections, collections_rel, tmp_path):
    with pytest.raises(ValueError):
        generate_site(
            collections,
            collections_rel,
            SiteConfig(out_dir=str(tmp_path / "g"), grouping="alphabetical"),
        )


# ---------------------------------------------------------------------------
# link integrity


_HREF_RE = re.compile(r'href="([^"]+)"')


def _crawl(out: Path, manifest):
    pages = set(manifest)
    dead = []
    for name in manifest:
        if not name.endswith(".html"):
            continue
        for href in _HREF_RE.findall((out / name).read_text(encoding="utf-8")):
            if href.startswith(("http:", "https:", "#")):
                continue
            if href not in pages:
                dead.append((name, href))
    return dead


def test_no_dead_links(collections, collections_rel, shapes, shapes_rel, tmp_path):
    out, manifest = _build(collections, collections_rel, tmp_path / "c")
    assert _crawl(out, manifest) == []
    out, manifest = _build(shapes, shapes_rel, tmp_path / "s", include_private=True)
    assert _crawl(out, manifest) == []


# ---------------------------------------------------------------------------
# search index document


def test_index_document_schema(collections, collections_rel):
    doc = search_index_document(collections, collections_rel)
    assert doc["version"] == INDEX_VERSION
    assert [e["id"] for e in doc["entities"]] == sorted(
        e["id"] for e in doc["entities"]
    )
    assert len(doc["entities"]) == 12

    by_id = {e["id"]: e for e in doc["entities"]}
    index_of = by_id["collections::List::indexOf"]
    assert index_of["kind"] == "function"
    assert index_of["owner"] == "collections::List"
    assert index_of["receiver"] == "readonly"
    # receiver folded in, original variable names kept
    assert index_of["params"] == ["List<T>", "Fn1<T, Bool>"]
    assert index_of["ret"] == "Int"
    assert index_of["tokens"] == tokenize_identifier("indexOf")

    lst = by_id["collections::List"]
    assert lst["kind"] == "class"
    assert lst["params"] == ["T"]
    assert lst["owner"] is None

    iterable = by_id["collections::Iterable"]
    assert iterable["kind"] == "interface"

    module = by_id["collections"]
    assert module["kind"] == "module" and module["module"] == "collections"


def test_index_relations_are_filtered_to_included_ids(shapes, shapes_rel):
    doc = search_index_document(shapes, shapes_rel)
    # hidden is private: it must not appear as an outputs hit
    for ids in doc["relations"]["outputs"].values():
        assert "geo::util::hidden" not in ids
    with_private = search_index_document(shapes, shapes_rel, include_private=True)
    assert "geo::util::hidden" in with_private["relations"]["outputs"]["Unit"]


def test_index_relations_drop_empty_keys(shapes, shapes_rel):
    doc = search_index_document(shapes, shapes_rel)
    for table in doc["relations"].values():
        for ids in table.values():
            assert ids


def test_doc_summary_is_first_prose_line(collections, collections_rel):
    doc = search_index_document(collections, collections_rel)
    by_id = {e["id"]: e for e in doc["entities"]}
    push = by_id["collections::List::push"]
    assert push["groups"] == ["building"]
    assert push["doc_summary"]
    assert not push["doc_summary"].startswith("@group")


def test_emit_search_index_bytes_are_stable(collections, collections_rel):
    a = emit_search_index(collections, collections_rel)
    b = emit_search_index(collections, collections_rel)
    assert isinstance(a, bytes)
    assert a == b
    parsed = json.loads(a.decode("utf-8"))
    assert parsed["version"] == INDEX_VERSION


def test_written_index_matches_emitted_bytes(collections, collections_rel, tmp_path):
    out, _ = _build(collections, collections_rel, tmp_path)
    assert (out / "search-index.json").read_bytes() == emit_search_index(
        collections, collections_rel
    )


def test_aliases_are_published(shapes, shapes_rel):
    doc = search_index_document(shapes, shapes_rel)
    assert doc["aliases"] == {"List": "Seq", "Str": "String"}
