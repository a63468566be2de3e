import json

import pytest

from docforge.cli import run


def _run(capsys, *argv):
    code = run(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def _structured(out):
    return json.loads(out)


# ---------------------------------------------------------------------------
# exit codes


def test_search_hit_exits_zero(collections_path, capsys):
    code, out, err = _run(capsys, "search", "index", "--input", collections_path)
    assert code == 0 and err == ""
    assert "collections::List::indexOf" in out


def test_search_miss_prints_no_results(collections_path, capsys):
    code, out, _ = _run(capsys, "search", "find", "--input", collections_path)
    assert code == 0
    assert out.strip() == "no results"


def test_missing_input_file_exits_one(capsys):
    code, out, err = _run(capsys, "search", "x", "--input", "/nope/missing.json")
    assert code == 1
    assert "error:" in err and out == ""


def test_invalid_document_exits_one(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text('{"format_version": 9}')
    code, _, err = _run(capsys, "search", "x", "--input", str(bad))
    assert code == 1
    assert "unknown-version" in err


def test_validation_failure_exits_one(tmp_path, capsys):
    doc = {
        "format_version": 1,
        "modules": [{"path": "m"}],
        "types": [{"name": "A", "module": "m"}, {"name": "A", "module": "m"}],
    }
    bad = tmp_path / "dup.json"
    bad.write_text(json.dumps(doc))
    code, _, err = _run(capsys, "search", "a", "--input", str(bad))
    assert code == 1
    assert "duplicate-name" in err


def test_bad_query_shape_exits_one(collections_path, capsys):
    code, _, err = _run(capsys, "query", "Set<", "--input", collections_path)
    assert code == 1
    assert "parse-error" in err


def test_unknown_filter_name_exits_one(collections_path, capsys):
    code, _, err = _run(
        capsys, "search", "set", "--input", collections_path, "--filter", "owner=Nope"
    )
    assert code == 1
    assert "unknown-filter-name" in err


def test_usage_errors_exit_two(collections_path, capsys):
    code, _, _ = _run(capsys, "search", "x", "--input", collections_path, "--bogus")
    assert code == 2
    code, _, _ = _run(capsys, "frobnicate")
    assert code == 2
    code, _, err = _run(
        capsys, "search", "x", "--input", collections_path, "--filter", "colour=red"
    )
    assert code == 2
    assert "colour" in err


def test_unknown_flag_beats_missing_file(capsys):
    # argument errors are reported before the input is read
    code, _, _ = _run(capsys, "search", "x", "--input", "/nope.json", "--bogus")
    assert code == 2


def test_bad_receiver_filter_value_exits_two(collections_path, capsys):
    code, _, err = _run(
        capsys,
        "search", "set",
        "--input", collections_path,
        "--filter", "receiver=sideways",
    )
    assert code == 2
    assert "sideways" in err


# ---------------------------------------------------------------------------
# search output


def test_search_text_format(collections_path, capsys):
    _, out, _ = _run(capsys, "search", "index", "--input", collections_path)
    line = out.splitlines()[0]
    assert line.startswith("collections::List::indexOf")
    assert "[score 40]" in line


def test_search_structured_format(collections_path, capsys):
    _, out, _ = _run(
        capsys,
        "search", "index",
        "--input", collections_path,
        "--format", "structured",
    )
    payload = _structured(out)
    assert payload["results"][0]["entity"] == "collections::List::indexOf"
    assert payload["results"][0]["score"] == 40
    assert isinstance(payload["results"][0]["explanation"], list)


def test_text_and_structured_agree_on_ids(collections_path, capsys):
    _, text_out, _ = _run(capsys, "search", "set", "--input", collections_path)
    text_ids = [l.split()[0] for l in text_out.splitlines()]
    _, json_out, _ = _run(
        capsys,
        "search", "set",
        "--input", collections_path,
        "--format", "structured",
    )
    json_ids = [r["entity"] for r in _structured(json_out)["results"]]
    assert text_ids == json_ids


def test_multiword_query_joins_tokens(collections_path, capsys):
    _, out, _ = _run(
        capsys,
        "search", "list", "find", "predicate",
        "--input", collections_path,
        "--filter", "owner=list",
    )
    assert len(out.splitlines()) == 5


def test_receiver_filter_markers(collections_path, capsys):
    _, out, _ = _run(
        capsys,
        "search", "set",
        "--input", collections_path,
        "--filter", "receiver=static",
    )
    assert out.splitlines() == [
        "collections::List::fromSet  (static) (s: Set<T>) -> List<T>  [score 40]"
    ]
    _, out2, _ = _run(
        capsys,
        "search", "set",
        "--input", collections_path,
        "--filter", "receiver=ro,mut",
    )
    ids = [l.split()[0] for l in out2.splitlines()]
    assert "collections::List::fromSet" not in ids
    assert "collections::List::toSet" in ids


def test_synonyms_file(collections_path, tmp_path, capsys):
    syn = tmp_path / "syn.json"
    syn.write_text(json.dumps({"find": ["index"]}))
    _, out, _ = _run(
        capsys,
        "search", "find",
        "--input", collections_path,
        "--synonyms", str(syn),
    )
    assert "collections::List::indexOf" in out
    assert "[score 5]" in out


# ---------------------------------------------------------------------------
# query output


def test_query_matches_frozen_example(collections_path, capsys):
    code, out, _ = _run(capsys, "query", "[a] -> int", "--input", collections_path)
    assert code == 0
    assert out.splitlines() == [
        "collections::List::len  (ro) () -> Int  [penalty 1]",
    ]
    code, out, _ = _run(capsys, "query", "(a) -> int", "--input", collections_path)
    assert code == 0
    assert out.splitlines() == [
        "collections::List::len  (ro) () -> Int  [penalty 2]",
        "collections::Set::size  (ro) () -> Int  [penalty 2]",
    ]


def test_query_empty_result(collections_path, capsys):
    code, out, _ = _run(
        capsys, "query", "(a, b, c) -> d", "--input", collections_path
    )
    assert code == 0
    assert out.strip() == "no results"


def test_query_no_permute_flag(collections_path, capsys):
    args = ["query", "(Fn1<a, Bool>, List<a>) -> Int", "--input", collections_path]
    _, out, _ = _run(capsys, *args)
    assert "collections::List::indexOf" in out
    _, out, _ = _run(capsys, *args, "--no-permute")
    assert out.strip() == "no results"


def test_query_subtype_hops_flag(collections_path, capsys):
    args = ["query", "SortedSet<a> -> Int", "--input", collections_path]
    _, out, _ = _run(capsys, *args)
    assert "collections::Set::size" in out
    _, out, _ = _run(capsys, *args, "--subtype-hops", "0")
    assert out.strip() == "no results"


def test_query_structured_penalties(collections_path, capsys):
    _, out, _ = _run(
        capsys,
        "query", "[a] -> int",
        "--input", collections_path,
        "--format", "structured",
    )
    payload = _structured(out)
    assert payload["results"] == [
        {
            "entity": "collections::List::len",
            "penalty": 1,
            "explanation": ["a = v0"],
        }
    ]


def test_query_aliases_apply_once(shapes_path, capsys):
    # [a] means Seq<a> under this document's aliases; the query parser must
    # leave the head alone so normalization is the only rewrite
    code, out, _ = _run(capsys, "query", "([a]) -> Int", "--input", shapes_path)
    assert code == 0
    assert "geo::util::collect" in out


# ---------------------------------------------------------------------------
# rel output


def test_rel_outputs(collections_path, capsys):
    code, out, _ = _run(
        capsys, "rel", "--outputs", "Set", "--input", collections_path
    )
    assert code == 0
    assert out.splitlines() == ["collections::List::toSet"]


def test_rel_contains(shapes_path, capsys):
    _, out, _ = _run(capsys, "rel", "--contains", "Int", "--input", shapes_path)
    assert out.splitlines() == ["geo::Circle::radius", "geo::Square::side"]


def test_rel_unknown_name_is_no_results(collections_path, capsys):
    code, out, _ = _run(
        capsys, "rel", "--inputs", "Nope", "--input", collections_path
    )
    assert code == 0
    assert out.strip() == "no results"


def test_rel_structured(collections_path, capsys):
    _, out, _ = _run(
        capsys,
        "rel", "--implements", "Iterable",
        "--input", collections_path,
        "--format", "structured",
    )
    payload = _structured(out)
    assert payload["results"] == ["collections::List", "collections::Set"]


def test_rel_flags_are_exclusive(collections_path, capsys):
    code, _, _ = _run(
        capsys,
        "rel", "--inputs", "Set", "--outputs", "Set",
        "--input", collections_path,
    )
    assert code == 2


# ---------------------------------------------------------------------------
# matrix output


def test_matrix_text(collections_path, capsys):
    code, out, _ = _run(
        capsys,
        "matrix", "List",
        "--input", collections_path,
        "--group-by", "receiver",
    )
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "== mutating =="
    assert any(l.startswith("indexOf  (ro)") for l in lines)


def test_matrix_structured(collections_path, capsys):
    _, out, _ = _run(
        capsys,
        "matrix", "List",
        "--input", collections_path,
        "--group-by", "annotation",
        "--format", "structured",
    )
    payload = _structured(out)
    assert payload["subject"] == "List"
    assert payload["grouping"] == "annotation"
    labels = [row["label"] for row in payload["rows"]]
    assert labels == ["building", "converting", "searching", "ungrouped"]
    building = payload["rows"][0]["cells"]
    assert [c["name"] for c in building] == ["fromSet", "push", "toSet"]
    assert building[0]["target"] == "collections::List::fromSet"


def test_matrix_unknown_subject_exits_one(collections_path, capsys):
    code, _, err = _run(capsys, "matrix", "Roster", "--input", collections_path)
    assert code == 1
    assert "unknown-subject" in err


# ---------------------------------------------------------------------------
# build


def test_build_writes_manifest(collections_path, tmp_path, capsys):
    out_dir = tmp_path / "site"
    code, out, _ = _run(
        capsys, "build", "--input", collections_path, "--out", str(out_dir)
    )
    assert code == 0
    lines = out.splitlines()
    assert len(lines) == 15
    assert "index.html" in lines and "search-index.json" in lines
    assert (out_dir / "index.html").exists()


def test_build_structured_manifest(collections_path, tmp_path, capsys):
    out_dir = tmp_path / "site"
    code, out, _ = _run(
        capsys,
        "build",
        "--input", collections_path,
        "--out", str(out_dir),
        "--format", "structured",
    )
    assert code == 0
    payload = _structured(out)
    assert len(payload["manifest"]) == 15
    assert "search-index.json" in payload["manifest"]
