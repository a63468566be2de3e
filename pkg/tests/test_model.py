import random

from docforge.model import (
    ApiGraph,
    FunctionDef,
    InterfaceDef,
    ModuleDef,
    TypeDef,
    Violation,
    desugar_method,
    doc_groups,
    doc_prose,
    doc_summary,
    qualified_name,
    validate_graph,
)
from docforge.typeexpr import FunctionShape, Named, Var

INT = Named("Int")
M = ("m",)


def _graph(modules=(ModuleDef(M),), types=(), interfaces=(), functions=()):
    return ApiGraph(
        modules=tuple(modules),
        types=tuple(types),
        interfaces=tuple(interfaces),
        functions=tuple(functions),
    )


def _rules(graph):
    return [v.rule for v in validate_graph(graph)]


# ---------------------------------------------------------------------------
# doc helpers


def test_doc_groups_order_and_dedup():
    doc = "@group building\nCollects items.\n@group searching\n@group building"
    assert doc_groups(doc) == ["building", "searching"]
    assert doc_groups(None) == []
    assert doc_groups("plain text") == []


def test_doc_prose_drops_annotation_lines():
    doc = "@group building\nCollects items.\nSlowly."
    assert doc_prose(doc) == "Collects items.\nSlowly."
    assert doc_summary(doc) == "Collects items."
    assert doc_summary(None) == ""
    assert doc_summary("@group only") == ""


# ---------------------------------------------------------------------------
# naming and desugaring


def test_qualified_names():
    assert qualified_name(ModuleDef(("geo", "util"))) == "geo::util"
    assert qualified_name(TypeDef("List", ("collections",))) == "collections::List"
    assert qualified_name(FunctionDef("max", ("m",))) == "m::max"
    method = FunctionDef("len", ("collections",), owner="List", receiver="readonly")
    assert qualified_name(method) == "collections::List::len"


def test_desugar_folds_instance_receivers(collections):
    by_name = {qualified_name(f): f for f in collections.functions}
    shape = desugar_method(by_name["collections::List::len"], collections)
    assert shape == FunctionShape((Named("List", (Var("T"),)),), INT)

    push = desugar_method(by_name["collections::List::push"], collections)
    assert push.params[0] == Named("List", (Var("T"),))
    assert len(push.params) == 2


def test_desugar_leaves_static_and_free_functions_alone(collections):
    by_name = {qualified_name(f): f for f in collections.functions}
    from_set = desugar_method(by_name["collections::List::fromSet"], collections)
    assert from_set.params == (Named("Set", (Var("T"),)),)

    free = FunctionDef("max", M, params=(("a", INT), ("b", INT)), ret=INT)
    assert desugar_method(free, _graph()) == FunctionShape((INT, INT), INT)


def test_methods_of_filters_owner_module_and_visibility():
    t = TypeDef("Box", M, type_params=("T",))
    other = TypeDef("Box", ("n",))
    fns = (
        FunctionDef("get", M, owner="Box", receiver="readonly"),
        FunctionDef("zap", M, owner="Box", receiver="mutating", visibility="private"),
        FunctionDef("get", ("n",), owner="Box", receiver="readonly"),
        FunctionDef("apply", M, owner="Box", receiver="readonly"),
    )
    g = ApiGraph(
        modules=(ModuleDef(M), ModuleDef(("n",))),
        types=(t, other),
        functions=fns,
    )
    assert [f.name for f in g.methods_of(t)] == ["apply", "get"]
    assert [qualified_name(f) for f in g.methods_of(other)] == ["n::Box::get"]


def test_function_groups_property():
    f = FunctionDef("push", M, doc="@group building\nAppends a value.")
    assert f.groups == ["building"]


# ---------------------------------------------------------------------------
# validation, one rule at a time


def test_valid_fixture_graphs_have_empty_reports(collections, shapes):
    assert validate_graph(collections) == []
    assert validate_graph(shapes) == []


def test_duplicate_name():
    g = _graph(types=(TypeDef("A", M), TypeDef("A", M)))
    assert validate_graph(g) == [
        Violation("m::A", "duplicate-name", "declared 2 times")
    ]


def test_duplicate_name_counts_interface_method_shapes():
    shape = FunctionDef("draw", M, owner="I", receiver="readonly")
    g = _graph(
        interfaces=(InterfaceDef("I", M, method_shapes=(shape,)),),
        functions=(FunctionDef("draw", M, owner="I", receiver="readonly"),),
    )
    assert _rules(g) == ["duplicate-name"]


def test_module_path_rules():
    assert _rules(_graph(modules=(ModuleDef(()),))) == ["module-empty-path"]
    report = validate_graph(_graph(modules=(ModuleDef(("bad-seg",)),)))
    assert [(v.rule, v.detail) for v in report] == [("module-bad-segment", "bad-seg")]


def test_invalid_kind():
    assert _rules(_graph(types=(TypeDef("A", M, kind="union"),))) == ["invalid-kind"]


def test_type_params_duplicate():
    g = _graph(types=(TypeDef("A", M, type_params=("T", "T")),))
    assert _rules(g) == ["type-params-duplicate"]


def test_field_names_duplicate():
    t = TypeDef("A", M, fields=(("x", INT), ("x", INT)))
    assert _rules(_graph(types=(t,))) == ["field-names-duplicate"]


def test_undeclared_type_var():
    t = TypeDef("A", M, fields=(("x", Var("T")),))
    report = validate_graph(_graph(types=(t,)))
    assert [(v.entity, v.rule, v.detail) for v in report] == [
        ("m::A", "undeclared-type-var", "T")
    ]


def test_unresolved_name_in_field():
    t = TypeDef("A", M, fields=(("x", Named("Missing")),))
    assert _rules(_graph(types=(t,))) == ["unresolved-name"]


def test_type_param_cannot_take_arguments():
    t = TypeDef("A", M, type_params=("T",), fields=(("x", Named("T", (INT,))),))
    assert _rules(_graph(types=(t,))) == ["unresolved-name"]


def test_arity_mismatch_against_declaration():
    listy = TypeDef("List", M, type_params=("T",))
    t = TypeDef("A", M, fields=(("x", Named("List")),))
    report = validate_graph(_graph(types=(listy, t)))
    assert [(v.entity, v.rule) for v in report] == [("m::A", "arity-mismatch")]


def test_fn_constructor_arity():
    t = TypeDef("A", M, fields=(("x", Named("Fn1", (INT,))),))
    assert _rules(_graph(types=(t,))) == ["arity-mismatch"]
    ok = TypeDef("B", M, fields=(("x", Named("Fn1", (INT, INT))),))
    assert _rules(_graph(types=(ok,))) == []


def test_implements_non_interface():
    g = _graph(types=(TypeDef("A", M), TypeDef("B", M, implements=("A",))))
    assert _rules(g) == ["implements-non-interface"]


def test_extends_non_interface():
    g = _graph(
        types=(TypeDef("A", M),),
        interfaces=(InterfaceDef("I", M, extends=("A",)),),
    )
    assert _rules(g) == ["extends-non-interface"]


def test_unresolved_supertype_and_implements():
    g = _graph(types=(TypeDef("A", M, supertypes=("Nope",), implements=("Gone",)),))
    assert _rules(g) == ["unresolved-name", "unresolved-name"]


def test_receiver_and_visibility_rules():
    g = _graph(
        types=(TypeDef("A", M),),
        functions=(FunctionDef("f", M, owner="A", receiver="weird"),),
    )
    assert _rules(g) == ["invalid-receiver"]

    g = _graph(functions=(FunctionDef("f", M, visibility="protected"),))
    assert _rules(g) == ["invalid-visibility"]

    g = _graph(functions=(FunctionDef("f", M, receiver="readonly"),))
    assert _rules(g) == ["receiver-without-owner"]

    g = _graph(
        types=(TypeDef("A", M),),
        functions=(FunctionDef("f", M, owner="A", receiver="none"),),
    )
    assert _rules(g) == ["owner-without-receiver"]


def test_method_owner_must_resolve():
    g = _graph(functions=(FunctionDef("f", M, owner="Nope", receiver="readonly"),))
    assert _rules(g) == ["unresolved-name"]


def test_method_params_see_owner_type_params():
    box = TypeDef("Box", M, type_params=("T",))
    f = FunctionDef(
        "get", M, owner="Box", receiver="readonly", params=(("i", INT),), ret=Var("T")
    )
    assert validate_graph(_graph(types=(box,), functions=(f,))) == []


def test_inherits_cycle_reports_one_violation_per_component():
    g = _graph(
        types=(
            TypeDef("A", M, supertypes=("B",)),
            TypeDef("B", M, supertypes=("A",)),
        )
    )
    assert validate_graph(g) == [Violation("m::A", "inherits-cycle", "m::A, m::B")]


def test_self_inheritance_is_a_cycle():
    g = _graph(types=(TypeDef("A", M, supertypes=("A",)),))
    assert validate_graph(g) == [Violation("m::A", "inherits-cycle", "m::A")]


def test_extends_cycle():
    g = _graph(
        interfaces=(
            InterfaceDef("I", M, extends=("J",)),
            InterfaceDef("J", M, extends=("I",)),
        )
    )
    assert validate_graph(g) == [Violation("m::I", "extends-cycle", "m::I, m::J")]


# ---------------------------------------------------------------------------
# order insensitivity


def _shuffled(graph, seed):
    rng = random.Random(seed)

    def mix(items):
        out = list(items)
        rng.shuffle(out)
        return tuple(out)

    return ApiGraph(
        modules=mix(graph.modules),
        types=mix(graph.types),
        interfaces=mix(graph.interfaces),
        functions=mix(graph.functions),
        aliases=dict(graph.aliases),
        primitives=graph.primitives,
    )


def test_validation_is_order_insensitive(shapes):
    base = validate_graph(shapes)
    for seed in range(5):
        assert validate_graph(_shuffled(shapes, seed)) == base


def test_graph_equality_ignores_declaration_order(shapes):
    assert _shuffled(shapes, 3) == shapes
    smaller = ApiGraph(
        modules=shapes.modules,
        types=shapes.types[:-1],
        interfaces=shapes.interfaces,
        functions=shapes.functions,
        aliases=dict(shapes.aliases),
    )
    assert smaller != shapes


def test_graph_equality_considers_aliases(collections):
    changed = ApiGraph(
        modules=collections.modules,
        types=collections.types,
        interfaces=collections.interfaces,
        functions=collections.functions,
        aliases={"Weird": "List"},
    )
    assert changed != collections
