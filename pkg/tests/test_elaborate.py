from __future__ import annotations

import pytest

from conftest import VALID_ROOTS, checked, model_from
from montiarc.checks import check_elaborated, check_model
from montiarc.elaborate import Elaborator, Endpoint
from montiarc.symbols import Model, Provenance
from montiarc.syntax import parse_compilation_unit
from montiarc.syntax.printer import pretty_print


def wires(e) -> set[str]:
    return {f"{c.source} -> {c.target}" for c in e.connectors}


def elab(sources: dict[str, str], qname: str, types: str = ""):
    m = model_from(sources, types)
    result = check_model(m)
    return result.elaborator.elaborate(m.pool.defs[qname]), result


def test_adverse_drug_reaction_app(adra):
    model, result = adra
    e = result.elaborated["adra.AdverseDrugReactionApp"]
    subs = {s.name: s.provenance for s in e.subcomponents}
    assert subs == {
        "app": Provenance.EXPLICIT,
        "barcodeScanner": Provenance.DEFAULT_NAME,
        "reportGenerator": Provenance.DEFAULT_NAME,
        "eHealthProvider": Provenance.AUTOINSTANTIATE,
    }
    by_prov = {}
    for c in e.connectors:
        by_prov.setdefault(c.provenance, set()).add(f"{c.source} -> {c.target}")
    assert by_prov[Provenance.DESUGARED] == {"app.bcOut -> barcodeScanner.image"}
    # Expected wiring, derived by hand from the completed interfaces.
    assert wires(e) == {
        "barcode -> app.barcode",
        "app.bcOut -> barcodeScanner.image",
        "barcodeScanner.string -> eHealthProvider.barcode",
        "app.eHMessage -> eHealthProvider.eHMessage",
        "eHealthProvider.genCtrl -> reportGenerator.genCtrl",
        "eHealthProvider.drug -> reportGenerator.drug",
        "reportGenerator.report -> report",
        "reportGenerator.report -> app.report",
    }
    assert {p.name for p in e.ports} == {"barcode", "report"}
    assert check_elaborated(model, e) == []


def _reelaborate(model: Model, result, qname: str):
    e = result.elaborated[qname]
    unit = parse_compilation_unit(pretty_print(e.to_unit()), e.definition.unit.source_id)
    model2 = Model(model.pool.replace_unit(unit), model.registry)
    return Elaborator(model2).elaborate(model2.pool.defs[qname])


@pytest.mark.parametrize("root", VALID_ROOTS)
def test_idempotent_under_reelaboration(root):
    model, result = checked(f"valid/{root}")
    for d in model.pool.roots():
        first = result.elaborated[d.qname]
        again = _reelaborate(model, result, d.qname)
        assert again.structure() == first.structure()
        assert again.diagnostics == []


def test_elaborated_form_has_no_implicit_constructs(adra):
    _, result = adra
    unit = result.elaborated["adra.AdverseDrugReactionApp"].to_unit()
    text = pretty_print(unit)
    assert "autoconnect" not in text and "autoinstantiate" not in text
    assert "[" not in text


def test_print_tags_provenance(adra):
    _, result = adra
    comments: dict[int, str] = {}
    text = pretty_print(result.elaborated["adra.AdverseDrugReactionApp"].to_unit(comments), comments)
    assert "component adra.AdverseDrugReactionApp.EHealthProvider eHealthProvider; // autoinstantiate" in text
    assert "connect app.bcOut -> barcodeScanner.image; // desugared" in text
    assert "connect reportGenerator.report -> report; // autoconnect" in text
    assert "out adra.msg.Report report; // default-name" in text


def test_board_lights_control_autoconnect_port():
    _, result = checked("valid/board_lights")
    e = result.elaborated["automotive.ecu.BoardLightsControl"]
    auto = {f"{c.source} -> {c.target}" for c in e.connectors if c.provenance is Provenance.AUTOCONNECT}
    assert auto == {
        "lever -> frontSignalController.lever",
        "lever -> rearSignalController.lever",
        "lightSwitch -> headLightsController.lightSwitch",
        "headLightsController.headLights -> headLights",
    }


def test_subcomponent_name_endpoints():
    _, result = checked("valid/filter_chain")
    e = result.elaborated["A_B_Filter"]
    assert {"msgIn -> af.msgs", "af.filteredMsgs -> bf.msgs", "bf.filteredMsgs -> msgOut"} <= wires(e)


def test_trivial_component_is_a_fixpoint():
    e, _ = elab({"X.arc": "component X {}"}, "X")
    assert (e.ports, e.subcomponents, e.connectors) == ([], [], [])
    assert pretty_print(e.to_unit()) == "component X {}\n"


def test_flatten_inheritance():
    e, _ = elab({"B.arc": "component B { port in String x; }", "A.arc": "component A extends B {}"}, "A")
    ((name, prov, t),) = [(p.name, p.provenance, str(p.type)) for p in e.ports]
    assert (name, prov, t) == ("x", Provenance.INHERITED, "String")


def test_flatten_generic_super():
    src = {
        "Buffer.arc": "component Buffer<T> { port in T input, out T buffered; }",
        "A.arc": "component A extends Buffer<Integer> {}",
    }
    e, _ = elab(src, "A")
    assert {(p.direction.value, str(p.type), p.name) for p in e.ports} == {
        ("in", "Integer", "input"), ("out", "Integer", "buffered"),
    }


def test_inherited_connectors_and_subcomponents():
    src = {
        "D.arc": "component D { port in String i, out String o; }",
        "B.arc": "component B { port in String x, out String y; component D d; connect x -> d.i; connect d.o -> y; }",
        "A.arc": "component A extends B {}",
    }
    e, _ = elab(src, "A")
    assert wires(e) == {"x -> d.i", "d.o -> y"}
    assert [s.provenance for s in e.subcomponents] == [Provenance.INHERITED]


def test_autoinstantiate_skips_configurable_inner_types():
    src = {"X.arc": """
        component X {
          autoinstantiate on;
          component Plain { }
          component Configured[int n] { }
          component Generic<T> { }
        }
    """}
    e, _ = elab(src, "X")
    assert [s.name for s in e.subcomponents] == ["plain"]


def test_autoinstantiate_off_by_default():
    e, _ = elab({"X.arc": "component X { component Plain { } }"}, "X")
    assert e.subcomponents == []


def test_explicit_reference_suppresses_autoinstantiation():
    src = {"X.arc": "component X { autoinstantiate on; component Plain { } component Plain a, b; }"}
    e, _ = elab(src, "X")
    assert sorted(s.name for s in e.subcomponents) == ["a", "b"]


def test_autoconnect_type_mode_ambiguity_warns():
    src = {
        "C.arc": "component C { port in String s; }",
        "X.arc": "component X { autoconnect type; port in String p; component C c1; component C c2; }",
    }
    e, result = elab(src, "X")
    assert e.connectors == []
    co3 = [d for d in result.diagnostics if d.code == "CO3"]
    assert len(co3) == 1 and not co3[0].is_error


def test_autoconnect_type_mode_unique_pairing():
    src = {
        "C.arc": "component C { port in String s, out Integer n; }",
        "X.arc": "component X { autoconnect type; port in String p, out Integer q; component C c; }",
    }
    e, _ = elab(src, "X")
    assert wires(e) == {"p -> c.s", "c.n -> q"}


def test_autoconnect_respects_existing_receivers():
    src = {
        "C.arc": "component C { port in String s, out String t; }",
        "X.arc": """component X {
          autoconnect port;
          port in String s, in String other, out String t;
          component C c;
          connect other -> c.s;
        }""",
    }
    e, result = elab(src, "X")
    assert wires(e) == {"other -> c.s", "c.t -> t"}
    assert result.ok


def test_autoconnect_feedback_is_allowed():
    src = {
        "C.arc": "component C { port in Integer x, out Integer x2; }",
        "X.arc": "component X { autoconnect type; component C c; }",
    }
    e, _ = elab(src, "X")
    assert wires(e) == {"c.x2 -> c.x"}


def test_ambiguous_subcomponent_endpoint_is_dropped_with_warning():
    src = {
        "C.arc": "component C { port in String a, in String b; }",
        "X.arc": "component X { port in String p; component C c; connect p -> c; }",
    }
    e, result = elab(src, "X")
    assert e.connectors == []
    assert "CO3" in [d.code for d in result.diagnostics if not d.is_error]


def test_endpoint_ordering():
    assert Endpoint(None, "a") < Endpoint("x", "a")
    assert str(Endpoint("x", "a")) == "x.a" and str(Endpoint(None, "a")) == "a"
