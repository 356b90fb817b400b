from __future__ import annotations

import pytest

from conftest import VIOLATIONS, VALID_ROOTS, checked, load_model, model_from
from montiarc.checks import Phase, check_all
from montiarc.diagnostics import Severity, format_diagnostics

# Expected violations per case directory: (case, code, severity, line).
MARKED = {
    ("b1_duplicate_names", "B1", "error", 4),
    ("b1_duplicate_names", "B1", "error", 16),
    ("b2_root_instance_name", "B2", "error", 1),
    ("co1_piercing_endpoint", "CO1", "error", 11),
    ("co2_qualified_source", "CO2", "error", 9),
    ("r1_ambiguous_outport", "R1", "error", 7),
    ("r1_ambiguous_outport", "R1", "error", 11),
    ("r2_ambiguous_subport", "R2", "error", 9),
    ("r2_ambiguous_subport", "R2", "error", 10),
    ("r5_missing_subcomponent", "R5", "error", 9),
    ("r6_missing_source_port", "R6", "error", 13),
    ("r7_missing_target_port", "R7", "error", 14),
    ("r8_type_compatibility", "R8", "error", 12),
    ("r9_unassigned_type_params", "R9", "error", 9),
    ("r10_missing_config_arg", "R10", "error", 9),
    ("r11_inheritance_cycle", "R11", "error", 2),
    ("r11_inheritance_cycle", "R11", "error", 7),
    ("r12_structural_cycle", "R12", "error", 3),
    ("r13_reference_cycle", "R13", "error", 3),
    ("r13_reference_cycle", "R13", "error", 7),
    ("cv5_unused_port", "CV5", "warning", 4),
    ("cv6_unconnected_ports", "CV6", "warning", 7),
}


@pytest.fixture(scope="module")
def violation_diagnostics():
    return check_all(load_model(VIOLATIONS))


def test_violation_corpus_matches_marks_exactly(violation_diagnostics):
    got = {(d.span.file.split("/")[0], d.code, d.severity.value, d.span.line) for d in violation_diagnostics}
    assert got == MARKED
    assert len(violation_diagnostics) == len(MARKED)


def test_violation_corpus_golden_file(violation_diagnostics):
    assert format_diagnostics(violation_diagnostics) == (VIOLATIONS / "expected.diag").read_text()


@pytest.mark.parametrize("case, message", [
    ("b1_duplicate_names", "'fil' already declared"),
    ("b1_duplicate_names", "'del' already declared"),
    ("b2_root_instance_name", "instance name mySenderComp is not allowed for root component type"),
    ("co1_piercing_endpoint", "d not visible"),
    ("co2_qualified_source", "is qualified"),
    ("r1_ambiguous_outport", "ambiguous sender"),
    ("r8_type_compatibility", "incompatible types Object, String"),
    ("r9_unassigned_type_params", "type parameter V not assigned"),
    ("r10_missing_config_arg", "missing parameter lossrate"),
    ("r11_inheritance_cycle", "inheritance cycle"),
    ("r12_structural_cycle", "structural inheritance cycle"),
    ("r13_reference_cycle", "reference cycle"),
    ("cv5_unused_port", "unused port foo"),
    ("cv6_unconnected_ports", "unconnected ports msgs, filteredMsgs"),
])
def test_messages_quote_the_marks(violation_diagnostics, case, message):
    assert any(d.span.file.startswith(case + "/") and message in d.message for d in violation_diagnostics)


def test_only_one_of_four_connectors_is_rejected(violation_diagnostics):
    r8 = [d for d in violation_diagnostics if d.span.file.startswith("r8_type_compatibility/")]
    assert [(d.code, d.span.line, d.message) for d in r8] == [("R8", 12, "incompatible types Object, String")]


def test_b1_relates_to_the_earlier_declaration(violation_diagnostics):
    b1 = [d for d in violation_diagnostics if d.code == "B1"]
    assert [r.line for d in b1 for r in d.related] == [1, 10]


def test_inner_instance_name_is_legal(violation_diagnostics):
    assert [d.code for d in violation_diagnostics if d.span.file.startswith("b2_root_instance_name/")] == ["B2"]


def test_severity_map(violation_diagnostics):
    for d in violation_diagnostics:
        expected = Severity.WARNING if d.code.startswith("CV") else Severity.ERROR
        assert d.severity is expected


@pytest.mark.parametrize("root", VALID_ROOTS)
def test_valid_fixtures_have_no_errors(root):
    _, result = checked(f"valid/{root}")
    assert result.ok, format_diagnostics(result.diagnostics)


def test_only_expected_warnings_in_valid_fixtures():
    warnings = {
        root: sorted((d.code, d.message) for d in checked(f"valid/{root}")[1].diagnostics)
        for root in VALID_ROOTS
    }
    assert warnings["adra"] == []
    assert warnings["filter_chain"] == []
    assert warnings["board_lights"] == []
    assert warnings["lossy_channel"] == []
    # Fragmentary models leave ports of their subcomponents open.
    assert {c for c, _ in warnings["config_forwarding"]} <= {"CV5", "CV6"}
    assert {c for c, _ in warnings["qualified_reference"]} <= {"CV6"}
    assert {c for c, _ in warnings["same_package"]} <= {"CV6"}


def test_config_forwarding_follows_naming_conventions():
    _, result = checked("valid/config_forwarding")
    assert not [d for d in result.diagnostics if d.code in {"CV1", "CV2", "CV3", "CV4"}]


def test_empty_pool_and_trivial_component():
    assert check_all(model_from({})) == []
    assert check_all(model_from({"X.arc": "component X {}"})) == []


def codes(sources: dict[str, str], phase: Phase = Phase.POST, types: str = "") -> list[str]:
    return [d.code for d in check_all(model_from(sources, types), phase)]


def test_naming_conventions():
    src = {
        "p/a.arc": """
        package p;
        import q.Y;
        import q.Y;
        import q.Z;
        component a<t> {
          port in String Bad, out String ok;
          connect Bad -> ok;
        }
        """,
        "q/Y.arc": "package q; component Y {}",
        "q/Z.arc": "package q; component Z {}",
    }
    got = codes(src)
    assert got.count("CV1") == 1
    assert got.count("CV2") == 2
    assert got.count("CV3") == 1
    assert "CV4" in got


def test_default_names_collide():
    assert codes({"X.arc": "component X { port in String, in String; }"}) == ["B1"]


def test_type_parameter_port_needs_a_name():
    assert "B1" in codes({"X.arc": "component X<T> { port in T; }"})


def test_no_masking_between_unrelated_checks():
    got = codes({"X.arc": """
        component X {
          port in String a, in String a, out String o;
          connect a -> nope.p;
        }
    """})
    assert "B1" in got and "R5" in got


def test_config_argument_types():
    src = {
        "F.arc": "component F[char f] { port in String i, out String o; connect i -> o; }",
        "U.arc": """component U {
          port in String i, out String o;
          component F("no") f;
          connect i -> f.i;
          connect f.o -> o;
        }""",
    }
    assert codes(src) == ["R10"]


def test_too_many_type_arguments():
    src = {
        "B.arc": "component B<T> { port in T i, out T o; connect i -> o; }",
        "U.arc": "component U { component B<Integer, String> b; }",
    }
    assert "R9" in codes(src, Phase.PRE)


def test_missing_component_types():
    src = {
        "ma/A.arc": "package ma; component A { component ma.msg.Nope n; component Missing m; }",
    }
    assert codes(src, Phase.PRE) == ["R3", "R4"]


def test_unknown_data_type():
    assert codes({"X.arc": "component X { port in Image i; }"}, Phase.PRE) == ["R8"]


def test_pre_phase_skips_conventions():
    assert "CV5" not in codes({"X.arc": "component X { port in String foo; component X2 x; }",
                               "X2.arc": "component X2 { port in String a; }"}, Phase.PRE)


def test_diagnostics_are_deterministic():
    a = format_diagnostics(check_all(load_model(VIOLATIONS)))
    b = format_diagnostics(check_all(load_model(VIOLATIONS)))
    assert a == b


def test_format_is_stable(violation_diagnostics):
    line = next(d for d in violation_diagnostics if d.code == "R5").format()
    assert line == "r5_missing_subcomponent/A_B_Filter.arc:9:11: error R5: subcomponent bf does not exist"
