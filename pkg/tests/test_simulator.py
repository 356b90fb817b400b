from __future__ import annotations

import json

import pytest
from hypothesis import HealthCheck, given, settings
from hypothesis import strategies as st

from conftest import SIM, checked, model_from
from montiarc.checks import check_model
from montiarc.simulator import (
    BehaviorRegistry,
    Causality,
    Message,
    Paradigm,
    Scenario,
    SimulationError,
    check_trace,
    instantiate,
    run,
)
from montiarc.simulator.core import node_name

SIM_BEHAVIORS = BehaviorRegistry.load(SIM / "behaviors.json")


def tree(rel: str, qname: str, behaviors: BehaviorRegistry | None = None):
    _, result = checked(rel)
    assert result.ok, result.diagnostics
    return instantiate(result.elaborated[qname], result.elaborator, behaviors or BehaviorRegistry.builtin())


def codes(outcome) -> list[str]:
    return [d.code for d in outcome.diagnostics]


# -- report generator --------------------------------------------------------

REPORT_SCENARIO = Scenario.load(SIM / "report_generator.json")


def test_report_generator_trace():
    outcome = run(tree("valid/adra", "adra.be.ReportGenerator"), REPORT_SCENARIO)
    assert outcome.ok
    assert outcome.slices("report") == [[], [], [], [Message("Report", ("ASA", "Clopidogrel", "Li"))]]
    assert [str(e) for e in outcome.traces["report"]] == ["√", "√", "√", "Report(ASA, Clopidogrel, Li)", "√"]
    assert check_trace(outcome.traces, REPORT_SCENARIO.expected).ok


def test_off_by_one_expectation_names_the_mismatch():
    outcome = run(tree("valid/adra", "adra.be.ReportGenerator"), REPORT_SCENARIO)
    doc = json.loads((SIM / "report_generator.json").read_text())
    doc["expected"][0]["slice"] = 2
    verdict = check_trace(outcome.traces, Scenario.from_json(doc).expected)
    assert not verdict.ok
    assert verdict.failures == [
        "port report, slice 2: expected [Report(ASA, Clopidogrel, Li)], actual []",
        "port report, slice 3: expected [], actual [Report(ASA, Clopidogrel, Li)]",
    ]


def test_report_without_close_stays_silent():
    scenario = Scenario.from_json({"horizon": 3, "inputs": [
        {"port": "genCtrl", "slice": 0, "value": "OP"}, {"port": "drug", "slice": 1, "value": "ASA"}]})
    outcome = run(tree("valid/adra", "adra.be.ReportGenerator"), scenario)
    assert outcome.slices("report") == [[], [], []]


def test_empty_scenario_yields_only_ticks():
    outcome = run(tree("sim", "sim.Delay"), Scenario(horizon=3))
    assert [str(e) for e in outcome.traces["output"]] == ["√", "√", "√"]
    assert outcome.ok


def test_unknown_input_port_is_rejected():
    with pytest.raises(ValueError, match="nope"):
        run(tree("sim", "sim.Delay"), Scenario.from_json({"horizon": 1, "inputs": [{"port": "nope", "value": 1}]}))


@pytest.mark.parametrize("doc", [{}, {"horizon": -1}, {"horizon": True}, {"horizon": 2, "inputs": [{"slice": 0}]},
                                 {"horizon": 2, "inputs": [{"port": "a", "value": 1, "slice": -1}]}])
def test_malformed_scenarios(doc):
    with pytest.raises(ValueError):
        Scenario.from_json(doc)


# -- structure -----------------------------------------------------------------

def test_delay_chain_shifts_by_two():
    outcome = run(tree("sim", "sim.DelayChain"), Scenario.load(SIM / "chain.json"))
    assert outcome.slices("output") == [[], [], [Message("x")], []]
    assert check_trace(outcome.traces, Scenario.load(SIM / "chain.json").expected).ok
    assert outcome.local_times == {"first": 4, "second": 4, "<root>": 4}


def test_adra_instance_tree():
    t = tree("valid/adra", "adra.AdverseDrugReactionApp", BehaviorRegistry({"*": BehaviorRegistry.builtin().lookup("Delay")}))
    names = [i.name for i in t.root.walk()]
    assert len(names) == 5
    assert names[0] == "<root>"
    assert t.root.depth() == 2
    assert len(t.atomics) == 4


def test_feedback_through_delay_progresses():
    model = model_from({
        "D.arc": "component D { port in Integer input, in Integer feedback, out Integer output; }",
        "Loop.arc": "component Loop { port in Integer input, out Integer output; component D d;"
                    " connect input -> d.input; connect d.output -> d.feedback; connect d.output -> output; }",
    })
    result = check_model(model)
    t = instantiate(result.elaborated["Loop"], result.elaborator, BehaviorRegistry({"D": BehaviorRegistry.builtin().lookup("Delay")}))
    assert t.routes[(("d",), "output")] == [(("d",), "feedback"), ((), "output")]
    outcome = run(t, Scenario.from_json({"horizon": 4, "inputs": [{"port": "input", "slice": 0, "value": "x"}]}))
    # Delay maps its second inport onto its only outport, so x circulates.
    assert outcome.slices("output") == [[], [Message("x")], [Message("x")], [Message("x")]]
    assert outcome.ok


def test_missing_behavior():
    _, result = checked("sim")
    with pytest.raises(SimulationError) as err:
        instantiate(result.elaborated["sim.Loop"], result.elaborator, BehaviorRegistry.builtin())
    assert [d.code for d in err.value.diagnostics] == ["MISSING_BEHAVIOR"]


def test_manifest_with_module_reference():
    reg = BehaviorRegistry.from_manifest({"X": "montiarc.simulator.behaviors:Forward"})
    assert reg.lookup("pkg.X").__name__ == "Forward"
    with pytest.raises(ValueError):
        BehaviorRegistry.from_manifest({"X": "NoSuchBehavior"})


# -- timing diagnostics --------------------------------------------------------

def test_zero_delay_feedback_is_stuck():
    outcome = run(tree("sim", "sim.Loop", SIM_BEHAVIORS), Scenario.load(SIM / "feedback.json"))
    assert "T1" in codes(outcome)
    assert not outcome.ok


def test_zero_delay_feedback_with_data_is_a_livelock():
    scenario = Scenario.from_json({"horizon": 3, "inputs": [{"port": "input", "slice": 0, "value": 1}]})
    outcome = run(tree("sim", "sim.Loop", SIM_BEHAVIORS), scenario)
    assert "T1" in codes(outcome)
    assert "T2" in codes(outcome)


def test_strict_causality_flags_forwarding():
    scenario = Scenario.from_json({"horizon": 2, "inputs": [{"port": "input", "slice": 0, "value": 1}]})
    t = tree("sim", "sim.Delay", BehaviorRegistry({"Delay": BehaviorRegistry.builtin().lookup("Forward")}))
    strict = run(t, scenario)
    weak = run(t, scenario, causality=Causality.WEAK)
    assert [(d.code, d.is_error) for d in strict.diagnostics] == [("T2", True)]
    assert [(d.code, d.is_error) for d in weak.diagnostics] == [("T2", False)]
    assert weak.slices("output") == [[Message("1")], []]


def test_timesynchronous_overflow():
    outcome = run(tree("sim", "sim.SyncPipe"), Scenario.load(SIM / "sync_overflow.json"))
    assert outcome.paradigm is Paradigm.TIMESYNCHRONOUS
    # Both the delay's inport and, one slice later, the root outport overflow.
    assert [d.message for d in outcome.diagnostics] == [
        "more than one message in slice 0 on port d.input",
        "more than one message in slice 1 on port output",
    ]
    assert codes(outcome) == ["T3", "T3"]


def test_untimed_run_has_no_ticks():
    outcome = run(tree("sim", "sim.SyncPipe"), Scenario.load(SIM / "sync_overflow.json"), paradigm="untimed")
    assert [str(e) for e in outcome.traces["output"]] == ["1", "2", "3"]
    assert outcome.ok


def test_mixed_timing_is_rejected():
    _, result = checked("sim")
    with pytest.raises(SimulationError) as err:
        instantiate(result.elaborated["sim.MixedPipe"], result.elaborator, SIM_BEHAVIORS)
    assert [d.code for d in err.value.diagnostics] == ["T4"]


def test_reports_are_deterministic():
    t = tree("valid/adra", "adra.be.ReportGenerator")
    assert run(t, REPORT_SCENARIO).report("json") == run(t, REPORT_SCENARIO).report("json")
    assert json.loads(run(t, REPORT_SCENARIO).report("json"))["ticks"] == {"report": 4}


# -- random nested delay chains ----------------------------------------------

@st.composite
def chains(draw):
    """Nested series compositions of a unit delay, plus a scenario.

    Level 0 is the atomic delay; level k chains ``w_k`` instances of level
    k-1, so the end-to-end delay is the product of the widths.
    """
    depth = draw(st.integers(1, 4))
    widths = [draw(st.integers(1, 3)) for _ in range(depth)]
    sources = {"L0.arc": "component L0 { port in Integer i, out Integer o; }"}
    for k, w in enumerate(widths, start=1):
        subs = " ".join(f"component L{k - 1} s{j};" for j in range(w))
        conns = ["connect i -> s0.i;"] + [f"connect s{j}.o -> s{j + 1}.i;" for j in range(w - 1)] + [f"connect s{w - 1}.o -> o;"]
        sources[f"L{k}.arc"] = f"component L{k} {{ port in Integer i, out Integer o; {subs} {' '.join(conns)} }}"
    horizon = draw(st.integers(0, 8))
    inputs = draw(st.lists(st.tuples(st.integers(0, max(horizon - 1, 0)), st.integers(0, 99)), max_size=6)) if horizon else []
    return sources, f"L{depth}", widths, horizon, sorted(inputs, key=lambda x: x[0])


@settings(max_examples=200, deadline=None, suppress_health_check=[HealthCheck.too_slow])
@given(chains())
def test_delay_chain_properties(case):
    sources, root, widths, horizon, inputs = case
    result = check_model(model_from(sources))
    assert result.ok
    t = instantiate(result.elaborated[root], result.elaborator, BehaviorRegistry({"L0": BehaviorRegistry.builtin().lookup("Delay")}))
    scenario = Scenario.from_json({"horizon": horizon, "inputs": [{"port": "i", "slice": k, "value": v} for k, v in inputs]})
    outcome = run(t, scenario)

    delay = 1
    for w in widths:
        delay *= w
    expected = [[] for _ in range(horizon)]
    for k, v in inputs:
        if k + delay < horizon:
            expected[k + delay].append(Message(str(v)))
    assert outcome.slices("o") == expected

    # Every stream carries exactly one tick per slice.
    for events in [*outcome.channels.values(), *outcome.inbox.values(), *outcome.traces.values()]:
        assert sum(e.is_tick for e in events) == horizon

    # What a sender emits is exactly what each of its receivers got.
    for sender, targets in t.routes.items():
        for target in targets:
            assert outcome.inbox[node_name(target)] == outcome.channels[node_name(sender)]
    assert outcome.leftover == {}
    assert set(outcome.local_times.values()) == {horizon}

    assert "T2" not in codes(outcome)
    assert outcome.ok
    assert run(t, scenario).report("json") == outcome.report("json")
