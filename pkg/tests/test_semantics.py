from __future__ import annotations

import dataclasses

import pytest
from hypothesis import HealthCheck, given, settings
from hypothesis import strategies as st

from conftest import VALID_ROOTS, checked, model_from
from montiarc.checks import check_model
from montiarc.semantics import (
    PARENT,
    SemComponent,
    SemConnector,
    SemPort,
    SemSubComponent,
    export,
    load,
    map_montiarc,
    map_to_domain,
    validate_domain,
)
from montiarc.syntax.ast import Direction

IN, OUT = Direction.IN, Direction.OUT

LOSSY = (
    b'{"ctype":"LossyChannel","ports":[{"dir":"in","ptype":"Integer","pname":"portIn"},'
    b'{"dir":"out","ptype":"Integer","pname":"portOut"}],"subcomponents":[],"connectors":[]}'
)


def domain(root: str, qname: str) -> SemComponent:
    model, result = checked(f"valid/{root}")
    return map_to_domain(result.elaborated[qname], result.elaborator)


def test_lossy_channel_mapping():
    s = domain("lossy_channel", "LossyChannel")
    assert s == SemComponent(
        "LossyChannel",
        frozenset({SemPort(IN, "Integer", "portIn"), SemPort(OUT, "Integer", "portOut")}),
        frozenset(),
        frozenset(),
    )
    assert export(s) == LOSSY


def test_board_lights_control_identical_copies():
    s = domain("board_lights", "automotive.ecu.BoardLightsControl")
    subs = {x.cname: x.component for x in s.subcomponents}
    assert set(subs) == {"frontSignalController", "rearSignalController", "headLightsController"}
    assert subs["frontSignalController"] == subs["rearSignalController"]
    assert subs["frontSignalController"].ctype == "automotive.ecu.controller.TurnSignalController"


def test_empty_component():
    model = model_from({"X.arc": "component X {}"})
    result = check_model(model)
    s = map_to_domain(result.elaborated["X"], result.elaborator)
    assert s == SemComponent("X", frozenset(), frozenset(), frozenset())
    assert export(s) == b'{"ctype":"X","ports":[],"subcomponents":[],"connectors":[]}'


def test_parent_token_for_own_ports():
    model = model_from({
        "S.arc": "component S { port in String messageIn; }",
        "C.arc": "component C { port in String messageIn; component S sender; connect messageIn -> sender.messageIn; }",
    })
    result = check_model(model)
    s = map_to_domain(result.elaborated["C"], result.elaborator)
    assert s.connectors == {SemConnector(PARENT, "messageIn", "sender", "messageIn")}
    assert b'"src_cname":"#this"' in export(s)


def test_generic_instantiations_get_distinct_ctypes():
    model = model_from({
        "Buffer.arc": "component Buffer<T> { port in T input, out T buffered; }",
        "U.arc": "component U { component Buffer<Integer> a; component Buffer<String> b; }",
    })
    result = check_model(model)
    s = map_to_domain(result.elaborated["U"], result.elaborator)
    ctypes = {x.cname: x.component.ctype for x in s.subcomponents}
    assert ctypes == {"a": "Buffer<Integer>", "b": "Buffer<String>"}
    assert validate_domain(s) == []


def test_config_values_are_abstracted_away():
    _, result = checked("valid/filter_chain")
    s = map_to_domain(result.elaborated["A_B_Filter"], result.elaborator)
    subs = {x.cname: x.component for x in s.subcomponents}
    assert subs["af"] == subs["bf"]


def _all_roots():
    for root in VALID_ROOTS:
        model, _ = checked(f"valid/{root}")
        for d in model.pool.roots():
            yield root, d.qname


@pytest.mark.parametrize("root, qname", list(_all_roots()))
def test_commutativity(root, qname):
    model, result = checked(f"valid/{root}")
    d = model.pool.defs[qname]
    assert map_montiarc(model, d) == map_to_domain(result.elaborated[qname], result.elaborator)


@pytest.mark.parametrize("root, qname", list(_all_roots()))
def test_soundness(root, qname):
    assert validate_domain(domain(root, qname)) == []


@pytest.mark.parametrize("root, qname", list(_all_roots()))
def test_export_round_trip(root, qname):
    s = domain(root, qname)
    data = export(s)
    assert load(data) == s
    assert export(load(data)) == data


def test_export_is_injective_on_corpus():
    seen: dict[bytes, SemComponent] = {}
    for root, qname in _all_roots():
        s = domain(root, qname)
        data = export(s)
        assert seen.setdefault(data, s) == s
    assert len(seen) == len({domain(r, q) for r, q in _all_roots()})


# -- hand-mutated domains ------------------------------------------------------

def _base() -> SemComponent:
    return domain("adra", "adra.AdverseDrugReactionApp")


def _with(s: SemComponent, **changes) -> SemComponent:
    return dataclasses.replace(s, **changes)


def _mutants():
    base = _base()
    subs = {x.cname: x.component for x in base.subcomponents}
    scanner = subs["barcodeScanner"]

    # D1: two components share a ctype but differ in ports.
    fake = _with(scanner, ports=scanner.ports | {SemPort(IN, "String", "extra")})
    yield "D1", _with(base, subcomponents=base.subcomponents | {SemSubComponent("scanner2", fake)})
    fake = _with(subs["app"], ports=frozenset())
    yield "D1", _with(base, subcomponents=base.subcomponents | {SemSubComponent("app2", fake)})

    # D2: duplicate port names.
    yield "D2", _with(base, ports=base.ports | {SemPort(OUT, "String", "barcode")})
    leaf = SemComponent("Leaf", frozenset({SemPort(IN, "String", "p"), SemPort(OUT, "Integer", "p")}), frozenset(), frozenset())
    yield "D2", SemComponent("Top", frozenset(), frozenset({SemSubComponent("leaf", leaf)}), frozenset())

    # D3: duplicate subcomponent names.
    yield "D3", _with(base, subcomponents=base.subcomponents | {SemSubComponent("app", subs["barcodeScanner"])})
    e = SemComponent("E", frozenset(), frozenset(), frozenset())
    f = SemComponent("F", frozenset(), frozenset(), frozenset())
    yield "D3", SemComponent("Top", frozenset(), frozenset({SemSubComponent("x", e), SemSubComponent("x", f)}), frozenset())

    # D4: endpoint does not exist or has the wrong direction.
    yield "D4", _with(base, connectors=(base.connectors - {SemConnector("app", "bcOut", "barcodeScanner", "image")})
                      | {SemConnector("app", "nope", "barcodeScanner", "image")})
    yield "D4", _with(base, connectors=base.connectors - {SemConnector(PARENT, "barcode", "app", "barcode")} | {
        SemConnector(PARENT, "report", "app", "barcode")})

    # D5: two connectors into one receiver.
    yield "D5", _with(base, connectors=base.connectors | {SemConnector("eHealthProvider", "drug", PARENT, "report")})
    yield "D5", _with(base, connectors=base.connectors | {SemConnector(PARENT, "barcode", "eHealthProvider", "barcode")})


MUTANTS = list(_mutants())


def test_ten_mutants_two_per_rule():
    assert sorted(code for code, _ in MUTANTS) == ["D1", "D1", "D2", "D2", "D3", "D3", "D4", "D4", "D5", "D5"]


@pytest.mark.parametrize("code, mutant", MUTANTS, ids=[f"{c}-{i % 2}" for i, (c, _) in enumerate(MUTANTS)])
def test_mutant_fires_exactly_its_rule(code, mutant):
    assert {d.code for d in validate_domain(mutant)} == {code}


# -- random models: the two mapping paths agree -----------------------------

TYPES = ["String", "Integer", "Number", "Object"]


def _ports(draw, prefix: str, max_ports: int) -> list[tuple[str, str, str]]:
    """(direction, type, name) triples with unique names."""
    n = draw(st.integers(0 if prefix == "p" else 1, max_ports))
    return [
        (draw(st.sampled_from(["in", "out"])), draw(st.sampled_from(TYPES)), f"{draw(st.sampled_from('abc'))}{j}")
        for j in range(n)
    ]


def _decl(ports: list[tuple[str, str, str]]) -> str:
    return f"port {', '.join(' '.join(p) for p in ports)};" if ports else ""


@st.composite
def models(draw):
    """A composite ``Top`` over one to three random atomic types.

    Connectors are drawn from the actual sender and receiver ports, so most
    models check clean and the autoconnect modes get real work to do.
    """
    leaves: dict[str, list[tuple[str, str, str]]] = {}
    sources = {}
    for i in range(draw(st.integers(1, 3))):
        leaves[f"L{i}"] = _ports(draw, "l", 4)
        sources[f"L{i}.arc"] = f"component L{i} {{ {_decl(leaves[f'L{i}'])} }}"
    own = _ports(draw, "p", 3)
    subs = [(f"s{k}", draw(st.sampled_from(sorted(leaves)))) for k in range(draw(st.integers(1, 3)))]

    senders = [(n, t) for d, t, n in own if d == "in"]
    receivers = [(n, t) for d, t, n in own if d == "out"]
    for name, leaf in subs:
        senders += [(f"{name}.{n}", t) for d, t, n in leaves[leaf] if d == "out"]
        receivers += [(f"{name}.{n}", t) for d, t, n in leaves[leaf] if d == "in"]
    conns = []
    if senders and receivers:
        for _ in range(draw(st.integers(0, 3))):
            src, _t = draw(st.sampled_from(senders))
            dst, _t = draw(st.sampled_from(receivers))
            if draw(st.booleans()) and "." in dst:
                dst = dst.split(".")[0]
            conns.append(f"connect {src} -> {dst};")
    mode = draw(st.sampled_from(["", "autoconnect port;", "autoconnect type;"]))
    body = [mode, _decl(own)] + [f"component {t} {n};" for n, t in subs] + conns
    sources["Top.arc"] = "component Top {\n" + "\n".join(b for b in body if b) + "\n}"
    return sources


@settings(max_examples=300, deadline=None, suppress_health_check=[HealthCheck.too_slow])
@given(models())
def test_commutativity_on_random_models(sources):
    model = model_from(sources)
    result = check_model(model)
    if "Top" not in result.elaborated:
        return
    top = model.pool.defs["Top"]
    simp = map_to_domain(result.elaborated["Top"], result.elaborator)
    assert map_montiarc(model, top) == simp
    if result.ok:
        assert validate_domain(simp) == []
