"""Context conditions over a resolved model.

Checks run in two phases. The PRE phase covers uniqueness (B1, B2),
connections (CO1-CO3), and referential integrity (R1-R13) on the model as
written. Components whose dependency group passes PRE are elaborated, and the
POST phase then re-checks unique receivers and type compatibility on the
elaborated connectors (R1, R2, R8) and evaluates the conventions CV1-CV6,
so that connectors created by autoconnect count as uses.
"""

from __future__ import annotations

import enum
from collections import defaultdict
from dataclasses import dataclass, field

import networkx as nx

from montiarc.diagnostics import Diagnostic, Span, has_errors, sort_diagnostics
from montiarc.elaborate import ElaboratedComponent, Elaborator, Endpoint
from montiarc.symbols import (
    ComponentDef,
    ComponentInfo,
    EndKind,
    EndpointRef,
    Model,
    PortSym,
    Provenance,
    Reason,
    SubSym,
)
from montiarc.syntax import ast
from montiarc.typesys import UnknownTypeError, literal_type, substitute


class Phase(enum.Enum):
    PRE = "pre"
    POST = "post"


# ---------------------------------------------------------------------------
# B1, B2


def check_basic(model: Model, defs: list[ComponentDef] | None = None) -> list[Diagnostic]:
    out: list[Diagnostic] = []
    for d in _defs(model, defs):
        info = model.info(d)
        out += [x for x in info.diagnostics if x.code == "B1"]
        seen: dict[str, tuple[Span | None, bool]] = {}
        for n in info.names:
            if n.name in seen:
                first, first_inherited = seen[n.name]
                if n.inherited:
                    continue
                where = f"in super type {info.super_def.qname}" if first_inherited and info.super_def else f"at line {first.line}" if first else ""
                out.append(Diagnostic.error(
                    "B1", n.span, f"'{n.name}' already declared {where}".rstrip(), [first] if first else []
                ))
            else:
                seen[n.name] = (n.span, n.inherited)
        if d.is_root and d.decl.instance_name:
            out.append(Diagnostic.error(
                "B2", d.decl.instance_span,
                f"instance name {d.decl.instance_name} is not allowed for root component type {d.name}",
            ))
    return out


# ---------------------------------------------------------------------------
# Connector analysis shared by CO and R checks


@dataclass
class _Use:
    """One (source, target) pair of a connector as written."""

    source: EndpointRef
    target: EndpointRef
    span: Span | None  # of the target name
    simple: bool


@dataclass
class _ConnectorReport:
    uses: list[_Use] = field(default_factory=list)
    diagnostics: list[Diagnostic] = field(default_factory=list)


def _analyze_connectors(model: Model, info: ComponentInfo) -> _ConnectorReport:
    rep = _ConnectorReport()
    diags = rep.diagnostics
    comp = info.definition.name

    def endpoint(raw: ast.QualifiedName, role: str) -> EndpointRef:
        ref = model.resolve_endpoint(raw, info)
        span = raw.span
        if ref.kind is EndKind.UNRESOLVED:
            if ref.reason is Reason.PIERCING:
                diags.append(Diagnostic.error(
                    "CO1", span, f"{raw.parts[-1]} not visible: connector {role} {raw} pierces the interface of {raw.parts[0]}"
                ))
            elif ref.reason is Reason.NO_SUCH_NAME:
                diags.append(Diagnostic.error(
                    "CO3", span, f"{raw} is neither a port nor a subcomponent of {comp}"
                ))
            elif ref.reason is Reason.NO_SUCH_SUBCOMPONENT:
                diags.append(Diagnostic.error("R5", span, f"subcomponent {ref.sub} does not exist"))
            elif ref.reason is Reason.NO_SUCH_PORT:
                sub = info.subs[ref.sub]
                diags.append(Diagnostic.error(
                    "R6", span, f"port {ref.port} does not exist in component type {sub.target.qname}"
                ))
            return ref
        port = model.endpoint_port(ref, info)
        if port is None:
            return ref
        wanted_in = (role == "source") == (ref.kind is EndKind.THIS_PORT)
        if port.incoming != wanted_in:
            code = "CO3" if ref.kind is EndKind.THIS_PORT else "R6"
            dirn = "incoming" if port.incoming else "outgoing"
            diags.append(Diagnostic.error(code, span, f"port {raw} is {dirn} and cannot be a connector {role}"))
            return EndpointRef(raw, EndKind.UNRESOLVED, ref.sub, ref.port, Reason.NO_SUCH_PORT)
        return ref

    for c in info.decl.of_type(ast.ConnectorDecl):
        src = endpoint(c.source, "source")
        for t in c.targets:
            rep.uses.append(_Use(src, endpoint(t, "target"), t.span, False))

    for s in info.subs.values():
        if s.provenance is Provenance.INHERITED:
            continue
        for sc in s.simple_connectors:
            src = _simple_source(model, s, sc, diags)
            for t in sc.targets:
                tgt = endpoint(t, "target")
                if src is not None:
                    rep.uses.append(_Use(src, tgt, t.span, True))
    return rep


def _simple_source(model: Model, s: SubSym, sc: ast.SimpleConnector, diags: list[Diagnostic]) -> EndpointRef | None:
    raw = sc.source
    if len(raw) != 1:
        diags.append(Diagnostic.error("CO2", raw.span, f"source {raw} of a simple connector is qualified"))
        return None
    if s.target is None:
        return None
    port = model.sub_ports(s).get(raw.last)
    qn = ast.QualifiedName((s.name, raw.last), raw.span)
    if port is None:
        diags.append(Diagnostic.error(
            "R7", raw.span, f"port {raw} does not exist in component type {s.target.qname}"
        ))
        return None
    if port.incoming:
        diags.append(Diagnostic.error(
            "CO2", raw.span, f"source {raw} of a simple connector is not an outgoing port of {s.target.qname}"
        ))
        return None
    return EndpointRef(qn, EndKind.SUB_PORT, s.name, raw.last)


def check_connections(model: Model, defs: list[ComponentDef] | None = None) -> list[Diagnostic]:
    out = []
    for d in _defs(model, defs):
        out += [x for x in _analyze_connectors(model, model.info(d)).diagnostics if x.code.startswith("CO")]
    return out


# ---------------------------------------------------------------------------
# R1-R13


def check_referential(model: Model, defs: list[ComponentDef] | None = None) -> list[Diagnostic]:
    out: list[Diagnostic] = []
    defs = _defs(model, defs)
    for d in defs:
        info = model.info(d)
        out += [x for x in info.diagnostics if x.code.startswith("R") or x.code.startswith("S")]
        rep = _analyze_connectors(model, info)
        out += [x for x in rep.diagnostics if x.code.startswith("R")]
        out += _unique_receivers(model, info, rep.uses)
        out += _type_compatibility(model, info, rep.uses)
        out += _subcomponent_types(model, info)
        out += _inheritance(model, d)
    out += _reference_cycles(model, defs)
    return out


def _unique_receivers(model: Model, info: ComponentInfo, uses: list[_Use]) -> list[Diagnostic]:
    spans: dict[tuple[str | None, str], list[Span | None]] = defaultdict(list)
    for u in uses:
        t = u.target
        if t.kind is EndKind.THIS_PORT:
            spans[(None, t.port)].append(u.span)
        elif t.kind is EndKind.SUB_PORT:
            spans[(t.sub, t.port)].append(u.span)
    out = []
    for (sub, port), where in spans.items():
        if len(where) < 2:
            continue
        code = "R1" if sub is None else "R2"
        name = port if sub is None else f"{sub}.{port}"
        for sp in where:
            out.append(Diagnostic.error(code, sp, f"ambiguous sender: port {name} is the target of {len(where)} connectors"))
    return out


def _type_compatibility(model: Model, info: ComponentInfo, uses: list[_Use]) -> list[Diagnostic]:
    out = []
    for u in uses:
        sp = model.endpoint_port(u.source, info)
        tp = model.endpoint_port(u.target, info)
        err = _incompatible(model, sp, tp, info.type_vars)
        if err:
            out.append(Diagnostic.error("R8", u.span, err))
    return out


def _incompatible(model: Model, sp: PortSym | None, tp: PortSym | None, tv: frozenset[str]) -> str | None:
    if sp is None or tp is None or not sp.resolved or not tp.resolved:
        return None
    try:
        if model.registry.is_subtype(sp.type, tp.type, tv):
            return None
    except UnknownTypeError:
        return None
    return f"incompatible types {sp.type}, {tp.type}"


def _subcomponent_types(model: Model, info: ComponentInfo) -> list[Diagnostic]:
    """R3, R4, S003 on subcomponent types; R9 and R10 on their arguments."""
    out: list[Diagnostic] = []
    d = info.definition
    for sd in d.decl.of_type(ast.SubComponentDecl):
        look = model.resolve_component_type(sd.type, d)
        if look.target is None:
            out.append(Diagnostic.error(look.code, sd.type.span, look.message))
            continue
        target = look.target
        out += _type_arity(sd.type, target, sd.span)
        out += _config_args(model, info, sd, target)
    return out


def _type_arity(ref: ast.TypeExpr, target: ComponentDef, span: Span | None) -> list[Diagnostic]:
    params = target.type_param_names
    given = len(ref.args)
    if given < len(params):
        missing = params[given:]
        noun = "type parameter" if len(missing) == 1 else "type parameters"
        return [Diagnostic.error("R9", span, f"{noun} {', '.join(missing)} not assigned")]
    if given > len(params):
        return [Diagnostic.error(
            "R9", span, f"too many type arguments for {target.qname}: expected {len(params)}, got {given}"
        )]
    return []


def _config_args(model: Model, info: ComponentInfo, sd: ast.SubComponentDecl, target: ComponentDef) -> list[Diagnostic]:
    tinfo = model.info(target)
    params = tinfo.config_params
    args = sd.config_args
    if len(args) < len(params):
        missing = [p[0] for p in params[len(args):]]
        noun = "parameter" if len(missing) == 1 else "parameters"
        return [Diagnostic.error("R10", sd.span, f"missing {noun} {', '.join(missing)}")]
    if len(args) > len(params):
        return [Diagnostic.error(
            "R10", sd.span, f"too many configuration arguments for {target.qname}: expected {len(params)}, got {len(args)}"
        )]
    out = []
    targs = [model.resolve_data_type(a, info.definition, info.type_vars)[0] for a in sd.type.args]
    binding = dict(zip(target.type_param_names, targs))
    own = {n: (t, ok) for n, t, ok, _ in info.config_params}
    for arg, (pname, ptype, pok, _) in zip(args, params):
        if arg.kind is ast.ArgKind.LITERAL:
            at, aok = literal_type(arg.literal), True
        elif arg.kind is ast.ArgKind.VARIABLE:
            name = str(arg.name)
            if name not in own:
                out.append(Diagnostic.error("R10", arg.span, f"unknown configuration parameter {name}"))
                continue
            at, aok = own[name]
        else:
            continue  # qualified constants are not typed
        if not (aok and pok):
            continue
        pt = substitute(ptype, binding)
        try:
            good = model.registry.is_subtype(at, pt, info.type_vars)
        except UnknownTypeError:
            continue
        if not good:
            out.append(Diagnostic.error(
                "R10", arg.span, f"argument {arg} of type {at} does not match parameter {pname} of type {pt}"
            ))
    return out


def _inheritance(model: Model, d: ComponentDef) -> list[Diagnostic]:
    """R3/R4 on the extends clause, its arity (R9), R11, and R12."""
    ref = d.decl.super_type
    if ref is None:
        return []
    look = model.super_lookup(d)
    if look is None or look.target is None:
        return [Diagnostic.error(look.code or "R4", ref.span, look.message or f"component type {ref} not found")]
    out = _type_arity(ref, look.target, ref.span)
    if model.extends_cycle(d):
        chain = [d.qname]
        s = model.super_of(d)
        while s is not None and s is not d:
            chain.append(s.qname)
            s = model.super_of(s)
        out.append(Diagnostic.error("R11", ref.span, "inheritance cycle " + " -> ".join(chain + [d.qname])))
    elif model.extends_ancestor(d):
        out.append(Diagnostic.error(
            "R12", ref.span, f"structural inheritance cycle: inner type {d.name} extends its enclosing type {look.target.qname}"
        ))
    return out


def _reference_cycles(model: Model, defs: list[ComponentDef]) -> list[Diagnostic]:
    g = nx.DiGraph()
    for d in model.pool.all_defs():
        g.add_node(d.qname)
        for s in model.info(d).subs.values():
            if s.target is not None:
                g.add_edge(d.qname, s.target.qname)
    comp_of = {}
    for scc in nx.strongly_connected_components(g):
        for n in scc:
            comp_of[n] = frozenset(scc)
    out = []
    wanted = {d.qname for d in defs}
    for d in defs:
        if d.qname not in wanted:
            continue
        for s in model.info(d).subs.values():
            if s.target is None or s.provenance is Provenance.INHERITED:
                continue
            scc = comp_of[d.qname]
            if s.target.qname in scc and (len(scc) > 1 or s.target is d):
                members = ", ".join(sorted(scc))
                out.append(Diagnostic.error("R13", s.decl_span, f"subcomponent reference cycle between {members}"))
    return out


# ---------------------------------------------------------------------------
# POST phase


def check_elaborated(model: Model, e: ElaboratedComponent) -> list[Diagnostic]:
    """R1, R2, and R8 over the elaborated connector set."""
    out: list[Diagnostic] = []
    info = model.info(e.definition)
    by_target: dict[Endpoint, list] = defaultdict(list)
    for c in e.connectors:
        by_target[c.target].append(c)
    for target, conns in by_target.items():
        if len(conns) > 1:
            code = "R1" if target.component is None else "R2"
            for c in conns:
                out.append(Diagnostic.error(
                    code, c.span, f"ambiguous sender: port {target} is the target of {len(conns)} connectors"
                ))
    for c in e.connectors:
        st, tt = _elab_type(model, e, c.source), _elab_type(model, e, c.target)
        if st is None or tt is None:
            continue
        try:
            if not model.registry.is_subtype(st, tt, info.type_vars):
                out.append(Diagnostic.error("R8", c.span, f"incompatible types {st}, {tt}"))
        except UnknownTypeError:
            pass
    return out


def _elab_type(model: Model, e: ElaboratedComponent, ep: Endpoint) -> ast.TypeExpr | None:
    if ep.component is None:
        p = e.port(ep.port)
        return p.type if p else None
    s = e.sub(ep.component)
    if s is None:
        return None
    p = model.info(s.component).ports.get(ep.port)
    if p is None:
        return None
    return substitute(p.type, dict(zip(s.component.type_param_names, s.type_args)))


def check_conventions(model: Model, elaborated: list[ElaboratedComponent]) -> list[Diagnostic]:
    """CV1-CV6. Units are checked for CV3/CV4 once per root component."""
    out: list[Diagnostic] = []
    for e in elaborated:
        out += _naming(model, e.definition)
        out += _usage(model, e)
        if e.definition.is_root:
            out += _imports(model, e.definition.unit)
    return out


def _naming(model: Model, d: ComponentDef) -> list[Diagnostic]:
    out = []
    decl = d.decl

    def lower(name: str, span: Span | None, what: str) -> None:
        if name[:1].isupper():
            out.append(Diagnostic.warning("CV1", span, f"{what} {name} should start with a lower-case letter"))

    def upper(name: str, span: Span | None, what: str) -> None:
        if name[:1].islower():
            out.append(Diagnostic.warning("CV2", span, f"{what} {name} should start with an upper-case letter"))

    upper(decl.name, decl.name_span, "component type")
    for tp in decl.type_params:
        upper(tp.name, tp.span, "type parameter")
    for cp in decl.config_params:
        lower(cp.name, cp.span, "configuration parameter")
    for p in decl.ports:
        if p.name:
            lower(p.name, p.span, "port")
    for sd in decl.of_type(ast.SubComponentDecl):
        for inst in sd.instances:
            lower(inst.name, inst.span, "subcomponent")
    if decl.instance_name:
        lower(decl.instance_name, decl.instance_span, "subcomponent")
    for inv in decl.of_type(ast.InvariantDecl):
        lower(inv.name, inv.span, "invariant")
    return out


def _usage(model: Model, e: ElaboratedComponent) -> list[Diagnostic]:
    """CV5 for own ports of decomposed components, CV6 per subcomponent."""
    if e.is_atomic:
        return []
    used = {c.source for c in e.connectors} | {c.target for c in e.connectors}
    out = []
    for p in e.ports:
        if p.provenance is Provenance.INHERITED:
            continue
        if Endpoint(None, p.name) not in used:
            out.append(Diagnostic.warning("CV5", p.span, f"unused port {p.name}"))
    for s in e.subcomponents:
        if s.provenance is Provenance.INHERITED:
            continue
        names = [n for n in model.info(s.component).ports if Endpoint(s.name, n) not in used]
        if names:
            out.append(Diagnostic.warning(
                "CV6", s.span, f"unconnected ports {', '.join(names)} of subcomponent {s.name}"
            ))
    return out


def _imports(model: Model, unit: ast.CompilationUnit) -> list[Diagnostic]:
    out = []
    seen: set[str] = set()
    for i, imp in enumerate(unit.imports):
        key = str(imp)
        if key in seen:
            out.append(Diagnostic.warning("CV3", imp.span, f"duplicate import {key}"))
            continue
        seen.add(key)
        if (unit.source_id, i) not in model.used_imports:
            out.append(Diagnostic.warning("CV4", imp.span, f"unused import {key}"))
    return out


# ---------------------------------------------------------------------------
# Driver


@dataclass
class CheckResult:
    diagnostics: list[Diagnostic]
    elaborated: dict[str, ElaboratedComponent]
    elaborator: Elaborator

    @property
    def ok(self) -> bool:
        return not has_errors(self.diagnostics)


def check_pre(model: Model, defs: list[ComponentDef] | None = None) -> list[Diagnostic]:
    defs = _defs(model, defs)
    return check_basic(model, defs) + check_connections(model, defs) + check_referential(model, defs)


def dependency_groups(model: Model) -> list[list[ComponentDef]]:
    """Weakly connected groups of definitions linked by nesting, extends, or use."""
    g = nx.Graph()
    for d in model.pool.all_defs():
        g.add_node(d.qname)
        if d.parent is not None:
            g.add_edge(d.qname, d.parent.qname)
        sup = model.super_of(d)
        if sup is not None:
            g.add_edge(d.qname, sup.qname)
        for s in model.info(d).subs.values():
            if s.target is not None:
                g.add_edge(d.qname, s.target.qname)
    groups = [sorted(c) for c in nx.connected_components(g)]
    return [[model.pool.defs[q] for q in grp] for grp in sorted(groups)]


def check_model(model: Model) -> CheckResult:
    """Run both phases over every definition in the pool.

    Elaboration and POST checks are skipped for a dependency group with PRE
    errors, since elaborating a broken model would only produce noise.
    """
    elaborator = Elaborator(model)
    diags = list(model.pool.diagnostics)
    elaborated: dict[str, ElaboratedComponent] = {}
    pre_by_group = []
    for group in dependency_groups(model):
        pre = check_pre(model, group)
        diags += pre
        pre_by_group.append((group, has_errors(pre)))
    for group, failed in pre_by_group:
        if failed:
            continue
        group_elab = [elaborator.elaborate(d) for d in group]
        for e in group_elab:
            elaborated[e.qname] = e
            diags += e.diagnostics
            diags += check_elaborated(model, e)
        diags += check_conventions(model, group_elab)
    return CheckResult(sort_diagnostics(diags), elaborated, elaborator)


def check_all(model: Model, phase: Phase = Phase.POST) -> list[Diagnostic]:
    """Sorted diagnostics of the PRE phase only, or of both phases."""
    if phase is Phase.PRE:
        return sort_diagnostics(list(model.pool.diagnostics) + check_pre(model))
    return check_model(model).diagnostics


def _defs(model: Model, defs: list[ComponentDef] | None) -> list[ComponentDef]:
    return model.pool.all_defs() if defs is None else defs
