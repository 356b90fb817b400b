"""Elaboration: rewrite a MontiArc component into its core form.

Every implicit construct is made explicit, in this order:

1. inheritance is flattened (the super type's elaborated members are copied
   with its type parameters substituted),
2. inner types are auto-instantiated,
3. unnamed ports and subcomponents receive default names,
4. simple connectors become ordinary connectors,
5. subcomponent-name endpoints are expanded to port endpoints,
6. ``autoconnect`` adds the remaining connectors.

Each later step sees the names and connectors produced by earlier ones; in
particular autoconnect only fills receivers that are still unconnected.
The result carries a provenance tag on every port, subcomponent, and
connector.
"""

from __future__ import annotations

import functools

from dataclasses import dataclass, field

from montiarc.diagnostics import Diagnostic, Span
from montiarc.symbols import (
    ComponentDef,
    ComponentInfo,
    EndKind,
    EndpointRef,
    Model,
    PortSym,
    Provenance,
)
from montiarc.syntax import ast
from montiarc.typesys import UnknownTypeError, substitute


@functools.total_ordering
@dataclass(frozen=True)
class Endpoint:
    """A resolved connector end; ``component`` is None for the owner itself.

    Owner ports sort before subcomponent ports.
    """

    component: str | None
    port: str

    def _key(self) -> tuple[bool, str, str]:
        return (self.component is not None, self.component or "", self.port)

    def __lt__(self, other: Endpoint) -> bool:
        return self._key() < other._key()

    def __str__(self) -> str:
        return self.port if self.component is None else f"{self.component}.{self.port}"


@dataclass
class ElabPort:
    direction: ast.Direction
    type: ast.TypeExpr
    name: str
    provenance: Provenance
    span: Span | None = None


@dataclass
class ElabSub:
    name: str
    component: ComponentDef
    type_args: tuple[ast.TypeExpr, ...]
    config_args: tuple[ast.ConfigArg, ...]
    provenance: Provenance
    span: Span | None = None

    @property
    def type_ref(self) -> ast.TypeExpr:
        return ast.TypeExpr(ast.QualifiedName.of(self.component.qname), self.type_args)


@dataclass
class ElabConnector:
    source: Endpoint
    target: Endpoint
    provenance: Provenance
    span: Span | None = None


@dataclass
class ElaboratedComponent:
    """Core form of one component type: no extends, no implicit constructs."""

    definition: ComponentDef
    type_params: tuple[ast.TypeParam, ...]
    config_params: tuple[tuple[str, ast.TypeExpr], ...]
    timing: str | None
    ports: list[ElabPort]
    subcomponents: list[ElabSub]
    connectors: list[ElabConnector]
    inner: list[ElaboratedComponent]
    invariants: tuple[ast.InvariantDecl, ...]
    diagnostics: list[Diagnostic] = field(default_factory=list)

    @property
    def qname(self) -> str:
        return self.definition.qname

    @property
    def name(self) -> str:
        return self.definition.name

    @property
    def type_param_names(self) -> tuple[str, ...]:
        return tuple(p.name for p in self.type_params)

    @property
    def is_atomic(self) -> bool:
        return not self.subcomponents and not self.connectors

    def port(self, name: str) -> ElabPort | None:
        return next((p for p in self.ports if p.name == name), None)

    def sub(self, name: str) -> ElabSub | None:
        return next((s for s in self.subcomponents if s.name == name), None)

    def structure(self) -> tuple:
        """Provenance-free, order-insensitive summary used for equality."""
        return (
            self.qname,
            self.type_param_names,
            tuple((n, str(t)) for n, t in self.config_params),
            self.timing,
            tuple(sorted((p.direction.value, str(p.type), p.name) for p in self.ports)),
            tuple(sorted((s.name, str(s.type_ref), tuple(str(a) for a in s.config_args)) for s in self.subcomponents)),
            tuple(sorted((c.source, c.target) for c in self.connectors)),
            tuple(sorted(i.structure() for i in self.inner)),
        )

    def to_decl(self, comments: dict[int, str] | None = None) -> ast.ComponentTypeDecl:
        """Concrete-syntax form; types are written fully qualified.

        When ``comments`` is given, it is filled with provenance tags keyed by
        ``id()`` of the generated element nodes, for the pretty-printer.
        """
        comments = comments if comments is not None else {}
        elements: list[ast.ArcElement] = []
        for p in self.ports:
            node = ast.PortInterfaceDecl((ast.PortDecl(p.direction, p.type, p.name),))
            _tag(comments, node, p.provenance)
            elements.append(node)
        for i in self.inner:
            elements.append(i.to_decl(comments))
        for s in self.subcomponents:
            node = ast.SubComponentDecl(s.type_ref, s.config_args, (ast.SubComponentInstance(s.name),))
            _tag(comments, node, s.provenance)
            elements.append(node)
        for c in self.connectors:
            node = ast.ConnectorDecl(
                ast.QualifiedName.of(str(c.source)), (ast.QualifiedName.of(str(c.target)),)
            )
            _tag(comments, node, c.provenance)
            elements.append(node)
        elements.extend(self.invariants)
        config = ()
        if self.timing is not None:
            config = (ast.ConfigElement(ast.ConfigKind.TIMING, self.timing),)
        return ast.ComponentTypeDecl(
            name=self.name,
            type_params=self.type_params,
            config_params=tuple(ast.ConfigParam(t, n) for n, t in self.config_params),
            config_elements=config,
            elements=tuple(elements),
        )

    def to_unit(self, comments: dict[int, str] | None = None) -> ast.CompilationUnit:
        d = self.definition
        return ast.CompilationUnit(d.package, (), self.to_decl(comments), d.file)


def _tag(comments: dict[int, str], node: object, prov: Provenance) -> None:
    if prov is not Provenance.EXPLICIT:
        comments[id(node)] = prov.value


@dataclass
class _Pending:
    source: EndpointRef
    target: EndpointRef
    provenance: Provenance
    span: Span | None


class Elaborator:
    """Elaborates component definitions of one model, memoizing results."""

    def __init__(self, model: Model) -> None:
        self.model = model
        self._cache: dict[str, ElaboratedComponent] = {}

    def elaborate(self, d: ComponentDef) -> ElaboratedComponent:
        if d.qname not in self._cache:
            self._cache[d.qname] = self._elaborate(d)
        return self._cache[d.qname]

    def _elaborate(self, d: ComponentDef) -> ElaboratedComponent:
        model = self.model
        info = model.info(d)
        decl = d.decl
        diags: list[Diagnostic] = []

        ports, subs, connectors, timing = self.flatten_inheritance(info)
        timing = decl.mode(ast.ConfigKind.TIMING, timing) if decl.config(ast.ConfigKind.TIMING) else timing
        ports += [self._port(p) for p in info.ports.values() if p.provenance is not Provenance.INHERITED]
        subs += self.auto_instantiate_and_name(info)

        pending = self.desugar_simple_connectors(info)
        connectors += self.resolve_port_connectors(info, pending)
        connectors += self.resolve_subcomponent_endpoints(info, pending, connectors, diags)

        mode = decl.mode(ast.ConfigKind.AUTOCONNECT, "off")
        cfg = decl.config(ast.ConfigKind.AUTOCONNECT)
        connectors += autoconnect(
            model, info, ports, subs, connectors, mode, cfg.span if cfg else decl.name_span, diags
        )

        return ElaboratedComponent(
            definition=d,
            type_params=decl.type_params,
            config_params=tuple((n, t) for n, t, _, _ in info.config_params),
            timing=timing,
            ports=ports,
            subcomponents=subs,
            connectors=_dedupe(connectors),
            inner=[self.elaborate(i) for i in d.inner.values()],
            invariants=tuple(decl.of_type(ast.InvariantDecl)),
            diagnostics=diags,
        )

    # -- step 1 -----------------------------------------------------------

    def flatten_inheritance(self, info: ComponentInfo):
        """Copy the elaborated super type's members into a fresh component."""
        if info.super_def is None:
            return [], [], [], None
        sup = self.elaborate(info.super_def)
        b = info.super_binding
        ports = [ElabPort(p.direction, substitute(p.type, b), p.name, Provenance.INHERITED, p.span) for p in sup.ports]
        subs = [
            ElabSub(s.name, s.component, tuple(substitute(a, b) for a in s.type_args), s.config_args,
                    Provenance.INHERITED, s.span)
            for s in sup.subcomponents
        ]
        conns = [ElabConnector(c.source, c.target, Provenance.INHERITED, c.span) for c in sup.connectors]
        return ports, subs, conns, sup.timing

    # -- steps 2 and 3 ------------------------------------------------------

    def auto_instantiate_and_name(self, info: ComponentInfo) -> list[ElabSub]:
        """Own subcomponents, including default-named and auto-instantiated ones.

        The namespace already assigns default names and synthesizes
        auto-instantiated inner types; here they become core subcomponents.
        """
        out = []
        for s in info.subs.values():
            if s.provenance is Provenance.INHERITED or s.target is None:
                continue
            out.append(ElabSub(s.name, s.target, s.type_args, s.config_args, s.provenance, s.span))
        return out

    def _port(self, p: PortSym) -> ElabPort:
        return ElabPort(p.direction, p.type, p.name, p.provenance, p.span)

    # -- step 4 ---------------------------------------------------------------

    def desugar_simple_connectors(self, info: ComponentInfo) -> list[_Pending]:
        """Own connectors in source order, simple ones rewritten to ``inst.port``."""
        model = self.model
        items: list[tuple[tuple[int, int], _Pending]] = []
        for s in info.subs.values():
            if s.provenance is Provenance.INHERITED:
                continue
            for sc in s.simple_connectors:
                if len(sc.source) != 1:
                    continue  # CO2, reported by the checker
                src_name = ast.QualifiedName((s.name, sc.source.last), sc.source.span)
                src = model.resolve_endpoint(src_name, info)
                for t in sc.targets:
                    items.append((_pos(sc.span), _Pending(src, model.resolve_endpoint(t, info), Provenance.DESUGARED, t.span)))
        for c in info.decl.of_type(ast.ConnectorDecl):
            src = model.resolve_endpoint(c.source, info)
            for t in c.targets:
                items.append((_pos(c.span), _Pending(src, model.resolve_endpoint(t, info), Provenance.EXPLICIT, t.span)))
        items.sort(key=lambda x: x[0])
        return [p for _, p in items]

    # -- step 5 ---------------------------------------------------------------

    def resolve_port_connectors(self, info: ComponentInfo, pending: list[_Pending]) -> list[ElabConnector]:
        out = []
        for p in pending:
            s, t = _endpoint(p.source), _endpoint(p.target)
            if s is not None and t is not None:
                out.append(ElabConnector(s, t, p.provenance, p.span))
        return out

    def resolve_subcomponent_endpoints(
        self,
        info: ComponentInfo,
        pending: list[_Pending],
        existing: list[ElabConnector],
        diags: list[Diagnostic],
    ) -> list[ElabConnector]:
        """Expand connectors whose source or target names a subcomponent."""
        model = self.model
        receivers = {c.target for c in existing}
        senders = {c.source for c in existing}
        out: list[ElabConnector] = []
        tv = info.type_vars

        def fits(src: PortSym, dst: PortSym) -> bool:
            return _compatible(model, src, dst, tv)

        def add(s: Endpoint, t: Endpoint, p: _Pending) -> None:
            out.append(ElabConnector(s, t, p.provenance, p.span))
            receivers.add(t)
            senders.add(s)

        for p in pending:
            sk, tk = p.source.kind, p.target.kind
            if EndKind.SUBCOMPONENT not in (sk, tk):
                continue
            label = f"{p.source.raw} -> {p.target.raw}"
            if sk is EndKind.SUBCOMPONENT and tk is EndKind.SUBCOMPONENT:
                made = 0
                src_ports = _sub_ports(model, info, p.source.sub)
                dst_ports = _sub_ports(model, info, p.target.sub)
                for sp in src_ports.values():
                    se = Endpoint(p.source.sub, sp.name)
                    if sp.incoming or se in senders:
                        continue
                    cands = [
                        dp for dp in dst_ports.values()
                        if dp.incoming and Endpoint(p.target.sub, dp.name) not in receivers and fits(sp, dp)
                    ]
                    if len(cands) == 1:
                        add(se, Endpoint(p.target.sub, cands[0].name), p)
                        made += 1
                    elif len(cands) > 1:
                        diags.append(_ambiguous(p.span, label, f"port {sp.name} matches {', '.join(c.name for c in cands)}"))
                if made == 0 and not any(
                    d.span == p.span and d.code == "CO3" for d in diags
                ):
                    diags.append(Diagnostic.warning("CO3", p.span, f"connector {label} connects no ports"))
            elif tk is EndKind.SUBCOMPONENT:
                s = _endpoint(p.source)
                if s is None:
                    continue
                sp = model.endpoint_port(p.source, info)
                cands = [
                    dp for dp in _sub_ports(model, info, p.target.sub).values()
                    if dp.incoming and Endpoint(p.target.sub, dp.name) not in receivers and fits(sp, dp)
                ]
                if len(cands) == 1:
                    add(s, Endpoint(p.target.sub, cands[0].name), p)
                else:
                    diags.append(_ambiguous(p.span, label, _why(cands)))
            else:
                t = _endpoint(p.target)
                if t is None:
                    continue
                dp = model.endpoint_port(p.target, info)
                cands = []
                if t not in receivers:
                    cands = [
                        sp for sp in _sub_ports(model, info, p.source.sub).values()
                        if not sp.incoming and Endpoint(p.source.sub, sp.name) not in senders and fits(sp, dp)
                    ]
                if len(cands) == 1:
                    add(Endpoint(p.source.sub, cands[0].name), t, p)
                else:
                    diags.append(_ambiguous(p.span, label, _why(cands)))
        return out


# -- step 6 ---------------------------------------------------------------------


def autoconnect(
    model: Model,
    info: ComponentInfo,
    ports: list[ElabPort],
    subs: list[ElabSub],
    connectors: list[ElabConnector],
    mode: str,
    span: Span | None,
    diags: list[Diagnostic],
) -> list[ElabConnector]:
    """Connectors added by ``autoconnect port`` or ``autoconnect type``.

    Sources are the owner's incoming ports and the subcomponents' outgoing
    ports; receivers are the owner's outgoing ports and the subcomponents'
    incoming ports that no connector targets yet.
    """
    if mode == "off":
        return []
    tv = info.type_vars
    sources: list[tuple[Endpoint, ast.TypeExpr]] = []
    receivers: list[tuple[Endpoint, ast.TypeExpr]] = []
    for p in ports:
        (sources if p.direction is ast.Direction.IN else receivers).append((Endpoint(None, p.name), p.type))
    for s in subs:
        binding = dict(zip(s.component.type_param_names, s.type_args))
        for p in model.info(s.component).ports.values():
            t = substitute(p.type, binding)
            (receivers if p.incoming else sources).append((Endpoint(s.name, p.name), t))
    taken = {c.target for c in connectors}
    receivers = [r for r in receivers if r[0] not in taken]

    def ok(st: ast.TypeExpr, rt: ast.TypeExpr) -> bool:
        try:
            return model.registry.is_subtype(st, rt, tv)
        except UnknownTypeError:
            return False

    out: list[ElabConnector] = []
    if mode == "port":
        for r, rt in receivers:
            cands = [s for s, st in sources if s.port == r.port and s != r and ok(st, rt)]
            if len(cands) == 1:
                out.append(ElabConnector(cands[0], r, Provenance.AUTOCONNECT, span))
            elif len(cands) > 1:
                diags.append(Diagnostic.warning(
                    "CO3", span,
                    f"autoconnect: port {r} has several candidate sources {', '.join(str(c) for c in cands)}",
                ))
        return out
    # type mode: both ends must have exactly one compatible counterpart
    fwd = {s: [r for r, rt in receivers if r != s and ok(st, rt)] for s, st in sources}
    back = {r: [s for s, st in sources if s != r and ok(st, rt)] for r, rt in receivers}
    for r, _ in receivers:
        cands = back[r]
        if len(cands) > 1:
            diags.append(Diagnostic.warning(
                "CO3", span, f"autoconnect: port {r} has several candidate sources {', '.join(str(c) for c in cands)}"
            ))
        elif len(cands) == 1 and len(fwd[cands[0]]) == 1:
            out.append(ElabConnector(cands[0], r, Provenance.AUTOCONNECT, span))
    for s, _ in sources:
        if len(fwd[s]) > 1:
            diags.append(Diagnostic.warning(
                "CO3", span, f"autoconnect: port {s} has several candidate targets {', '.join(str(c) for c in fwd[s])}"
            ))
    return out


# -- helpers ------------------------------------------------------------------


def _compatible(model: Model, src: PortSym | None, dst: PortSym | None, tv: frozenset[str]) -> bool:
    if src is None or dst is None:
        return False
    try:
        return model.registry.is_subtype(src.type, dst.type, tv)
    except UnknownTypeError:
        return False


def _sub_ports(model: Model, info: ComponentInfo, name: str) -> dict[str, PortSym]:
    return model.sub_ports(info.subs[name])


def _endpoint(ref: EndpointRef) -> Endpoint | None:
    if ref.kind is EndKind.THIS_PORT:
        return Endpoint(None, ref.port)
    if ref.kind is EndKind.SUB_PORT:
        return Endpoint(ref.sub, ref.port)
    return None


def _ambiguous(span: Span | None, label: str, why: str) -> Diagnostic:
    return Diagnostic.warning("CO3", span, f"connector {label} creates no connection: {why}")


def _why(cands: list[PortSym]) -> str:
    if not cands:
        return "no unconnected compatible port"
    return "several compatible ports " + ", ".join(c.name for c in cands)


def _dedupe(conns: list[ElabConnector]) -> list[ElabConnector]:
    seen = set()
    out = []
    for c in conns:
        if (c.source, c.target) in seen:
            continue
        seen.add((c.source, c.target))
        out.append(c)
    return out


def _pos(span: Span | None) -> tuple[int, int]:
    return (span.line, span.col) if span is not None else (0, 0)


def elaborate(model: Model, d: ComponentDef) -> ElaboratedComponent:
    return Elaborator(model).elaborate(d)
