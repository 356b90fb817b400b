"""Model pool, component namespaces, and name resolution.

A :class:`ModelPool` holds every parsed compilation unit on the modelpath and
indexes each component type definition (inner ones included) by qualified
name. A :class:`Model` pairs a pool with a type registry and answers the
semantic questions the checker, elaborator, and semantic mapping ask:

* which component type does a reference denote (R3/R4),
* which data type does a port type denote,
* what is the effective namespace of a component: its ports, subcomponents,
  type and configuration parameters, and invariants, including inherited
  members, default names, and auto-instantiated inner types,
* what does a connector endpoint refer to.

Component namespaces are flat. A lookup never falls through to the
enclosing component.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Iterator

from montiarc.diagnostics import Diagnostic, Span
from montiarc.syntax import ast
from montiarc.syntax.parser import ParseError, parse_compilation_unit
from montiarc.typesys import (
    NoDefaultName,
    TypeRegistry,
    UnknownTypeError,
    default_name,
    substitute,
)


class Provenance(enum.Enum):
    """Where an element of the effective or elaborated model comes from."""

    EXPLICIT = "explicit"
    INHERITED = "inherited"
    AUTOINSTANTIATE = "autoinstantiate"
    DEFAULT_NAME = "default-name"
    DESUGARED = "desugared"
    AUTOCONNECT = "autoconnect"


# ---------------------------------------------------------------------------
# Pool


@dataclass(eq=False)
class ComponentDef:
    """One component type definition, root or inner."""

    qname: str
    decl: ast.ComponentTypeDecl
    unit: ast.CompilationUnit
    parent: ComponentDef | None = None
    inner: dict[str, ComponentDef] = field(default_factory=dict)

    @property
    def name(self) -> str:
        return self.decl.name

    @property
    def package(self) -> tuple[str, ...]:
        return self.unit.package

    @property
    def file(self) -> str:
        return self.unit.source_id

    @property
    def is_root(self) -> bool:
        return self.parent is None

    @property
    def type_param_names(self) -> tuple[str, ...]:
        return tuple(p.name for p in self.decl.type_params)

    def lexical_chain(self) -> Iterator[ComponentDef]:
        d: ComponentDef | None = self
        while d is not None:
            yield d
            d = d.parent

    def __repr__(self) -> str:
        return f"ComponentDef({self.qname})"


@dataclass
class ModelPool:
    """All compilation units found on the modelpath."""

    units: dict[str, ast.CompilationUnit] = field(default_factory=dict)
    defs: dict[str, ComponentDef] = field(default_factory=dict)
    modelpath: list[Path] = field(default_factory=list)
    diagnostics: list[Diagnostic] = field(default_factory=list)

    @classmethod
    def load(cls, modelpath: Iterable[str | Path]) -> ModelPool:
        """Parse every ``.arc`` file below the modelpath roots.

        Source ids are paths relative to their root, so diagnostics read
        ``adra/AdverseDrugReactionApp.arc:12:1: ...``.
        """
        pool = cls(modelpath=[Path(p) for p in modelpath])
        for root in pool.modelpath:
            for path in sorted(root.rglob("*.arc")):
                rel = path.relative_to(root).as_posix()
                text = path.read_text(encoding="utf-8")
                pool.add_source(text, rel, expected_package=tuple(Path(rel).parent.parts))
        return pool

    @classmethod
    def from_sources(cls, sources: dict[str, str]) -> ModelPool:
        """Build a pool from in-memory ``{source_id: text}``; handy in tests."""
        pool = cls()
        for source_id in sorted(sources):
            pool.add_source(sources[source_id], source_id)
        return pool

    def add_source(self, text: str, source_id: str, expected_package: tuple[str, ...] | None = None) -> None:
        try:
            unit = parse_compilation_unit(text, source_id)
        except ParseError as e:
            self.diagnostics.extend(e.diagnostics)
            return
        if expected_package is not None and unit.package != expected_package:
            self.diagnostics.append(
                Diagnostic.warning(
                    "S001",
                    Span(source_id, 1, 1, 1, 1),
                    f"package {'.'.join(unit.package) or '<default>'} does not match "
                    f"directory {'/'.join(expected_package) or '<root>'}",
                )
            )
        self.add_unit(unit)

    def add_unit(self, unit: ast.CompilationUnit) -> None:
        qname = unit.qualified_name
        if qname in self.units:
            first = self.units[qname].source_id
            self.diagnostics.append(
                Diagnostic.error(
                    "S002",
                    unit.root.name_span,
                    f"component type {qname} is declared in both {first} and {unit.source_id}",
                    [self.units[qname].root.name_span or Span(first, 1, 1, 1, 1)],
                )
            )
            return
        self.units[qname] = unit
        self._register(unit.root, qname, unit, None)

    def replace_unit(self, unit: ast.CompilationUnit) -> ModelPool:
        """A copy of this pool with ``unit`` taking the place of its namesake."""
        pool = ModelPool(modelpath=list(self.modelpath))
        for qname, u in self.units.items():
            if qname != unit.qualified_name:
                pool.add_unit(u)
        pool.add_unit(unit)
        return pool

    def _register(self, decl: ast.ComponentTypeDecl, qname: str, unit: ast.CompilationUnit, parent: ComponentDef | None) -> ComponentDef:
        d = ComponentDef(qname, decl, unit, parent)
        self.defs.setdefault(qname, d)
        for inner in decl.inner_types:
            child = self._register(inner, f"{qname}.{inner.name}", unit, d)
            d.inner.setdefault(inner.name, child)
        return d

    def roots(self) -> list[ComponentDef]:
        return [self.defs[q] for q in sorted(self.units)]

    def all_defs(self) -> list[ComponentDef]:
        return [self.defs[q] for q in sorted(self.defs)]


# ---------------------------------------------------------------------------
# Effective namespace


@dataclass
class PortSym:
    name: str
    direction: ast.Direction
    type: ast.TypeExpr  # canonical when resolved; as written otherwise
    resolved: bool
    span: Span | None
    provenance: Provenance
    decl: ast.PortDecl | None = None

    @property
    def incoming(self) -> bool:
        return self.direction is ast.Direction.IN


@dataclass
class SubSym:
    """A subcomponent of the effective namespace."""

    name: str
    type_ref: ast.TypeExpr
    target: ComponentDef | None
    type_args: tuple[ast.TypeExpr, ...]  # canonical, already substituted when inherited
    config_args: tuple[ast.ConfigArg, ...]
    span: Span | None  # of the instance name, or the declaration if defaulted
    decl_span: Span | None
    provenance: Provenance
    simple_connectors: tuple[ast.SimpleConnector, ...] = ()


@dataclass
class NameDecl:
    """An identifier entering a component namespace; input to B1."""

    name: str
    kind: str
    span: Span | None
    inherited: bool = False


@dataclass
class ComponentInfo:
    """The effective namespace of one component type definition."""

    definition: ComponentDef
    type_params: tuple[str, ...]
    config_params: tuple[tuple[str, ast.TypeExpr, bool, Span | None], ...]  # name, type, resolved, span
    ports: dict[str, PortSym]
    subs: dict[str, SubSym]
    inner: dict[str, ComponentDef]  # own and inherited inner types
    super_def: ComponentDef | None
    super_binding: dict[str, ast.TypeExpr]
    names: list[NameDecl]
    diagnostics: list[Diagnostic]

    @property
    def type_vars(self) -> frozenset[str]:
        return frozenset(self.type_params)

    @property
    def decl(self) -> ast.ComponentTypeDecl:
        return self.definition.decl

    @property
    def is_atomic(self) -> bool:
        return not self.subs and not any(
            isinstance(e, ast.ConnectorDecl) for e in self.decl.elements
        )

    def port_list(self) -> list[PortSym]:
        return list(self.ports.values())


class EndKind(enum.Enum):
    THIS_PORT = "this-port"
    SUBCOMPONENT = "subcomponent"
    SUB_PORT = "sub-port"
    UNRESOLVED = "unresolved"


class Reason(enum.Enum):
    NO_SUCH_NAME = "no-such-name"
    NO_SUCH_SUBCOMPONENT = "no-such-subcomponent"
    NO_SUCH_PORT = "no-such-port"
    PIERCING = "piercing"
    UNRESOLVED_TYPE = "unresolved-type"


@dataclass(frozen=True)
class EndpointRef:
    raw: ast.QualifiedName
    kind: EndKind
    sub: str | None = None
    port: str | None = None
    reason: Reason | None = None


@dataclass(frozen=True)
class Lookup:
    """Outcome of a component type lookup."""

    target: ComponentDef | None
    code: str = ""  # R3, R4 or S003 when unresolved
    message: str = ""


# ---------------------------------------------------------------------------
# Model


class Model:
    """A pool plus a type registry, with memoized semantic queries."""

    def __init__(self, pool: ModelPool, registry: TypeRegistry | None = None) -> None:
        self.pool = pool
        self.registry = registry or TypeRegistry.with_builtins()
        self.used_imports: set[tuple[str, int]] = set()
        self._infos: dict[str, ComponentInfo] = {}
        self._in_progress: set[str] = set()
        self._super: dict[str, Lookup | None] = {}
        self._super_busy: set[str] = set()
        self._sub_ports: dict[tuple[int, str], dict[str, PortSym]] = {}

    # -- data types ------------------------------------------------------

    def resolve_data_type(
        self, t: ast.TypeExpr, ctx: ComponentDef, type_vars: frozenset[str]
    ) -> tuple[ast.TypeExpr, list[str]]:
        """Canonical form of a port or parameter type.

        Returns the canonical type and the names that failed to resolve
        (empty on success); unresolved parts are kept as written.
        """
        missing: list[str] = []
        args = []
        for a in t.args:
            ca, m = self.resolve_data_type(a, ctx, type_vars)
            args.append(ca)
            missing += m
        name = str(t.base)
        key = self._data_type_key(name, ctx, type_vars)
        if key is None:
            missing.append(name)
            key = name
        elif isinstance(key, _Ambiguous):
            missing.append(f"{name} (ambiguous: {', '.join(key.options)})")
            key = name
        return ast.TypeExpr(ast.QualifiedName.of(key, t.base.span), tuple(args), t.dims, t.span), missing

    def _data_type_key(self, name: str, ctx: ComponentDef, type_vars: frozenset[str]) -> str | _Ambiguous | None:
        reg = self.registry
        if "." not in name:
            if name in type_vars:
                return name
            unit = ctx.unit
            for i, imp in enumerate(unit.imports):
                if not imp.wildcard and imp.name.last == name and reg.knows(str(imp.name)):
                    self.used_imports.add((unit.source_id, i))
                    return reg.canonical(str(imp.name))
            own = ".".join(unit.package + (name,))
            if unit.package and reg.knows(own):
                return reg.canonical(own)
            hits = {}
            for i, imp in enumerate(unit.imports):
                if imp.wildcard and reg.knows(f"{imp.name}.{name}"):
                    hits.setdefault(reg.canonical(f"{imp.name}.{name}"), i)
            if len(hits) > 1:
                return _Ambiguous(tuple(sorted(hits)))
            if hits:
                (key, i), = hits.items()
                self.used_imports.add((unit.source_id, i))
                return key
            # Builtins and types declared without a package are global.
            return reg.canonical(name)
        return reg.canonical(name)

    # -- component types -------------------------------------------------

    def resolve_component_type(self, ref: ast.TypeExpr, ctx: ComponentDef, start: ComponentDef | None = None) -> Lookup:
        """Find the component type definition denoted by ``ref``.

        Qualified references are looked up in the pool. Unqualified ones are
        searched in the inner types of the lexical chain beginning at
        ``start`` (default ``ctx``), then the current package, explicit
        imports, and wildcard imports.
        """
        name = str(ref.base)
        pool = self.pool
        unit = ctx.unit
        if len(ref.base) > 1:
            d = pool.defs.get(name)
            if d is not None and (d.is_root or self._inner_visible(d, ctx)):
                return Lookup(d)
            return Lookup(None, "R3", f"component type {name} does not exist")
        chain = start if start is not None else ctx
        for scope in (chain.lexical_chain() if chain is not None else ()):
            inner = self.inner_types(scope)
            if name in inner:
                return Lookup(inner[name])
        own = ".".join(unit.package + (name,))
        if own in pool.units:
            return Lookup(pool.defs[own])
        for i, imp in enumerate(unit.imports):
            if not imp.wildcard and imp.name.last == name and str(imp.name) in pool.units:
                self.used_imports.add((unit.source_id, i))
                return Lookup(pool.defs[str(imp.name)])
        hits: dict[str, int] = {}
        for i, imp in enumerate(unit.imports):
            q = f"{imp.name}.{name}"
            if imp.wildcard and q in pool.units:
                hits.setdefault(q, i)
        if len(hits) > 1:
            return Lookup(None, "S003", f"component type {name} is ambiguous: {', '.join(sorted(hits))}")
        if hits:
            (q, i), = hits.items()
            self.used_imports.add((unit.source_id, i))
            return Lookup(pool.defs[q])
        pkg = ".".join(unit.package) or "<default>"
        return Lookup(None, "R4", f"component type {name} is neither in package {pkg} nor imported")

    def _inner_visible(self, d: ComponentDef, ctx: ComponentDef) -> bool:
        """Inner types are visible from their owner, its body, and subtypes of the owner."""
        owner = d.parent
        for scope in ctx.lexical_chain():
            s: ComponentDef | None = scope
            seen = set()
            while s is not None and s.qname not in seen:
                if s is owner:
                    return True
                seen.add(s.qname)
                s = self.super_of(s)
        return False

    def super_lookup(self, d: ComponentDef) -> Lookup | None:
        """Resolve the ``extends`` clause of ``d``; None if there is none.

        The clause is resolved in the scope enclosing ``d``: ``d``'s own inner
        types are not candidates.
        """
        if d.decl.super_type is None:
            return None
        if d.qname in self._super:
            return self._super[d.qname]
        if d.qname in self._super_busy:
            return Lookup(None)
        self._super_busy.add(d.qname)
        try:
            res = self.resolve_component_type(d.decl.super_type, d, start=d.parent)
        finally:
            self._super_busy.discard(d.qname)
        self._super[d.qname] = res
        return res

    def super_of(self, d: ComponentDef) -> ComponentDef | None:
        res = self.super_lookup(d)
        return res.target if res else None

    def extends_cycle(self, d: ComponentDef) -> bool:
        """True if following ``extends`` from ``d`` leads back to ``d``."""
        seen = set()
        s = self.super_of(d)
        while s is not None and s.qname not in seen:
            if s is d:
                return True
            seen.add(s.qname)
            s = self.super_of(s)
        return False

    def extends_ancestor(self, d: ComponentDef) -> bool:
        """True if ``d`` is an inner type extending one of its lexical owners."""
        s = self.super_of(d)
        return s is not None and any(s is p for p in d.lexical_chain() if p is not d)

    def valid_super(self, d: ComponentDef) -> ComponentDef | None:
        """The super type of ``d`` unless inheriting from it would not terminate."""
        s = self.super_of(d)
        if s is None or self.extends_cycle(d) or self.extends_ancestor(d):
            return None
        # Walking further up must not hit a broken link either.
        if self.valid_super(s) is None and self.super_of(s) is not None:
            return None
        return s

    def inner_types(self, d: ComponentDef) -> dict[str, ComponentDef]:
        """Own inner types of ``d`` plus those inherited from its super types."""
        out: dict[str, ComponentDef] = {}
        chain = []
        s: ComponentDef | None = d
        seen = set()
        while s is not None and s.qname not in seen:
            chain.append(s)
            seen.add(s.qname)
            s = self.super_of(s)
        for c in reversed(chain):
            out.update(c.inner)
        return out

    # -- effective namespace --------------------------------------------

    def info(self, d: ComponentDef) -> ComponentInfo:
        if d.qname in self._infos:
            return self._infos[d.qname]
        if d.qname in self._in_progress:  # pragma: no cover - guarded by valid_super
            raise RuntimeError(f"recursive namespace construction for {d.qname}")
        self._in_progress.add(d.qname)
        try:
            info = self._build_info(d)
        finally:
            self._in_progress.discard(d.qname)
        self._infos[d.qname] = info
        return info

    def _build_info(self, d: ComponentDef) -> ComponentInfo:
        decl = d.decl
        diags: list[Diagnostic] = []
        tvars = frozenset(d.type_param_names)
        names: list[NameDecl] = []
        ports: dict[str, PortSym] = {}
        subs: dict[str, SubSym] = {}

        def resolve(t: ast.TypeExpr) -> tuple[ast.TypeExpr, bool]:
            ct, missing = self.resolve_data_type(t, d, tvars)
            for m in missing:
                diags.append(Diagnostic.error("R8", t.span, f"unknown data type {m}"))
            return ct, not missing

        # Inherited members come first.
        sup = self.valid_super(d)
        binding: dict[str, ast.TypeExpr] = {}
        if sup is not None:
            sinfo = self.info(sup)
            args = [resolve(a)[0] for a in decl.super_type.args]
            binding = _bind(sinfo.type_params, args)
            for p in sinfo.ports.values():
                ports.setdefault(
                    p.name,
                    PortSym(p.name, p.direction, substitute(p.type, binding), p.resolved, p.span, Provenance.INHERITED, p.decl),
                )
                names.append(NameDecl(p.name, "port", p.span, inherited=True))
            for s in sinfo.subs.values():
                subs.setdefault(
                    s.name,
                    SubSym(
                        s.name, s.type_ref, s.target,
                        tuple(substitute(a, binding) for a in s.type_args),
                        s.config_args, s.span, s.decl_span, Provenance.INHERITED, (),
                    ),
                )
                names.append(NameDecl(s.name, "subcomponent", s.span, inherited=True))

        for tp in decl.type_params:
            names.append(NameDecl(tp.name, "type parameter", tp.span))
        config_params = []
        for cp in decl.config_params:
            ct, ok = resolve(cp.type)
            config_params.append((cp.name, ct, ok, cp.span))
            names.append(NameDecl(cp.name, "configuration parameter", cp.span))

        local: list[tuple[Span | None, NameDecl, object]] = []
        for p in decl.ports:
            ct, ok = resolve(p.type)
            prov = Provenance.EXPLICIT
            name = p.name
            if name is None:
                try:
                    name = default_name(p.type, d.type_param_names)
                except NoDefaultName as e:
                    diags.append(Diagnostic.error("B1", p.span, str(e)))
                    continue
                prov = Provenance.DEFAULT_NAME
            local.append((p.span, NameDecl(name, "port", p.span), PortSym(name, p.direction, ct, ok, p.span, prov, p)))

        referenced: set[str] = set()
        for sd in decl.of_type(ast.SubComponentDecl):
            look = self.resolve_component_type(sd.type, d)
            if look.target is not None:
                referenced.add(look.target.qname)
            targs = tuple(resolve(a)[0] for a in sd.type.args)
            if sd.instances:
                for inst in sd.instances:
                    s = SubSym(inst.name, sd.type, look.target, targs, sd.config_args, inst.span, sd.span,
                               Provenance.EXPLICIT, inst.connectors)
                    local.append((inst.span, NameDecl(inst.name, "subcomponent", inst.span), s))
            else:
                name = sd.type.base.last[0].lower() + sd.type.base.last[1:]
                s = SubSym(name, sd.type, look.target, targs, sd.config_args, sd.span, sd.span, Provenance.DEFAULT_NAME)
                local.append((sd.span, NameDecl(name, "subcomponent", sd.span), s))
        for inner in decl.inner_types:
            if inner.instance_name:
                idef = d.inner.get(inner.name)
                ref = ast.TypeExpr(ast.QualifiedName((inner.name,), inner.name_span), (), 0, inner.name_span)
                s = SubSym(inner.instance_name, ref, idef, (), (), inner.instance_span, inner.span, Provenance.EXPLICIT)
                local.append((inner.instance_span, NameDecl(inner.instance_name, "subcomponent", inner.instance_span), s))
                if idef is not None:
                    referenced.add(idef.qname)
        for inv in decl.of_type(ast.InvariantDecl):
            local.append((inv.span, NameDecl(inv.name, "invariant", inv.span), None))

        local.sort(key=lambda t: _pos(t[0]))
        for _, nd, sym in local:
            names.append(nd)
            if isinstance(sym, PortSym):
                ports.setdefault(sym.name, sym)
            elif isinstance(sym, SubSym):
                subs.setdefault(sym.name, sym)

        if decl.mode(ast.ConfigKind.AUTOINSTANTIATE, "off") == "on":
            for inner in decl.inner_types:
                idef = d.inner.get(inner.name)
                if idef is None or idef.decl is not inner:
                    continue
                if inner.type_params or inner.config_params or inner.instance_name or idef.qname in referenced:
                    continue
                name = default_name(ast.TypeExpr(ast.QualifiedName((inner.name,))))
                ref = ast.TypeExpr(ast.QualifiedName((inner.name,), inner.name_span), (), 0, inner.name_span)
                names.append(NameDecl(name, "subcomponent", inner.name_span))
                subs.setdefault(
                    name,
                    SubSym(name, ref, idef, (), (), inner.name_span, inner.span, Provenance.AUTOINSTANTIATE),
                )

        return ComponentInfo(
            definition=d,
            type_params=d.type_param_names,
            config_params=tuple(config_params),
            ports=ports,
            subs=subs,
            inner=self.inner_types(d),
            super_def=sup,
            super_binding=binding,
            names=names,
            diagnostics=diags,
        )

    # -- subcomponent interfaces -----------------------------------------

    def sub_binding(self, sub: SubSym) -> dict[str, ast.TypeExpr]:
        if sub.target is None:
            return {}
        return _bind(sub.target.type_param_names, list(sub.type_args))

    def sub_ports(self, sub: SubSym) -> dict[str, PortSym]:
        """Ports of ``sub``'s component type with its type arguments applied."""
        key = (id(sub), sub.name)
        if key in self._sub_ports:
            return self._sub_ports[key]
        if sub.target is None:
            return {}
        binding = self.sub_binding(sub)
        out = {
            n: PortSym(p.name, p.direction, substitute(p.type, binding), p.resolved, p.span, p.provenance, p.decl)
            for n, p in self.info(sub.target).ports.items()
        }
        self._sub_ports[key] = out
        return out

    def ctype(self, d: ComponentDef, args: Iterable[ast.TypeExpr] = ()) -> str:
        """Component type name as used by the semantic domain, e.g. ``Buffer<Integer>``."""
        args = list(args)
        return d.qname + ("<" + ", ".join(str(a) for a in args) + ">" if args else "")

    # -- endpoints ---------------------------------------------------------

    def resolve_endpoint(self, raw: ast.QualifiedName, info: ComponentInfo) -> EndpointRef:
        """Classify a connector endpoint within ``info``'s namespace."""
        parts = raw.parts
        if len(parts) >= 3:
            return EndpointRef(raw, EndKind.UNRESOLVED, reason=Reason.PIERCING)
        if len(parts) == 1:
            name = parts[0]
            if name in info.ports:
                return EndpointRef(raw, EndKind.THIS_PORT, port=name)
            if name in info.subs:
                return EndpointRef(raw, EndKind.SUBCOMPONENT, sub=name)
            return EndpointRef(raw, EndKind.UNRESOLVED, reason=Reason.NO_SUCH_NAME)
        sub_name, port = parts
        sub = info.subs.get(sub_name)
        if sub is None:
            return EndpointRef(raw, EndKind.UNRESOLVED, sub=sub_name, reason=Reason.NO_SUCH_SUBCOMPONENT)
        if sub.target is None:
            return EndpointRef(raw, EndKind.UNRESOLVED, sub=sub_name, port=port, reason=Reason.UNRESOLVED_TYPE)
        if port not in self.sub_ports(sub):
            return EndpointRef(raw, EndKind.UNRESOLVED, sub=sub_name, port=port, reason=Reason.NO_SUCH_PORT)
        return EndpointRef(raw, EndKind.SUB_PORT, sub=sub_name, port=port)

    def endpoint_port(self, ref: EndpointRef, info: ComponentInfo) -> PortSym | None:
        if ref.kind is EndKind.THIS_PORT:
            return info.ports[ref.port]
        if ref.kind is EndKind.SUB_PORT:
            return self.sub_ports(info.subs[ref.sub])[ref.port]
        return None


class _Ambiguous:
    def __init__(self, options: tuple[str, ...]) -> None:
        self.options = options


def _bind(params: Iterable[str], args: list[ast.TypeExpr]) -> dict[str, ast.TypeExpr]:
    """Pair parameters with arguments; missing arguments default to Object."""
    params = list(params)
    obj = ast.TypeExpr.named("Object")
    return {p: (args[i] if i < len(args) else obj) for i, p in enumerate(params)}


def _pos(span: Span | None) -> tuple[int, int]:
    return (span.line, span.col) if span is not None else (0, 0)


def load_model_pool(modelpath: Iterable[str | Path]) -> ModelPool:
    return ModelPool.load(modelpath)


__all__ = [
    "ComponentDef",
    "ComponentInfo",
    "EndKind",
    "EndpointRef",
    "Lookup",
    "Model",
    "ModelPool",
    "NameDecl",
    "PortSym",
    "Provenance",
    "Reason",
    "SubSym",
    "UnknownTypeError",
    "load_model_pool",
]
