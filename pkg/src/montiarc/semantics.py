"""Structural semantic domain of component-and-connector models.

A component denotes a tuple ``(ctype, ports, subcomponents, connectors)``
where ports are ``(direction, type, name)``, subcomponents are
``(name, component)`` holding a full unfolded copy of the referenced type,
and connectors are ``(cname, pname, cname, pname)`` with the distinguished
name :data:`PARENT` standing for the owning component.

Two mappings into the domain are provided:

* :func:`map_to_domain` maps an already elaborated component, and
* :func:`map_montiarc` maps a MontiArc definition directly from its
  namespace, computing implicit connectors by its own relational rules.

Agreement of the two is the commutativity property checked by the tests.
"""

from __future__ import annotations

import enum
import json
from collections import defaultdict
from dataclasses import dataclass
from typing import Iterable

from montiarc.diagnostics import Diagnostic, Span
from montiarc.elaborate import ElaboratedComponent, Elaborator
from montiarc.symbols import ComponentDef, EndKind, Model, Provenance
from montiarc.syntax import ast
from montiarc.typesys import UnknownTypeError, substitute


class _Parent(enum.Enum):
    PARENT = "#this"

    def __str__(self) -> str:
        return self.value

    def __lt__(self, other: object) -> bool:
        return _key(self) < _key(other)


PARENT = _Parent.PARENT
CName = str | _Parent


def _key(c: object) -> str:
    return c.value if isinstance(c, _Parent) else str(c)


@dataclass(frozen=True)
class SemPort:
    direction: ast.Direction
    ptype: str
    pname: str


@dataclass(frozen=True)
class SemConnector:
    src_cname: CName
    src_pname: str
    dst_cname: CName
    dst_pname: str

    def sort_key(self) -> tuple[str, str, str, str]:
        return (_key(self.src_cname), self.src_pname, _key(self.dst_cname), self.dst_pname)


@dataclass(frozen=True)
class SemComponent:
    ctype: str
    ports: frozenset[SemPort]
    subcomponents: frozenset[SemSubComponent]
    connectors: frozenset[SemConnector]

    def walk(self) -> Iterable[SemComponent]:
        yield self
        for s in self.subcomponents:
            yield from s.component.walk()

    def sub(self, cname: str) -> SemComponent | None:
        return next((s.component for s in self.subcomponents if s.cname == cname), None)


@dataclass(frozen=True)
class SemSubComponent:
    cname: str
    component: SemComponent


def _ctype(d: ComponentDef, binding: dict[str, ast.TypeExpr] | None) -> str:
    params = d.type_param_names
    if not params:
        return d.qname
    binding = binding or {}
    return d.qname + "<" + ", ".join(str(binding.get(p, ast.TypeExpr.named(p))) for p in params) + ">"


# ---------------------------------------------------------------------------
# m_simp: mapping of elaborated components


def map_to_domain(
    e: ElaboratedComponent,
    elaborator: Elaborator,
    binding: dict[str, ast.TypeExpr] | None = None,
) -> SemComponent:
    """Map an elaborated component, unfolding subcomponents recursively."""
    b = binding or {}
    ports = frozenset(SemPort(p.direction, str(substitute(p.type, b)), p.name) for p in e.ports)
    subs = []
    for s in e.subcomponents:
        args = [substitute(a, b) for a in s.type_args]
        child = elaborator.elaborate(s.component)
        subs.append(SemSubComponent(s.name, map_to_domain(child, elaborator, dict(zip(child.type_param_names, args)))))
    conns = frozenset(
        SemConnector(
            PARENT if c.source.component is None else c.source.component, c.source.port,
            PARENT if c.target.component is None else c.target.component, c.target.port,
        )
        for c in e.connectors
    )
    return SemComponent(_ctype(e.definition, b), ports, frozenset(subs), conns)


# ---------------------------------------------------------------------------
# m: direct mapping of MontiArc definitions


def map_montiarc(model: Model, d: ComponentDef, binding: dict[str, ast.TypeExpr] | None = None) -> SemComponent:
    """Map a MontiArc definition without running the elaborator.

    Ports and subcomponents are read from the effective namespace. The
    connector set is the union of the inherited wiring, the written
    connectors, and the completions defined by :func:`_wiring`.
    """
    b = binding or {}
    info = model.info(d)
    ports = frozenset(SemPort(p.direction, str(substitute(p.type, b)), p.name) for p in info.ports.values())
    subs = frozenset(
        SemSubComponent(
            s.name,
            map_montiarc(model, s.target, dict(zip(s.target.type_param_names, [substitute(a, b) for a in s.type_args]))),
        )
        for s in info.subs.values()
        if s.target is not None
    )
    return SemComponent(_ctype(d, b), ports, subs, _wiring(model, d))


_WILD = "*"  # marks a written endpoint that names a whole subcomponent


def _wiring(model: Model, d: ComponentDef) -> frozenset[SemConnector]:
    info = model.info(d)
    tv = info.type_vars
    reg = model.registry
    wires: set[tuple] = set()
    if info.super_def is not None:
        wires = {(w.src_cname, w.src_pname, w.dst_cname, w.dst_pname) for w in _wiring(model, info.super_def)}

    # (cname, pname) -> (is_source, type)
    table: dict[tuple[CName, str], tuple[bool, ast.TypeExpr]] = {}
    for p in info.ports.values():
        table[(PARENT, p.name)] = (p.incoming, p.type)
    for s in info.subs.values():
        for p in model.sub_ports(s).values():
            table[(s.name, p.name)] = (not p.incoming, p.type)

    def flows(src: tuple, dst: tuple) -> bool:
        try:
            return reg.is_subtype(table[src][1], table[dst][1], tv)
        except UnknownTypeError:
            return False

    def outs(cname: str) -> list[tuple]:
        return [k for k, (is_src, _) in table.items() if k[0] == cname and is_src]

    def ins(cname: str) -> list[tuple]:
        return [k for k, (is_src, _) in table.items() if k[0] == cname and not is_src]

    def name_of(raw: ast.QualifiedName) -> tuple | None:
        ref = model.resolve_endpoint(raw, info)
        if ref.kind is EndKind.THIS_PORT:
            return (PARENT, ref.port)
        if ref.kind is EndKind.SUB_PORT:
            return (ref.sub, ref.port)
        if ref.kind is EndKind.SUBCOMPONENT:
            return (ref.sub, _WILD)
        return None

    written: list[tuple[tuple[int, int], tuple | None, tuple | None]] = []
    for s in info.subs.values():
        if s.provenance is Provenance.INHERITED:
            continue
        for sc in s.simple_connectors:
            if len(sc.source) == 1:
                src = name_of(ast.QualifiedName((s.name, sc.source.last)))
                written += [(_pos(sc.span), src, name_of(t)) for t in sc.targets]
    for c in info.decl.of_type(ast.ConnectorDecl):
        written += [(_pos(c.span), name_of(c.source), name_of(t)) for t in c.targets]
    written.sort(key=lambda w: w[0])

    # Written port-to-port connectors hold unconditionally.
    for _, src, dst in written:
        if src and dst and _WILD not in (src[1], dst[1]):
            wires.add(src + dst)

    def receivers() -> set[tuple]:
        return {w[2:] for w in wires}

    def senders() -> set[tuple]:
        return {w[:2] for w in wires}

    # Subcomponent names stand for the unique fitting unconnected port.
    for _, src, dst in written:
        if not src or not dst or _WILD not in (src[1], dst[1]):
            continue
        if src[1] == _WILD and dst[1] == _WILD:
            for o in outs(src[0]):
                if o in senders():
                    continue
                fit = [i for i in ins(dst[0]) if i not in receivers() and flows(o, i)]
                if len(fit) == 1:
                    wires.add(o + fit[0])
        elif dst[1] == _WILD:
            fit = [i for i in ins(dst[0]) if i not in receivers() and flows(src, i)]
            if len(fit) == 1:
                wires.add(src + fit[0])
        elif dst not in receivers():
            fit = [o for o in outs(src[0]) if o not in senders() and flows(o, dst)]
            if len(fit) == 1:
                wires.add(fit[0] + dst)

    mode = info.decl.mode(ast.ConfigKind.AUTOCONNECT, "off")
    if mode != "off":
        free = [k for k, (is_src, _) in table.items() if not is_src and k not in receivers()]
        srcs = [k for k, (is_src, _) in table.items() if is_src]
        if mode == "port":
            for r in free:
                m = [s for s in srcs if s[1] == r[1] and flows(s, r)]
                if len(m) == 1:
                    wires.add(m[0] + r)
        else:
            back = {r: [s for s in srcs if flows(s, r)] for r in free}
            fwd = {s: [r for r in free if flows(s, r)] for s in srcs}
            for r, m in back.items():
                if len(m) == 1 and len(fwd[m[0]]) == 1:
                    wires.add(m[0] + r)
    return frozenset(SemConnector(*w) for w in wires)


def _pos(span: Span | None) -> tuple[int, int]:
    return (span.line, span.col) if span is not None else (0, 0)


# ---------------------------------------------------------------------------
# Well-formedness of domain elements

_DOMAIN = Span("<domain>", 0, 0, 0, 0)


def validate_domain(s: SemComponent) -> list[Diagnostic]:
    """Check the domain rules; codes D1 (type determines structure) to D5
    (unique sender per receiving port)."""
    out: list[Diagnostic] = []
    by_type: dict[str, set[SemComponent]] = defaultdict(set)
    for c in s.walk():
        by_type[c.ctype].add(c)
    for ctype in sorted(by_type):
        if len(by_type[ctype]) > 1:
            out.append(Diagnostic.error("D1", _DOMAIN, f"component type {ctype} has {len(by_type[ctype])} different structures"))
    seen: set[SemComponent] = set()
    for c in s.walk():
        if c in seen:
            continue
        seen.add(c)
        out += _local_rules(c)
    return out


def _local_rules(c: SemComponent) -> list[Diagnostic]:
    out = []
    names = defaultdict(int)
    for p in c.ports:
        names[p.pname] += 1
    for n in sorted(k for k, v in names.items() if v > 1):
        out.append(Diagnostic.error("D2", _DOMAIN, f"{c.ctype}: port name {n} is not unique"))
    cnames = defaultdict(int)
    for s in c.subcomponents:
        cnames[s.cname] += 1
    for n in sorted(k for k, v in cnames.items() if v > 1):
        out.append(Diagnostic.error("D3", _DOMAIN, f"{c.ctype}: subcomponent name {n} is not unique"))

    def has_port(cname: CName, pname: str, direction: ast.Direction) -> bool:
        if cname is PARENT:
            return any(p.pname == pname and p.direction is direction for p in c.ports)
        return any(
            s.cname == cname and any(p.pname == pname and p.direction is direction for p in s.component.ports)
            for s in c.subcomponents
        )

    by_receiver: dict[tuple, list[SemConnector]] = defaultdict(list)
    for k in sorted(c.connectors, key=SemConnector.sort_key):
        src_dir = ast.Direction.IN if k.src_cname is PARENT else ast.Direction.OUT
        dst_dir = ast.Direction.OUT if k.dst_cname is PARENT else ast.Direction.IN
        label = f"({k.src_cname}, {k.src_pname}, {k.dst_cname}, {k.dst_pname})"
        if not has_port(k.src_cname, k.src_pname, src_dir):
            out.append(Diagnostic.error("D4", _DOMAIN, f"{c.ctype}: connector {label} has no {src_dir.value} source port"))
        if not has_port(k.dst_cname, k.dst_pname, dst_dir):
            out.append(Diagnostic.error("D4", _DOMAIN, f"{c.ctype}: connector {label} has no {dst_dir.value} target port"))
        by_receiver[(_key(k.dst_cname), k.dst_pname)].append(k)
    for (cn, pn), ks in sorted(by_receiver.items()):
        if len(ks) > 1:
            out.append(Diagnostic.error("D5", _DOMAIN, f"{c.ctype}: port {cn}.{pn} reads from {len(ks)} connectors"))
    return out


# ---------------------------------------------------------------------------
# Canonical JSON


def to_json_obj(s: SemComponent) -> dict:
    return {
        "ctype": s.ctype,
        "ports": [
            {"dir": p.direction.value, "ptype": p.ptype, "pname": p.pname}
            for p in sorted(s.ports, key=lambda p: (p.pname, p.direction.value, p.ptype))
        ],
        "subcomponents": [
            {"cname": x.cname, "component": to_json_obj(x.component)}
            for x in sorted(s.subcomponents, key=lambda x: (x.cname, _canonical(to_json_obj(x.component))))
        ],
        "connectors": [
            dict(zip(("src_cname", "src_pname", "dst_cname", "dst_pname"), k.sort_key()))
            for k in sorted(s.connectors, key=SemConnector.sort_key)
        ],
    }


def _canonical(obj: object) -> str:
    return json.dumps(obj, separators=(",", ":"), ensure_ascii=False)


def export(s: SemComponent) -> bytes:
    """Deterministic compact JSON encoding, UTF-8."""
    return _canonical(to_json_obj(s)).encode("utf-8")


def from_json_obj(obj: dict) -> SemComponent:
    def cname(v: str) -> CName:
        return PARENT if v == PARENT.value else v

    return SemComponent(
        obj["ctype"],
        frozenset(SemPort(ast.Direction(p["dir"]), p["ptype"], p["pname"]) for p in obj["ports"]),
        frozenset(SemSubComponent(x["cname"], from_json_obj(x["component"])) for x in obj["subcomponents"]),
        frozenset(
            SemConnector(cname(k["src_cname"]), k["src_pname"], cname(k["dst_cname"]), k["dst_pname"])
            for k in obj["connectors"]
        ),
    )


def load(data: bytes | str) -> SemComponent:
    return from_json_obj(json.loads(data))
