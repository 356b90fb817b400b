"""Canonical pretty-printer for MontiArc syntax trees.

The output re-parses to an equal tree. Comments and original layout are not
kept; instead every construct is laid out the same way, two spaces per level.
"""

from __future__ import annotations

from typing import Mapping

from montiarc.syntax import ast

_INDENT = "  "


def pretty_print(unit: ast.CompilationUnit, comments: Mapping[int, str] | None = None) -> str:
    """Render ``unit`` as source text.

    Args:
        unit: The tree to print.
        comments: Optional trailing ``//`` comments keyed by ``id()`` of an
            element node. Used to show provenance of elaborated elements.
    """
    lines: list[str] = []
    if unit.package:
        lines += [f"package {'.'.join(unit.package)};", ""]
    for imp in unit.imports:
        lines.append(f"import {imp};")
    if unit.imports:
        lines.append("")
    _component(unit.root, 0, lines, comments or {})
    return "\n".join(lines) + "\n"


def print_type(t: ast.TypeExpr) -> str:
    return str(t)


def _stereo(s: ast.Stereotype) -> str:
    if not s:
        return ""
    parts = [v.name if v.value is None else f"{v.name}={v.value}" for v in s]
    return "<<" + ", ".join(parts) + ">> "


def _head(c: ast.ComponentTypeDecl) -> str:
    text = f"{_stereo(c.stereotype)}component {c.name}"
    if c.instance_name:
        text += f" {c.instance_name}"
    if c.type_params:
        params = []
        for p in c.type_params:
            if p.bounds:
                params.append(f"{p.name} extends " + " & ".join(str(b) for b in p.bounds))
            else:
                params.append(p.name)
        text += "<" + ", ".join(params) + ">"
    if c.config_params:
        text += "[" + ", ".join(f"{p.type} {p.name}" for p in c.config_params) + "]"
    if c.super_type is not None:
        text += f" extends {c.super_type}"
    return text


def _component(c: ast.ComponentTypeDecl, depth: int, out: list[str], comments: Mapping[int, str]) -> None:
    pad = _INDENT * depth
    head = pad + _head(c)
    if not c.config_elements and not c.elements:
        out.append(head + " {}" + _comment(c, comments))
        return
    out.append(head + " {" + _comment(c, comments))
    inner = pad + _INDENT
    for cfg in c.config_elements:
        out.append(f"{inner}{cfg.kind.value} {_stereo(cfg.stereotype)}{cfg.mode};")
    for e in c.elements:
        if isinstance(e, ast.ComponentTypeDecl):
            _component(e, depth + 1, out, comments)
        else:
            _element(e, inner, out, comments)
    out.append(pad + "}")


def _comment(node: object, comments: Mapping[int, str]) -> str:
    tag = comments.get(id(node))
    return f" // {tag}" if tag else ""


def _element(e: ast.ArcElement, pad: str, out: list[str], comments: Mapping[int, str]) -> None:
    tail = _comment(e, comments)
    if isinstance(e, ast.PortInterfaceDecl):
        if not e.ports:
            out.append(f"{pad}{_stereo(e.stereotype)}port;{tail}")
            return
        out.append(f"{pad}{_stereo(e.stereotype)}port")
        for i, p in enumerate(e.ports):
            text = f"{_stereo(p.stereotype)}{p.direction.value} {p.type}"
            if p.name:
                text += f" {p.name}"
            sep = ";" if i == len(e.ports) - 1 else ","
            out.append(f"{pad}{_INDENT}{text}{sep}" + (tail if sep == ";" else ""))
    elif isinstance(e, ast.SubComponentDecl):
        text = f"{pad}{_stereo(e.stereotype)}component {e.type}"
        if e.config_args:
            text += "(" + ", ".join(str(a) for a in e.config_args) + ")"
        if e.instances:
            text += " " + ", ".join(_instance(i) for i in e.instances)
        out.append(text + ";" + tail)
    elif isinstance(e, ast.ConnectorDecl):
        targets = ", ".join(str(t) for t in e.targets)
        out.append(f"{pad}{_stereo(e.stereotype)}connect {e.source} -> {targets};{tail}")
    elif isinstance(e, ast.InvariantDecl):
        kind = f"{e.kind} " if e.kind else ""
        out.append(f"{pad}{kind}inv {e.name}: {e.body};{tail}")
    else:  # pragma: no cover - exhaustive over ArcElement
        raise TypeError(f"unknown element {type(e).__name__}")


def _instance(i: ast.SubComponentInstance) -> str:
    if not i.connectors:
        return i.name
    conns = "; ".join(f"{c.source} -> " + ", ".join(str(t) for t in c.targets) for c in i.connectors)
    return f"{i.name} [{conns}]"
