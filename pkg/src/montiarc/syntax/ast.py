"""Abstract syntax of MontiArc compilation units.

Every node carries a ``span`` that is excluded from equality, so two trees
compare equal when they differ only in layout. That is what the parser and
pretty-printer round trip relies on.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Union

from montiarc.diagnostics import Span


def _span() -> Span | None:
    return field(default=None, compare=False, repr=False)


@dataclass(frozen=True)
class QualifiedName:
    parts: tuple[str, ...]
    span: Span | None = _span()

    def __str__(self) -> str:
        return ".".join(self.parts)

    def __len__(self) -> int:
        return len(self.parts)

    @property
    def last(self) -> str:
        return self.parts[-1]

    @classmethod
    def of(cls, dotted: str, span: Span | None = None) -> QualifiedName:
        return cls(tuple(dotted.split(".")), span)


@dataclass(frozen=True)
class TypeExpr:
    """A data type or component reference such as ``List<T>[]``."""

    base: QualifiedName
    args: tuple[TypeExpr, ...] = ()
    dims: int = 0
    span: Span | None = _span()

    def __str__(self) -> str:
        text = str(self.base)
        if self.args:
            text += "<" + ", ".join(str(a) for a in self.args) + ">"
        return text + "[]" * self.dims

    @classmethod
    def named(cls, dotted: str, *args: TypeExpr, dims: int = 0) -> TypeExpr:
        return cls(QualifiedName.of(dotted), tuple(args), dims)


@dataclass(frozen=True)
class StereoValue:
    name: str
    value: str | None = None


Stereotype = tuple[StereoValue, ...]


class Direction(enum.Enum):
    IN = "in"
    OUT = "out"


@dataclass(frozen=True)
class ImportDecl:
    name: QualifiedName
    wildcard: bool = False
    span: Span | None = _span()

    def __str__(self) -> str:
        return str(self.name) + (".*" if self.wildcard else "")


@dataclass(frozen=True)
class TypeParam:
    name: str
    bounds: tuple[TypeExpr, ...] = ()
    span: Span | None = _span()


@dataclass(frozen=True)
class ConfigParam:
    type: TypeExpr
    name: str
    span: Span | None = _span()


class LiteralKind(enum.Enum):
    INT = "int"
    CHAR = "char"
    STRING = "string"
    BOOL = "bool"


@dataclass(frozen=True)
class Literal:
    kind: LiteralKind
    text: str  # source spelling, quotes included

    @property
    def value(self) -> object:
        if self.kind is LiteralKind.INT:
            return int(self.text)
        if self.kind is LiteralKind.BOOL:
            return self.text == "true"
        inner = self.text[1:-1]
        return inner.encode("latin-1", "backslashreplace").decode("unicode_escape")


class ArgKind(enum.Enum):
    REFERENCE = "reference"  # qualified constant, e.g. Color.RED
    VARIABLE = "variable"  # bare name of a configuration parameter
    LITERAL = "literal"


@dataclass(frozen=True)
class ConfigArg:
    kind: ArgKind
    name: QualifiedName | None = None
    literal: Literal | None = None
    span: Span | None = _span()

    def __str__(self) -> str:
        return self.literal.text if self.literal is not None else str(self.name)


class ConfigKind(enum.Enum):
    AUTOCONNECT = "autoconnect"
    AUTOINSTANTIATE = "autoinstantiate"
    TIMING = "behavior"


CONFIG_MODES = {
    ConfigKind.AUTOCONNECT: ("type", "port", "off"),
    ConfigKind.AUTOINSTANTIATE: ("on", "off"),
    ConfigKind.TIMING: ("timed", "untimed", "timesynchronous"),
}


@dataclass(frozen=True)
class ConfigElement:
    kind: ConfigKind
    mode: str
    stereotype: Stereotype = ()
    span: Span | None = _span()


@dataclass(frozen=True)
class PortDecl:
    direction: Direction
    type: TypeExpr
    name: str | None = None
    stereotype: Stereotype = ()
    span: Span | None = _span()


@dataclass(frozen=True)
class PortInterfaceDecl:
    ports: tuple[PortDecl, ...]
    stereotype: Stereotype = ()
    span: Span | None = _span()


@dataclass(frozen=True)
class SimpleConnector:
    source: QualifiedName
    targets: tuple[QualifiedName, ...]
    span: Span | None = _span()


@dataclass(frozen=True)
class SubComponentInstance:
    name: str
    connectors: tuple[SimpleConnector, ...] = ()
    span: Span | None = _span()


@dataclass(frozen=True)
class SubComponentDecl:
    type: TypeExpr
    config_args: tuple[ConfigArg, ...] = ()
    instances: tuple[SubComponentInstance, ...] = ()
    stereotype: Stereotype = ()
    span: Span | None = _span()


@dataclass(frozen=True)
class ConnectorDecl:
    source: QualifiedName
    targets: tuple[QualifiedName, ...]
    stereotype: Stereotype = ()
    span: Span | None = _span()


@dataclass(frozen=True)
class InvariantDecl:
    name: str
    body: str
    kind: str | None = None
    span: Span | None = _span()


@dataclass(frozen=True)
class ComponentTypeDecl:
    name: str
    instance_name: str | None = None
    type_params: tuple[TypeParam, ...] = ()
    config_params: tuple[ConfigParam, ...] = ()
    super_type: TypeExpr | None = None
    config_elements: tuple[ConfigElement, ...] = ()
    elements: tuple[ArcElement, ...] = ()
    stereotype: Stereotype = ()
    span: Span | None = _span()
    name_span: Span | None = _span()
    instance_span: Span | None = _span()

    def config(self, kind: ConfigKind) -> ConfigElement | None:
        """Last configuration element of ``kind``; later ones override earlier."""
        found = None
        for c in self.config_elements:
            if c.kind is kind:
                found = c
        return found

    def mode(self, kind: ConfigKind, default: str) -> str:
        c = self.config(kind)
        return c.mode if c is not None else default

    def of_type(self, cls: type) -> list:
        return [e for e in self.elements if isinstance(e, cls)]

    @property
    def ports(self) -> list[PortDecl]:
        return [p for iface in self.of_type(PortInterfaceDecl) for p in iface.ports]

    @property
    def inner_types(self) -> list[ComponentTypeDecl]:
        return self.of_type(ComponentTypeDecl)


ArcElement = Union[PortInterfaceDecl, SubComponentDecl, ConnectorDecl, InvariantDecl, ComponentTypeDecl]


@dataclass(frozen=True)
class CompilationUnit:
    package: tuple[str, ...]
    imports: tuple[ImportDecl, ...]
    root: ComponentTypeDecl
    source_id: str = field(default="<input>", compare=False)

    @property
    def qualified_name(self) -> str:
        return ".".join(self.package + (self.root.name,))
