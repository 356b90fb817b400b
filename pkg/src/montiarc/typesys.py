"""Port data types: a nominal type registry, subtyping, and generic substitution.

Java's type system is replaced by a registry of named types with declared
supertype edges. The registry is seeded with the Java builtins that appear in
models (``String``, ``Integer``, ...) and can be extended from a text file::

    # comment
    type adra.msg.Report
    extends adra.msg.UrgentReport adra.msg.Report
"""

from __future__ import annotations

import graphlib
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Mapping

from montiarc.syntax.ast import Literal, LiteralKind, QualifiedName, TypeExpr
from montiarc.syntax.lexer import KEYWORDS

OBJECT = "Object"

_BUILTIN_EDGES = {
    "String": OBJECT,
    "Number": OBJECT,
    "Boolean": OBJECT,
    "Character": OBJECT,
    "Integer": "Number",
    "Long": "Number",
    "Double": "Number",
    "Float": "Number",
    "Short": "Number",
    "Byte": "Number",
}

# Java primitives behave like their wrapper classes for port typing.
_PRIMITIVES = {
    "int": "Integer",
    "long": "Long",
    "double": "Double",
    "float": "Float",
    "short": "Short",
    "byte": "Byte",
    "char": "Character",
    "boolean": "Boolean",
}

BUILTINS = frozenset({OBJECT, *_BUILTIN_EDGES})


class UnknownTypeError(Exception):
    """A type name that the registry does not declare."""

    def __init__(self, name: str) -> None:
        super().__init__(f"unknown data type {name}")
        self.name = name


class RegistryError(Exception):
    """Malformed registry file or cyclic supertype declarations."""


class NoDefaultName(Exception):
    """The type cannot provide a default port or subcomponent name."""


@dataclass(frozen=True)
class TypeBinding:
    """Assignment of type arguments to a component's type parameters."""

    params: tuple[str, ...]
    args: tuple[TypeExpr, ...]

    @property
    def mapping(self) -> dict[str, TypeExpr]:
        return dict(zip(self.params, self.args))

    @property
    def complete(self) -> bool:
        return len(self.params) == len(self.args)


@dataclass
class TypeRegistry:
    """Named data types and their direct supertypes.

    Names are stored fully qualified. Builtins live under their simple name
    and are also reachable as ``java.lang.<Name>`` and via primitive aliases.
    """

    supers: dict[str, frozenset[str]] = field(default_factory=dict)
    _closure: dict[str, frozenset[str]] = field(default_factory=dict, repr=False)

    @classmethod
    def with_builtins(cls, types: Iterable[str] = (), edges: Iterable[tuple[str, str]] = ()) -> TypeRegistry:
        """Build a registry from builtins plus user declarations.

        Raises:
            RegistryError: if an edge names an undeclared type or the
                supertype graph has a cycle.
        """
        direct: dict[str, set[str]] = {OBJECT: set()}
        for sub, sup in _BUILTIN_EDGES.items():
            direct[sub] = {sup}
        for name in types:
            direct.setdefault(name, set())
        for sub, sup in edges:
            for n in (sub, sup):
                if n not in direct and _canonical_builtin(n) is None:
                    raise RegistryError(f"extends refers to undeclared type {n}")
            direct[_canonical_builtin(sub) or sub].add(_canonical_builtin(sup) or sup)
        for name, sups in direct.items():
            if name != OBJECT and not sups:
                sups.add(OBJECT)
        reg = cls({k: frozenset(v) for k, v in direct.items()})
        reg._compute_closure()
        return reg

    @classmethod
    def parse(cls, text: str) -> TypeRegistry:
        types: list[str] = []
        edges: list[tuple[str, str]] = []
        for lineno, raw in enumerate(text.splitlines(), 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            words = line.split()
            if words[0] == "type" and len(words) == 2:
                types.append(words[1])
            elif words[0] == "extends" and len(words) == 3:
                edges.append((words[1], words[2]))
            else:
                raise RegistryError(f"line {lineno}: expected 'type <Name>' or 'extends <Sub> <Super>'")
        return cls.with_builtins(types, edges)

    @classmethod
    def load(cls, path: str | Path) -> TypeRegistry:
        return cls.parse(Path(path).read_text(encoding="utf-8"))

    def _compute_closure(self) -> None:
        sorter = graphlib.TopologicalSorter({k: set(v) for k, v in self.supers.items()})
        try:
            order = list(sorter.static_order())
        except graphlib.CycleError as e:
            raise RegistryError(f"cyclic supertype declarations: {' -> '.join(e.args[1])}") from None
        closure: dict[str, frozenset[str]] = {}
        for name in order:  # supertypes come first
            acc = {name}
            for sup in self.supers.get(name, ()):
                acc |= closure[sup]
            closure[name] = frozenset(acc)
        self._closure = closure

    # -- lookup ----------------------------------------------------------

    def canonical(self, name: str) -> str | None:
        """Registry key for ``name``, resolving builtin aliases, or None."""
        if name in self.supers:
            return name
        return _canonical_builtin(name)

    def knows(self, name: str) -> bool:
        return self.canonical(name) is not None

    def names(self) -> list[str]:
        return sorted(self.supers)

    def by_simple_name(self, simple: str) -> list[str]:
        """Declared qualified names whose last segment is ``simple``."""
        return sorted(n for n in self.supers if n.rsplit(".", 1)[-1] == simple)

    def ancestors(self, name: str) -> frozenset[str]:
        key = self.canonical(name)
        if key is None:
            raise UnknownTypeError(name)
        return self._closure[key]

    # -- relations -------------------------------------------------------

    def is_subtype(self, sub: TypeExpr, sup: TypeExpr, type_vars: frozenset[str] = frozenset()) -> bool:
        """True iff a value of ``sub`` may flow into a port of type ``sup``.

        Nominal subtyping on the base names; arrays and type arguments are
        invariant. Names in ``type_vars`` are type parameters of the
        enclosing component: each is a subtype only of itself and Object.

        Raises:
            UnknownTypeError: for a base name that is neither declared nor in
                ``type_vars``.
        """
        if sub.dims != sup.dims or len(sub.args) != len(sup.args):
            return False
        if sub.dims:
            return self.same_type(sub, sup, type_vars)
        sb, pb = str(sub.base), str(sup.base)
        sub_is_var, sup_is_var = sb in type_vars, pb in type_vars
        if sub_is_var or sup_is_var:
            if not sup_is_var:
                self.ancestors(pb)
            if not sub_is_var:
                self.ancestors(sb)
            if sub_is_var and not sup_is_var:
                return self.canonical(pb) == OBJECT and not sub.args
            return sb == pb and self._args_equal(sub, sup, type_vars)
        if self.canonical(pb) not in self.ancestors(sb):
            return False
        return self._args_equal(sub, sup, type_vars)

    def same_type(self, a: TypeExpr, b: TypeExpr, type_vars: frozenset[str] = frozenset()) -> bool:
        if a.dims != b.dims or len(a.args) != len(b.args):
            return False
        ka = str(a.base) if str(a.base) in type_vars else self.canonical(str(a.base))
        kb = str(b.base) if str(b.base) in type_vars else self.canonical(str(b.base))
        if ka is None:
            raise UnknownTypeError(str(a.base))
        if kb is None:
            raise UnknownTypeError(str(b.base))
        return ka == kb and self._args_equal(a, b, type_vars)

    def _args_equal(self, a: TypeExpr, b: TypeExpr, type_vars: frozenset[str]) -> bool:
        return all(
            self.same_type(x, y, type_vars) for x, y in zip(a.args, b.args)
        )

    def canonicalize(self, t: TypeExpr, type_vars: frozenset[str] = frozenset()) -> TypeExpr:
        """Replace builtin aliases (``int``, ``java.lang.String``) by registry keys."""
        base = str(t.base)
        if base not in type_vars:
            key = self.canonical(base)
            if key is not None:
                base = key
        return TypeExpr(
            QualifiedName.of(base, t.base.span),
            tuple(self.canonicalize(a, type_vars) for a in t.args),
            t.dims,
            t.span,
        )


def _canonical_builtin(name: str) -> str | None:
    if name in BUILTINS:
        return name
    if name in _PRIMITIVES:
        return _PRIMITIVES[name]
    if name.startswith("java.lang.") and name[len("java.lang."):] in BUILTINS:
        return name[len("java.lang."):]
    return None


def substitute(t: TypeExpr, binding: TypeBinding | Mapping[str, TypeExpr]) -> TypeExpr:
    """Replace type-parameter occurrences in ``t`` at any depth.

    A parameter that is itself an array element keeps the outer dimensions:
    substituting ``T[]`` with ``T -> List<Integer>`` gives ``List<Integer>[]``.
    """
    mapping = binding.mapping if isinstance(binding, TypeBinding) else binding
    base = str(t.base)
    if len(t.base) == 1 and base in mapping:
        if t.args:
            raise ValueError(f"type parameter {base} cannot take type arguments")
        bound = mapping[base]
        return TypeExpr(bound.base, bound.args, bound.dims + t.dims, t.span)
    if not t.args:
        return t
    return TypeExpr(t.base, tuple(substitute(a, mapping) for a in t.args), t.dims, t.span)


def type_params_in(t: TypeExpr, params: Iterable[str]) -> set[str]:
    """Names from ``params`` that occur anywhere in ``t``."""
    params = set(params)
    found = {str(t.base)} & params if len(t.base) == 1 else set()
    for a in t.args:
        found |= type_params_in(a, params)
    return found


def default_name(t: TypeExpr, type_params: Iterable[str] = ()) -> str:
    """Implicit name for an unnamed port or subcomponent.

    The last segment of the base name with its first letter lower-cased.

    Raises:
        NoDefaultName: if the base is a bare type parameter, or the derived
            name would be a keyword.
    """
    base = str(t.base)
    if len(t.base) == 1 and base in set(type_params):
        raise NoDefaultName(f"port of type parameter {base} must be named explicitly")
    last = t.base.last
    name = last[0].lower() + last[1:]
    if name in KEYWORDS:
        raise NoDefaultName(f"default name {name!r} of type {base} is a keyword")
    return name


_LITERAL_TYPES = {
    LiteralKind.INT: "Integer",
    LiteralKind.CHAR: "Character",
    LiteralKind.STRING: "String",
    LiteralKind.BOOL: "Boolean",
}


def literal_type(lit: Literal) -> TypeExpr:
    return TypeExpr.named(_LITERAL_TYPES[lit.kind])
