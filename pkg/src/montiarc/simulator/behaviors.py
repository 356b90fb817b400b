"""Atomic component behaviors and the registry that binds them to types.

A behavior reacts to delivered messages and to the end of each time slice.
It never sees its input buffers; the scheduler hands it one message at a
time. Emissions go through the ``emit(port, value)`` callback.
"""

from __future__ import annotations

import importlib
import json
import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Mapping

Emit = Callable[[str, object], None]


@dataclass(frozen=True, order=True)
class Message:
    """Opaque tagged value: a constructor name plus text fields."""

    tag: str
    fields: tuple[str, ...] = ()

    _SYNTAX = re.compile(r"^\s*([^()\s]+)\s*(?:\((.*)\))?\s*$", re.S)

    @classmethod
    def parse(cls, value: object) -> Message:
        """Build a message from scenario JSON.

        Accepts ``"OP"``, ``"Report(ASA, Li)"``, ``{"tag": ..., "fields": [...]}``
        or any scalar, which becomes a field-less message of its text.
        """
        if isinstance(value, Message):
            return value
        if isinstance(value, dict):
            return cls(str(value["tag"]), tuple(str(f) for f in value.get("fields", ())))
        if isinstance(value, bool):
            return cls("true" if value else "false")
        text = str(value)
        m = cls._SYNTAX.match(text)
        if m is None:
            return cls(text)
        args = m.group(2)
        fields = tuple(a.strip() for a in args.split(",")) if args and args.strip() else ()
        return cls(m.group(1), fields)

    def to_json(self) -> object:
        if not self.fields:
            return self.tag
        return {"tag": self.tag, "fields": list(self.fields)}

    def __str__(self) -> str:
        return f"{self.tag}({', '.join(self.fields)})" if self.fields else self.tag


@dataclass(frozen=True)
class AtomicSpec:
    """What a behavior factory learns about the instance it drives."""

    path: str
    ctype: str
    inports: tuple[str, ...]
    outports: tuple[str, ...]
    config: Mapping[str, object] = field(default_factory=dict)


class AtomicBehavior:
    """Base behavior: ignores input, emits nothing.

    Attributes:
        initial_ticks: how many slices the output clock runs ahead of the
            local time. The scheduler emits these ticks before the first
            slice and keeps the lead afterwards.
    """

    initial_ticks = 0

    def __init__(self, spec: AtomicSpec) -> None:
        self.spec = spec

    def on_start(self, emit: Emit) -> None:
        pass

    def on_message(self, port: str, value: object, emit: Emit) -> None:
        pass

    def on_tick(self, emit: Emit) -> None:
        """Called once the current input slice is closed.

        Emissions land in the slice that just opened.
        """


Sink = AtomicBehavior


class Delay(AtomicBehavior):
    """Unit delay: everything received in slice t is sent in slice t+1.

    The k-th inport feeds the k-th outport; surplus inports feed the last one.
    Its output clock leads by one slice, so a feedback loop through a delay
    can always make progress.
    """

    initial_ticks = 1

    def __init__(self, spec: AtomicSpec) -> None:
        super().__init__(spec)
        self.pending: list[tuple[str, object]] = []

    def _target(self, port: str) -> str | None:
        outs = self.spec.outports
        if not outs:
            return None
        k = self.spec.inports.index(port) if port in self.spec.inports else 0
        return outs[min(k, len(outs) - 1)]

    def on_message(self, port: str, value: object, emit: Emit) -> None:
        target = self._target(port)
        if target is not None:
            self.pending.append((target, value))

    def on_tick(self, emit: Emit) -> None:
        pending, self.pending = self.pending, []
        for port, value in pending:
            emit(port, value)


class Forward(Delay):
    """Zero-delay pass-through. Violates strong causality by design."""

    initial_ticks = 0

    def on_message(self, port: str, value: object, emit: Emit) -> None:
        target = self._target(port)
        if target is not None:
            emit(target, value)


class ReportGenerator(AtomicBehavior):
    """Collects drugs between an ``OP`` and a ``CL`` control message.

    The report is sent in the slice after the one in which ``CL`` arrived,
    so drugs that arrive together with ``CL`` are still included.
    """

    def __init__(self, spec: AtomicSpec) -> None:
        super().__init__(spec)
        ins = spec.inports
        self.ctrl = next((p for p in ins if "ctrl" in p.lower()), ins[0] if ins else "")
        self.out = next((p for p in spec.outports if "report" in p.lower()), spec.outports[0] if spec.outports else "")
        self.open = False
        self.closing = False
        self.drugs: list[str] = []

    def on_message(self, port: str, value: object, emit: Emit) -> None:
        msg = Message.parse(value)
        if port == self.ctrl:
            if msg.tag == "OP":
                self.open, self.closing, self.drugs = True, False, []
            elif msg.tag == "CL" and self.open:
                self.closing = True
        elif self.open:
            self.drugs.append(str(msg))

    def on_tick(self, emit: Emit) -> None:
        if self.closing:
            emit(self.out, Message("Report", tuple(self.drugs)))
            self.open, self.closing, self.drugs = False, False, []


Factory = Callable[[AtomicSpec], AtomicBehavior]

BUILTIN: dict[str, Factory] = {
    "ReportGenerator": ReportGenerator,
    "Delay": Delay,
    "Forward": Forward,
    "Sink": Sink,
}


@dataclass
class BehaviorRegistry:
    """Maps component types to behavior factories.

    Keys are qualified type names, simple type names, or ``"*"`` as a
    fallback. Lookup tries them in that order.
    """

    factories: dict[str, Factory] = field(default_factory=dict)

    @classmethod
    def builtin(cls) -> BehaviorRegistry:
        """Built-in doubles keyed by their simple type name."""
        return cls(dict(BUILTIN))

    @classmethod
    def from_manifest(cls, data: Mapping[str, str], base: BehaviorRegistry | None = None) -> BehaviorRegistry:
        """Entries map a type name to a builtin name or ``module:attribute``."""
        reg = cls(dict(base.factories) if base else {})
        for key, ref in data.items():
            reg.factories[key] = _load_factory(ref)
        return reg

    @classmethod
    def load(cls, path: str | Path) -> BehaviorRegistry:
        return cls.from_manifest(json.loads(Path(path).read_text(encoding="utf-8")), cls.builtin())

    def lookup(self, qname: str) -> Factory | None:
        simple = qname.rsplit(".", 1)[-1]
        for key in (qname, simple, "*"):
            if key in self.factories:
                return self.factories[key]
        return None


def _load_factory(ref: str) -> Factory:
    if ref in BUILTIN:
        return BUILTIN[ref]
    module, sep, attr = ref.partition(":")
    if not sep:
        raise ValueError(f"unknown behavior {ref!r}: expected a builtin name or module:attribute")
    return getattr(importlib.import_module(module), attr)
