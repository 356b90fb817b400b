"""Scenario files and trace comparison.

A scenario is JSON::

    {"horizon": 4,
     "paradigm": "timed", "causality": "strict", "ordered": false,
     "inputs":   [{"port": "genCtrl", "slice": 0, "value": "OP"}],
     "expected": [{"port": "report", "slice": 3, "value": "Report(ASA, Li)"}]}

``paradigm``, ``causality``, ``ordered`` and ``expected`` are optional.
"""

from __future__ import annotations

import json
from collections import Counter
from dataclasses import dataclass, field
from pathlib import Path

from montiarc.simulator.behaviors import Message
from montiarc.simulator.core import Causality, Event, Paradigm, split_slices


@dataclass(frozen=True)
class ScenarioInput:
    port: str
    slice: int
    value: Message


@dataclass
class Scenario:
    horizon: int
    inputs: list[ScenarioInput] = field(default_factory=list)
    expected: list[ScenarioInput] | None = None
    paradigm: Paradigm | None = None
    causality: Causality | None = None
    ordered: bool = False

    @classmethod
    def from_json(cls, data: dict) -> Scenario:
        """Validate and convert a decoded scenario document.

        Raises:
            ValueError: for a missing or negative horizon, or malformed entries.
        """
        horizon = data.get("horizon")
        if not isinstance(horizon, int) or isinstance(horizon, bool) or horizon < 0:
            raise ValueError("scenario needs a non-negative integer 'horizon'")

        def entries(key: str) -> list[ScenarioInput]:
            out = []
            for i, e in enumerate(data.get(key) or []):
                try:
                    port, k, value = e["port"], e.get("slice", 0), e["value"]
                except (KeyError, TypeError):
                    raise ValueError(f"{key}[{i}] needs 'port' and 'value'") from None
                if not isinstance(k, int) or k < 0:
                    raise ValueError(f"{key}[{i}]: slice must be a non-negative integer")
                out.append(ScenarioInput(str(port), k, Message.parse(value)))
            return out

        return cls(
            horizon,
            entries("inputs"),
            entries("expected") if "expected" in data else None,
            Paradigm(data["paradigm"]) if data.get("paradigm") else None,
            Causality(data["causality"]) if data.get("causality") else None,
            bool(data.get("ordered", False)),
        )

    @classmethod
    def load(cls, path: str | Path) -> Scenario:
        return cls.from_json(json.loads(Path(path).read_text(encoding="utf-8")))


@dataclass
class TraceCheck:
    ok: bool
    failures: list[str]

    def __str__(self) -> str:
        return "pass" if self.ok else "fail\n" + "\n".join(f"  {f}" for f in self.failures)


def check_trace(
    actual: dict[str, list[Event]],
    expected: list[ScenarioInput] | None,
    ordered: bool = False,
) -> TraceCheck:
    """Compare DATA values per port and slice.

    Only ports named in ``expected`` are compared. Within a slice values are
    compared as multisets unless ``ordered`` is set.
    """
    failures: list[str] = []
    want: dict[str, dict[int, list[Message]]] = {}
    for e in expected or []:
        want.setdefault(e.port, {}).setdefault(e.slice, []).append(e.value)
    for port in sorted(want):
        if port not in actual:
            failures.append(f"port {port}: no such outgoing port")
            continue
        got = dict(enumerate(split_slices(actual[port])))
        for k in sorted(set(want[port]) | {k for k, vs in got.items() if vs}):
            w, g = want[port].get(k, []), got.get(k, [])
            same = w == g if ordered else Counter(w) == Counter(g)
            if not same:
                failures.append(
                    f"port {port}, slice {k}: expected [{', '.join(map(str, w))}], actual [{', '.join(map(str, g))}]"
                )
    return TraceCheck(not failures, failures)
