"""Timed-stream execution of elaborated architectures.

Channels carry DATA events and TICK events. A TICK closes the current time
slice of a channel. An atomic instance processes DATA as soon as it is at the
head of an input buffer. When every connected inport has a TICK at its head,
the instance consumes them, advances its local time, sends one TICK on every
outport, and lets its behavior react to the end of the slice.

The reference scheduler is single-threaded. All deliveries pass through one
FIFO queue, so a run is a deterministic function of the tree and scenario.
"""

from __future__ import annotations

import enum
import json
from collections import defaultdict, deque
from dataclasses import dataclass, field
from typing import Mapping

from montiarc.diagnostics import Diagnostic, Span, sort_diagnostics
from montiarc.elaborate import ElaboratedComponent, Elaborator
from montiarc.simulator.behaviors import AtomicBehavior, AtomicSpec, BehaviorRegistry, Factory, Message
from montiarc.syntax import ast


class Paradigm(enum.Enum):
    TIMED = "timed"
    TIMESYNCHRONOUS = "timesynchronous"
    UNTIMED = "untimed"


class Causality(enum.Enum):
    STRICT = "strict"
    WEAK = "weak"


class EventKind(enum.Enum):
    DATA = "data"
    TICK = "tick"


@dataclass(frozen=True)
class Event:
    kind: EventKind
    value: Message | None = None

    @classmethod
    def data(cls, value: object) -> Event:
        return cls(EventKind.DATA, Message.parse(value))

    @property
    def is_tick(self) -> bool:
        return self.kind is EventKind.TICK

    def __str__(self) -> str:
        return "√" if self.is_tick else str(self.value)


TICK = Event(EventKind.TICK)

_SIM = Span("<simulation>", 0, 0, 0, 0)

# A port node is (instance path, port name); the root has the empty path.
Node = tuple[tuple[str, ...], str]


def node_name(node: Node) -> str:
    path, port = node
    return ".".join((*path, port))


class SimulationError(Exception):
    """The architecture cannot be instantiated for simulation."""

    def __init__(self, diagnostics: list[Diagnostic]) -> None:
        super().__init__("; ".join(d.message for d in diagnostics))
        self.diagnostics = diagnostics


@dataclass
class ComponentInstance:
    """One node of the instance tree.

    Atomic instances carry a behavior factory; composed ones carry children.
    Mutable run state lives in the scheduler, not here, so a tree can be
    run any number of times.
    """

    path: tuple[str, ...]
    component: ElaboratedComponent
    children: list[ComponentInstance] = field(default_factory=list)
    factory: Factory | None = None
    config: dict[str, object] = field(default_factory=dict)

    @property
    def name(self) -> str:
        return ".".join(self.path) or "<root>"

    @property
    def is_atomic(self) -> bool:
        return self.component.is_atomic

    def inports(self) -> tuple[str, ...]:
        return tuple(p.name for p in self.component.ports if p.direction is ast.Direction.IN)

    def outports(self) -> tuple[str, ...]:
        return tuple(p.name for p in self.component.ports if p.direction is ast.Direction.OUT)

    def walk(self):
        yield self
        for c in self.children:
            yield from c.walk()

    def depth(self) -> int:
        return 1 + max((c.depth() for c in self.children), default=0)

    def spec(self) -> AtomicSpec:
        return AtomicSpec(self.name, self.component.qname, self.inports(), self.outports(), dict(self.config))


@dataclass
class InstanceTree:
    """Instantiated architecture plus its flattened routing table.

    Attributes:
        routes: for each sending node (an atomic outport or a root inport),
            the receiving nodes it reaches through any chain of connectors.
            Receivers are atomic inports or root outports.
        atomics: atomic instances in stable depth-first order; the index is
            the tie-breaker wherever the scheduler has a choice.
        timing: timing paradigm declared in the tree, if any.
    """

    root: ComponentInstance
    routes: dict[Node, list[Node]]
    atomics: list[ComponentInstance]
    timing: Paradigm | None

    def connected_inports(self, inst: ComponentInstance) -> tuple[str, ...]:
        """Inports that receive a stream; an atomic root is fed by the scenario."""
        if inst is self.root:
            return inst.inports()
        fed = {t for ts in self.routes.values() for t in ts}
        return tuple(p for p in inst.inports() if (inst.path, p) in fed)


def instantiate(
    root: ElaboratedComponent,
    elaborator: Elaborator,
    behaviors: BehaviorRegistry | Mapping[str, Factory] | None = None,
    config_bindings: Mapping[str, object] | None = None,
) -> InstanceTree:
    """Build the instance tree and routing table for ``root``.

    Raises:
        SimulationError: with MISSING_BEHAVIOR for atomic types without a
            factory, or T4 when the tree declares different timing modes.
    """
    if behaviors is None:
        registry = BehaviorRegistry.builtin()
    elif isinstance(behaviors, BehaviorRegistry):
        registry = behaviors
    else:
        registry = BehaviorRegistry(dict(behaviors))
    errors: list[Diagnostic] = []

    def build(path: tuple[str, ...], comp: ElaboratedComponent, config: dict[str, object]) -> ComponentInstance:
        inst = ComponentInstance(path, comp, config=config)
        if comp.is_atomic:
            inst.factory = registry.lookup(comp.qname)
            if inst.factory is None:
                errors.append(Diagnostic.error("MISSING_BEHAVIOR", _SIM, f"no behavior registered for atomic component type {comp.qname} (instance {inst.name})"))
            return inst
        for s in comp.subcomponents:
            child = elaborator.elaborate(s.component)
            values = [_arg_value(a, config) for a in s.config_args]
            inst.children.append(build(path + (s.name,), child, dict(zip((n for n, _ in child.config_params), values))))
        return inst

    tree_root = build((), root, dict(config_bindings or {}))
    modes = sorted({i.component.timing for i in tree_root.walk() if i.component.timing})
    if len(modes) > 1:
        errors.append(Diagnostic.error("T4", _SIM, f"mixed timing paradigms in one architecture: {', '.join(modes)}"))
    if errors:
        raise SimulationError(errors)
    atomics = [i for i in tree_root.walk() if i.is_atomic]
    return InstanceTree(tree_root, _routes(tree_root), atomics, Paradigm(modes[0]) if modes else None)


def _arg_value(arg: ast.ConfigArg, env: Mapping[str, object]) -> object:
    if arg.kind is ast.ArgKind.LITERAL:
        return arg.literal.value
    if arg.kind is ast.ArgKind.VARIABLE:
        return env.get(str(arg.name))
    return str(arg.name)


def _routes(root: ComponentInstance) -> dict[Node, list[Node]]:
    edges: dict[Node, list[Node]] = defaultdict(list)
    for inst in root.walk():
        for c in inst.component.connectors:
            src = (inst.path + ((c.source.component,) if c.source.component else ()), c.source.port)
            dst = (inst.path + ((c.target.component,) if c.target.component else ()), c.target.port)
            edges[src].append(dst)
    atomic_in = {(i.path, p) for i in root.walk() if i.is_atomic for p in i.inports()}
    if root.is_atomic:
        senders = [((), p) for p in root.outports()]
        sinks: set[Node] = set(atomic_in)
    else:
        senders = [(i.path, p) for i in root.walk() if i.is_atomic for p in i.outports()]
        senders += [((), p) for p in root.inports()]
        sinks = atomic_in | {((), p) for p in root.outports()}

    routes: dict[Node, list[Node]] = {}
    for s in senders:
        found: list[Node] = []
        seen = {s}
        stack = list(reversed(edges.get(s, [])))
        while stack:
            n = stack.pop()
            if n in seen:
                continue
            seen.add(n)
            if n in sinks:
                found.append(n)
            else:
                stack.extend(reversed(edges.get(n, [])))
        routes[s] = found
    return routes


@dataclass
class RunResult:
    """Outcome of one run.

    Attributes:
        traces: events observed at each root outport.
        channels: events emitted by every sender node.
        inbox: events delivered to every receiver node.
        leftover: events still buffered at atomic inports at the end.
        local_times: final local time per instance, composed ones derived
            as the minimum over their children.
    """

    horizon: int
    paradigm: Paradigm
    traces: dict[str, list[Event]]
    channels: dict[str, list[Event]]
    inbox: dict[str, list[Event]]
    leftover: dict[str, list[Event]]
    local_times: dict[str, int]
    diagnostics: list[Diagnostic]

    @property
    def ok(self) -> bool:
        return not any(d.is_error for d in self.diagnostics)

    def slices(self, port: str) -> list[list[Message]]:
        """DATA values of a root outport grouped by slice index."""
        return split_slices(self.traces[port], self.horizon)

    def to_json(self) -> dict:
        return {
            "horizon": self.horizon,
            "paradigm": self.paradigm.value,
            "traces": {
                port: [
                    {"slice": k, "value": v.to_json()}
                    for k, vs in enumerate(split_slices(events, self.horizon))
                    for v in vs
                ]
                for port, events in sorted(self.traces.items())
            },
            "ticks": {port: sum(e.is_tick for e in events) for port, events in sorted(self.traces.items())},
            "diagnostics": [d.format() for d in self.diagnostics],
        }

    def report(self, fmt: str = "text") -> str:
        """Deterministic trace report; ``fmt`` is ``text`` or ``json``."""
        if fmt == "json":
            return json.dumps(self.to_json(), indent=2, ensure_ascii=False) + "\n"
        lines = [f"horizon {self.horizon}, paradigm {self.paradigm.value}"]
        for port, events in sorted(self.traces.items()):
            lines.append(f"{port}: " + (" ".join(str(e) for e in events) or "<empty>"))
            for k, vs in enumerate(split_slices(events, self.horizon)):
                for v in vs:
                    lines.append(f"  slice {k}: {v}")
        return "\n".join(lines) + "\n"


def split_slices(events: list[Event], horizon: int = 0) -> list[list[Message]]:
    """Group DATA values by the number of TICKs preceding them.

    The result has at least ``horizon`` groups; the empty group opened by a
    final tick is dropped.
    """
    out: list[list[Message]] = [[]]
    for e in events:
        if e.is_tick:
            out.append([])
        else:
            out[-1].append(e.value)
    while len(out) > horizon and not out[-1]:
        out.pop()
    while len(out) < horizon:
        out.append([])
    return out


@dataclass
class _State:
    inst: ComponentInstance
    index: int
    required: tuple[str, ...]
    behavior: AtomicBehavior
    buffers: dict[str, deque[Event]]
    time: int = 0
    out_ticks: int = 0
    consumed: bool = False  # consumed DATA in the current slice
    handled: int = 0  # messages handled in the current slice


class _Abort(Exception):
    pass


# Messages one instance may handle within a slice before the run is deemed
# to be spinning in an instantaneous feedback loop.
MESSAGE_BUDGET = 1_000


class _Scheduler:
    def __init__(self, tree: InstanceTree, horizon: int, paradigm: Paradigm, causality: Causality) -> None:
        self.tree = tree
        self.horizon = horizon
        self.paradigm = paradigm
        self.causality = causality
        self.queue: deque[tuple[Node, Event]] = deque()
        self.diags: list[Diagnostic] = []
        self.channels: dict[str, list[Event]] = {}
        self.inbox: dict[str, list[Event]] = {}
        self.traces: dict[str, list[Event]] = {p: [] for p in tree.root.outports()}
        self.sync: dict[Node, int] = defaultdict(int)
        self.slice_of: dict[Node, int] = defaultdict(int)
        self.states: dict[tuple[str, ...], _State] = {}
        for k, inst in enumerate(tree.atomics):
            self.states[inst.path] = _State(
                inst, k, tree.connected_inports(inst), inst.factory(inst.spec()),
                {p: deque() for p in inst.inports()},
            )
        for sender, targets in tree.routes.items():
            self.channels[node_name(sender)] = []
            for t in targets:
                self.inbox.setdefault(node_name(t), [])

    @property
    def timed(self) -> bool:
        return self.paradigm is not Paradigm.UNTIMED

    # -- transport -------------------------------------------------------

    def send(self, sender: Node, event: Event) -> None:
        if self.tree.root.is_atomic and sender[0] == ():
            self.traces[sender[1]].append(event)
        self.channels.setdefault(node_name(sender), []).append(event)
        for t in self.tree.routes.get(sender, ()):
            self.queue.append((t, event))

    def deliver(self, target: Node, event: Event) -> None:
        self.inbox.setdefault(node_name(target), []).append(event)
        if event.is_tick:
            self.sync[target] = 0
            self.slice_of[target] += 1
        else:
            self.sync[target] += 1
            if self.paradigm is Paradigm.TIMESYNCHRONOUS and self.sync[target] == 2:
                self.diags.append(Diagnostic.error(
                    "T3", _SIM,
                    f"more than one message in slice {self.slice_of[target]} on port {node_name(target)}",
                ))
        path, port = target
        st = self.states.get(path)
        if st is None or (not path and not self.tree.root.is_atomic):
            self.traces[port].append(event)
            return
        st.buffers[port].append(event)
        self.step(st)

    def emitter(self, st: _State):
        def emit(port: str, value: object) -> None:
            if port not in st.inst.outports():
                raise ValueError(f"{st.inst.name} has no outgoing port {port}")
            if self.timed and st.consumed and st.out_ticks == st.time:
                make = Diagnostic.error if self.causality is Causality.STRICT else Diagnostic.warning
                d = make("T2", _SIM, f"{st.inst.name} emits on {port} in slice {st.time} in which it consumed input")
                if d not in self.diags:
                    self.diags.append(d)
            self.send((st.inst.path, port), Event.data(value))
        return emit

    # -- component steps -------------------------------------------------

    def step(self, st: _State) -> None:
        emit = self.emitter(st)
        while True:
            for port in st.inst.inports():
                buf = st.buffers[port]
                while buf and not buf[0].is_tick:
                    ev = buf.popleft()
                    st.consumed = True
                    st.handled += 1
                    if st.handled > MESSAGE_BUDGET:
                        where = f"slice {st.time}" if self.timed else "the run"
                        self.diags.append(Diagnostic.error(
                            "T1", _SIM,
                            f"livelock: {st.inst.name} handled more than {MESSAGE_BUDGET} messages in {where}",
                        ))
                        raise _Abort
                    st.behavior.on_message(port, ev.value, emit)
            if not self.timed or st.time >= self.horizon or not st.required:
                return
            if not all(st.buffers[p] and st.buffers[p][0].is_tick for p in st.required):
                return
            for p in st.required:
                st.buffers[p].popleft()
            self.advance(st)

    def advance(self, st: _State) -> None:
        st.time += 1
        st.consumed = False
        st.handled = 0
        # Close output slices up to the new local time, let the behavior fill
        # the slice that just opened, then restore its clock lead.
        self.tick_out(st, st.time)
        if st.time < self.horizon:
            st.behavior.on_tick(self.emitter(st))
        self.tick_out(st, st.time + st.behavior.initial_ticks)

    def tick_out(self, st: _State, until: int) -> None:
        while st.out_ticks < min(until, self.horizon):
            st.out_ticks += 1
            for p in st.inst.outports():
                self.send((st.inst.path, p), TICK)

    # -- main loop -------------------------------------------------------

    def drain(self) -> None:
        while self.queue:
            target, event = self.queue.popleft()
            self.deliver(target, event)

    def run(self, inputs: list[tuple[str, int, object]]) -> None:
        root_in = self.tree.root.inports()
        by_slice: dict[int, list[tuple[str, object]]] = defaultdict(list)
        for port, k, value in inputs:
            by_slice[k].append((port, value))
        last = max([self.horizon - 1, *by_slice]) if by_slice else self.horizon - 1
        for k in range(last + 1):
            for port in root_in:
                for p, value in by_slice.get(k, ()):
                    if p == port:
                        self._inject(port, Event.data(value))
                if self.timed and k < self.horizon:
                    self._inject(port, TICK)
        try:
            for st in self.states.values():
                if self.timed:
                    self.tick_out(st, st.behavior.initial_ticks)
                st.behavior.on_start(self.emitter(st))
            self.drain()
            if self.timed:
                self._run_sources()
            else:
                self._quiesce()
        except _Abort:
            self.queue.clear()

    def _inject(self, port: str, event: Event) -> None:
        if self.tree.root.is_atomic:
            self.queue.append((((), port), event))
            self.inbox.setdefault(port, [])
            self.channels.setdefault(port, []).append(event)
        else:
            self.send(((), port), event)

    def _run_sources(self) -> None:
        # Instances without connected inputs advance when nothing else can.
        while True:
            self.drain()
            free = [st for st in self.states.values() if not st.required and st.time < self.horizon]
            if not free:
                return
            for st in free:
                self.advance(st)
                self.step(st)

    def _quiesce(self) -> None:
        for _ in range(max(self.horizon, 1)):
            self.drain()
            for st in sorted(self.states.values(), key=lambda s: s.index):
                st.behavior.on_tick(self.emitter(st))
            if not self.queue:
                return
        self.drain()

    def stuck(self) -> list[str]:
        cut = []
        for st in sorted(self.states.values(), key=lambda s: s.index):
            if st.time < self.horizon:
                waiting = [p for p in st.required if not (st.buffers[p] and st.buffers[p][0].is_tick)]
                cut.append(f"{st.inst.name}@{st.time} waits for tick on {', '.join(waiting)}")
        return cut


def run(
    tree: InstanceTree,
    scenario: object,
    paradigm: Paradigm | str | None = None,
    causality: Causality | str | None = None,
) -> RunResult:
    """Execute ``scenario`` on ``tree``.

    The paradigm is taken from the argument, then the scenario, then the
    timing declared in the tree, defaulting to timed. Causality defaults to
    strict.

    Raises:
        ValueError: if the scenario names a port that is not a root inport.
    """
    para = Paradigm(paradigm or getattr(scenario, "paradigm", None) or tree.timing or Paradigm.TIMED)
    caus = Causality(causality or getattr(scenario, "causality", None) or Causality.STRICT)
    horizon = scenario.horizon
    inputs = [(i.port, i.slice, i.value) for i in scenario.inputs]
    root_in = set(tree.root.inports())
    for port, _, _ in inputs:
        if port not in root_in:
            raise ValueError(f"scenario input {port} is not an incoming port of {tree.root.component.qname}")
    sched = _Scheduler(tree, horizon, para, caus)
    sched.run(inputs)
    if sched.timed:
        cut = sched.stuck()
        if cut:
            sched.diags.append(Diagnostic.error("T1", _SIM, "deadlock: " + "; ".join(cut)))

    times: dict[str, int] = {}

    def local_time(inst: ComponentInstance) -> int:
        if inst.is_atomic:
            t = sched.states[inst.path].time if sched.timed else horizon
        else:
            t = min((local_time(c) for c in inst.children), default=horizon)
        times[inst.name] = t
        return t

    local_time(tree.root)
    leftover = {
        node_name((st.inst.path, p)): list(buf)
        for st in sched.states.values() for p, buf in st.buffers.items() if buf
    }
    return RunResult(
        horizon, para, sched.traces, sched.channels, sched.inbox, leftover, times, sort_diagnostics(sched.diags),
    )
