"""Timed-stream simulation of elaborated architectures."""

from montiarc.simulator.behaviors import (
    AtomicBehavior,
    AtomicSpec,
    BehaviorRegistry,
    Delay,
    Forward,
    Message,
    ReportGenerator,
    Sink,
)
from montiarc.simulator.core import (
    TICK,
    Causality,
    ComponentInstance,
    Event,
    EventKind,
    InstanceTree,
    Paradigm,
    RunResult,
    SimulationError,
    instantiate,
    run,
    split_slices,
)
from montiarc.simulator.scenario import Scenario, ScenarioInput, TraceCheck, check_trace

__all__ = [
    "TICK",
    "AtomicBehavior",
    "AtomicSpec",
    "BehaviorRegistry",
    "Causality",
    "ComponentInstance",
    "Delay",
    "Event",
    "EventKind",
    "Forward",
    "InstanceTree",
    "Message",
    "Paradigm",
    "ReportGenerator",
    "RunResult",
    "Scenario",
    "ScenarioInput",
    "SimulationError",
    "Sink",
    "TraceCheck",
    "check_trace",
    "instantiate",
    "run",
    "split_slices",
]
