"""Run the report generator on a timed scenario and check the trace.

Atomic components need behaviors; the built-in ``ReportGenerator`` double
collects drugs between ``OP`` and ``CL`` and reports one slice later.
"""

from __future__ import annotations

from pathlib import Path

from montiarc import Model, ModelPool, check_model
from montiarc.simulator import BehaviorRegistry, Paradigm, Scenario, check_trace, instantiate, run
from montiarc.typesys import TypeRegistry

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"
ADRA = FIXTURES / "valid" / "adra"

model = Model(ModelPool.load([ADRA]), TypeRegistry.load(ADRA / "types.txt"))
result = check_model(model)
tree = instantiate(result.elaborated["adra.be.ReportGenerator"], result.elaborator, BehaviorRegistry.builtin())

scenario = Scenario.load(FIXTURES / "sim" / "report_generator.json")
outcome = run(tree, scenario)
print(outcome.report(), end="")
print("check:", check_trace(outcome.traces, scenario.expected))

# %% The same pipeline under two other paradigms.
sim = Model(ModelPool.load([FIXTURES / "sim"]))
sim_result = check_model(sim)
pipe = instantiate(sim_result.elaborated["sim.SyncPipe"], sim_result.elaborator, BehaviorRegistry.builtin())
overflow = Scenario.load(FIXTURES / "sim" / "sync_overflow.json")
for paradigm in (Paradigm.TIMESYNCHRONOUS, Paradigm.UNTIMED):
    out = run(pipe, overflow, paradigm=paradigm)
    print(paradigm.value, [str(e) for e in out.traces["output"]], [d.code for d in out.diagnostics])
