"""Map elaborated components into the semantic domain and export JSON.

Two independent routes reach the domain: one maps the elaborated core form,
the other reads the original model directly. They must agree.
"""

from __future__ import annotations

from pathlib import Path

from montiarc import Model, ModelPool, check_model
from montiarc.semantics import export, load, map_montiarc, map_to_domain, validate_domain

VALID = Path(__file__).resolve().parent.parent / "fixtures" / "valid"


def checked(name: str):
    model = Model(ModelPool.load([VALID / name]))
    return model, check_model(model)


# %% A component without subcomponents exports to a short canonical document.
model, result = checked("lossy_channel")
lossy = map_to_domain(result.elaborated["LossyChannel"], result.elaborator)
data = export(lossy)
print(data.decode())
assert load(data) == lossy

# %% Both instances of the same type map to structurally equal elements.
model, result = checked("board_lights")
qname = "automotive.ecu.BoardLightsControl"
blc = map_to_domain(result.elaborated[qname], result.elaborator)
for sub in sorted(blc.subcomponents, key=lambda s: s.cname):
    print(sub.cname, sub.component.ctype, len(sub.component.ports), "ports")

# %% The direct route never looks at the elaborated form.
direct = map_montiarc(model, model.pool.defs[qname])
print("routes agree:", direct == blc)
print("domain diagnostics:", validate_domain(blc) or "none")
