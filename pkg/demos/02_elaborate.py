"""Turn a model with implicit constructs into its explicit core form.

Autoinstantiation, default instance names, the bracket connector shorthand
and autoconnect are all resolved. ``// ...`` tags mark what was added.
"""

from __future__ import annotations

from pathlib import Path

from montiarc import Model, ModelPool, check_model
from montiarc.syntax.printer import pretty_print
from montiarc.typesys import TypeRegistry

ROOT = Path(__file__).resolve().parent.parent / "fixtures" / "valid" / "adra"

model = Model(ModelPool.load([ROOT]), TypeRegistry.load(ROOT / "types.txt"))
result = check_model(model)
assert result.ok

app = result.elaborated["adra.AdverseDrugReactionApp"]
comments: dict[int, str] = {}
print(pretty_print(app.to_unit(comments), comments))

# %% Each subcomponent and connector remembers where it came from.
for sub in app.subcomponents:
    print(f"{sub.name:16} {sub.provenance.value}")
for c in app.connectors:
    print(f"{str(c.source):24} -> {str(c.target):28} {c.provenance.value}")
