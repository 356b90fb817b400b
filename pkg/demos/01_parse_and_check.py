"""Parse a model, print it back, and run the context conditions.

Run from the repository root::

    python demos/01_parse_and_check.py
"""

from __future__ import annotations

from pathlib import Path

from montiarc import Model, ModelPool, check_all
from montiarc.diagnostics import format_diagnostics
from montiarc.syntax import parse_compilation_unit
from montiarc.syntax.printer import pretty_print
from montiarc.typesys import TypeRegistry

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"

# %% A single compilation unit parses into an AST and prints back canonically.
source = (FIXTURES / "valid" / "lossy_channel" / "LossyChannel.arc").read_text()
unit = parse_compilation_unit(source, "LossyChannel.arc")
print(pretty_print(unit))
assert parse_compilation_unit(pretty_print(unit), "LossyChannel.arc") == unit

# %% Whole-model checking needs every file on the modelpath plus the data types.
root = FIXTURES / "valid" / "adra"
model = Model(ModelPool.load([root]), TypeRegistry.load(root / "types.txt"))
print("adra diagnostics:", check_all(model) or "none")

# %% The violation corpus: one directory per rule, each with known errors.
broken = Model(ModelPool.load([FIXTURES / "violations"]))
print(format_diagnostics(check_all(broken)), end="")

# %% Small models can be built from strings. An unconnected subcomponent warns.
sources = {
    "W.arc": "component W { port in String a, out String b; }",
    "V.arc": "component V { component W w; }",
}
for d in check_all(Model(ModelPool.from_sources(sources))):
    print(d.format())
