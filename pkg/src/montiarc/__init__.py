"""MontiArc: parsing, checking, elaboration, semantics, and simulation of
component-and-connector architectures."""

from montiarc.checks import CheckResult, Phase, check_all, check_model
from montiarc.diagnostics import Diagnostic, Severity, Span, format_diagnostics
from montiarc.elaborate import ElaboratedComponent, Elaborator, elaborate
from montiarc.semantics import SemComponent, export, map_montiarc, map_to_domain, validate_domain
from montiarc.symbols import Model, ModelPool
from montiarc.syntax import ParseError, parse_compilation_unit
from montiarc.syntax.printer import pretty_print
from montiarc.typesys import TypeRegistry

__version__ = "0.1.0"

__all__ = [
    "CheckResult",
    "Diagnostic",
    "ElaboratedComponent",
    "Elaborator",
    "Model",
    "ModelPool",
    "ParseError",
    "Phase",
    "SemComponent",
    "Severity",
    "Span",
    "TypeRegistry",
    "check_all",
    "check_model",
    "elaborate",
    "export",
    "format_diagnostics",
    "map_montiarc",
    "map_to_domain",
    "parse_compilation_unit",
    "pretty_print",
    "validate_domain",
]
