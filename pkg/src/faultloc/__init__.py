"""Interactive fault localization for propositional knowledge bases."""

from .logic import (
    Atom,
    Axiom,
    Formula,
    KBParseError,
    LogicError,
    ResourceLimitError,
    entails,
    is_consistent,
    parse_formula,
    parse_kb,
)
from .fpi import (
    FPI,
    Diagnosis,
    FPIError,
    TestCase,
    add_test_case,
    check_requirements,
    is_minimal_diagnosis,
)

__all__ = [
    "Atom",
    "Axiom",
    "Formula",
    "KBParseError",
    "LogicError",
    "ResourceLimitError",
    "entails",
    "is_consistent",
    "parse_formula",
    "parse_kb",
    "FPI",
    "Diagnosis",
    "FPIError",
    "TestCase",
    "add_test_case",
    "check_requirements",
    "is_minimal_diagnosis",
]
