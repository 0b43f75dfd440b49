"""Mapping schemas: assign inputs to capacity-bounded reducers so required pairs meet."""
from .core import (CostReport, DomainError, InfeasibleInstanceError, InfeasibleStrategyError,
                   InputItem, Instance, MalformedSchemaError, MappingSchema, MappingSchemaError,
                   NoDecompositionError, ProblemKind, Reducer, ValidationReport, WrongStrategyError,
                   a2a_instance, cost_report, unit_instance, validate, validate_a2a, validate_x2y,
                   x2y_instance)

__all__ = [
    "CostReport", "DomainError", "InfeasibleInstanceError", "InfeasibleStrategyError",
    "InputItem", "Instance", "MalformedSchemaError", "MappingSchema", "MappingSchemaError",
    "NoDecompositionError", "ProblemKind", "Reducer", "ValidationReport", "WrongStrategyError",
    "a2a_instance", "cost_report", "unit_instance", "validate", "validate_a2a", "validate_x2y",
    "x2y_instance",
]
