"""Formula datasets: the term format, archives, registry, schemas and generators."""

from invariant_data.formula import (
    FALSE,
    TRUE,
    And,
    BigAnd,
    BigOr,
    CalendarText,
    Component,
    ComponentState,
    EpochMillis,
    Formula,
    Implies,
    IntTuple,
    Not,
    Number,
    Occupy3DPoint,
    OccupyNode,
    Or,
    Owner,
    Text,
    TimePoint,
    collect,
    count_atoms,
    flatten_bigand,
    structural_equal,
)
from invariant_data.registry import Registry, default_registry
from invariant_data.schemas import Collection, SchemaReport, detect_schema, validate
from invariant_data.store import ArchiveStore, CorruptArchiveError, DatasetName, UnknownDatasetError
from invariant_data.text_format import ParseError, parse, unparse

__version__ = "0.1.0"

__all__ = [
    "FALSE",
    "TRUE",
    "And",
    "ArchiveStore",
    "BigAnd",
    "BigOr",
    "CalendarText",
    "Collection",
    "Component",
    "ComponentState",
    "CorruptArchiveError",
    "DatasetName",
    "EpochMillis",
    "Formula",
    "Implies",
    "IntTuple",
    "Not",
    "Number",
    "Occupy3DPoint",
    "OccupyNode",
    "Or",
    "Owner",
    "ParseError",
    "Registry",
    "SchemaReport",
    "Text",
    "TimePoint",
    "UnknownDatasetError",
    "collect",
    "count_atoms",
    "default_registry",
    "detect_schema",
    "flatten_bigand",
    "parse",
    "structural_equal",
    "unparse",
    "validate",
]
