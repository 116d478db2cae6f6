"""Immutable formula trees and the structural utilities shared by every module.

A dataset is one formula. Connectives (``And``, ``Implies``, ``BigAnd`` ...)
combine atoms such as ``TimePoint``, ``Component`` or ``OccupyNode``. All
nodes are frozen dataclasses, so ``==`` is structural equality and trees can
be shared freely between threads.
"""

from __future__ import annotations

import gc
from collections.abc import Callable, Iterable, Iterator
from contextlib import contextmanager
from dataclasses import dataclass
from decimal import Decimal
from typing import Union

__all__ = [
    "And",
    "BigAnd",
    "BigOr",
    "CalendarText",
    "Component",
    "ComponentState",
    "EpochMillis",
    "FALSE",
    "FalseAtom",
    "Formula",
    "Implies",
    "IntTuple",
    "Not",
    "Number",
    "Occupy3DPoint",
    "OccupyNode",
    "Or",
    "Owner",
    "StateValue",
    "Text",
    "TimePoint",
    "Timestamp",
    "TRUE",
    "TrueAtom",
    "collect",
    "count_atoms",
    "flatten_bigand",
    "gc_paused",
    "is_atom",
    "iter_atoms",
    "structural_equal",
]


# -- timestamps ---------------------------------------------------------------


@dataclass(frozen=True, slots=True)
class EpochMillis:
    millis: int

    def __post_init__(self) -> None:
        if type(self.millis) is not int or self.millis < 0:
            raise ValueError(f"epoch millis must be a non-negative int, got {self.millis!r}")


@dataclass(frozen=True, slots=True)
class CalendarText:
    """A calendar timestamp kept exactly as written, e.g. ``Wed Jul 27 09:11:28 UTC 2016``."""

    raw: str

    def __post_init__(self) -> None:
        raw = self.raw
        if not raw or raw != raw.strip():
            raise ValueError(f"calendar text must be non-empty without surrounding blanks: {raw!r}")
        if raw.isdigit():
            raise ValueError(f"all-digit timestamps are EpochMillis, not calendar text: {raw!r}")
        depth = 0
        for ch in raw:
            if ch == "(":
                depth += 1
            elif ch == ")":
                depth -= 1
                if depth < 0:
                    break
        if depth != 0:
            raise ValueError(f"unbalanced parentheses in calendar text: {raw!r}")


Timestamp = Union[EpochMillis, CalendarText]


# -- state values ---------------------------------------------------------------


@dataclass(frozen=True, slots=True)
class Number:
    """A decimal signal level.

    Equality is numeric (``Number("5.0") == Number("5")``); the stored
    :class:`~decimal.Decimal` keeps the source spelling for printing.
    """

    value: Decimal

    def __post_init__(self) -> None:
        value = self.value
        if not isinstance(value, Decimal):
            value = Decimal(str(value)) if isinstance(value, float) else Decimal(value)
            object.__setattr__(self, "value", value)
        if not value.is_finite():
            raise ValueError(f"number must be finite, got {value!r}")


@dataclass(frozen=True, slots=True)
class IntTuple:
    values: tuple[int, ...]

    def __post_init__(self) -> None:
        values = self.values
        if type(values) is not tuple:
            values = tuple(values)
            object.__setattr__(self, "values", values)
        if not 1 <= len(values) <= 3:
            raise ValueError(f"int tuple must have 1..3 members, got {len(values)}")


@dataclass(frozen=True, slots=True)
class Text:
    value: str


StateValue = Union[Number, IntTuple, Text]


# -- connectives ----------------------------------------------------------------


@dataclass(frozen=True, slots=True)
class And:
    left: Formula
    right: Formula


@dataclass(frozen=True, slots=True)
class Or:
    left: Formula
    right: Formula


@dataclass(frozen=True, slots=True)
class Not:
    inner: Formula


@dataclass(frozen=True, slots=True)
class Implies:
    premise: Formula
    conclusion: Formula


@dataclass(frozen=True, slots=True)
class BigAnd:
    items: tuple[Formula, ...] = ()

    def __post_init__(self) -> None:
        if type(self.items) is not tuple:
            object.__setattr__(self, "items", tuple(self.items))


@dataclass(frozen=True, slots=True)
class BigOr:
    items: tuple[Formula, ...] = ()

    def __post_init__(self) -> None:
        if type(self.items) is not tuple:
            object.__setattr__(self, "items", tuple(self.items))


# -- atoms ------------------------------------------------------------------------


@dataclass(frozen=True, slots=True)
class TrueAtom:
    pass


@dataclass(frozen=True, slots=True)
class FalseAtom:
    pass


TRUE = TrueAtom()
FALSE = FalseAtom()


@dataclass(frozen=True, slots=True)
class TimePoint:
    value: Timestamp


@dataclass(frozen=True, slots=True)
class Owner:
    label: str


@dataclass(frozen=True, slots=True)
class Component:
    label: str


@dataclass(frozen=True, slots=True)
class ComponentState:
    value: StateValue


@dataclass(frozen=True, slots=True)
class Occupy3DPoint:
    x: int
    y: int
    z: int


@dataclass(frozen=True, slots=True)
class OccupyNode:
    id: int

    def __post_init__(self) -> None:
        if self.id < 1:
            raise ValueError(f"track node ids start at 1, got {self.id}")


Formula = Union[
    And, Or, Not, Implies, BigAnd, BigOr,
    TrueAtom, FalseAtom, TimePoint, Owner, Component, ComponentState,
    Occupy3DPoint, OccupyNode,
]

ATOM_TYPES = (TrueAtom, FalseAtom, TimePoint, Owner, Component, ComponentState, Occupy3DPoint, OccupyNode)
_BINARY = (And, Or)


@contextmanager
def gc_paused() -> Iterator[None]:
    """Suspend the cyclic collector while building large trees.

    Formula trees are acyclic, so collection passes triggered by millions of
    fresh nodes only cost time.
    """
    was_enabled = gc.isenabled()
    gc.disable()
    try:
        yield
    finally:
        if was_enabled:
            gc.enable()


def is_atom(f: Formula) -> bool:
    return isinstance(f, ATOM_TYPES)


def _children(f: Formula) -> tuple[Formula, ...]:
    cls = type(f)
    if cls is BigAnd or cls is BigOr:
        return f.items
    if cls is Implies:
        return (f.premise, f.conclusion)
    if cls is And or cls is Or:
        return (f.left, f.right)
    if cls is Not:
        return (f.inner,)
    return ()


def iter_atoms(f: Formula) -> Iterator[Formula]:
    """Yield leaves depth-first, left to right (premise before conclusion)."""
    stack: list[Formula] = [f]
    pop, extend = stack.pop, stack.extend
    while stack:
        node = pop()
        children = _children(node)
        if children:
            extend(reversed(children))
        elif isinstance(node, ATOM_TYPES):
            yield node


def structural_equal(a: Formula, b: Formula) -> bool:
    return a == b


def count_atoms(f: Formula) -> int:
    count = 0
    stack: list[Formula] = [f]
    while stack:
        node = stack.pop()
        children = _children(node)
        if children:
            stack.extend(children)
        elif isinstance(node, ATOM_TYPES):
            count += 1
    return count


def collect(f: Formula, predicate: Callable[[Formula], bool]) -> list[Formula]:
    return [atom for atom in iter_atoms(f) if predicate(atom)]


def _splice(items: Iterable[Formula]) -> Iterator[Formula]:
    for item in items:
        if type(item) is BigAnd:
            yield from _splice(item.items)
        else:
            yield flatten_bigand(item)


def flatten_bigand(f: Formula) -> Formula:
    """Splice BigAnd lists nested directly inside a BigAnd, everywhere in the tree.

    Nothing else is rewritten; in particular empty inner conjunctions vanish
    but an empty outer one is kept.
    """
    cls = type(f)
    if cls is BigAnd:
        return BigAnd(tuple(_splice(f.items)))
    if cls is BigOr:
        return BigOr(tuple(flatten_bigand(i) for i in f.items))
    if cls is Implies:
        return Implies(flatten_bigand(f.premise), flatten_bigand(f.conclusion))
    if cls in _BINARY:
        return cls(flatten_bigand(f.left), flatten_bigand(f.right))
    if cls is Not:
        return Not(flatten_bigand(f.inner))
    return f
