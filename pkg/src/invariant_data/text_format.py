"""Reading and writing the term-language text form of formulas.

The format is the one datasets are dumped in, e.g.::

    BIGAND(List(
        IMPLIES(TimePoint(1429188806320),BIGAND(List(OccupyNode(664), OccupyNode(665)))),
        IMPLIES(AND(TimePoint(Wed Jul 27 09:11:28 UTC 2016),Component(stackEjectorExtendSol)),ComponentState(5.0))
    ))

:func:`parse` accepts the loose spellings found in real dumps (quoted or bare
labels, ``ComponentState(0,0)`` as well as ``ComponentState((0,0))``,
arbitrary whitespace). :func:`unparse` always writes one canonical style, and
``parse(unparse(f)) == f`` holds for every formula.
"""

from __future__ import annotations

import re
from collections.abc import Callable
from dataclasses import dataclass
from decimal import Decimal

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
    FalseAtom,
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
    TrueAtom,
    gc_paused,
)

__all__ = ["ParseError", "SourceSpan", "parse", "unparse"]


@dataclass(frozen=True, slots=True)
class SourceSpan:
    start_offset: int
    end_offset: int

    def __post_init__(self) -> None:
        if not 0 <= self.start_offset <= self.end_offset:
            raise ValueError(f"bad span {self.start_offset}..{self.end_offset}")


class ParseError(ValueError):
    """Malformed input. ``span`` points at the offending text."""

    def __init__(self, span: SourceSpan, expected: str, found: str, source: str = "") -> None:
        self.span = span
        self.expected = expected
        self.found = found
        where = f"offset {span.start_offset}"
        if source:
            line = source.count("\n", 0, span.start_offset) + 1
            col = span.start_offset - (source.rfind("\n", 0, span.start_offset) + 1) + 1
            where += f" (line {line}, column {col})"
        super().__init__(f"expected {expected}, found {found} at {where}")


_WS = re.compile(r"\s*")
_NAME = re.compile(r"\s*([A-Za-z_][A-Za-z0-9_]*)")
_TOKEN = re.compile(r"\.\.\.|[A-Za-z0-9_.\-]+|\S")
_OPEN = re.compile(r"\s*\(")
_CLOSE = re.compile(r"\s*\)")
_COMMA = re.compile(r"\s*,")
_SEP = re.compile(r"\s*([,)])")
_EMPTY_ARGS = re.compile(r"\s*\(\s*\)")
_LIST_OPEN = re.compile(r"\s*List\s*\(")

_INT = r"-?\d+"
_INTS = rf"{_INT}(?:\s*,\s*{_INT})*"
_STATE_NESTED = re.compile(rf"\s*\(\s*\(\s*({_INTS})\s*\)\s*\)")
_STATE_FLAT = re.compile(rf"\s*\(\s*({_INTS})\s*\)")
# a whole ``ComponentState((a,b,c))`` list item plus its trailing separator
_STATE_ITEM = re.compile(rf"\s*ComponentState\s*\(\s*\(\s*({_INTS})\s*\)\s*\)\s*([,)])")
_STATE_DECIMAL = re.compile(r"\s*\(\s*(-?\d+\.\d+)\s*\)")
_POINT3 = re.compile(rf"\s*\(\s*({_INT})\s*,\s*({_INT})\s*,\s*({_INT})\s*\)")
_NODE = re.compile(rf"\s*\(\s*({_INT})\s*\)")
_QUOTED = re.compile(r'\s*"((?:[^"\\]|\\.)*)"')
_BARE = re.compile(r'\s*([^()",]+)')
_UNESCAPE = re.compile(r"\\(.)", re.DOTALL)

_PLAIN_LABEL = re.compile(r"[A-Za-z0-9_]+")
_NUMERIC = re.compile(r"-?\d+(?:\.\d+)?")


class _Parser:
    def __init__(self, text: str) -> None:
        self.text = text
        # equal state atoms recur constantly in scans; share one instance
        self.states: dict[str, ComponentState] = {}
        self.handlers: dict[str, Callable[[int], tuple[Formula, int]]] = {
            "ComponentState": self._state,
            "Occupy3DPoint": self._point3,
            "IMPLIES": self._implies,
            "OccupyNode": self._node,
            "BIGAND": self._bigand,
            "TimePoint": self._timepoint,
            "AND": self._and,
            "Owner": self._owner,
            "Component": self._component,
            "OR": self._or,
            "NOT": self._not,
            "BIGOR": self._bigor,
            "TRUE": self._true,
            "FALSE": self._false,
        }

    # -- error helpers ---------------------------------------------------------

    def fail(self, pos: int, expected: str) -> ParseError:
        text = self.text
        pos = _WS.match(text, pos).end()
        if pos >= len(text):
            return ParseError(SourceSpan(len(text), len(text)), expected, "end of input", text)
        m = _TOKEN.match(text, pos)
        return ParseError(SourceSpan(pos, m.end()), expected, repr(m.group()), text)

    def expect(self, pattern: re.Pattern[str], pos: int, expected: str) -> int:
        m = pattern.match(self.text, pos)
        if m is None:
            raise self.fail(pos, expected)
        return m.end()

    # -- entry points ----------------------------------------------------------

    def document(self) -> Formula:
        f, pos = self.term(0)
        pos = _WS.match(self.text, pos).end()
        if pos != len(self.text):
            raise self.fail(pos, "end of input")
        return f

    def term(self, pos: int) -> tuple[Formula, int]:
        m = _NAME.match(self.text, pos)
        if m is None:
            raise self.fail(pos, "constructor name")
        handler = self.handlers.get(m.group(1))
        if handler is None:
            raise ParseError(
                SourceSpan(m.start(1), m.end(1)),
                "constructor name",
                f"unknown constructor {m.group(1)!r}",
                self.text,
            )
        return handler(m.end())

    # -- connectives -----------------------------------------------------------

    def _pair(self, pos: int) -> tuple[Formula, Formula, int]:
        pos = self.expect(_OPEN, pos, "'('")
        left, pos = self.term(pos)
        pos = self.expect(_COMMA, pos, "','")
        right, pos = self.term(pos)
        pos = self.expect(_CLOSE, pos, "')'")
        return left, right, pos

    def _implies(self, pos: int) -> tuple[Formula, int]:
        premise, conclusion, pos = self._pair(pos)
        return Implies(premise, conclusion), pos

    def _and(self, pos: int) -> tuple[Formula, int]:
        left, right, pos = self._pair(pos)
        return And(left, right), pos

    def _or(self, pos: int) -> tuple[Formula, int]:
        left, right, pos = self._pair(pos)
        return Or(left, right), pos

    def _not(self, pos: int) -> tuple[Formula, int]:
        pos = self.expect(_OPEN, pos, "'('")
        inner, pos = self.term(pos)
        return Not(inner), self.expect(_CLOSE, pos, "')'")

    def _items(self, pos: int) -> tuple[list[Formula], int]:
        """Parse ``term, term, ...)`` up to and including the closing paren."""
        text = self.text
        items: list[Formula] = []
        m = _CLOSE.match(text, pos)
        if m is not None:
            return items, m.end()
        term, append = self.term, items.append
        states = self.states
        fast = _STATE_ITEM.match
        while True:
            m = fast(text, pos)
            if m is not None:
                raw = m.group(1)
                state = states.get(raw)
                if state is None:
                    state = states[raw] = ComponentState(IntTuple(_ints(raw, self, m.start(1))))
                append(state)
                pos = m.end()
                if m.group(2) == ")":
                    return items, pos
                continue
            item, pos = term(pos)
            append(item)
            m = _SEP.match(text, pos)
            if m is None:
                raise self.fail(pos, "',' or ')'")
            pos = m.end()
            if m.group(1) == ")":
                return items, pos

    def _list(self, pos: int) -> tuple[list[Formula], int]:
        pos = self.expect(_OPEN, pos, "'('")
        m = _LIST_OPEN.match(self.text, pos)
        if m is None:
            return self._items(pos)
        items, pos = self._items(m.end())
        return items, self.expect(_CLOSE, pos, "')'")

    def _bigand(self, pos: int) -> tuple[Formula, int]:
        items, pos = self._list(pos)
        return BigAnd(tuple(items)), pos

    def _bigor(self, pos: int) -> tuple[Formula, int]:
        items, pos = self._list(pos)
        return BigOr(tuple(items)), pos

    # -- atoms -----------------------------------------------------------------

    def _true(self, pos: int) -> tuple[Formula, int]:
        m = _EMPTY_ARGS.match(self.text, pos)
        return TRUE, pos if m is None else m.end()

    def _false(self, pos: int) -> tuple[Formula, int]:
        m = _EMPTY_ARGS.match(self.text, pos)
        return FALSE, pos if m is None else m.end()

    def _node(self, pos: int) -> tuple[Formula, int]:
        m = _NODE.match(self.text, pos)
        if m is None:
            raise self.fail(pos, "'(' integer ')'")
        node_id = int(m.group(1))
        if node_id < 1:
            raise ParseError(SourceSpan(m.start(1), m.end(1)), "node id >= 1", m.group(1), self.text)
        return OccupyNode(node_id), m.end()

    def _point3(self, pos: int) -> tuple[Formula, int]:
        m = _POINT3.match(self.text, pos)
        if m is None:
            raise self.fail(pos, "'(' x ',' y ',' z ')' with integer coordinates")
        return Occupy3DPoint(int(m.group(1)), int(m.group(2)), int(m.group(3))), m.end()

    def _state(self, pos: int) -> tuple[Formula, int]:
        text = self.text
        m = _STATE_NESTED.match(text, pos)
        if m is not None:
            raw = m.group(1)
            state = self.states.get(raw)
            if state is None:
                state = self.states[raw] = ComponentState(IntTuple(_ints(raw, self, m.start(1))))
            return state, m.end()
        m = _STATE_FLAT.match(text, pos)
        if m is not None:
            raw = m.group(1)
            key = "=" + raw
            state = self.states.get(key)
            if state is None:
                if "," in raw:
                    state = ComponentState(IntTuple(_ints(raw, self, m.start(1))))
                else:
                    state = ComponentState(Number(Decimal(raw)))
                self.states[key] = state
            return state, m.end()
        m = _STATE_DECIMAL.match(text, pos)
        if m is not None:
            return ComponentState(Number(Decimal(m.group(1)))), m.end()
        label, pos = self._label(pos, "state value")
        return ComponentState(Text(label)), pos

    def _label(self, pos: int, what: str) -> tuple[str, int]:
        pos = self.expect(_OPEN, pos, "'('")
        text = self.text
        m = _QUOTED.match(text, pos)
        if m is not None:
            label = _UNESCAPE.sub(r"\1", m.group(1))
        else:
            m = _BARE.match(text, pos)
            label = m.group(1).strip() if m is not None else ""
            if not label:
                raise self.fail(pos, what)
        return label, self.expect(_CLOSE, m.end(), "')'")

    def _owner(self, pos: int) -> tuple[Formula, int]:
        label, pos = self._label(pos, "owner label")
        return Owner(label), pos

    def _component(self, pos: int) -> tuple[Formula, int]:
        label, pos = self._label(pos, "component label")
        return Component(label), pos

    def _timepoint(self, pos: int) -> tuple[Formula, int]:
        text = self.text
        start = self.expect(_OPEN, pos, "'('")
        depth, i, n = 1, start, len(text)
        while i < n:
            ch = text[i]
            if ch == ")":
                depth -= 1
                if depth == 0:
                    break
            elif ch == "(":
                depth += 1
            i += 1
        else:
            raise ParseError(SourceSpan(start, n), "')' closing TimePoint", "end of input", text)
        raw = text[start:i].strip()
        if not raw:
            raise self.fail(start, "timestamp")
        stamp = EpochMillis(int(raw)) if raw.isdigit() else CalendarText(raw)
        return TimePoint(stamp), i + 1


def _ints(raw: str, parser: _Parser, offset: int) -> tuple[int, ...]:
    values = tuple(int(v) for v in raw.split(","))
    if len(values) > 3:
        raise ParseError(
            SourceSpan(offset, offset + len(raw)), "at most three integers", repr(raw), parser.text
        )
    return values


def parse(text: str) -> Formula:
    """Parse one formula; raise :class:`ParseError` on malformed input."""
    with gc_paused():
        return _Parser(text).document()


# -- printing -------------------------------------------------------------------


def _quote(label: str) -> str:
    return '"' + label.replace("\\", "\\\\").replace('"', '\\"') + '"'


def _label_text(label: str) -> str:
    return label if _PLAIN_LABEL.fullmatch(label) else _quote(label)


def _state_text(state: ComponentState) -> str:
    value = state.value
    cls = type(value)
    if cls is IntTuple:
        return "ComponentState((" + ",".join(map(str, value.values)) + "))"
    if cls is Number:
        return f"ComponentState({value.value:f})"
    label = value.value
    if _PLAIN_LABEL.fullmatch(label) and not _NUMERIC.fullmatch(label):
        return f"ComponentState({label})"
    return f"ComponentState({_quote(label)})"


def _write(f: Formula, out: list[str], memo: dict[int, str]) -> None:
    cls = type(f)
    if cls is ComponentState:
        # shared state instances (see the parser's cache) render once
        text = memo.get(id(f))
        if text is None:
            text = memo[id(f)] = _state_text(f)
        out.append(text)
    elif cls is Implies:
        out.append("IMPLIES(")
        _write(f.premise, out, memo)
        out.append(",")
        _write(f.conclusion, out, memo)
        out.append(")")
    elif cls is BigAnd or cls is BigOr:
        out.append("BIGAND(List(" if cls is BigAnd else "BIGOR(List(")
        first = True
        for item in f.items:
            if not first:
                out.append(", ")
            first = False
            _write(item, out, memo)
        out.append("))")
    elif cls is Occupy3DPoint:
        out.append(f"Occupy3DPoint({f.x},{f.y},{f.z})")
    elif cls is OccupyNode:
        out.append(f"OccupyNode({f.id})")
    elif cls is TimePoint:
        stamp = f.value
        raw = str(stamp.millis) if type(stamp) is EpochMillis else stamp.raw
        out.append(f"TimePoint({raw})")
    elif cls is And or cls is Or:
        out.append("AND(" if cls is And else "OR(")
        _write(f.left, out, memo)
        out.append(",")
        _write(f.right, out, memo)
        out.append(")")
    elif cls is Not:
        out.append("NOT(")
        _write(f.inner, out, memo)
        out.append(")")
    elif cls is Owner:
        out.append(f"Owner({_label_text(f.label)})")
    elif cls is Component:
        out.append(f"Component({_label_text(f.label)})")
    elif cls is TrueAtom:
        out.append("TRUE()")
    elif cls is FalseAtom:
        out.append("FALSE()")
    else:
        raise TypeError(f"not a formula node: {f!r}")


def unparse(f: Formula) -> str:
    """Render ``f`` in canonical text form (single line)."""
    out: list[str] = []
    _write(f, out, {})
    return "".join(out)
