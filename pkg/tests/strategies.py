"""Hypothesis strategies for formula trees."""

from __future__ import annotations

import string
from decimal import Decimal

from hypothesis import strategies as st

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
)

ints = st.integers(min_value=-(10**6), max_value=10**6)
labels = st.text(min_size=0, max_size=12)
plain_labels = st.text(alphabet=string.ascii_letters + string.digits + "_", min_size=1, max_size=12)

calendar_texts = (
    st.text(alphabet=string.ascii_letters + string.digits + " :-,.+", min_size=1, max_size=30)
    .map(str.strip)
    .filter(lambda s: s and not s.isdigit())
)
bracketed_calendar = st.tuples(calendar_texts, calendar_texts).map(lambda p: f"{p[0]} ({p[1]})")

timestamps = st.one_of(
    st.builds(EpochMillis, st.integers(min_value=0, max_value=2**63)),
    st.builds(CalendarText, calendar_texts | bracketed_calendar),
)

numbers = st.builds(
    Number,
    st.decimals(allow_nan=False, allow_infinity=False, places=2, min_value=-(10**6), max_value=10**6)
    | st.integers(min_value=-(10**6), max_value=10**6).map(Decimal),
)
state_values = st.one_of(
    numbers,
    st.builds(IntTuple, st.lists(ints, min_size=1, max_size=3).map(tuple)),
    st.builds(Text, labels | plain_labels),
)

atoms = st.one_of(
    st.just(TRUE),
    st.just(FALSE),
    st.builds(TimePoint, timestamps),
    st.builds(Owner, labels | plain_labels),
    st.builds(Component, labels | plain_labels),
    st.builds(ComponentState, state_values),
    st.builds(Occupy3DPoint, ints, ints, ints),
    st.builds(OccupyNode, st.integers(min_value=1, max_value=10**6)),
)


def _extend(children):
    return st.one_of(
        st.builds(And, children, children),
        st.builds(Or, children, children),
        st.builds(Not, children),
        st.builds(Implies, children, children),
        st.builds(BigAnd, st.lists(children, max_size=4).map(tuple)),
        st.builds(BigOr, st.lists(children, max_size=4).map(tuple)),
    )


formulas = st.recursive(atoms, _extend, max_leaves=30)
