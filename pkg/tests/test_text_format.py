import re
from decimal import Decimal

import pytest
from hypothesis import given
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
from invariant_data.generators import FestoSpec, KinectSpec, TrainsSpec, WeatherSpec, generate
from invariant_data.text_format import ParseError, parse, unparse
from strategies import formulas

from conftest import COLLECTIONS


class TestParse:
    def test_point_with_bare_pair(self):
        f = parse("IMPLIES(Occupy3DPoint(-1,1,2),ComponentState(0,0))")
        assert f == Implies(Occupy3DPoint(-1, 1, 2), ComponentState(IntTuple((0, 0))))

    def test_true(self):
        assert parse("TRUE()") == TRUE
        assert parse("TRUE") == TRUE
        assert parse("FALSE()") == FALSE

    def test_festo_fixture_shape(self, fixture_texts):
        f = parse(fixture_texts["festo"])
        # oracle: count events straight off the text
        expected = len(re.findall(r"IMPLIES\(AND\(TimePoint\(", fixture_texts["festo"]))
        assert expected == 28
        assert isinstance(f, BigAnd) and len(f.items) == expected
        for event in f.items:
            assert isinstance(event, Implies)
            assert isinstance(event.premise, And)
            assert isinstance(event.premise.left, TimePoint)
            assert isinstance(event.premise.right, Component)

    @pytest.mark.parametrize("collection", COLLECTIONS)
    def test_fixtures_parse(self, fixture_texts, collection):
        parse(fixture_texts[collection])

    def test_quoted_and_bare_labels_agree(self):
        assert parse('Owner("Points")') == parse("Owner(Points)") == Owner("Points")
        assert parse("Component(stackEjectorExtendSol)") == Component("stackEjectorExtendSol")

    def test_tuple_spellings_agree(self):
        assert parse("ComponentState(0,0)") == parse("ComponentState((0,0))") == parse("ComponentState( ( 0 , 0 ) )")

    def test_state_kinds(self):
        assert parse("ComponentState(5.0)") == ComponentState(Number(Decimal("5.0")))
        assert parse("ComponentState(770)") == ComponentState(Number(Decimal(770)))
        assert parse("ComponentState((770))") == ComponentState(IntTuple((770,)))
        assert parse("ComponentState((41,49,39))") == ComponentState(IntTuple((41, 49, 39)))
        assert parse("ComponentState(melbourne)") == ComponentState(Text("melbourne"))
        assert parse('ComponentState("770")') == ComponentState(Text("770"))

    def test_timestamps(self):
        assert parse("TimePoint(1429188806320)") == TimePoint(EpochMillis(1429188806320))
        raw = "Wed Jul 27 09:11:28 UTC 2016"
        assert parse(f"TimePoint({raw})") == TimePoint(CalendarText(raw))
        assert parse("TimePoint(1st December 201511:04AM)").value.raw == "1st December 201511:04AM"

    def test_calendar_text_with_balanced_parens(self):
        assert parse("TimePoint(noon (local))").value.raw == "noon (local)"

    def test_whitespace_insignificant(self):
        compact = "BIGAND(List(IMPLIES(TimePoint(1),BIGAND(List(OccupyNode(1))))))"
        spaced = " BIGAND ( List (\n  IMPLIES ( TimePoint(1) ,\n BIGAND(List( OccupyNode( 1 ) )) ) ) )\n"
        assert parse(spaced) == parse(compact)

    def test_list_keyword_optional(self):
        assert parse("BIGAND(TRUE(), FALSE())") == parse("BIGAND(List(TRUE(), FALSE()))")
        assert parse("BIGOR(List())") == BigOr(())

    def test_connectives(self):
        f = parse("OR(NOT(TRUE()),FALSE())")
        assert f == Or(Not(TRUE), FALSE)


class TestParseErrors:
    @pytest.mark.parametrize(
        "text",
        [
            "BIGAND(List(TRUE(),))",
            "BIGAND(List(TRUE(), ...))",
            "IMPLIES(TRUE()",
            "",
            "TRUE() TRUE()",
            "OccupyNode(0)",
            "Occupy3DPoint(1.5,2,3)",
            "ComponentState((1,2,3,4))",
            "TimePoint()",
            "TimePoint(abc",
            "Owner()",
        ],
    )
    def test_rejected(self, text):
        with pytest.raises(ParseError) as info:
            parse(text)
        span = info.value.span
        assert 0 <= span.start_offset <= span.end_offset <= len(text)

    def test_unknown_constructor_named(self):
        with pytest.raises(ParseError) as info:
            parse("BIGAND(List(TRUE(), Frobnicate(1)))")
        assert "Frobnicate" in str(info.value)
        assert info.value.span.start_offset == 20

    def test_ellipsis_reported_where_it_occurs(self):
        text = "BIGAND(List(OccupyNode(1),\n ...\n))"
        with pytest.raises(ParseError) as info:
            parse(text)
        assert info.value.found == "'...'"
        assert info.value.span.start_offset == text.index("...")
        assert "line 2" in str(info.value)

    def test_deepest_position(self):
        text = "BIGAND(List(IMPLIES(TimePoint(1),BIGAND(List(OccupyNode(1) OccupyNode(2))))))"
        with pytest.raises(ParseError) as info:
            parse(text)
        assert info.value.span.start_offset == text.index(" OccupyNode(2)") + 1
        assert info.value.expected == "',' or ')'"


class TestUnparse:
    def test_rgb_tuple(self):
        assert unparse(ComponentState(IntTuple((41, 49, 39)))) == "ComponentState((41,49,39))"

    def test_empty_bigand(self):
        assert unparse(BigAnd([])) == "BIGAND(List())"

    def test_list_style(self):
        assert unparse(BigAnd([OccupyNode(1), OccupyNode(2)])) == "BIGAND(List(OccupyNode(1), OccupyNode(2)))"

    def test_number_spelling_kept(self):
        assert unparse(ComponentState(Number(Decimal("5.0")))) == "ComponentState(5.0)"
        assert unparse(ComponentState(Number(Decimal("100.0")))) == "ComponentState(100.0)"
        assert unparse(ComponentState(Number(Decimal("770")))) == "ComponentState(770)"

    def test_label_quoting(self):
        assert unparse(Owner("Points")) == "Owner(Points)"
        assert unparse(Owner("two words")) == 'Owner("two words")'
        assert unparse(Owner('say "hi"')) == r'Owner("say \"hi\"")'
        assert unparse(ComponentState(Text("770"))) == 'ComponentState("770")'

    def test_calendar_text_verbatim(self):
        raw = "Wed Jul 27 09:11:28 UTC 2016"
        assert unparse(TimePoint(CalendarText(raw))) == f"TimePoint({raw})"

    def test_weather_fixture_round_trip(self, fixture_texts):
        f = parse(fixture_texts["weather"])
        assert parse(unparse(f)) == f


class TestRoundTrip:
    @given(formulas)
    def test_parse_unparse_identity(self, f):
        assert parse(unparse(f)) == f

    @given(
        st.sampled_from(["kinect", "festo", "trains", "weather"]),
        st.integers(min_value=0, max_value=2**64 - 1),
        st.integers(min_value=0, max_value=40),
    )
    def test_generator_outputs(self, collection, seed, size):
        spec = {
            "kinect": lambda: KinectSpec(seed=seed, n_points=size, n_colors=size),
            "festo": lambda: FestoSpec(seed=seed, n_events=size),
            "trains": lambda: TrainsSpec(seed=seed, n_frames=size),
            "weather": lambda: WeatherSpec(seed=seed, n_samples=size),
        }[collection]()
        f = generate(spec)
        assert parse(unparse(f)) == f

    @pytest.mark.parametrize("collection", COLLECTIONS)
    def test_reprint_stable(self, fixture_texts, collection):
        once = unparse(parse(fixture_texts[collection]))
        assert unparse(parse(once)) == once
