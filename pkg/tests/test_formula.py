from dataclasses import FrozenInstanceError
from decimal import Decimal

import pytest
from hypothesis import given

from invariant_data.formula import (
    FALSE,
    TRUE,
    And,
    BigAnd,
    CalendarText,
    Component,
    ComponentState,
    EpochMillis,
    Implies,
    IntTuple,
    Number,
    Occupy3DPoint,
    OccupyNode,
    TimePoint,
    collect,
    count_atoms,
    flatten_bigand,
    is_atom,
    structural_equal,
)
from invariant_data.generators import FestoSpec, TrainsSpec, WeatherSpec, KinectSpec, generate
from invariant_data.text_format import parse
from strategies import formulas

FIRST_TRAIN_FRAME = (
    "IMPLIES(TimePoint(1429188806320),BIGAND(List(OccupyNode(664), OccupyNode(665), "
    "OccupyNode(666), OccupyNode(667), OccupyNode(668), OccupyNode(669), "
    "OccupyNode(670), OccupyNode(671), OccupyNode(672), OccupyNode(1))))"
)


def hand_built_first_frame():
    nodes = [OccupyNode(n) for n in (664, 665, 666, 667, 668, 669, 670, 671, 672, 1)]
    return Implies(TimePoint(EpochMillis(1429188806320)), BigAnd(nodes))


class TestStructuralEqual:
    def test_identity(self):
        assert structural_equal(TRUE, TRUE)

    def test_list_order_matters(self):
        assert not structural_equal(BigAnd([OccupyNode(1), OccupyNode(2)]), BigAnd([OccupyNode(2), OccupyNode(1)]))

    def test_parsed_frame_equals_hand_built(self):
        assert structural_equal(parse(FIRST_TRAIN_FRAME), hand_built_first_frame())

    def test_variant_tag_matters(self):
        assert not structural_equal(And(TRUE, FALSE), Implies(TRUE, FALSE))

    def test_numbers_compare_by_value(self):
        assert Number(Decimal("5.0")) == Number(Decimal("5"))
        assert ComponentState(Number("100.0")) == ComponentState(Number(100))
        assert ComponentState(Number(5)) != ComponentState(IntTuple((5,)))

    @given(formulas)
    def test_reflexive(self, f):
        assert structural_equal(f, f)

    @given(formulas, formulas)
    def test_symmetric(self, a, b):
        assert structural_equal(a, b) == structural_equal(b, a)

    @given(formulas, formulas, formulas)
    def test_transitive(self, a, b, c):
        if structural_equal(a, b) and structural_equal(b, c):
            assert structural_equal(a, c)

    @given(formulas)
    def test_rebuilt_copy_is_equal(self, f):
        # a fresh tree with no shared nodes
        assert structural_equal(parse_copy(f), f)


def parse_copy(f):
    from invariant_data.text_format import unparse

    return parse(unparse(f))


class TestCountAtoms:
    def test_single_atom(self):
        assert count_atoms(TRUE) == 1

    def test_frame_shape(self):
        f = Implies(TimePoint(EpochMillis(0)), BigAnd([OccupyNode(i) for i in range(1, 11)]))
        assert count_atoms(f) == 11

    def test_parsed_train_frame(self):
        assert count_atoms(parse(FIRST_TRAIN_FRAME)) == 11

    def test_empty_list_has_no_atoms(self):
        assert count_atoms(BigAnd([])) == 0


class TestCollect:
    def test_train_nodes_in_order(self):
        nodes = collect(parse(FIRST_TRAIN_FRAME), lambda a: isinstance(a, OccupyNode))
        assert [n.id for n in nodes] == [664, 665, 666, 667, 668, 669, 670, 671, 672, 1]

    def test_no_match(self):
        assert collect(TRUE, lambda a: isinstance(a, TimePoint)) == []

    def test_premise_before_conclusion(self):
        f = Implies(And(TimePoint(EpochMillis(1)), Component("a")), ComponentState(Number(1)))
        assert collect(f, is_atom) == [TimePoint(EpochMillis(1)), Component("a"), ComponentState(Number(1))]

    def test_one_component_per_festo_event(self):
        spec = FestoSpec(seed=3, n_events=200)
        components = collect(generate(spec), lambda a: isinstance(a, Component))
        assert len(components) == spec.n_events

    @given(formulas)
    def test_collect_all_matches_count(self, f):
        assert len(collect(f, lambda a: True)) == count_atoms(f)


class TestFlatten:
    def test_splices_nested(self):
        assert flatten_bigand(BigAnd([BigAnd([TRUE]), FALSE])) == BigAnd([TRUE, FALSE])

    def test_empty_preserved(self):
        assert flatten_bigand(BigAnd([])) == BigAnd([])

    def test_recursive_splice(self):
        f = BigAnd([BigAnd([BigAnd([TRUE]), BigAnd([])]), FALSE])
        assert flatten_bigand(f) == BigAnd([TRUE, FALSE])

    def test_other_structure_untouched(self):
        f = Implies(BigAnd([TRUE]), BigAnd([BigAnd([FALSE])]))
        assert flatten_bigand(f) == Implies(BigAnd([TRUE]), BigAnd([FALSE]))

    @pytest.mark.parametrize(
        "spec",
        [KinectSpec(seed=1, n_points=30, n_colors=40), FestoSpec(seed=1, n_events=60),
         TrainsSpec(seed=1, n_frames=50), WeatherSpec(seed=1, n_samples=50)],
        ids=["kinect", "festo", "trains", "weather"],
    )
    def test_generated_atom_count_unchanged(self, spec):
        f = generate(spec)
        assert count_atoms(flatten_bigand(f)) == count_atoms(f)

    @given(formulas)
    def test_atom_count_preserved(self, f):
        assert count_atoms(flatten_bigand(f)) == count_atoms(f)

    @given(formulas)
    def test_idempotent(self, f):
        once = flatten_bigand(f)
        assert flatten_bigand(once) == once


class TestConstructors:
    def test_node_ids_start_at_one(self):
        with pytest.raises(ValueError):
            OccupyNode(0)

    def test_int_tuple_length(self):
        with pytest.raises(ValueError):
            IntTuple((1, 2, 3, 4))
        with pytest.raises(ValueError):
            IntTuple(())

    def test_calendar_text_rejects_digits(self):
        with pytest.raises(ValueError):
            CalendarText("1429188806320")

    def test_calendar_text_rejects_unbalanced(self):
        with pytest.raises(ValueError):
            CalendarText("Wed )(")

    def test_negative_coordinates(self):
        assert Occupy3DPoint(-1, 1, 2).x == -1

    def test_lists_become_tuples(self):
        assert BigAnd([TRUE]).items == (TRUE,)
        assert IntTuple([1, 2]).values == (1, 2)

    def test_immutable(self):
        with pytest.raises(FrozenInstanceError):
            OccupyNode(3).id = 4  # type: ignore[misc]
