"""Read-side helpers: time series and summaries from collection-shaped formulas."""

from __future__ import annotations

import bisect
from dataclasses import dataclass
from decimal import Decimal

from invariant_data.formula import (
    EpochMillis,
    IntTuple,
    Formula,
    Occupy3DPoint,
    StateValue,
    Timestamp,
)
from invariant_data.schemas import Collection, detect_schema, validate

__all__ = [
    "EventSample",
    "NotADatasetError",
    "component_series",
    "occupancy_at",
    "point_cloud_bounds",
    "time_points",
    "uv_series",
]

_ONE_DECIMAL = Decimal("0.1")


class NotADatasetError(ValueError):
    pass


@dataclass(frozen=True)
class EventSample:
    time: Timestamp
    component: str
    value: StateValue


def _require(f: Formula, collection: Collection) -> None:
    report = validate(f, collection)
    if not report.valid:
        raise NotADatasetError(f"not a valid {collection.value} dataset: {report.violations[0]}")


def time_points(f: Formula) -> list[Timestamp]:
    """Premise timestamps in document order, duplicates kept."""
    collection = detect_schema(f)
    if collection is None:
        raise NotADatasetError("formula does not match exactly one collection schema")
    if collection is Collection.KINECT:
        return [f.premise.value]
    if collection is Collection.FESTO:
        return [event.premise.left.value for event in f.items]
    return [entry.premise.value for entry in f.items]


def component_series(f: Formula, name: str) -> list[EventSample]:
    _require(f, Collection.FESTO)
    return [
        EventSample(event.premise.left.value, name, event.conclusion.value)
        for event in f.items
        if event.premise.right.label == name
    ]


def occupancy_at(f: Formula, t: EpochMillis | int) -> frozenset[int] | None:
    """Nodes held by the latest frame at or before ``t``; None before the first frame."""
    _require(f, Collection.TRAINS)
    millis = t.millis if isinstance(t, EpochMillis) else t
    stamps = [frame.premise.value.millis for frame in f.items]
    i = bisect.bisect_right(stamps, millis)
    if i == 0:
        return None
    return frozenset(node.id for node in f.items[i - 1].conclusion.items)


def uv_series(f: Formula) -> list[tuple[Timestamp, Decimal]]:
    """UV index per sample; stored values are the index times 100."""
    _require(f, Collection.WEATHER)
    series = []
    for sample in f.items:
        index = next(e.conclusion.value for e in sample.conclusion.items if e.premise.label == "Index")
        stored = Decimal(index.values[0]) if type(index) is IntTuple else index.value
        series.append((sample.premise.value, (stored / 100).quantize(_ONE_DECIMAL)))
    return series


def point_cloud_bounds(f: Formula) -> tuple[int, int, int, int, int, int]:
    """``(min_x, min_y, min_z, max_x, max_y, max_z)`` over all scanned points."""
    _require(f, Collection.KINECT)
    points_branch = next(b for b in f.conclusion.items if b.premise.label == "Points")
    points: list[Occupy3DPoint] = [entry.premise for entry in points_branch.conclusion.items]
    if not points:
        raise NotADatasetError("scan has no points")
    xs = [p.x for p in points]
    ys = [p.y for p in points]
    zs = [p.z for p in points]
    return min(xs), min(ys), min(zs), max(xs), max(ys), max(zs)

