"""Structural validators for the four dataset collections.

Each ``validate_*`` function walks a formula and returns a :class:`SchemaReport`
rather than raising, so callers always get counts back even for broken data.
"""

from __future__ import annotations

import enum
import re
from calendar import timegm
from dataclasses import dataclass, field
from datetime import datetime
from decimal import Decimal
from typing import Final

from invariant_data.formula import (
    And,
    BigAnd,
    Component,
    ComponentState,
    EpochMillis,
    Formula,
    Implies,
    IntTuple,
    Number,
    Occupy3DPoint,
    OccupyNode,
    Owner,
    Text,
    TimePoint,
    Timestamp,
)

__all__ = [
    "ACTUATORS",
    "Collection",
    "FESTO_VALUES",
    "FESTO_COMPONENTS",
    "SENSORS",
    "SchemaReport",
    "Violation",
    "detect_schema",
    "timestamp_millis",
    "validate",
    "validate_festo",
    "validate_kinect",
    "validate_trains",
    "validate_weather",
]


class Collection(str, enum.Enum):
    KINECT = "kinect"
    FESTO = "festo"
    TRAINS = "trains"
    WEATHER = "weather"

    def __str__(self) -> str:
        return self.value


ACTUATORS: Final = frozenset(
    {"stackEjectorExtendSol", "vacuumGripperSol", "ejectionAirPulseSol", "loaderPickupSol", "loaderDropoffSol"}
)
SENSORS: Final = frozenset(
    {
        "stackEjectorExtendedLS",
        "stackEjectorRetractedLS",
        "workpieceGrippedSensor",
        "loaderPickupLS",
        "loaderDropoffLS",
        "stackEmptySensor",
    }
)
FESTO_COMPONENTS: Final = ACTUATORS | SENSORS

# Both value families are accepted for every component: the recorded data
# pairs solenoids with 5.0/5.5 and limit switches with 80/100.
FESTO_VALUES: Final = frozenset({Decimal("5.0"), Decimal("5.5"), Decimal("80.0"), Decimal("100.0")})

TRAIN_LENGTH: Final = 10
WEATHER_OWNERS: Final = ("ID", "Index", "Name")
UV_INDEX_MAX: Final = 1000

_CALENDAR_RE = re.compile(r"(\w{3}) (\w{3}) +(\d{1,2}) (\d{2}):(\d{2}):(\d{2}) UTC (\d{4})")
_MONTHS = ("Jan", "Feb", "Mar", "Apr", "May", "Jun", "Jul", "Aug", "Sep", "Oct", "Nov", "Dec")
_DAYS = ("Mon", "Tue", "Wed", "Thu", "Fri", "Sat", "Sun")


@dataclass(frozen=True)
class Violation:
    path: str
    message: str

    def __str__(self) -> str:
        return f"{self.path}: {self.message}"


@dataclass
class SchemaReport:
    """Outcome of validating one formula against one collection."""

    collection: Collection
    violations: list[Violation] = field(default_factory=list)
    stats: dict[str, int] = field(default_factory=dict)

    @property
    def valid(self) -> bool:
        return not self.violations

    def add(self, path: str, message: str) -> None:
        self.violations.append(Violation(path, message))

    def key_values(self) -> str:
        lines = [
            f"collection={self.collection.value}",
            f"valid={str(self.valid).lower()}",
            f"violations={len(self.violations)}",
        ]
        lines.extend(f"{key}={value}" for key, value in self.stats.items())
        return "\n".join(lines)

    def to_text(self, max_violations: int = 20) -> str:
        """Human summary line, then violations, then the ``key=value`` block."""
        verdict = "valid" if self.valid else f"invalid ({len(self.violations)} violations)"
        lines = [f"{self.collection.value}: {verdict}"]
        lines.extend(f"  {v}" for v in self.violations[:max_violations])
        if len(self.violations) > max_violations:
            lines.append(f"  ... {len(self.violations) - max_violations} more")
        lines.append(self.key_values())
        return "\n".join(lines)


def timestamp_millis(stamp: Timestamp) -> int | None:
    """Milliseconds since the epoch, or None for calendar text in an unknown layout.

    Calendar text is read in the ``Wed Jul 27 09:11:28 UTC 2016`` layout
    with English month/day names regardless of locale.
    """
    if type(stamp) is EpochMillis:
        return stamp.millis
    m = _CALENDAR_RE.fullmatch(stamp.raw)
    if m is None:
        return None
    day, month, dom, hh, mm, ss, year = m.groups()
    if day not in _DAYS or month not in _MONTHS:
        return None
    try:
        when = datetime(int(year), _MONTHS.index(month) + 1, int(dom), int(hh), int(mm), int(ss))
    except ValueError:
        return None
    return timegm(when.timetuple()) * 1000


def _kind(f: object) -> str:
    return type(f).__name__


def validate_kinect(f: Formula) -> SchemaReport:
    report = SchemaReport(Collection.KINECT, stats={"frames": 0, "points": 0, "colors": 0})
    add = report.add
    if type(f) is not Implies:
        add("$", f"expected IMPLIES frame, got {_kind(f)}")
        return report
    if type(f.premise) is not TimePoint:
        add("$.premise", f"expected TimePoint, got {_kind(f.premise)}")
    report.stats["frames"] = 1
    body = f.conclusion
    if type(body) is not BigAnd:
        add("$.conclusion", f"expected BIGAND of measurements, got {_kind(body)}")
        return report
    branches = {}
    for i, branch in enumerate(body.items):
        path = f"$.conclusion[{i}]"
        if type(branch) is not Implies or type(branch.premise) is not Owner:
            add(path, "expected IMPLIES(Owner(...), BIGAND(...))")
            continue
        label = branch.premise.label
        if label not in ("Points", "Colors"):
            add(path, f"unexpected measurement owner {label!r}")
        elif label in branches:
            add(path, f"duplicate {label} branch")
        elif type(branch.conclusion) is not BigAnd:
            add(path, f"{label} conclusion must be a BIGAND")
        else:
            branches[label] = (path, branch.conclusion.items)
    for label in ("Points", "Colors"):
        if label not in branches:
            add("$.conclusion", f"missing Owner({label}) branch")
    if "Points" in branches:
        path, items = branches["Points"]
        report.stats["points"] = len(items)
        for i, entry in enumerate(items):
            if not (
                type(entry) is Implies
                and type(entry.premise) is Occupy3DPoint
                and type(entry.conclusion) is ComponentState
                and type(entry.conclusion.value) is IntTuple
                and len(entry.conclusion.value.values) == 2
            ):
                add(f"{path}[{i}]", "point must be IMPLIES(Occupy3DPoint, ComponentState((u,v)))")
    if "Colors" in branches:
        path, items = branches["Colors"]
        report.stats["colors"] = len(items)
        for i, entry in enumerate(items):
            if type(entry) is not ComponentState or type(entry.value) is not IntTuple:
                add(f"{path}[{i}]", "color must be ComponentState((r,g,b))")
                continue
            channels = entry.value.values
            if len(channels) != 3:
                add(f"{path}[{i}]", f"color needs 3 channels, got {len(channels)}")
            elif min(channels) < -1 or max(channels) > 255:
                add(f"{path}[{i}]", f"color channel out of range -1..255: {channels}")
    return report


def validate_festo(f: Formula) -> SchemaReport:
    report = SchemaReport(Collection.FESTO, stats={"events": 0})
    add = report.add
    if type(f) is not BigAnd:
        add("$", f"expected BIGAND of events, got {_kind(f)}")
        return report
    per_component: dict[str, int] = {}
    previous: int | None = None
    for i, event in enumerate(f.items):
        path = f"$[{i}]"
        if not (
            type(event) is Implies
            and type(event.premise) is And
            and type(event.premise.left) is TimePoint
            and type(event.premise.right) is Component
            and type(event.conclusion) is ComponentState
        ):
            add(path, "event must be IMPLIES(AND(TimePoint, Component), ComponentState)")
            continue
        report.stats["events"] += 1
        name = event.premise.right.label
        per_component[name] = per_component.get(name, 0) + 1
        if name not in FESTO_COMPONENTS:
            add(path, f"unknown component {name!r}")
        value = event.conclusion.value
        if type(value) is not Number:
            add(path, f"state of {name} must be a number, got {_kind(value)}")
        elif value.value not in FESTO_VALUES:
            add(path, f"state {value.value} of {name} not in {{5.0, 5.5, 80.0, 100.0}}")
        millis = timestamp_millis(event.premise.left.value)
        if millis is None:
            add(path, f"unreadable timestamp {event.premise.left.value.raw!r}")
        else:
            if previous is not None and millis < previous:
                add(path, "timestamp goes backwards")
            previous = millis
    for name in sorted(per_component):
        report.stats[f"component.{name}"] = per_component[name]
    return report


def validate_trains(f: Formula, track_nodes: int | None = None) -> SchemaReport:
    """Check a train occupancy stream.

    ``track_nodes``, when given, bounds node ids; otherwise the largest id seen
    is taken as the track size. ``sliding_window`` (0/1) records whether every
    frame advances the previous one by exactly one node, wrapping to 1.
    """
    report = SchemaReport(Collection.TRAINS, stats={"time_points": 0, "max_node": 0, "sliding_window": 1})
    add = report.add
    if type(f) is not BigAnd:
        add("$", f"expected BIGAND of frames, got {_kind(f)}")
        report.stats["sliding_window"] = 0
        return report
    previous: int | None = None
    frames: list[tuple[int, ...]] = []
    max_node = 0
    for i, frame in enumerate(f.items):
        path = f"$[{i}]"
        if not (type(frame) is Implies and type(frame.premise) is TimePoint and type(frame.conclusion) is BigAnd):
            add(path, "frame must be IMPLIES(TimePoint, BIGAND(List(OccupyNode...)))")
            continue
        report.stats["time_points"] += 1
        stamp = frame.premise.value
        if type(stamp) is not EpochMillis:
            add(path, f"frame time must be epoch millis, got {stamp.raw!r}")
        else:
            if previous is not None and stamp.millis <= previous:
                add(path, "frame timestamps must strictly increase")
            previous = stamp.millis
        nodes = frame.conclusion.items
        if not all(type(n) is OccupyNode for n in nodes):
            add(path, "occupancy may only contain OccupyNode atoms")
            continue
        if len(nodes) != TRAIN_LENGTH:
            add(path, f"train occupies {TRAIN_LENGTH} segments, frame has {len(nodes)}")
        ids = tuple(n.id for n in nodes)
        if ids:
            max_node = max(max_node, max(ids))
        frames.append(ids)
    report.stats["max_node"] = max_node
    limit = track_nodes if track_nodes is not None else max_node
    if track_nodes is not None:
        for i, ids in enumerate(frames):
            if any(n > track_nodes for n in ids):
                add(f"$[{i}]", f"node id beyond track size {track_nodes}")
    report.stats["sliding_window"] = int(len(frames) == report.stats["time_points"] and _is_sliding(frames, limit))
    return report


def _is_sliding(frames: list[tuple[int, ...]], track_nodes: int) -> bool:
    if track_nodes < 1:
        return not frames
    successor = lambda n: n % track_nodes + 1  # noqa: E731
    for ids in frames:
        if any(successor(a) != b for a, b in zip(ids, ids[1:])):
            return False
    for prev, cur in zip(frames, frames[1:]):
        if not prev or cur != prev[1:] + (successor(prev[-1]),):
            return False
    return True


def _uv_index_value(value: object) -> int | None:
    if type(value) is Number:
        number = value.value
        return int(number) if number == number.to_integral_value() else None
    if type(value) is IntTuple and len(value.values) == 1:
        return value.values[0]
    return None


def validate_weather(f: Formula) -> SchemaReport:
    report = SchemaReport(Collection.WEATHER, stats={"time_points": 0})
    add = report.add
    if type(f) is not BigAnd:
        add("$", f"expected BIGAND of samples, got {_kind(f)}")
        return report
    for i, sample in enumerate(f.items):
        path = f"$[{i}]"
        if not (type(sample) is Implies and type(sample.premise) is TimePoint and type(sample.conclusion) is BigAnd):
            add(path, "sample must be IMPLIES(TimePoint, BIGAND(List(...)))")
            continue
        report.stats["time_points"] += 1
        fields = sample.conclusion.items
        if len(fields) != len(WEATHER_OWNERS):
            add(path, f"sample needs exactly 3 fields (ID, Index, Name), got {len(fields)}")
        seen: set[str] = set()
        for j, entry in enumerate(fields):
            where = f"{path}[{j}]"
            if not (
                type(entry) is Implies and type(entry.premise) is Owner and type(entry.conclusion) is ComponentState
            ):
                add(where, "field must be IMPLIES(Owner(...), ComponentState(...))")
                continue
            owner, value = entry.premise.label, entry.conclusion.value
            if owner not in WEATHER_OWNERS:
                add(where, f"unexpected owner {owner!r}")
                continue
            if owner in seen:
                add(where, f"duplicate {owner} field")
            seen.add(owner)
            if owner == "Index":
                index = _uv_index_value(value)
                if index is None:
                    add(where, "UV index must be an integer")
                elif not 0 <= index <= UV_INDEX_MAX:
                    add(where, f"UV index {index} outside 0..{UV_INDEX_MAX}")
                elif index % 10:
                    add(where, f"UV index {index} has more than one decimal place")
            elif type(value) is not Text:
                add(where, f"{owner} must be text, got {_kind(value)}")
        missing = [o for o in WEATHER_OWNERS if o not in seen]
        if missing and len(fields) == len(WEATHER_OWNERS):
            add(path, f"missing fields {missing}")
    return report


VALIDATORS: Final = {
    Collection.KINECT: validate_kinect,
    Collection.FESTO: validate_festo,
    Collection.TRAINS: validate_trains,
    Collection.WEATHER: validate_weather,
}


def validate(f: Formula, collection: Collection | str) -> SchemaReport:
    return VALIDATORS[Collection(collection)](f)


def detect_schema(f: Formula) -> Collection | None:
    """The single collection whose validator accepts ``f``, else None."""
    accepted = [c for c, check in VALIDATORS.items() if check(f).valid]
    return accepted[0] if len(accepted) == 1 else None
