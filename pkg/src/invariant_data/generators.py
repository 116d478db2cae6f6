"""Seeded synthetic datasets shaped like the four recorded collections.

The real archives are not redistributable, so these builders produce data
with the same formula layout and the same default cardinalities. Every draw
comes from :class:`SplitMix64`, a fixed recurrence that is easy to port, so a
given spec yields the same formula in any implementation.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from datetime import datetime, timedelta, timezone
from decimal import Decimal
from typing import Union

from invariant_data.formula import (
    And,
    BigAnd,
    CalendarText,
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
    gc_paused,
)
from invariant_data.schemas import Collection

__all__ = [
    "FESTO_CYCLE",
    "FestoSpec",
    "GeneratorSpec",
    "KinectSpec",
    "SplitMix64",
    "TrainsSpec",
    "WeatherSpec",
    "default_spec",
    "format_festo_time",
    "gen_festo",
    "gen_kinect",
    "gen_trains",
    "gen_weather",
    "generate",
]

_MASK64 = (1 << 64) - 1


class SplitMix64:
    """SplitMix64 (Steele, Lea & Flood 2014); 64-bit state, 64-bit outputs.

    ``below(n)`` reduces by plain modulo. The bias is negligible for the
    small ranges used here and keeps the sequence trivially portable.
    """

    __slots__ = ("state",)

    GAMMA = 0x9E3779B97F4A7C15
    MUL1 = 0xBF58476D1CE4E5B9
    MUL2 = 0x94D049BB133111EB

    def __init__(self, seed: int) -> None:
        self.state = seed & _MASK64

    def next(self) -> int:
        self.state = z = (self.state + self.GAMMA) & _MASK64
        z = ((z ^ (z >> 30)) * self.MUL1) & _MASK64
        z = ((z ^ (z >> 27)) * self.MUL2) & _MASK64
        return z ^ (z >> 31)

    def below(self, n: int) -> int:
        if n < 1:
            raise ValueError("range must be non-empty")
        return self.next() % n

    def between(self, lo: int, hi: int) -> int:
        """Uniform integer in ``lo..hi`` inclusive."""
        return lo + self.below(hi - lo + 1)


def _check_sizes(**sizes: int) -> None:
    for name, value in sizes.items():
        if value < 0:
            raise ValueError(f"{name} must be >= 0, got {value}")


@dataclass(frozen=True)
class KinectSpec:
    seed: int = 0
    n_points: int = 217_088
    n_colors: int = 2_764_800
    start_millis: int = 1_429_188_806_320

    collection = Collection.KINECT

    def __post_init__(self) -> None:
        _check_sizes(n_points=self.n_points, n_colors=self.n_colors, start_millis=self.start_millis)


@dataclass(frozen=True)
class FestoSpec:
    seed: int = 0
    n_events: int = 4761
    start_millis: int = 1_469_610_688_000  # Wed Jul 27 09:11:28 UTC 2016

    collection = Collection.FESTO

    def __post_init__(self) -> None:
        _check_sizes(n_events=self.n_events, start_millis=self.start_millis)


@dataclass(frozen=True)
class TrainsSpec:
    seed: int = 0
    n_frames: int = 9601
    track_nodes: int = 672
    train_length: int = 10
    start_node: int = 664
    start_millis: int = 1_429_188_806_320

    collection = Collection.TRAINS

    def __post_init__(self) -> None:
        _check_sizes(n_frames=self.n_frames, start_millis=self.start_millis)
        if not 1 <= self.train_length <= self.track_nodes:
            raise ValueError("need 1 <= train_length <= track_nodes")
        if not 1 <= self.start_node <= self.track_nodes:
            raise ValueError("start_node must be a node of the track")


@dataclass(frozen=True)
class WeatherSpec:
    seed: int = 0
    n_samples: int = 439
    city_id: str = "melbourne"
    city_name: str = "mel"
    start_text: str = "1st December 201511:04AM"
    start_index: int = 770

    collection = Collection.WEATHER

    def __post_init__(self) -> None:
        _check_sizes(n_samples=self.n_samples)
        if not (0 <= self.start_index <= 1000 and self.start_index % 10 == 0):
            raise ValueError("start_index must be a multiple of 10 in 0..1000")
        _parse_weather_time(self.start_text)


GeneratorSpec = Union[KinectSpec, FestoSpec, TrainsSpec, WeatherSpec]


# -- kinect ------------------------------------------------------------------------


def gen_kinect(spec: KinectSpec) -> Formula:
    """One depth frame: points with UV texture pairs, then a color stream.

    Per point one draw supplies, from the low bits up: x (9 bits, offset
    -256), y (9 bits, offset -256), z (4 bits), then u = (r >> 22) % 1920 and
    v = (r >> 40) % 1080. Colors mimic a BGRA byte buffer read three bytes at
    a time: each pixel draw gives B, G, R from its low three bytes and alpha
    is the signed byte -1.
    """
    if not isinstance(spec, KinectSpec):
        raise TypeError(f"expected KinectSpec, got {type(spec).__name__}")
    rng = SplitMix64(spec.seed)
    draw = rng.next
    points = []
    for _ in range(spec.n_points):
        r = draw()
        point = Occupy3DPoint((r & 511) - 256, ((r >> 9) & 511) - 256, (r >> 18) & 15)
        uv = IntTuple(((r >> 22) % 1920, (r >> 40) % 1080))
        points.append(Implies(point, ComponentState(uv)))

    n_bytes = 3 * spec.n_colors
    stream: list[int] = []
    extend = stream.extend
    for _ in range((n_bytes + 3) // 4):
        r = draw()
        extend((r & 255, (r >> 8) & 255, (r >> 16) & 255, -1))
    palette: dict[tuple[int, ...], ComponentState] = {}
    colors = []
    append = colors.append
    for rgb in zip(*[iter(stream[:n_bytes])] * 3):
        state = palette.get(rgb)
        if state is None:
            state = palette[rgb] = ComponentState(IntTuple(rgb))
        append(state)

    return Implies(
        TimePoint(EpochMillis(spec.start_millis)),
        BigAnd(
            (
                Implies(Owner("Points"), BigAnd(tuple(points))),
                Implies(Owner("Colors"), BigAnd(tuple(colors))),
            )
        ),
    )


# -- festo -------------------------------------------------------------------------

# One pick-and-place cycle of the station, in the order the signals fire.
FESTO_CYCLE: tuple[tuple[str, str], ...] = (
    ("stackEjectorExtendSol", "5.0"),
    ("stackEjectorExtendedLS", "100.0"),
    ("stackEmptySensor", "80.0"),
    ("stackEmptySensor", "100.0"),
    ("stackEjectorRetractedLS", "80.0"),
    ("stackEjectorExtendSol", "5.5"),
    ("stackEjectorRetractedLS", "100.0"),
    ("stackEmptySensor", "80.0"),
    ("stackEjectorExtendedLS", "80.0"),
    ("loaderPickupSol", "5.0"),
    ("stackEmptySensor", "100.0"),
    ("loaderPickupLS", "80.0"),
    ("loaderPickupSol", "5.5"),
    ("vacuumGripperSol", "5.0"),
    ("workpieceGrippedSensor", "80.0"),
    ("workpieceGrippedSensor", "80.0"),
    ("workpieceGrippedSensor", "100.0"),
    ("loaderDropoffSol", "5.0"),
    ("loaderPickupLS", "100.0"),
    ("loaderDropoffLS", "80.0"),
    ("loaderDropoffSol", "5.5"),
    ("vacuumGripperSol", "5.5"),
    ("ejectionAirPulseSol", "5.0"),
    ("workpieceGrippedSensor", "100.0"),
    ("loaderPickupSol", "5.0"),
    ("ejectionAirPulseSol", "5.5"),
    ("loaderDropoffLS", "100.0"),
)

_DAY_NAMES = ("Mon", "Tue", "Wed", "Thu", "Fri", "Sat", "Sun")
_MONTH_ABBR = ("Jan", "Feb", "Mar", "Apr", "May", "Jun", "Jul", "Aug", "Sep", "Oct", "Nov", "Dec")


def format_festo_time(millis: int) -> str:
    """``Wed Jul 27 09:11:28 UTC 2016`` for the given epoch millis (locale independent)."""
    t = datetime.fromtimestamp(millis // 1000, tz=timezone.utc)
    return (
        f"{_DAY_NAMES[t.weekday()]} {_MONTH_ABBR[t.month - 1]} {t.day:02d} "
        f"{t.hour:02d}:{t.minute:02d}:{t.second:02d} UTC {t.year}"
    )


def gen_festo(spec: FestoSpec) -> Formula:
    """Event stream cycling through :data:`FESTO_CYCLE`.

    Between events the clock advances 0 s (15 in 20), 1 s (4 in 20) or
    2 s (1 in 20), which gives roughly the density of the recorded run.
    """
    if not isinstance(spec, FestoSpec):
        raise TypeError(f"expected FestoSpec, got {type(spec).__name__}")
    rng = SplitMix64(spec.seed)
    components = {name: Component(name) for name, _ in FESTO_CYCLE}
    states = {value: ComponentState(Number(Decimal(value))) for _, value in FESTO_CYCLE}
    events = []
    millis = spec.start_millis
    stamp = TimePoint(CalendarText(format_festo_time(millis)))
    for i in range(spec.n_events):
        if i:
            roll = rng.below(20)
            step = 0 if roll < 15 else 1 if roll < 19 else 2
            if step:
                millis += 1000 * step
                stamp = TimePoint(CalendarText(format_festo_time(millis)))
        name, value = FESTO_CYCLE[i % len(FESTO_CYCLE)]
        events.append(Implies(And(stamp, components[name]), states[value]))
    return BigAnd(tuple(events))


# -- trains ------------------------------------------------------------------------


def gen_trains(spec: TrainsSpec) -> Formula:
    """A train sliding one segment per frame around a ring of ``track_nodes``.

    Frame gaps are 80..110 ms, drawn from the seed.
    """
    if not isinstance(spec, TrainsSpec):
        raise TypeError(f"expected TrainsSpec, got {type(spec).__name__}")
    rng = SplitMix64(spec.seed)
    n = spec.track_nodes
    nodes = [OccupyNode(i) for i in range(1, n + 1)]
    frames = []
    millis = spec.start_millis
    for i in range(spec.n_frames):
        if i:
            millis += rng.between(80, 110)
        first = spec.start_node - 1 + i
        body = tuple(nodes[(first + k) % n] for k in range(spec.train_length))
        frames.append(Implies(TimePoint(EpochMillis(millis)), BigAnd(body)))
    return BigAnd(tuple(frames))


# -- weather -----------------------------------------------------------------------

_MONTH_NAMES = (
    "January", "February", "March", "April", "May", "June",
    "July", "August", "September", "October", "November", "December",
)
_WEATHER_TIME = re.compile(r"(\d{1,2})(st|nd|rd|th) ([A-Z][a-z]+) (\d{4})(\d{2}):(\d{2})(AM|PM)")


def _parse_weather_time(text: str) -> datetime:
    m = _WEATHER_TIME.fullmatch(text)
    if m is None or m.group(3) not in _MONTH_NAMES:
        raise ValueError(f"expected a time like '1st December 201511:04AM', got {text!r}")
    day, _, month, year, hour, minute, half = m.groups()
    hour12 = int(hour)
    if not 1 <= hour12 <= 12:
        raise ValueError(f"bad 12-hour clock value in {text!r}")
    hour24 = hour12 % 12 + (12 if half == "PM" else 0)
    return datetime(int(year), _MONTH_NAMES.index(month) + 1, int(day), hour24, int(minute))


def _ordinal(day: int) -> str:
    if 10 <= day % 100 <= 20:
        return f"{day}th"
    suffix = {1: "st", 2: "nd", 3: "rd"}.get(day % 10, "th")
    return f"{day}{suffix}"


def format_weather_time(t: datetime) -> str:
    """``1st December 201511:04AM``: the date and 12-hour time run together."""
    hour12 = t.hour % 12 or 12
    half = "AM" if t.hour < 12 else "PM"
    return f"{_ordinal(t.day)} {_MONTH_NAMES[t.month - 1]} {t.year}{hour12:02d}:{t.minute:02d}{half}"


def gen_weather(spec: WeatherSpec) -> Formula:
    """UV samples one minute apart with a bounded random walk of the index.

    Each step moves the stored index (UV index x 100) by -30..+30 in tens,
    clamped to 0..1000.
    """
    if not isinstance(spec, WeatherSpec):
        raise TypeError(f"expected WeatherSpec, got {type(spec).__name__}")
    rng = SplitMix64(spec.seed)
    when = _parse_weather_time(spec.start_text)
    id_field = Implies(Owner("ID"), ComponentState(Text(spec.city_id)))
    name_field = Implies(Owner("Name"), ComponentState(Text(spec.city_name)))
    index_owner = Owner("Index")
    index = spec.start_index
    samples = []
    for i in range(spec.n_samples):
        if i:
            index = min(1000, max(0, index + 10 * (rng.below(7) - 3)))
            when += timedelta(minutes=1)
        reading = Implies(index_owner, ComponentState(Number(Decimal(index))))
        samples.append(
            Implies(TimePoint(CalendarText(format_weather_time(when))), BigAnd((id_field, reading, name_field)))
        )
    return BigAnd(tuple(samples))


_GENERATORS = {
    Collection.KINECT: (KinectSpec, gen_kinect),
    Collection.FESTO: (FestoSpec, gen_festo),
    Collection.TRAINS: (TrainsSpec, gen_trains),
    Collection.WEATHER: (WeatherSpec, gen_weather),
}


def default_spec(collection: Collection | str, **overrides) -> GeneratorSpec:
    """Spec with the recorded datasets' sizes, optionally overridden."""
    spec_cls, _ = _GENERATORS[Collection(collection)]
    return spec_cls(**overrides)


def generate(spec: GeneratorSpec) -> Formula:
    with gc_paused():
        return _GENERATORS[spec.collection][1](spec)
