"""Ontology paths (``Scan.Kinect.bottle``) bound to archive dataset names.

The registry is a plain table seeded with the published datasets. More
bindings can be added at runtime with :meth:`Registry.register` or read from a
manifest file with one ``path -> dataset -> collection`` triple per line.
"""

from __future__ import annotations

import os
import re
import threading
from dataclasses import dataclass
from pathlib import Path

from invariant_data.schemas import Collection
from invariant_data.store import DatasetName

__all__ = [
    "BUILTIN_ENTRIES",
    "DuplicatePathError",
    "OntologyPath",
    "Registry",
    "RegistryEntry",
    "UnknownPathError",
    "default_registry",
    "parse_manifest",
]

_SEGMENT = re.compile(r"[A-Za-z0-9_]+")


class UnknownPathError(LookupError):
    def __init__(self, path: OntologyPath, nearest: OntologyPath | None) -> None:
        self.path = path
        self.nearest = nearest
        hint = f"nearest registered prefix is {nearest}" if nearest else "no registered prefix matches"
        super().__init__(f"no dataset registered at {path}; {hint}")


class DuplicatePathError(ValueError):
    pass


@dataclass(frozen=True, order=True)
class OntologyPath:
    segments: tuple[str, ...]

    def __post_init__(self) -> None:
        if type(self.segments) is not tuple:
            object.__setattr__(self, "segments", tuple(self.segments))
        if not self.segments or not all(_SEGMENT.fullmatch(s) for s in self.segments):
            raise ValueError(f"ontology paths are non-empty [A-Za-z0-9_] segments, got {self.segments!r}")

    @classmethod
    def parse(cls, dotted: str) -> OntologyPath:
        return cls(tuple(dotted.split(".")))

    @classmethod
    def of(cls, path: OntologyPath | str) -> OntologyPath:
        return path if isinstance(path, OntologyPath) else cls.parse(path)

    def prefixes(self) -> list[OntologyPath]:
        """Proper prefixes, longest first."""
        return [OntologyPath(self.segments[:n]) for n in range(len(self.segments) - 1, 0, -1)]

    def __str__(self) -> str:
        return ".".join(self.segments)


@dataclass(frozen=True)
class RegistryEntry:
    path: OntologyPath
    dataset: DatasetName
    collection: Collection

    def __str__(self) -> str:
        return f"{self.path} -> {self.dataset} -> {self.collection.value}"


_KINECT_SCANS = ["obstacles1", "obstacles1a", *(f"obstacles{i}" for i in range(2, 16))]

BUILTIN_ENTRIES: tuple[tuple[str, str, Collection], ...] = (
    ("Robotics.Lego.Trains.experiment1", "aicause.lego.trains.experiment1", Collection.TRAINS),
    ("Robotics.Festo.MiniFactory.station1.scenario1", "aicause.festo.station1.Scenario1.20mins", Collection.FESTO),
    (
        "Robotics.Festo.MiniFactory.station1.capsBlocking",
        "aicause.festo.station1.small.2capsBlocking",
        Collection.FESTO,
    ),
    ("Weather.SmartSpace.Melbourne.Aug_27_2015", "aicause.smartspace.melbourne.2015.aug.27", Collection.WEATHER),
    # the same dataset is also published under this accessor name
    ("Weather.SmartSpace.Melbourne.uvIndex_Dec_28_2015", "aicause.smartspace.melbourne.2015.aug.27", Collection.WEATHER),
    ("Scan.Kinect.bottle", "aicause.kinect.scan.bottle", Collection.KINECT),
    ("Scan.Kinect.obstacles", "aicause.kinect.scan.obstacles1a", Collection.KINECT),
    *((f"Scan.Kinect.{scan}", f"aicause.kinect.scan.{scan}", Collection.KINECT) for scan in _KINECT_SCANS),
)


def parse_manifest(text: str) -> list[RegistryEntry]:
    """Read ``path -> dataset -> collection`` lines; blank lines and ``#`` comments are skipped."""
    entries = []
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        parts = [p.strip() for p in line.split("->")]
        if len(parts) != 3:
            raise ValueError(f"manifest line {lineno}: expected 'path -> dataset -> collection', got {line!r}")
        try:
            entries.append(RegistryEntry(OntologyPath.parse(parts[0]), DatasetName(parts[1]), Collection(parts[2])))
        except ValueError as exc:
            raise ValueError(f"manifest line {lineno}: {exc}") from exc
    return entries


class Registry:
    def __init__(self, entries: list[RegistryEntry] | None = None) -> None:
        self._entries: dict[OntologyPath, RegistryEntry] = {}
        self._lock = threading.Lock()
        for entry in entries or ():
            self.register(entry.path, entry.dataset, entry.collection)

    @classmethod
    def with_builtins(cls) -> Registry:
        return cls(
            [RegistryEntry(OntologyPath.parse(p), DatasetName(d), c) for p, d, c in BUILTIN_ENTRIES]
        )

    def register(
        self, path: OntologyPath | str, dataset: DatasetName | str, collection: Collection | str
    ) -> RegistryEntry:
        entry = RegistryEntry(OntologyPath.of(path), DatasetName.of(dataset), Collection(collection))
        with self._lock:
            if entry.path in self._entries:
                raise DuplicatePathError(f"{entry.path} is already bound to {self._entries[entry.path].dataset}")
            self._entries = {**self._entries, entry.path: entry}
        return entry

    def load_manifest(self, path: str | os.PathLike[str]) -> None:
        for entry in parse_manifest(Path(path).read_text()):
            self.register(entry.path, entry.dataset, entry.collection)

    def entry(self, path: OntologyPath | str) -> RegistryEntry:
        path = OntologyPath.of(path)
        entries = self._entries
        found = entries.get(path)
        if found is not None:
            return found
        registered_prefixes = {p for e in entries for p in [e, *e.prefixes()]}
        nearest = next((p for p in path.prefixes() if p in registered_prefixes), None)
        raise UnknownPathError(path, nearest)

    def resolve(self, path: OntologyPath | str) -> DatasetName:
        return self.entry(path).dataset

    def list_entries(self) -> list[RegistryEntry]:
        return sorted(self._entries.values(), key=lambda e: e.path)

    def __len__(self) -> int:
        return len(self._entries)


def default_registry() -> Registry:
    """Built-in bindings, plus the manifest named by ``$INVARIANT_REGISTRY`` if set."""
    registry = Registry.with_builtins()
    manifest = os.environ.get("INVARIANT_REGISTRY")
    if manifest:
        registry.load_manifest(manifest)
    return registry
