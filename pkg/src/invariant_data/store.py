"""Named dataset archives on disk, plus an explicit in-process cache.

Each dataset ``name`` lives in two files under the data directory:
``<name>`` holds the gzip-compressed canonical text and ``<name>.txt`` the
same text uncompressed, for reading by eye.

Reads come in two flavours. :meth:`ArchiveStore.load_or_throw` goes to disk on
every call and never caches, which keeps memory bounded for large scans. The
``*_cache`` methods keep what they load until :meth:`ArchiveStore.clear_cache`.
"""

from __future__ import annotations

import gzip
import logging
import os
import re
import tempfile
import threading
import zlib
from dataclasses import dataclass, field
from pathlib import Path

from invariant_data.formula import Formula
from invariant_data.text_format import ParseError, parse, unparse

__all__ = [
    "ArchiveStore",
    "CorruptArchiveError",
    "DEFAULT_DATA_DIR",
    "DATA_DIR_ENV",
    "DatasetName",
    "InvalidDatasetName",
    "StorageError",
    "StoreConfig",
    "UnknownDatasetError",
    "decode_archive",
    "encode_archive",
    "read_formula_file",
]

log = logging.getLogger(__name__)

DEFAULT_DATA_DIR = "../data"
DATA_DIR_ENV = "INVARIANT_DATA_DIR"
GZIP_MAGIC = b"\x1f\x8b"

_NAME_RE = re.compile(r"[A-Za-z0-9_]+(?:\.[A-Za-z0-9_]+)+")


class InvalidDatasetName(ValueError):
    pass


class UnknownDatasetError(LookupError):
    """No usable archive for a dataset name."""

    def __init__(self, name: str, detail: str = "no archive found") -> None:
        self.name = name
        super().__init__(f"unknown dataset {name!r}: {detail}")


class CorruptArchiveError(UnknownDatasetError):
    """The archive exists but cannot be decompressed or parsed."""

    def __init__(self, name: str, path: Path, reason: str) -> None:
        self.path = path
        super().__init__(name, f"corrupt archive {path}: {reason}")


class StorageError(OSError):
    pass


@dataclass(frozen=True, order=True)
class DatasetName:
    """Dotted dataset identifier such as ``aicause.kinect.scan.bottle``.

    At least two segments, the first being the contributing organisation.
    """

    raw: str

    def __post_init__(self) -> None:
        if not isinstance(self.raw, str) or not _NAME_RE.fullmatch(self.raw):
            raise InvalidDatasetName(
                f"dataset names are dot-separated [A-Za-z0-9_] segments with an organisation prefix, got {self.raw!r}"
            )
        if self.raw.endswith(".txt"):
            raise InvalidDatasetName(f"{self.raw!r} would clash with the readable .txt copy of another dataset")

    @classmethod
    def of(cls, name: DatasetName | str) -> DatasetName:
        return name if isinstance(name, DatasetName) else cls(name)

    @property
    def segments(self) -> tuple[str, ...]:
        return tuple(self.raw.split("."))

    def __str__(self) -> str:
        return self.raw


@dataclass(frozen=True)
class StoreConfig:
    data_dir: Path = field(default_factory=lambda: Path(DEFAULT_DATA_DIR))

    @classmethod
    def from_env(cls, data_dir: str | os.PathLike[str] | None = None) -> StoreConfig:
        """Explicit ``data_dir`` wins, then ``$INVARIANT_DATA_DIR``, then ``../data``."""
        if data_dir is None:
            data_dir = os.environ.get(DATA_DIR_ENV) or DEFAULT_DATA_DIR
        return cls(Path(data_dir))


def _compress(text: str) -> bytes:
    return gzip.compress(text.encode("utf-8"), compresslevel=6, mtime=0)


def encode_archive(f: Formula) -> bytes:
    return _compress(unparse(f))


def decode_archive(blob: bytes) -> Formula:
    """Inverse of :func:`encode_archive`; plain (uncompressed) text is accepted too."""
    if blob[:2] == GZIP_MAGIC:
        blob = gzip.decompress(blob)
    return parse(blob.decode("utf-8"))


_DECODE_ERRORS = (OSError, EOFError, zlib.error, UnicodeDecodeError, ParseError, ValueError)


def read_formula_file(path: str | os.PathLike[str]) -> Formula:
    """Load a formula from a compressed archive or a plain text dump."""
    path = Path(path)
    blob = path.read_bytes()
    try:
        return decode_archive(blob)
    except _DECODE_ERRORS as exc:
        raise CorruptArchiveError(path.name, path, str(exc)) from exc


def _atomic_write(path: Path, data: bytes) -> None:
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "wb") as fh:
            fh.write(data)
        os.replace(tmp, path)
    except BaseException:
        Path(tmp).unlink(missing_ok=True)
        raise


class ArchiveStore:
    """Directory-backed dataset archives with an unbounded in-memory cache.

    ``disk_reads`` counts archive files read, which makes the caching
    behaviour of the individual methods observable.
    """

    def __init__(self, config: StoreConfig | str | os.PathLike[str] | None = None) -> None:
        if not isinstance(config, StoreConfig):
            config = StoreConfig.from_env(config)
        self.config = config
        self.disk_reads = 0
        self._cache: dict[DatasetName, Formula] = {}
        self._lock = threading.RLock()

    @property
    def data_dir(self) -> Path:
        return self.config.data_dir

    def archive_path(self, name: DatasetName | str) -> Path:
        return self.data_dir / DatasetName.of(name).raw

    def text_path(self, name: DatasetName | str) -> Path:
        return self.data_dir / f"{DatasetName.of(name).raw}.txt"

    # -- producer side ---------------------------------------------------------

    def save(self, data: Formula, name: DatasetName | str) -> None:
        name = DatasetName.of(name)
        text = unparse(data)
        blob = _compress(text)
        with self._lock:
            try:
                self.data_dir.mkdir(parents=True, exist_ok=True)
                _atomic_write(self.archive_path(name), blob)
                _atomic_write(self.text_path(name), text.encode("utf-8"))
            except OSError as exc:
                raise StorageError(f"cannot write dataset {name} under {self.data_dir}: {exc}") from exc

    def save_and_cache(self, data: Formula, name: DatasetName | str) -> None:
        name = DatasetName.of(name)
        with self._lock:
            self.save(data, name)
            self._cache[name] = data

    # -- consumer side ---------------------------------------------------------

    def load_or_throw(self, name: DatasetName | str) -> Formula:
        """Read ``name`` from disk. Never consults or fills the cache."""
        name = DatasetName.of(name)
        path = self.archive_path(name)
        try:
            blob = path.read_bytes()
        except FileNotFoundError:
            raise UnknownDatasetError(name.raw) from None
        except OSError as exc:
            raise CorruptArchiveError(name.raw, path, str(exc)) from exc
        with self._lock:
            self.disk_reads += 1
        try:
            return decode_archive(blob)
        except _DECODE_ERRORS as exc:
            raise CorruptArchiveError(name.raw, path, str(exc) or type(exc).__name__) from exc

    def _load_quietly(self, name: DatasetName) -> Formula | None:
        try:
            return self.load_or_throw(name)
        except CorruptArchiveError as exc:
            log.warning("%s", exc)
        except UnknownDatasetError:
            pass
        return None

    def load_and_cache(self, name: DatasetName | str) -> Formula | None:
        name = DatasetName.of(name)
        data = self._load_quietly(name)
        if data is not None:
            with self._lock:
                self._cache[name] = data
        return data

    def find_in_cache(self, name: DatasetName | str) -> Formula | None:
        with self._lock:
            return self._cache.get(DatasetName.of(name))

    def find_in_cache_or_load(self, name: DatasetName | str) -> Formula | None:
        name = DatasetName.of(name)
        cached = self.find_in_cache(name)
        return cached if cached is not None else self._load_quietly(name)

    def find_in_cache_or_load_and_cache(self, name: DatasetName | str) -> Formula | None:
        name = DatasetName.of(name)
        with self._lock:
            cached = self._cache.get(name)
            if cached is not None:
                return cached
            data = self._load_quietly(name)
            if data is not None:
                self._cache[name] = data
            return data

    def clear_cache(self) -> None:
        with self._lock:
            self._cache.clear()

    @property
    def cache_size(self) -> int:
        return len(self._cache)

    def list_archives(self) -> list[DatasetName]:
        """Dataset names with an archive file in the data directory, sorted."""
        if not self.data_dir.is_dir():
            return []
        names = []
        for path in self.data_dir.iterdir():
            if path.is_file() and _NAME_RE.fullmatch(path.name) and not path.name.endswith(".txt"):
                names.append(DatasetName(path.name))
        return sorted(names)
