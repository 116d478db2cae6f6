"""Command line front end.

Exit status: 0 success/valid, 1 invalid data, 2 missing or corrupt dataset,
64 usage error. Every command prints a one-line summary followed by a
``key=value`` block for scripts.
"""

from __future__ import annotations

import argparse
import logging
import sys
from collections.abc import Sequence
from pathlib import Path

from invariant_data.formula import BigAnd, EpochMillis, Formula, Timestamp
from invariant_data.generators import default_spec, generate
from invariant_data.query import time_points
from invariant_data.registry import Registry, default_registry
from invariant_data.schemas import Collection, detect_schema, validate
from invariant_data.store import (
    ArchiveStore,
    DatasetName,
    InvalidDatasetName,
    StorageError,
    UnknownDatasetError,
    encode_archive,
    read_formula_file,
)
from invariant_data.text_format import unparse

EXIT_OK = 0
EXIT_INVALID = 1
EXIT_MISSING = 2
EXIT_USAGE = 64

# flag -> spec field, per collection
SIZE_FLAGS: dict[Collection, dict[str, str]] = {
    Collection.KINECT: {"points": "n_points", "colors": "n_colors"},
    Collection.FESTO: {"events": "n_events"},
    Collection.TRAINS: {"frames": "n_frames"},
    Collection.WEATHER: {"samples": "n_samples"},
}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str) -> None:  # type: ignore[override]
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="invariant-data", description=__doc__.strip().splitlines()[0])
    parser.add_argument("--data-dir", help="archive directory (default: $INVARIANT_DATA_DIR or ../data)")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    gen = sub.add_parser("generate", help="build a synthetic dataset and archive it")
    gen.add_argument("--collection", required=True, choices=[c.value for c in Collection])
    gen.add_argument("--seed", type=int, default=0)
    gen.add_argument("--name", required=True, help="dataset name to save under")
    for flag in ("points", "colors", "events", "frames", "samples"):
        gen.add_argument(f"--{flag}", type=int)

    val = sub.add_parser("validate", help="check a dataset against its collection schema")
    val.add_argument("target", help="archive/text file, dataset name or ontology path")
    val.add_argument("--collection", choices=[c.value for c in Collection])

    ins = sub.add_parser("inspect", help="summarise a dataset")
    ins.add_argument("target")

    conv = sub.add_parser("convert", help="convert between archive and plain text")
    conv.add_argument("input", type=Path)
    conv.add_argument("output", type=Path)
    conv.add_argument("--to", required=True, choices=["txt", "archive"])

    sub.add_parser("ls", help="list registered and archived datasets")

    cat = sub.add_parser("cat", help="print a dataset in canonical text form")
    cat.add_argument("target")
    cat.add_argument("--head", type=int, help="only the first N conjuncts of a top-level BIGAND")
    return parser


def _stamp(t: Timestamp) -> str:
    return str(t.millis) if isinstance(t, EpochMillis) else t.raw


def _load(target: str, store: ArchiveStore, registry: Registry) -> Formula:
    path = Path(target)
    if path.is_file():
        return read_formula_file(path)
    try:
        name = registry.resolve(target)
    except (LookupError, ValueError):
        try:
            name = DatasetName(target)
        except InvalidDatasetName:
            raise UnknownDatasetError(target, "neither a file, a registered path nor a dataset name") from None
    return store.load_or_throw(name)


def cmd_generate(args: argparse.Namespace, store: ArchiveStore) -> int:
    collection = Collection(args.collection)
    overrides = {}
    for flag in ("points", "colors", "events", "frames", "samples"):
        value = getattr(args, flag)
        if value is None:
            continue
        if flag not in SIZE_FLAGS[collection]:
            raise UsageError(f"--{flag} does not apply to {collection.value}")
        if value < 0:
            raise UsageError(f"--{flag} must be >= 0")
        overrides[SIZE_FLAGS[collection][flag]] = value
    name = DatasetName(args.name)
    data = generate(default_spec(collection, seed=args.seed, **overrides))
    report = validate(data, collection)
    store.save(data, name)
    print(f"generated {collection.value} dataset {name} in {store.archive_path(name)}")
    print(f"name={name}")
    print(report.key_values())
    return EXIT_OK if report.valid else EXIT_INVALID


def cmd_validate(args: argparse.Namespace, store: ArchiveStore, registry: Registry) -> int:
    data = _load(args.target, store, registry)
    collection = Collection(args.collection) if args.collection else detect_schema(data)
    if collection is None:
        print(f"{args.target}: matches no single collection schema")
        print("collection=none\nvalid=false")
        return EXIT_INVALID
    report = validate(data, collection)
    print(report.to_text())
    return EXIT_OK if report.valid else EXIT_INVALID


def cmd_inspect(args: argparse.Namespace, store: ArchiveStore, registry: Registry) -> int:
    data = _load(args.target, store, registry)
    collection = detect_schema(data)
    if collection is None:
        print(f"{args.target}: matches no single collection schema")
        print("collection=none")
        return EXIT_INVALID
    report = validate(data, collection)
    stamps = time_points(data)
    print(f"{args.target}: {collection.value} dataset")
    print(f"collection={collection.value}")
    for key, value in report.stats.items():
        print(f"{key}={value}")
    if stamps:
        print(f"first_time={_stamp(stamps[0])}")
        print(f"last_time={_stamp(stamps[-1])}")
    return EXIT_OK


def cmd_convert(args: argparse.Namespace) -> int:
    if not args.input.is_file():
        raise UnknownDatasetError(str(args.input), "input file not found")
    data = read_formula_file(args.input)
    if args.to == "txt":
        args.output.write_text(unparse(data) + "\n")
    else:
        args.output.write_bytes(encode_archive(data))
    print(f"converted {args.input} -> {args.output}")
    print(f"format={args.to}")
    return EXIT_OK


def cmd_ls(store: ArchiveStore, registry: Registry) -> int:
    on_disk = set(store.list_archives())
    entries = registry.list_entries()
    print(f"{len(entries)} registered paths, {len(on_disk)} archives in {store.data_dir}")
    for entry in entries:
        state = "archived" if entry.dataset in on_disk else "missing"
        print(f"{entry.path} -> {entry.dataset} -> {entry.collection.value} [{state}]")
    registered = {e.dataset for e in entries}
    for name in sorted(on_disk - registered):
        print(f"(unregistered) -> {name} [archived]")
    return EXIT_OK


def cmd_cat(args: argparse.Namespace, store: ArchiveStore, registry: Registry) -> int:
    data = _load(args.target, store, registry)
    if args.head is not None:
        if args.head < 0:
            raise UsageError("--head must be >= 0")
        if isinstance(data, BigAnd):
            data = BigAnd(data.items[: args.head])
    sys.stdout.write(unparse(data) + "\n")
    return EXIT_OK


def main(argv: Sequence[str] | None = None) -> int:
    logging.basicConfig(level=logging.WARNING, format="%(levelname)s: %(message)s")
    parser = build_parser()
    args = parser.parse_args(argv)
    store = ArchiveStore(args.data_dir)
    registry = default_registry()
    try:
        if args.command == "generate":
            return cmd_generate(args, store)
        if args.command == "validate":
            return cmd_validate(args, store, registry)
        if args.command == "inspect":
            return cmd_inspect(args, store, registry)
        if args.command == "convert":
            return cmd_convert(args)
        if args.command == "ls":
            return cmd_ls(store, registry)
        return cmd_cat(args, store, registry)
    except (UsageError, InvalidDatasetName) as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except UnknownDatasetError as exc:
        print(f"error: {exc}", file=sys.stderr)
        print("error=missing" if type(exc) is UnknownDatasetError else "error=corrupt")
        return EXIT_MISSING
    except StorageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_MISSING


if __name__ == "__main__":
    sys.exit(main())
