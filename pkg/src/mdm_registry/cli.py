"""``mdm`` command line tool.

A store is a directory holding ``graph.nt`` (canonical triples),
``maintenance.log`` (execution log) and ``graph.nt.lock``. The store path
comes from ``--store``, then ``$MDM_STORE``, then ``./mdm-store``.

Exit codes: 0 success, 1 error findings (``validate``) or items due
(``due --fail-if-due``), 2 usage error, 3 I/O or parse error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import warnings
from contextlib import contextmanager
from datetime import date, datetime, timezone
from pathlib import Path

from filelock import FileLock, Timeout

from .conformance import validate
from .errors import MDMError, MDMSyntaxError, NotACatalogError, NotFoundError
from .graph import (
    Graph,
    Literal,
    ResourceId,
    as_resource,
    catalogs_describing,
    catalogs_following_scheme,
    catalogs_with_schema,
    load_store,
    save_store,
)
from .interchange import AccrualWarning, expand_accrual, export_json, parse_object_token, parse_triples, serialize_canonical
from .maintenance import LogEntry, MaintenanceLog, due_functions, zachman_matrix
from .vocabulary import VOCABULARIES, get_vocabulary

EXIT_OK = 0
EXIT_FINDINGS = 1
EXIT_USAGE = 2
EXIT_IO = 3

DEFAULT_STORE = "mdm-store"
GRAPH_FILE = "graph.nt"
LOG_FILE = "maintenance.log"
LOCK_TIMEOUT = 10.0


class StoreError(MDMError):
    pass


class UsageError(MDMError):
    pass


class Store:
    def __init__(self, path):
        self.path = Path(path)
        self.graph_path = self.path / GRAPH_FILE
        self.log_path = self.path / LOG_FILE
        self.lock_path = self.path / (GRAPH_FILE + ".lock")

    def init(self) -> bool:
        created = not self.graph_path.exists()
        self.path.mkdir(parents=True, exist_ok=True)
        with self.locked():
            if created:
                self.graph_path.write_bytes(b"")
            if not self.log_path.exists():
                self.log_path.write_bytes(b"")
        return created

    def check(self):
        if not self.graph_path.is_file():
            raise StoreError(f"no store at {self.path} (run 'mdm init')")

    @contextmanager
    def locked(self):
        lock = FileLock(str(self.lock_path), timeout=LOCK_TIMEOUT)
        try:
            with lock:
                yield
        except Timeout:
            raise StoreError(f"store {self.path} is locked by another invocation") from None

    def load_graph(self) -> Graph:
        return load_store(self.graph_path)

    def save_graph(self, g: Graph):
        save_store(g, self.graph_path)

    def load_log(self) -> MaintenanceLog:
        if not self.log_path.exists():
            return MaintenanceLog()
        return MaintenanceLog.load(self.log_path)


def _out(text=""):
    print(text, file=sys.stdout)


def _err(text):
    print(text, file=sys.stderr)


def _lenient_object(token: str):
    """Quoted text or a known CURIE; anything else is taken as a literal."""
    if token.startswith('"'):
        return parse_object_token(token)
    try:
        return ResourceId(token)
    except MDMSyntaxError:
        return Literal(token)


def _object_arg(token: str, literal: bool):
    return Literal(token) if literal else parse_object_token(token)


def _value_json(v):
    return {"id": v.curie} if isinstance(v, ResourceId) else {"value": v.value}


def _emit(args, text, payload):
    if args.format == "json":
        _out(json.dumps(payload, indent=2, ensure_ascii=False))
    elif text:
        _out(text)


def cmd_init(store: Store, args) -> int:
    created = store.init()
    _out(f"{'initialized' if created else 'already initialized'} store at {store.path}")
    return EXIT_OK


def cmd_add(store, args, g: Graph) -> int:
    changed = g.assert_statement(args.s, args.p, _object_arg(args.o, args.literal))
    _out("added" if changed else "already present")
    return EXIT_OK


def cmd_retract(store, args, g: Graph) -> int:
    changed = g.retract_statement(args.s, args.p, _object_arg(args.o, args.literal))
    _out("retracted" if changed else "not present")
    return EXIT_OK


def cmd_query(store, args, g: Graph) -> int:
    o = None if args.o is None else _object_arg(args.o, args.literal)
    found = g.statements_matching(args.s, args.p, o)
    payload = [
        {"subject": st.subject.curie, "predicate": st.predicate.curie, "object": _value_json(st.object)}
        for st in found
    ]
    _emit(args, "\n".join(st.render() for st in found), payload)
    return EXIT_OK


def cmd_catalogs(store, args, g: Graph) -> int:
    if args.collection is not None:
        found = catalogs_describing(g, as_resource(args.collection))
    elif args.schema is not None:
        found = catalogs_with_schema(g, _lenient_object(args.schema))
    else:
        found = catalogs_following_scheme(g, _lenient_object(args.scheme))
    _emit(args, "\n".join(c.curie for c in found), [c.curie for c in found])
    return EXIT_OK


def cmd_validate(store, args, g: Graph) -> int:
    report = validate(g)
    _emit(args, report.to_text(), report.to_dict())
    return EXIT_FINDINGS if report.errors else EXIT_OK


def cmd_log(store: Store, args, g: Graph) -> int:
    entry = LogEntry(args.function, args.executed_at, args.outcome, args.note)
    if not g.mentions(entry.function):
        _err(f"warning: {entry.function.curie} does not occur in the graph")
    MaintenanceLog.append_to(store.log_path, entry)
    _out(entry.to_line())
    return EXIT_OK


def cmd_due(store: Store, args, g: Graph) -> int:
    as_of = args.as_of or datetime.now(timezone.utc).date()
    items = due_functions(g, store.load_log(), as_of)
    text = "\n".join(
        f"{d['due_on']}\t{d['catalog']}\t{d['function']}\t{','.join(d['function_types']) or '-'}"
        for d in (item.to_dict() for item in items)
    )
    _emit(args, text, {"as_of": as_of.isoformat(), "due": [item.to_dict() for item in items]})
    if args.fail_if_due and items:
        return EXIT_FINDINGS
    return EXIT_OK


def cmd_matrix(store, args, g: Graph) -> int:
    try:
        matrix = zachman_matrix(g, args.catalog)
    except NotACatalogError as exc:
        raise UsageError(str(exc)) from None
    if not matrix.rows:
        _err(f"notice: {matrix.catalog.curie} has no maintenance functions; completeness is vacuous")
    _emit(args, matrix.to_text(), matrix.to_dict())
    return EXIT_OK


def cmd_import(store, args, g: Graph) -> int:
    path = Path(args.file)
    text = path.read_text(encoding="utf-8")
    outcome = parse_triples(text)
    if outcome.errors:
        for line, message in outcome.errors:
            _err(f"{path}:{line}: {message}")
        return EXIT_IO
    added = g.update(outcome.statements)
    _out(f"imported {len(outcome.statements)} statements ({added} new)")
    return EXIT_OK


def cmd_expand_accrual(store, args, g: Graph) -> int:
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always", AccrualWarning)
        added = expand_accrual(g)
    for w in caught:
        _err(f"warning: {w.message}")
    _out(serialize_canonical(added).rstrip("\n") if added else "nothing to expand")
    return EXIT_OK


def cmd_export(store, args, g: Graph) -> int:
    if args.format == "json":
        _out(export_json(g))
    else:
        sys.stdout.write(serialize_canonical(g))
    return EXIT_OK


def cmd_vocab(store, args) -> int:
    vocab = get_vocabulary(args.id)
    text = "\n".join(f"{t.local}\t{t.label}\t{t.definition}" for t in vocab)
    payload = {
        "id": vocab.id,
        "closed": vocab.closed,
        "terms": [{"local": t.local, "label": t.label, "definition": t.definition} for t in vocab],
    }
    _emit(args, text, payload)
    return EXIT_OK


# name -> (handler, writes graph)
_COMMANDS = {
    "add": (cmd_add, True),
    "retract": (cmd_retract, True),
    "query": (cmd_query, False),
    "catalogs": (cmd_catalogs, False),
    "validate": (cmd_validate, False),
    "log": (cmd_log, False),
    "due": (cmd_due, False),
    "matrix": (cmd_matrix, False),
    "import": (cmd_import, True),
    "expand-accrual": (cmd_expand_accrual, True),
    "export": (cmd_export, False),
}


def _iso_date(text: str) -> date:
    try:
        return date.fromisoformat(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected YYYY-MM-DD, got {text!r}") from None


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument(
        "--store",
        default=argparse.SUPPRESS,
        help=f"store directory (default: $MDM_STORE or ./{DEFAULT_STORE})",
    )
    fmt = argparse.ArgumentParser(add_help=False)
    fmt.add_argument("--format", choices=["text", "json"], default="text")
    literal = argparse.ArgumentParser(add_help=False)
    literal.add_argument("--literal", action="store_true", help="take the object argument as literal text")

    parser = argparse.ArgumentParser(
        prog="mdm",
        description="Registry of metadata maintenance descriptions.",
        parents=[common],
    )
    sub = parser.add_subparsers(dest="command", metavar="COMMAND")
    sub.required = True

    sub.add_parser("init", parents=[common], help="create an empty store")

    for name, verb in (("add", "assert"), ("retract", "retract")):
        p = sub.add_parser(name, parents=[common, literal], help=f"{verb} one statement")
        p.add_argument("s", help="subject CURIE")
        p.add_argument("p", help="predicate CURIE")
        p.add_argument("o", help='object CURIE or "quoted literal"')

    p = sub.add_parser("query", parents=[common, fmt, literal], help="list statements matching a pattern")
    p.add_argument("--s")
    p.add_argument("--p")
    p.add_argument("--o")

    p = sub.add_parser("catalogs", parents=[common, fmt], help="find catalogs by collection, schema or scheme")
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--collection", metavar="C")
    group.add_argument("--schema", metavar="D")
    group.add_argument("--scheme", metavar="NAME")

    sub.add_parser("validate", parents=[common, fmt], help="check the graph against the rule catalog")

    p = sub.add_parser("log", parents=[common], help="record an execution of a maintenance function")
    p.add_argument("function")
    p.add_argument("executed_at", metavar="ISO8601", help="UTC timestamp, e.g. 2004-08-18T09:30:00Z")
    p.add_argument("outcome", choices=["success", "failure"])
    p.add_argument("note", nargs="?")

    p = sub.add_parser("due", parents=[common, fmt], help="list maintenance functions that are due")
    p.add_argument("--as-of", type=_iso_date, metavar="DATE", help="YYYY-MM-DD (default: today, UTC)")
    p.add_argument("--fail-if-due", action="store_true", help="exit 1 when anything is due")

    p = sub.add_parser("matrix", parents=[common, fmt], help="coverage matrix for one catalog")
    p.add_argument("catalog")

    p = sub.add_parser("import", parents=[common], help="merge statements from a triple file")
    p.add_argument("file")

    sub.add_parser("expand-accrual", parents=[common], help="derive Accrual functions from DC accrual properties")

    p = sub.add_parser("export", parents=[common], help="write the whole graph")
    p.add_argument("--format", choices=["ntriples", "json"], default="ntriples")

    p = sub.add_parser("vocab", parents=[common, fmt], help="list the terms of a vocabulary")
    p.add_argument("id", choices=sorted(VOCABULARIES))
    return parser


def _store_path(args) -> Path:
    return Path(getattr(args, "store", None) or os.environ.get("MDM_STORE") or DEFAULT_STORE)


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else EXIT_OK

    store = Store(_store_path(args))
    try:
        if args.command == "init":
            return cmd_init(store, args)
        if args.command == "vocab":
            return cmd_vocab(store, args)
        handler, writes = _COMMANDS[args.command]
        store.check()
        with store.locked():
            g = store.load_graph()
            before = g.copy() if writes else None
            code = handler(store, args, g)
            if writes and g != before:
                store.save_graph(g)
            return code
    except UsageError as exc:
        _err(f"mdm: error: {exc}")
        return EXIT_USAGE
    except NotFoundError as exc:
        _err(f"mdm: error: {exc}")
        return EXIT_USAGE
    except (MDMError, OSError, UnicodeDecodeError) as exc:
        _err(f"mdm: error: {exc}")
        return EXIT_IO


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
