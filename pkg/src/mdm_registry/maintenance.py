"""Execution log, periodicity-driven scheduling, and the per-catalog coverage matrix."""

from __future__ import annotations

import calendar
import enum
import re
from dataclasses import dataclass, field
from datetime import date, datetime, timedelta, timezone
from pathlib import Path
from typing import Iterator, Optional, Union

from .errors import MDMSyntaxError, NotACatalogError, NotFoundError, VocabularyError
from .graph import (
    DC_TYPE,
    DCTERMS_IS_REFERENCED_BY,
    MDM_ADMINISTRATOR,
    MDM_CONTACT,
    MDM_IS_ENGAGED_VIA,
    MDM_MAINT_PERIODICITY,
    MDM_MAINTENANCE_FUNCTION,
    Graph,
    Literal,
    ObjectValue,
    ResourceId,
    as_resource,
)
from .vocabulary import MDM_FUNCTION_TYPE, MDM_PERIODICITY, get_vocabulary

__all__ = [
    "Marker",
    "ALWAYS",
    "NEVER",
    "NOT_DUE",
    "OUTCOMES",
    "LogEntry",
    "MaintenanceLog",
    "DueItem",
    "MatrixRow",
    "Matrix",
    "ZACHMAN_COLUMNS",
    "parse_timestamp",
    "format_timestamp",
    "add_period",
    "record_execution",
    "next_due",
    "due_functions",
    "zachman_matrix",
]


class Marker(enum.Enum):
    ALWAYS = "always"
    NEVER = "never"
    NOT_DUE = "not-due"

    def __str__(self):
        return self.value


ALWAYS = Marker.ALWAYS
NEVER = Marker.NEVER
NOT_DUE = Marker.NOT_DUE

OUTCOMES = ("success", "failure")

_DAY_STEPS = {"Daily": 1, "Weekly": 7, "Biweekly": 14}
_MONTH_STEPS = {"Monthly": 1, "Quarterly": 3, "Semiannual": 6, "Annual": 12, "Biennial": 24}

_TIMESTAMP_RE = re.compile(r"(\d{4})-(\d{2})-(\d{2})T(\d{2}):(\d{2}):(\d{2})Z\Z")


def parse_timestamp(text: str) -> datetime:
    """Parse ``YYYY-MM-DDTHH:MM:SSZ`` into an aware UTC datetime."""
    m = _TIMESTAMP_RE.match(text) if isinstance(text, str) else None
    if m is None:
        raise MDMSyntaxError(f"timestamp must look like 2004-08-18T09:30:00Z, got {text!r}", token=text)
    try:
        return datetime(*(int(x) for x in m.groups()), tzinfo=timezone.utc)
    except ValueError as exc:
        raise MDMSyntaxError(f"invalid timestamp {text!r}: {exc}", token=text) from None


def format_timestamp(value: datetime) -> str:
    return value.astimezone(timezone.utc).strftime("%Y-%m-%dT%H:%M:%SZ")


def _add_months(d: date, months: int) -> date:
    total = d.year * 12 + (d.month - 1) + months
    year, month = divmod(total, 12)
    month += 1
    return date(year, month, min(d.day, calendar.monthrange(year, month)[1]))


def add_period(d: date, term: str) -> Union[date, Marker]:
    """Next occurrence of ``term`` after ``d``.

    Month-based terms clamp the day to the end of the target month, so
    ``2004-01-31 + Monthly`` is ``2004-02-29``. ``Continuous`` gives
    :data:`ALWAYS` and ``Irregular`` gives :data:`NEVER`.
    """
    if term in _DAY_STEPS:
        return d + timedelta(days=_DAY_STEPS[term])
    if term in _MONTH_STEPS:
        return _add_months(d, _MONTH_STEPS[term])
    if term == "Continuous":
        return ALWAYS
    if term == "Irregular":
        return NEVER
    raise VocabularyError(f"{term!r} is not an MDMPeriodicity term")


@dataclass(frozen=True)
class LogEntry:
    """One execution of a maintenance function.

    String arguments are parsed: ``function`` as a CURIE and ``executed_at``
    as an ISO 8601 UTC timestamp with second precision.
    """

    function: ResourceId
    executed_at: datetime
    outcome: str
    note: Optional[str] = None

    def __post_init__(self):
        object.__setattr__(self, "function", as_resource(self.function))
        at = self.executed_at
        if isinstance(at, str):
            at = parse_timestamp(at)
        elif isinstance(at, datetime):
            if at.tzinfo is None:
                raise MDMSyntaxError("executed_at must be timezone-aware UTC")
            at = at.astimezone(timezone.utc).replace(microsecond=0)
        else:
            raise TypeError("executed_at must be str or datetime")
        object.__setattr__(self, "executed_at", at)
        if self.outcome not in OUTCOMES:
            raise MDMSyntaxError(f"outcome must be success or failure, got {self.outcome!r}", token=self.outcome)

    @property
    def succeeded(self) -> bool:
        return self.outcome == "success"

    def to_line(self) -> str:
        fields = [self.function.curie, format_timestamp(self.executed_at), self.outcome]
        if self.note is not None:
            fields.append(_escape_note(self.note))
        return "\t".join(fields)

    @classmethod
    def from_line(cls, line: str) -> "LogEntry":
        fields = line.split("\t")
        if len(fields) not in (3, 4):
            raise MDMSyntaxError(f"expected 3 or 4 tab-separated fields, got {len(fields)}")
        note = _unescape_note(fields[3]) if len(fields) == 4 else None
        return cls(fields[0], fields[1], fields[2], note)

    def to_dict(self) -> dict:
        return {
            "function": self.function.curie,
            "executed_at": format_timestamp(self.executed_at),
            "outcome": self.outcome,
            "note": self.note,
        }


_NOTE_ESCAPES = {"\\": "\\\\", "\t": "\\t", "\n": "\\n"}
_NOTE_UNESCAPES = {"\\": "\\", "t": "\t", "n": "\n"}


def _escape_note(note: str) -> str:
    return "".join(_NOTE_ESCAPES.get(ch, ch) for ch in note)


def _unescape_note(text: str) -> str:
    out = []
    chars = iter(text)
    for ch in chars:
        if ch != "\\":
            out.append(ch)
            continue
        nxt = next(chars, "")
        if nxt not in _NOTE_UNESCAPES:
            raise MDMSyntaxError(f"bad escape \\{nxt} in note")
        out.append(_NOTE_UNESCAPES[nxt])
    return "".join(out)


@dataclass
class MaintenanceLog:
    """Append-only list of executions, kept in insertion order."""

    entries: list[LogEntry] = field(default_factory=list)

    def __len__(self):
        return len(self.entries)

    def __iter__(self) -> Iterator[LogEntry]:
        return iter(self.entries)

    def record(self, entry: LogEntry) -> "MaintenanceLog":
        self.entries.append(entry)
        return self

    def last_success(self, function) -> Optional[date]:
        function = as_resource(function)
        dates = [e.executed_at.date() for e in self.entries if e.function == function and e.succeeded]
        return max(dates) if dates else None

    def dumps(self) -> str:
        return "".join(e.to_line() + "\n" for e in self.entries)

    @classmethod
    def loads(cls, text: str) -> "MaintenanceLog":
        log = cls()
        lines = text.split("\n")
        if lines and lines[-1] == "":
            lines.pop()
        for lineno, line in enumerate(lines, start=1):
            try:
                log.record(LogEntry.from_line(line))
            except MDMSyntaxError as exc:
                raise MDMSyntaxError(str(exc), line=lineno) from None
        return log

    @classmethod
    def load(cls, path) -> "MaintenanceLog":
        with open(path, encoding="utf-8", newline="") as fh:
            return cls.loads(fh.read())

    def save(self, path) -> None:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(self.dumps())

    @staticmethod
    def append_to(path, entry: LogEntry) -> None:
        with open(Path(path), "a", encoding="utf-8", newline="") as fh:
            fh.write(entry.to_line() + "\n")


def record_execution(log: MaintenanceLog, entry: LogEntry) -> MaintenanceLog:
    return log.record(entry)


@dataclass(frozen=True)
class DueItem:
    function: ResourceId
    catalog: Optional[ResourceId]
    function_types: tuple[str, ...]
    due_on: Union[date, Marker]

    def to_dict(self) -> dict:
        return {
            "catalog": self.catalog.curie if self.catalog else None,
            "function": self.function.curie,
            "function_types": list(self.function_types),
            "due_on": str(self.due_on) if self.due_on is ALWAYS else self.due_on.isoformat(),
        }


def _as_date(value) -> date:
    return value.date() if isinstance(value, datetime) else value


def _function_types(g: Graph, function: ResourceId) -> tuple[str, ...]:
    vocab = get_vocabulary(MDM_FUNCTION_TYPE)
    terms = {
        v.local
        for v in g.objects(function, DC_TYPE)
        if isinstance(v, ResourceId) and v.prefix == "mdm" and v.local in vocab
    }
    return tuple(sorted(terms, key=vocab.index))


def function_periodicity(g: Graph, function) -> Optional[str]:
    """The function's MDMPeriodicity term.

    Values outside the vocabulary are ignored. If several valid values are
    present the most frequent one wins.
    """
    vocab = get_vocabulary(MDM_PERIODICITY)
    terms = [
        v.local
        for v in g.objects(function, MDM_MAINT_PERIODICITY)
        if isinstance(v, ResourceId) and v.prefix == "mdm" and v.local in vocab
    ]
    return min(terms, key=vocab.index) if terms else None


def _evaluate(g, function, catalog, last_success, as_of):
    term = function_periodicity(g, function)
    if term is None or term == "Irregular":
        return NEVER
    types = _function_types(g, function)
    if term == "Continuous":
        return DueItem(function, catalog, types, ALWAYS)
    if last_success is None:
        return DueItem(function, catalog, types, as_of)
    due_on = add_period(last_success, term)
    if due_on <= as_of:
        return DueItem(function, catalog, types, due_on)
    return NOT_DUE


def _linking_catalogs(g: Graph, function: ResourceId) -> list[ResourceId]:
    return g.subjects(MDM_MAINTENANCE_FUNCTION, function)


def next_due(g: Graph, log: MaintenanceLog, function, as_of, catalog=None):
    """Whether ``function`` is due on ``as_of``.

    Returns a :class:`DueItem`, :data:`NOT_DUE`, or :data:`NEVER` (no
    periodicity, or ``Irregular``). A function with no successful run is due
    immediately; failed runs do not move the schedule. When ``catalog`` is
    omitted the first linking catalog in canonical order is reported.
    """
    function = as_resource(function)
    if not g.mentions(function):
        raise NotFoundError(f"{function.curie} does not occur in the graph")
    as_of = _as_date(as_of)
    if catalog is None:
        linking = _linking_catalogs(g, function)
        catalog = linking[0] if linking else None
    else:
        catalog = as_resource(catalog)
    return _evaluate(g, function, catalog, log.last_success(function), as_of)


def due_functions(g: Graph, log: MaintenanceLog, as_of) -> list[DueItem]:
    """Every (catalog, function) pair that is due on ``as_of``, ordered by catalog then function."""
    as_of = _as_date(as_of)
    last: dict[ResourceId, date] = {}
    for e in log:
        if e.succeeded:
            d = e.executed_at.date()
            if e.function not in last or d > last[e.function]:
                last[e.function] = d
    items = []
    pairs = {
        (st.subject, st.object)
        for st in g.statements_matching(None, MDM_MAINTENANCE_FUNCTION, None)
        if isinstance(st.object, ResourceId)
    }
    for catalog, function in sorted(pairs, key=lambda p: (p[0].curie, p[1].curie)):
        result = _evaluate(g, function, catalog, last.get(function), as_of)
        if isinstance(result, DueItem):
            items.append(result)
    return items


ZACHMAN_COLUMNS = (
    ("Periodicity", MDM_MAINT_PERIODICITY),
    ("Documentation", DCTERMS_IS_REFERENCED_BY),
    ("Script/Service", MDM_IS_ENGAGED_VIA),
    ("Department", MDM_ADMINISTRATOR),
    ("Contact", MDM_CONTACT),
)


def _value_dict(v: ObjectValue) -> dict:
    return {"id": v.curie} if isinstance(v, ResourceId) else {"value": v.value}


@dataclass(frozen=True)
class MatrixRow:
    function: ObjectValue
    function_types: tuple[str, ...]
    cells: dict

    @property
    def filled(self) -> int:
        return sum(1 for values in self.cells.values() if values)

    def to_dict(self) -> dict:
        return {
            "function": _value_dict(self.function),
            "function_types": list(self.function_types),
            "cells": {name: [_value_dict(v) for v in self.cells[name]] for name, _ in ZACHMAN_COLUMNS},
        }


@dataclass(frozen=True)
class Matrix:
    """Coverage of the five operational attributes for each function of a catalog."""

    catalog: ResourceId
    rows: tuple[MatrixRow, ...]

    @property
    def completeness(self) -> float:
        # an empty catalog counts as complete
        if not self.rows:
            return 1.0
        return sum(r.filled for r in self.rows) / (len(ZACHMAN_COLUMNS) * len(self.rows))

    def to_dict(self) -> dict:
        return {
            "catalog": self.catalog.curie,
            "columns": [name for name, _ in ZACHMAN_COLUMNS],
            "rows": [r.to_dict() for r in self.rows],
            "completeness": self.completeness,
        }

    def to_text(self) -> str:
        lines = [f"catalog {self.catalog.curie}"]
        for row in self.rows:
            types = ",".join(row.function_types) or "-"
            lines.append(f"{row.function.render()} [{types}]")
            for name, _ in ZACHMAN_COLUMNS:
                values = " ".join(v.render() for v in row.cells[name]) or "-"
                lines.append(f"  {name}: {values}")
        lines.append(f"completeness {self.completeness:.2f}")
        return "\n".join(lines)


def zachman_matrix(g: Graph, catalog) -> Matrix:
    catalog = as_resource(catalog)
    if not g.is_catalog(catalog):
        raise NotACatalogError(f"{catalog.curie} is not typed cldtype:Catalogue")
    functions = g.objects(catalog, MDM_MAINTENANCE_FUNCTION)
    rows = []
    for fn in functions:
        if isinstance(fn, Literal):
            cells = {name: [] for name, _ in ZACHMAN_COLUMNS}
            rows.append(MatrixRow(fn, (), cells))
            continue
        cells = {name: g.objects(fn, predicate) for name, predicate in ZACHMAN_COLUMNS}
        rows.append(MatrixRow(fn, _function_types(g, fn), cells))
    return Matrix(catalog, tuple(rows))
