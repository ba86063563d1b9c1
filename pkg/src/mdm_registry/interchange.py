"""Text and JSON forms of a graph, and the accrual-method importer.

The triple format is line based::

    gen:catB mdm:hasSchema gen:dtd1 .
    gen:dtd1 mdm:followsScheme "DCMES" .

Subjects and predicates are CURIEs; the object is a CURIE or a double-quoted
literal using the escapes ``\\"``, ``\\\\``, ``\\n`` and ``\\t``. Blank lines
and lines starting with ``#`` are ignored.
"""

from __future__ import annotations

import json
import warnings
from dataclasses import dataclass, field
from typing import Iterable

from .errors import MDMSyntaxError
from .graph import (
    DC_TYPE,
    DCTERMS_ACCRUAL_METHOD,
    DCTERMS_ACCRUAL_PERIODICITY,
    MDM_MAINT_PERIODICITY,
    MDM_MAINTENANCE_FUNCTION,
    MDM_NOTE,
    Graph,
    Literal,
    ResourceId,
    Statement,
    sort_key,
)
from .vocabulary import MDM_PERIODICITY, get_vocabulary

__all__ = [
    "ParseOutcome",
    "AccrualWarning",
    "parse_triples",
    "parse_object_token",
    "serialize_canonical",
    "export_json",
    "expand_accrual",
]

_ESCAPES = {'"': '"', "\\": "\\", "n": "\n", "t": "\t"}
_BLANK = " \t"


@dataclass
class ParseOutcome:
    statements: list[Statement] = field(default_factory=list)
    errors: list[tuple[int, str]] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.errors


class AccrualWarning(UserWarning):
    """Issued by :func:`expand_accrual` for values it could not map."""


def _skip_blank(line: str, pos: int) -> int:
    while pos < len(line) and line[pos] in _BLANK:
        pos += 1
    return pos


def _read_bare(line: str, pos: int) -> tuple[str, int]:
    end = pos
    while end < len(line) and line[end] not in _BLANK:
        end += 1
    return line[pos:end], end


def _read_literal(line: str, pos: int) -> tuple[Literal, int]:
    # line[pos] is the opening quote
    chars = []
    i = pos + 1
    while i < len(line):
        ch = line[i]
        if ch == '"':
            return Literal("".join(chars)), i + 1
        if ch == "\\":
            nxt = line[i + 1] if i + 1 < len(line) else ""
            if nxt not in _ESCAPES:
                raise MDMSyntaxError(f"bad escape \\{nxt}", token=line[i : i + 2])
            chars.append(_ESCAPES[nxt])
            i += 2
            continue
        chars.append(ch)
        i += 1
    raise MDMSyntaxError("unterminated literal", token=line[pos:])


def parse_object_token(token: str):
    """Parse a lone object token: a quoted literal or a CURIE."""
    if token.startswith('"'):
        lit, end = _read_literal(token, 0)
        if end != len(token):
            raise MDMSyntaxError(f"trailing text after literal: {token[end:]!r}", token=token)
        return lit
    return ResourceId(token)


def _parse_line(line: str) -> Statement:
    pos = _skip_blank(line, 0)
    subject, pos = _read_bare(line, pos)
    pos = _skip_blank(line, pos)
    predicate, pos = _read_bare(line, pos)
    pos = _skip_blank(line, pos)
    if not predicate or pos >= len(line):
        raise MDMSyntaxError("expected subject, predicate and object")
    if line[pos] == '"':
        obj, pos = _read_literal(line, pos)
    else:
        token, pos = _read_bare(line, pos)
        obj = token  # validated after the period check
    pos = _skip_blank(line, pos)
    if line[pos:pos + 1] != "." or _skip_blank(line, pos + 1) != len(line):
        raise MDMSyntaxError("missing terminal period")
    if isinstance(obj, str):
        obj = ResourceId(obj)
    return Statement(ResourceId(subject), ResourceId(predicate), obj)


def parse_triples(text: str) -> ParseOutcome:
    """Parse triple-format text, collecting one diagnostic per bad line.

    Callers that need all-or-nothing behaviour must discard
    ``outcome.statements`` when ``outcome.errors`` is non-empty.

    >>> parse_triples('gen:a dc:type foo:Bar .').errors
    [(1, 'unknown prefix foo')]
    """
    outcome = ParseOutcome()
    seen: set[Statement] = set()
    lines = text.split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    for lineno, line in enumerate(lines, start=1):
        stripped = line.strip(_BLANK)
        if not stripped or stripped.startswith("#"):
            continue
        try:
            st = _parse_line(line)
        except MDMSyntaxError as exc:
            outcome.errors.append((lineno, str(exc)))
            continue
        if st not in seen:
            seen.add(st)
            outcome.statements.append(st)
    return outcome


def serialize_canonical(statements: Iterable[Statement]) -> str:
    """One statement per line in canonical order; byte-deterministic."""
    unique = sorted(set(statements), key=sort_key)
    return "".join(st.render() + "\n" for st in unique)


def _json_value(obj) -> dict:
    if isinstance(obj, ResourceId):
        return {"id": obj.curie}
    return {"value": obj.value}


def export_json(g: Graph | Iterable[Statement]) -> str:
    """Subject -> predicate -> list of values, with sorted keys.

    Values are ``{"id": curie}`` or ``{"value": text}``.
    """
    tree: dict[str, dict[str, list]] = {}
    for st in sorted(set(g), key=sort_key):
        tree.setdefault(st.subject.curie, {}).setdefault(st.predicate.curie, []).append(
            _json_value(st.object)
        )
    return json.dumps(tree, indent=2, sort_keys=True, ensure_ascii=False)


def _accrual_typed(g: Graph, function) -> bool:
    return Statement(function, DC_TYPE, ResourceId("mdm:Accrual")) in g


def _periodicity_term(value) -> str | None:
    text = value.value if isinstance(value, Literal) else value.local
    return text if text in get_vocabulary(MDM_PERIODICITY) else None


def expand_accrual(g: Graph) -> list[Statement]:
    """Turn DC accrual properties on catalogs into Accrual maintenance functions.

    For each catalog carrying ``dcterms:accrualMethod`` or
    ``dcterms:accrualPeriodicity`` and no Accrual-typed function yet, a
    function ``gen:accrual-<catalog local name>`` is minted and linked. A
    periodicity value that names an ``MDMPeriodicity`` term exactly becomes
    its ``mdm:maintPeriodicity``; anything else is kept as an ``mdm:note``
    and reported with :class:`AccrualWarning`.

    Returns the statements added to ``g``. Running it again adds nothing.
    """
    subjects = {st.subject for st in g.statements_matching(None, DCTERMS_ACCRUAL_METHOD, None)}
    subjects |= {st.subject for st in g.statements_matching(None, DCTERMS_ACCRUAL_PERIODICITY, None)}
    added: list[Statement] = []
    for catalog in sorted(subjects, key=lambda r: r.curie):
        if not g.is_catalog(catalog):
            warnings.warn(
                f"{catalog.curie}: accrual properties on a resource not typed cldtype:Catalogue; skipped",
                AccrualWarning,
                stacklevel=2,
            )
            continue
        linked = [o for o in g.objects(catalog, MDM_MAINTENANCE_FUNCTION) if isinstance(o, ResourceId)]
        if any(_accrual_typed(g, f) for f in linked):
            continue
        minted = ResourceId(f"gen:accrual-{catalog.local}")
        new = [
            Statement(catalog, MDM_MAINTENANCE_FUNCTION, minted),
            Statement(minted, DC_TYPE, ResourceId("mdm:Accrual")),
        ]
        chosen = None
        for value in g.objects(catalog, DCTERMS_ACCRUAL_PERIODICITY):
            term = _periodicity_term(value)
            if term is not None and chosen is None:
                chosen = term
                new.append(Statement(minted, MDM_MAINT_PERIODICITY, ResourceId(f"mdm:{term}")))
                continue
            new.append(Statement(minted, MDM_NOTE, Literal(f"accrualPeriodicity: {value}")))
            reason = "additional periodicity" if term is not None else "periodicity not in MDMPeriodicity"
            warnings.warn(
                f"{catalog.curie}: {reason} {value.render()} kept as mdm:note on {minted.curie}",
                AccrualWarning,
                stacklevel=2,
            )
        for st in new:
            if g.add(st):
                added.append(st)
    return added
