"""Statement store for maintenance descriptions.

Every description is held as a set of ``(subject, predicate, object)``
statements. Subjects and predicates are CURIEs over a fixed prefix table;
objects are CURIEs or plain literals. There are no blank nodes.

>>> g = Graph()
>>> g.assert_statement("gen:collA", "dc:type", "cldtype:CollectionImage")
True
>>> g.assert_statement("gen:collA", "dc:type", "cldtype:CollectionImage")
False
>>> len(g)
1
"""

from __future__ import annotations

import os
import tempfile
import unicodedata
from collections import defaultdict
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Iterator, NamedTuple, Union

from .errors import MDMSyntaxError

__all__ = [
    "PREFIXES",
    "ResourceId",
    "Literal",
    "ObjectValue",
    "Statement",
    "Graph",
    "expand_curie",
    "as_resource",
    "as_object",
    "statement",
    "sort_key",
    "catalogs_describing",
    "catalogs_with_schema",
    "catalogs_following_scheme",
    "load_store",
    "save_store",
]

# mdm: and gen: have no published namespace; both are bound under example.org.
PREFIXES = {
    "dc": "http://purl.org/dc/elements/1.1/",
    "dcterms": "http://purl.org/dc/terms/",
    "cld": "http://purl.org/cld/terms/",
    "cldtype": "http://purl.org/cld/cdtype/",
    "mdm": "http://example.org/mdm/terms/",
    "gen": "http://example.org/mdm/id/",
}

_ALLOWED_LITERAL_CONTROLS = frozenset("\n\t")


def _bad_local_char(ch: str) -> bool:
    return ch.isspace() or ch in "<>" or unicodedata.category(ch) == "Cc"


@dataclass(frozen=True)
class ResourceId:
    """A named resource, written ``prefix:local``."""

    curie: str

    def __post_init__(self):
        if not isinstance(self.curie, str):
            raise TypeError("CURIE must be str")
        prefix, sep, local = self.curie.partition(":")
        if not sep:
            raise MDMSyntaxError(f"not a CURIE: {self.curie!r}", token=self.curie)
        if prefix not in PREFIXES:
            raise MDMSyntaxError(f"unknown prefix {prefix}", token=self.curie)
        if not local or any(_bad_local_char(ch) for ch in local):
            raise MDMSyntaxError(f"malformed local name in {self.curie!r}", token=self.curie)

    @property
    def prefix(self) -> str:
        return self.curie.partition(":")[0]

    @property
    def local(self) -> str:
        return self.curie.partition(":")[2]

    def render(self) -> str:
        return self.curie

    def __str__(self):
        return self.curie


@dataclass(frozen=True)
class Literal:
    """Plain text value. Compared by exact code points."""

    value: str

    def __post_init__(self):
        if not isinstance(self.value, str):
            raise TypeError("literal value must be str")
        for ch in self.value:
            if ch not in _ALLOWED_LITERAL_CONTROLS and unicodedata.category(ch) == "Cc":
                raise MDMSyntaxError(
                    f"control character U+{ord(ch):04X} in literal", token=self.value
                )

    def render(self) -> str:
        escaped = (
            self.value.replace("\\", "\\\\")
            .replace('"', '\\"')
            .replace("\n", "\\n")
            .replace("\t", "\\t")
        )
        return f'"{escaped}"'

    def __str__(self):
        return self.value


ObjectValue = Union[ResourceId, Literal]


class Statement(NamedTuple):
    subject: ResourceId
    predicate: ResourceId
    object: ObjectValue

    def render(self) -> str:
        return f"{self.subject.curie} {self.predicate.curie} {self.object.render()} ."


def expand_curie(curie: Union[str, ResourceId]) -> str:
    """Full IRI for a CURIE.

    >>> expand_curie("dc:type")
    'http://purl.org/dc/elements/1.1/type'
    """
    rid = as_resource(curie)
    return PREFIXES[rid.prefix] + rid.local


def as_resource(value: Union[str, ResourceId]) -> ResourceId:
    if isinstance(value, ResourceId):
        return value
    if isinstance(value, str):
        return ResourceId(value)
    raise TypeError(f"expected CURIE, got {type(value).__name__}")


def as_object(value: Union[str, ObjectValue]) -> ObjectValue:
    """Coerce an object position; plain strings are read as CURIEs."""
    if isinstance(value, Literal):
        return value
    return as_resource(value)


def statement(s, p, o) -> Statement:
    return Statement(as_resource(s), as_resource(p), as_object(o))


def _object_key(o: ObjectValue):
    return (0 if isinstance(o, ResourceId) else 1, o.render())


def sort_key(st: Statement):
    """Canonical order: subject, predicate, then object (resources first)."""
    return (st.subject.curie, st.predicate.curie) + _object_key(st.object)


# Vocabulary of the model, as resources.
DC_TYPE = ResourceId("dc:type")
DC_TITLE = ResourceId("dc:title")
CLD_COLLECTION_DESCRIPTION = ResourceId("cld:collectionDescription")
CATALOGUE = ResourceId("cldtype:Catalogue")
MDM_HAS_SCHEMA = ResourceId("mdm:hasSchema")
MDM_FOLLOWS_SCHEME = ResourceId("mdm:followsScheme")
MDM_MAINTENANCE_FUNCTION = ResourceId("mdm:maintenanceFunction")
MDM_MAINT_PERIODICITY = ResourceId("mdm:maintPeriodicity")
DCTERMS_IS_REFERENCED_BY = ResourceId("dcterms:isReferencedBy")
MDM_IS_ENGAGED_VIA = ResourceId("mdm:isEngagedVia")
MDM_ADMINISTRATOR = ResourceId("mdm:administrator")
MDM_CONTACT = ResourceId("mdm:contact")
MDM_NOTE = ResourceId("mdm:note")
DCTERMS_ACCRUAL_METHOD = ResourceId("dcterms:accrualMethod")
DCTERMS_ACCRUAL_PERIODICITY = ResourceId("dcterms:accrualPeriodicity")


class Graph:
    """A set of statements indexed by subject, predicate and object.

    Single-writer: callers must not mutate while other threads read.
    """

    def __init__(self, statements: Iterable = ()):
        self._statements: set[Statement] = set()
        self._by_s: dict[ResourceId, set[Statement]] = defaultdict(set)
        self._by_p: dict[ResourceId, set[Statement]] = defaultdict(set)
        self._by_o: dict[ObjectValue, set[Statement]] = defaultdict(set)
        for st in statements:
            self.add(st)

    def __len__(self) -> int:
        return len(self._statements)

    def __iter__(self) -> Iterator[Statement]:
        return iter(sorted(self._statements, key=sort_key))

    def __contains__(self, st) -> bool:
        return st in self._statements

    def __eq__(self, other):
        if not isinstance(other, Graph):
            return NotImplemented
        return self._statements == other._statements

    def __repr__(self):
        return f"<Graph with {len(self)} statements>"

    def copy(self) -> "Graph":
        return Graph(self._statements)

    def add(self, st: Statement) -> bool:
        if st in self._statements:
            return False
        self._statements.add(st)
        self._by_s[st.subject].add(st)
        self._by_p[st.predicate].add(st)
        self._by_o[st.object].add(st)
        return True

    def discard(self, st: Statement) -> bool:
        if st not in self._statements:
            return False
        self._statements.remove(st)
        for index, key in ((self._by_s, st.subject), (self._by_p, st.predicate), (self._by_o, st.object)):
            bucket = index[key]
            bucket.discard(st)
            if not bucket:
                del index[key]
        return True

    def update(self, statements: Iterable[Statement]) -> int:
        return sum(self.add(st) for st in statements)

    def assert_statement(self, s, p, o) -> bool:
        """Add a statement; returns False if it was already present."""
        return self.add(statement(s, p, o))

    def retract_statement(self, s, p, o) -> bool:
        return self.discard(statement(s, p, o))

    def statements_matching(self, s=None, p=None, o=None) -> list[Statement]:
        """Statements agreeing with every bound position, in canonical order."""
        s = None if s is None else as_resource(s)
        p = None if p is None else as_resource(p)
        o = None if o is None else as_object(o)
        candidates = None
        for index, key in ((self._by_s, s), (self._by_p, p), (self._by_o, o)):
            if key is None:
                continue
            bucket = index.get(key, ())
            if candidates is None or len(bucket) < len(candidates):
                candidates = bucket
        if candidates is None:
            candidates = self._statements
        found = [
            st
            for st in candidates
            if (s is None or st.subject == s)
            and (p is None or st.predicate == p)
            and (o is None or st.object == o)
        ]
        found.sort(key=sort_key)
        return found

    def objects(self, s, p) -> list[ObjectValue]:
        return [st.object for st in self.statements_matching(s, p, None)]

    def subjects(self, p, o) -> list[ResourceId]:
        return _unique_resources(st.subject for st in self.statements_matching(None, p, o))

    def has_subject(self, s) -> bool:
        return as_resource(s) in self._by_s

    def mentions(self, r) -> bool:
        """Whether ``r`` occurs as subject or object of any statement."""
        r = as_resource(r)
        return r in self._by_s or r in self._by_o

    def is_catalog(self, r) -> bool:
        return Statement(as_resource(r), DC_TYPE, CATALOGUE) in self._statements


def _unique_resources(items: Iterable) -> list[ResourceId]:
    return sorted({x for x in items if isinstance(x, ResourceId)}, key=lambda r: r.curie)


def catalogs_describing(g: Graph, coll) -> list[ResourceId]:
    """Catalogs linked from ``coll`` by ``cld:collectionDescription``."""
    return _unique_resources(g.objects(coll, CLD_COLLECTION_DESCRIPTION))


def catalogs_with_schema(g: Graph, schema) -> list[ResourceId]:
    return _unique_resources(st.subject for st in g.statements_matching(None, MDM_HAS_SCHEMA, schema))


def catalogs_following_scheme(g: Graph, scheme) -> list[ResourceId]:
    """Catalogs whose schema (via ``mdm:hasSchema``) follows ``scheme``."""
    found = set()
    for schema in g.subjects(MDM_FOLLOWS_SCHEME, scheme):
        found.update(catalogs_with_schema(g, schema))
    return sorted(found, key=lambda r: r.curie)


def load_store(path) -> Graph:
    """Read a canonical triple file. Any parse error is raised."""
    from .interchange import parse_triples

    path = Path(path)
    text = path.read_text(encoding="utf-8")
    outcome = parse_triples(text)
    if outcome.errors:
        line, message = outcome.errors[0]
        raise MDMSyntaxError(f"{path}: {message}", line=line)
    return Graph(outcome.statements)


def save_store(g: Graph, path) -> None:
    """Write ``g`` in canonical form, replacing ``path`` atomically."""
    from .interchange import serialize_canonical

    path = Path(path)
    data = serialize_canonical(g).encode("utf-8")
    fd, tmp = tempfile.mkstemp(prefix=f".{path.name}.", dir=path.parent)
    try:
        with os.fdopen(fd, "wb") as fh:
            fh.write(data)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
