"""Rule catalog for maintenance descriptions and the validator that applies it.

Each rule has a fixed id and severity. Validation never raises; it returns a
:class:`Report` whose findings are ordered by rule id, then subject.
"""

from __future__ import annotations

import json
from collections import Counter
from dataclasses import dataclass, field
from typing import NamedTuple

from .graph import (
    CATALOGUE,
    CLD_COLLECTION_DESCRIPTION,
    DC_TYPE,
    DCTERMS_IS_REFERENCED_BY,
    MDM_ADMINISTRATOR,
    MDM_CONTACT,
    MDM_FOLLOWS_SCHEME,
    MDM_HAS_SCHEMA,
    MDM_IS_ENGAGED_VIA,
    MDM_MAINT_PERIODICITY,
    MDM_MAINTENANCE_FUNCTION,
    Graph,
    ResourceId,
)
from .vocabulary import MDM_COLL_TYPE, MDM_FUNCTION_TYPE, MDM_PERIODICITY, get_vocabulary

__all__ = ["SEVERITIES", "Rule", "Finding", "Report", "rule_catalog", "validate"]

SEVERITIES = ("error", "warning", "info")


class Rule(NamedTuple):
    rule_id: str
    severity: str
    description: str


_RULES = (
    Rule("R01", "error", "Every subject of mdm:maintenanceFunction is typed cldtype:Catalogue."),
    Rule("R02", "error", "Every object of cld:collectionDescription is a resource typed cldtype:Catalogue."),
    Rule("R03", "error", "mdm: dc:type values on a catalog are MDMCollType terms."),
    Rule("R04", "error", "Every maintenance function is a resource with at least one MDMFunctionType dc:type."),
    Rule(
        "R05",
        "error",
        "Every mdm:maintPeriodicity value is an MDMPeriodicity term; more than one per function is a warning.",
    ),
    Rule("R06", "warning", "Every subject of mdm:followsScheme is the object of some mdm:hasSchema."),
    Rule("R07", "error", "Every mdm:hasSchema value is a resource identifier, not a literal."),
    Rule("R08", "warning", "Every maintenance function has an mdm:contact and an mdm:administrator."),
    Rule("R09", "warning", "Every resource typed with an MDMFunctionType term is linked from a catalog."),
    Rule("R10", "info", "Every content collection links to a catalog via cld:collectionDescription."),
    Rule(
        "R11",
        "info",
        "Documentation, scripts, departments and contacts referenced by a function are described in the graph.",
    ),
)
_SEVERITY_OF = {r.rule_id: r.severity for r in _RULES}


def rule_catalog() -> list[Rule]:
    return list(_RULES)


@dataclass(frozen=True)
class Finding:
    rule_id: str
    severity: str
    subject: ResourceId
    message: str

    def sort_key(self):
        return (self.rule_id, self.subject.curie, self.message)

    def to_dict(self) -> dict:
        return {
            "rule": self.rule_id,
            "severity": self.severity,
            "subject": self.subject.curie,
            "message": self.message,
        }

    def __str__(self):
        return f"{self.rule_id} {self.severity} {self.subject.curie} {self.message}"


@dataclass
class Report:
    findings: list[Finding] = field(default_factory=list)

    def __post_init__(self):
        self.findings = sorted(set(self.findings), key=Finding.sort_key)

    @property
    def counts(self) -> dict[str, int]:
        tally = Counter(f.severity for f in self.findings)
        return {sev: tally.get(sev, 0) for sev in SEVERITIES}

    @property
    def errors(self) -> int:
        return self.counts["error"]

    @property
    def warnings(self) -> int:
        return self.counts["warning"]

    def by_rule(self, rule_id: str) -> list[Finding]:
        return [f for f in self.findings if f.rule_id == rule_id]

    def to_dict(self) -> dict:
        return {"findings": [f.to_dict() for f in self.findings], "counts": self.counts}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, ensure_ascii=False)

    def to_text(self) -> str:
        lines = [str(f) for f in self.findings]
        c = self.counts
        lines.append(f"{c['error']} errors, {c['warning']} warnings, {c['info']} info")
        return "\n".join(lines)


def _finding(rule_id, subject, message) -> Finding:
    return Finding(rule_id, _SEVERITY_OF[rule_id], subject, message)


def _resources(values):
    return sorted({v for v in values if isinstance(v, ResourceId)}, key=lambda r: r.curie)


def _mdm_terms(values) -> list[str]:
    return [v.local for v in values if isinstance(v, ResourceId) and v.prefix == "mdm"]


def _function_types(g: Graph, r: ResourceId) -> list[str]:
    vocab = get_vocabulary(MDM_FUNCTION_TYPE)
    return [t for t in _mdm_terms(g.objects(r, DC_TYPE)) if t in vocab]


def _subjects(g: Graph, predicate) -> list[ResourceId]:
    return _resources(st.subject for st in g.statements_matching(None, predicate, None))


def _check_catalog_links(g: Graph):
    for s in _subjects(g, MDM_MAINTENANCE_FUNCTION):
        if not g.is_catalog(s):
            yield _finding("R01", s, "has mdm:maintenanceFunction but is not typed cldtype:Catalogue")
    for st in g.statements_matching(None, CLD_COLLECTION_DESCRIPTION, None):
        if not isinstance(st.object, ResourceId):
            yield _finding("R02", st.subject, f"cld:collectionDescription value {st.object.render()} is a literal")
        elif not g.is_catalog(st.object):
            yield _finding("R02", st.object, "is a collection description target but not typed cldtype:Catalogue")


def _check_coll_types(g: Graph):
    coll_types = get_vocabulary(MDM_COLL_TYPE)
    for catalog in g.subjects(DC_TYPE, CATALOGUE):
        for term in _mdm_terms(g.objects(catalog, DC_TYPE)):
            if term not in coll_types:
                yield _finding("R03", catalog, f"dc:type mdm:{term} is not an MDMCollType term")


def _maintenance_functions(g: Graph):
    return g.statements_matching(None, MDM_MAINTENANCE_FUNCTION, None)


def _check_functions(g: Graph):
    periodicities = get_vocabulary(MDM_PERIODICITY)
    linked = set()
    for st in _maintenance_functions(g):
        if not isinstance(st.object, ResourceId):
            yield _finding("R04", st.subject, f"mdm:maintenanceFunction value {st.object.render()} is a literal")
            continue
        linked.add(st.object)
    for fn in sorted(linked, key=lambda r: r.curie):
        if not _function_types(g, fn):
            yield _finding("R04", fn, "has no dc:type from MDMFunctionType")
        missing = [p.curie for p in (MDM_CONTACT, MDM_ADMINISTRATOR) if not g.objects(fn, p)]
        if missing:
            yield _finding("R08", fn, "lacks " + " and ".join(missing))
    for fn in _subjects(g, MDM_MAINT_PERIODICITY):
        values = g.objects(fn, MDM_MAINT_PERIODICITY)
        for v in values:
            if not (isinstance(v, ResourceId) and v.prefix == "mdm" and v.local in periodicities):
                yield _finding("R05", fn, f"mdm:maintPeriodicity {v.render()} is not an MDMPeriodicity term")
        if len(values) > 1:
            yield Finding("R05", "warning", fn, f"has {len(values)} mdm:maintPeriodicity values")
    for fn in _subjects(g, DC_TYPE):
        if fn not in linked and _function_types(g, fn):
            yield _finding("R09", fn, "is typed as a maintenance function but no catalog links to it")


def _check_schemas(g: Graph):
    schemas = {st.object for st in g.statements_matching(None, MDM_HAS_SCHEMA, None)}
    for d in _subjects(g, MDM_FOLLOWS_SCHEME):
        if d not in schemas:
            yield _finding("R06", d, "has mdm:followsScheme but no catalog declares it with mdm:hasSchema")
    for st in g.statements_matching(None, MDM_HAS_SCHEMA, None):
        if not isinstance(st.object, ResourceId):
            yield _finding("R07", st.subject, f"mdm:hasSchema value {st.object.render()} is not a resource identifier")


def _check_collections(g: Graph):
    for r in _subjects(g, DC_TYPE):
        if g.is_catalog(r):
            continue
        content_types = [v for v in g.objects(r, DC_TYPE) if isinstance(v, ResourceId) and v.prefix == "cldtype"]
        if content_types and not g.objects(r, CLD_COLLECTION_DESCRIPTION):
            yield _finding("R10", r, "content collection has no cld:collectionDescription")


_REFERENCE_PREDICATES = (DCTERMS_IS_REFERENCED_BY, MDM_IS_ENGAGED_VIA, MDM_ADMINISTRATOR, MDM_CONTACT)


def _check_references(g: Graph):
    for p in _REFERENCE_PREDICATES:
        for st in g.statements_matching(None, p, None):
            if isinstance(st.object, ResourceId) and not g.has_subject(st.object):
                yield _finding("R11", st.object, f"referenced via {p.curie} from {st.subject.curie} but not described")


_CHECKS = (
    _check_catalog_links,
    _check_coll_types,
    _check_functions,
    _check_schemas,
    _check_collections,
    _check_references,
)


def validate(g: Graph) -> Report:
    """Apply every rule in the catalog to ``g``."""
    findings = []
    for check in _CHECKS:
        findings.extend(check(g))
    return Report(findings)
