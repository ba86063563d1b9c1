"""Registry for metadata maintenance collection descriptions.

Descriptions are stored as statements in a :class:`Graph`, checked with
:func:`validate`, scheduled from an execution log with
:func:`due_functions`, and summarised per catalog by :func:`zachman_matrix`.
"""

from .conformance import Finding, Report, rule_catalog, validate
from .errors import MDMError, MDMSyntaxError, NotACatalogError, NotFoundError, VocabularyError
from .graph import (
    PREFIXES,
    Graph,
    Literal,
    ResourceId,
    Statement,
    catalogs_describing,
    catalogs_following_scheme,
    catalogs_with_schema,
    expand_curie,
    load_store,
    save_store,
)
from .interchange import AccrualWarning, ParseOutcome, expand_accrual, export_json, parse_triples, serialize_canonical
from .maintenance import (
    ALWAYS,
    NEVER,
    NOT_DUE,
    DueItem,
    LogEntry,
    MaintenanceLog,
    Matrix,
    add_period,
    due_functions,
    next_due,
    record_execution,
    zachman_matrix,
)
from .vocabulary import VOCABULARIES, Term, TermVocabulary, is_member, terms_of

__version__ = "0.1.0"

__all__ = [
    "ALWAYS",
    "NEVER",
    "NOT_DUE",
    "PREFIXES",
    "VOCABULARIES",
    "AccrualWarning",
    "DueItem",
    "Finding",
    "Graph",
    "Literal",
    "LogEntry",
    "MDMError",
    "MDMSyntaxError",
    "MaintenanceLog",
    "Matrix",
    "NotACatalogError",
    "NotFoundError",
    "ParseOutcome",
    "Report",
    "ResourceId",
    "Statement",
    "Term",
    "TermVocabulary",
    "VocabularyError",
    "add_period",
    "catalogs_describing",
    "catalogs_following_scheme",
    "catalogs_with_schema",
    "due_functions",
    "expand_accrual",
    "expand_curie",
    "export_json",
    "is_member",
    "load_store",
    "next_due",
    "parse_triples",
    "record_execution",
    "rule_catalog",
    "save_store",
    "serialize_canonical",
    "terms_of",
    "validate",
    "zachman_matrix",
]
