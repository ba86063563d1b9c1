"""Controlled vocabularies (encoding schemes) used by maintenance descriptions.

Four vocabularies ship with the registry:

* ``CLDType`` -- the subset of the DC collection-type vocabulary the model
  relies on. It is *open*: terms outside the list are accepted.
* ``MDMCollType`` -- the role a metadata catalog plays.
* ``MDMFunctionType`` -- the ten kinds of maintenance function.
* ``MDMPeriodicity`` -- how often a function should be performed.

The three ``MDM*`` vocabularies are *closed*; values outside them are
violations.

>>> is_member("MDMCollType", "Storage")
True
>>> [t.local for t in terms_of("MDMCollType")]
['Legacy', 'Storage', 'Delivery']
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from types import MappingProxyType
from typing import Mapping

from .errors import VocabularyError

__all__ = [
    "Term",
    "TermVocabulary",
    "VOCABULARIES",
    "CLDTYPE",
    "MDM_COLL_TYPE",
    "MDM_FUNCTION_TYPE",
    "MDM_PERIODICITY",
    "get_vocabulary",
    "is_member",
    "terms_of",
]

_LOCAL_RE = re.compile(r"[A-Za-z][A-Za-z0-9]*\Z")

CLDTYPE = "CLDType"
MDM_COLL_TYPE = "MDMCollType"
MDM_FUNCTION_TYPE = "MDMFunctionType"
MDM_PERIODICITY = "MDMPeriodicity"


@dataclass(frozen=True)
class Term:
    local: str
    label: str
    definition: str

    def __post_init__(self):
        if not _LOCAL_RE.match(self.local):
            raise ValueError(f"invalid term local name: {self.local!r}")


@dataclass(frozen=True)
class TermVocabulary:
    """A named set of terms, kept in declaration order."""

    id: str
    closed: bool
    terms: tuple[Term, ...]

    def __post_init__(self):
        seen = set()
        for term in self.terms:
            if term.local in seen:
                raise ValueError(f"duplicate term {term.local!r} in {self.id}")
            seen.add(term.local)
        object.__setattr__(self, "_locals", frozenset(seen))

    def __contains__(self, local: object) -> bool:
        return local in self._locals

    def __iter__(self):
        return iter(self.terms)

    def __len__(self) -> int:
        return len(self.terms)

    @property
    def locals(self) -> tuple[str, ...]:
        return tuple(t.local for t in self.terms)

    def index(self, local: str) -> int:
        """Declaration position of ``local``; used to order terms."""
        for i, term in enumerate(self.terms):
            if term.local == local:
                return i
        raise VocabularyError(f"{local!r} is not a {self.id} term")


def _vocab(vocab_id, closed, rows):
    return TermVocabulary(vocab_id, closed, tuple(Term(*row) for row in rows))


_ALL = (
    _vocab(
        CLDTYPE,
        False,
        [
            ("Catalogue", "Catalogue", "A collection of metadata records describing the items of another collection."),
            ("CollectionImage", "Image collection", "A collection whose items are images."),
            ("CollectionPhysicalObject", "Physical object collection", "A collection whose items are physical objects."),
        ],
    ),
    _vocab(
        MDM_COLL_TYPE,
        True,
        [
            ("Legacy", "Legacy", "Records received from a predecessor or external system."),
            ("Storage", "Storage", "Master records from which other record sets are generated."),
            ("Delivery", "Delivery", "Records prepared for one specific access or delivery system."),
        ],
    ),
    _vocab(
        MDM_FUNCTION_TYPE,
        True,
        [
            ("Accrual", "Accrual", "Adding new records to the catalog."),
            ("Deletion", "Deletion", "Removing records from the catalog."),
            ("Modification", "Modification", "Editing the content of existing records."),
            ("Transformation", "Transformation", "Rewriting records into another structure or format."),
            ("Reporting", "Reporting", "Producing statistics or lists about the records."),
            ("Export", "Export", "Writing records out for use by another system."),
            ("Mapping", "Mapping", "Maintaining crosswalks between element sets."),
            ("Migration", "Migration", "Moving the catalog to a new platform or schema."),
            ("Exposure", "Exposure", "Publishing records to harvesters or search services."),
            ("ActivationDeactivation", "Activation / deactivation", "Switching records or the catalog on or off for public access."),
        ],
    ),
    _vocab(
        MDM_PERIODICITY,
        True,
        [
            ("Continuous", "Continuous", "Performed on every change; always due."),
            ("Daily", "Daily", "Every day."),
            ("Weekly", "Weekly", "Every 7 days."),
            ("Biweekly", "Biweekly", "Every 14 days."),
            ("Monthly", "Monthly", "Every calendar month."),
            ("Quarterly", "Quarterly", "Every 3 calendar months."),
            ("Semiannual", "Semiannual", "Every 6 calendar months."),
            ("Annual", "Annual", "Every calendar year."),
            ("Biennial", "Biennial", "Every 2 calendar years."),
            ("Irregular", "Irregular", "No fixed schedule; never computed as due."),
        ],
    ),
)

VOCABULARIES: Mapping[str, TermVocabulary] = MappingProxyType({v.id: v for v in _ALL})


def get_vocabulary(vocab_id: str) -> TermVocabulary:
    try:
        return VOCABULARIES[vocab_id]
    except (KeyError, TypeError):
        raise VocabularyError(f"vocabulary not found: {vocab_id!r}") from None


def is_member(vocab_id: str, term: str) -> bool:
    """Whether ``term`` is listed in the vocabulary.

    For the open ``CLDType`` vocabulary a ``False`` only means "not one of
    the shipped terms"; callers must not reject on it.
    """
    return term in get_vocabulary(vocab_id)


def terms_of(vocab_id: str) -> list[Term]:
    return list(get_vocabulary(vocab_id).terms)
