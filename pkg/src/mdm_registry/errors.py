"""Exception types shared across the registry."""


class MDMError(Exception):
    """Base class for registry errors."""


class MDMSyntaxError(MDMError, ValueError):
    """A token, line, or timestamp that does not follow the registry grammar."""

    def __init__(self, message, token=None, line=None):
        self.token = token
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class VocabularyError(MDMError, LookupError):
    """Unknown vocabulary, or a term that is not in a closed vocabulary."""


class NotFoundError(MDMError, LookupError):
    """A resource the operation needs is absent from the graph."""


class NotACatalogError(MDMError, ValueError):
    """The resource is not typed ``cldtype:Catalogue``."""
