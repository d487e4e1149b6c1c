class DmiatError(Exception):
    pass


class ParseError(DmiatError, ValueError):
    def __init__(self, message, lineno=None):
        self.lineno = lineno
        if lineno is not None:
            message = f"line {lineno}: {message}"
        super().__init__(message)


class EmptyDatasetError(ParseError):
    pass


class ConfigurationError(DmiatError, ValueError):
    pass


class SchemaError(DmiatError, ValueError):
    pass


class DomainError(DmiatError, ValueError):
    pass


class EmptyVariantError(DmiatError):
    """A variant specification produced no columns for a fold."""


class UndefinedAccuracyError(DmiatError):
    """Accuracy requested on an empty test fold."""
