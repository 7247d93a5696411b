"""Exception hierarchy shared across the package.

The CLI maps these to exit codes: ConfigError -> 2, InputError -> 3,
BackendError -> 4.
"""


class SluaugError(Exception):
    """Base class for all errors raised by sluaug."""


class ConfigError(SluaugError):
    """Invalid configuration or unusable combination of options."""


class InputError(SluaugError):
    """Input data cannot be used (malformed or insufficient)."""


class CorpusFormatError(InputError):
    """A corpus record violates the JSONL schema or BIO tagging rules."""


class TreeFormatError(InputError):
    """A dependency-parse block is malformed or not a valid tree."""


class BackendError(SluaugError):
    """The fill-mask / scoring service failed or returned garbage."""


class BackendRejected(BackendError):
    """The service refused a specific request (4xx); skip the record."""
