"""Exception hierarchy for sensekit.

The CLI maps each error family to a fixed process exit code, so new
exceptions should subclass the family that matches their failure class
rather than SensekitError directly.
"""

from __future__ import annotations


class SensekitError(Exception):
    """Base class for all errors raised by this package."""


class InputDataError(SensekitError):
    """An input file or value is malformed or violates an invariant (exit 2)."""


class ConsistencyError(SensekitError):
    """A corpus asserts both polarities for a property/concept pair (exit 3)."""


class ProviderError(SensekitError):
    """A completion provider is unreachable or returned garbage (exit 4)."""


class ConfigError(SensekitError):
    """Configuration, flags, or paths are invalid (exit 5)."""


class CorpusSyntaxError(InputDataError):
    """A corpus line could not be parsed."""

    def __init__(self, line: int, message: str) -> None:
        super().__init__(f"line {line}: {message}")
        self.line = line


class EmptyCorpusError(InputDataError):
    """The corpus has no usable (sensible) assertions."""


class LexiconError(InputDataError):
    """A nominalization lexicon is malformed or missing a required entry."""


class MeaningStoreError(InputDataError):
    """A meaning-store file is malformed or violates record invariants."""


class OntologyError(InputDataError):
    """An ontology JSON document is malformed or internally inconsistent."""


class UnknownTypeError(InputDataError):
    """A type name does not resolve to exactly one hierarchy node."""


class TemplateError(ConfigError):
    """A prompt template is malformed or missing for a requested dimension."""


class ElicitationError(ProviderError):
    """Every requested dimension failed during elicitation."""
