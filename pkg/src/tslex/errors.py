"""Exception types shared across the package.

Validation problems (bad config values, malformed input files, unknown
keys) raise :class:`ConfigError` or :class:`CorpusFormatError`; both are
ValueErrors so plain ``except ValueError`` keeps working.  Failures inside
a pipeline stage are wrapped in :class:`StageError`, which records the
stage name so callers can report where a run died.
"""


class ConfigError(ValueError):
    """A configuration value or key is invalid."""


class CorpusFormatError(ValueError):
    """An input corpus file violates the expected tabular schema."""


class StageError(RuntimeError):
    """A pipeline stage failed.  ``stage`` names the stage."""

    def __init__(self, stage, cause):
        self.stage = stage
        self.cause = cause
        super().__init__("stage '%s' failed: %s" % (stage, cause))
