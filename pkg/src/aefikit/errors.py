"""Exception hierarchy shared across the toolkit.

``InputError`` covers problems with user-supplied data or configuration
(bad schema, malformed CSV, invalid parameters); ``RuntimeFailure`` covers
failures that arise while computing (degenerate fits, storage faults).
The CLI maps the former to exit code 1 and the latter to exit code 2.
"""


class AefiError(Exception):
    """Base class for all toolkit errors."""


class InputError(AefiError):
    """Invalid user input: schema, file format, or parameter violations."""


class RuntimeFailure(AefiError):
    """Failure during computation or storage."""


class SchemaError(InputError):
    """A schema definition or schema/data mismatch problem."""


class ParseError(InputError):
    """A malformed cell or row in an input file."""

    def __init__(self, message: str, line: int | None = None, column: str | None = None):
        super().__init__(message)
        self.line = line
        self.column = column


class CleaningError(RuntimeFailure):
    """Record cleaning could not complete (e.g. no mode exists)."""


class EncodingError(InputError):
    """A record cannot be encoded under the fitted encoder."""


class SplitError(InputError):
    """A dataset split request cannot be satisfied."""


class GenerationError(InputError):
    """Synthetic data generation parameters are infeasible."""


class FitError(RuntimeFailure):
    """Model training failed."""


class PredictError(InputError):
    """A prediction request is malformed (e.g. dimension mismatch)."""


class SamplingError(RuntimeFailure):
    """Resampling could not be performed."""


class MetricError(InputError):
    """A metric is undefined for the given inputs."""


class SearchError(InputError):
    """A hyperparameter search plan is invalid or infeasible."""


class BenchmarkError(InputError):
    """A benchmark specification is invalid."""


class ExperimentError(RuntimeFailure):
    """An experiment precondition failed at run time."""


class BundleError(InputError):
    """A model bundle document is malformed."""


class VersionError(BundleError):
    """A model bundle declares an unsupported format version."""


class StoreError(RuntimeFailure):
    """The record store could not complete an operation."""
