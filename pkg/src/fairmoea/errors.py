"""Exception types shared across the package."""


class FairmoeaError(Exception):
    """Base class for all package errors."""


class MalformedCsv(FairmoeaError):
    """The dataset file could not be parsed as CSV."""


class SchemaMismatch(FairmoeaError):
    """A column declared in the schema is missing from the data (or vice versa)."""


class ConstantColumn(FairmoeaError):
    """A numeric feature has zero variance on the training rows."""


class EmptyDataset(FairmoeaError):
    """An operation that needs at least one row received none."""


class ShapeMismatch(FairmoeaError):
    """Vector/matrix dimensions disagree with the network shape."""


class MissingGroup(FairmoeaError):
    """One of the two sensitive groups is absent from the data."""


class TooFewSamples(FairmoeaError):
    """Correlation needs at least four samples per vector."""


class InsufficientHistory(FairmoeaError):
    """Not enough correlation matrices recorded to average a full window."""


class EmptyPopulation(FairmoeaError):
    """Both archives are empty, nothing to mate."""


class DimensionMismatch(FairmoeaError):
    """Point sets with different objective dimensions were combined."""


class TooFewPoints(FairmoeaError):
    """The indicator needs more points than were supplied."""


class DimensionTooHigh(FairmoeaError):
    """Exact hypervolume is only implemented for up to three objectives."""


class InvalidValue(FairmoeaError):
    """A configuration value is out of its allowed range."""


class MissingArtifacts(FairmoeaError):
    """A run directory lacks the files needed for plotting or comparison."""
