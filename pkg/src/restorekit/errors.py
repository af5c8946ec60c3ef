"""Exception types raised by the toolkit's public operations."""


class ToolkitError(Exception):
    """Base class for all domain errors; the CLI maps these to exit code 1."""


# --- image I/O ---

class FileMissingError(ToolkitError):
    pass


class DecodeError(ToolkitError):
    pass


class WriteError(ToolkitError):
    pass


# --- manifests / splits ---

class BadRatiosError(ToolkitError):
    pass


class ManifestError(ToolkitError):
    pass


# --- dataset generation ---

class MissingPlaceholderError(ToolkitError):
    pass


class MultiplePlaceholdersError(ToolkitError):
    pass


class SizeTooSmallError(ToolkitError):
    pass


class BackendFailureError(ToolkitError):
    def __init__(self, sample_id, message):
        super().__init__(f"sample {sample_id}: {message}")
        self.sample_id = sample_id


# --- diversity ---

class EmptyInputError(ToolkitError):
    pass


class CategoryMismatchError(ToolkitError):
    pass


class TooFewPointsError(ToolkitError):
    pass


class TooManyPointsError(ToolkitError):
    pass


class PerplexityInfeasibleError(ToolkitError):
    pass


# --- models ---

class ShapeNotDivisibleError(ToolkitError):
    pass


class BadReductionError(ToolkitError):
    pass


class SpatialTooSmallError(ToolkitError):
    pass


# --- losses / metrics ---

class ShapeMismatchError(ToolkitError):
    pass


class NonFiniteScoresError(ToolkitError):
    pass


class TooFewSamplesError(ToolkitError):
    pass


class DimensionMismatchError(ToolkitError):
    pass


class NumericallyIndefiniteError(ToolkitError):
    pass


class ScorerUnavailableError(ToolkitError):
    pass


class PipelineFailureError(ToolkitError):
    pass


# --- training / checkpoints ---

class DivergenceDetectedError(ToolkitError):
    pass


class VersionMismatchError(ToolkitError):
    pass


class FingerprintMismatchError(ToolkitError):
    pass
