"""Exception types shared across the package.

``ConfigError`` marks user-fixable configuration problems (CLI exit code 2,
HTTP 422); every other ``GwscError`` is a runtime failure (exit code 1).
"""


class GwscError(Exception):
    """Base class for all package errors."""


class ConfigError(GwscError):
    """Invalid or inconsistent configuration (e.g. head/dataset arity mismatch)."""


# ---------------------------------------------------------------- core
class AlignmentNotFound(GwscError):
    """A character span cannot be overlapped with any wordpiece offset."""


class TargetTruncated(GwscError):
    """All wordpieces covering the target fall beyond the truncation limit."""


class LayerOutOfRange(GwscError):
    """Requested encoder layer index outside 0..n_layers."""


class ZeroVector(GwscError):
    """Cosine similarity is undefined for an all-zero vector."""


class DimensionMismatch(GwscError):
    """Vector or matrix dimensions do not agree."""


# ------------------------------------------------------------- datagen
class MalformedRow(GwscError):
    """A resource file row does not parse; carries the 1-based line number."""

    def __init__(self, path, line_no, message):
        super().__init__(f"{path}:{line_no}: {message}")
        self.path = str(path)
        self.line_no = line_no


class EmptySubstituteSet(GwscError):
    """Substitute overlap is undefined when a substitute set is empty."""


class InsufficientNegatives(GwscError):
    """No non-paraphrase sentence pair exists for a target word."""


# ---------------------------------------------------------- ukwac_subs
class EmptyRanking(GwscError):
    """A substitute ranking with no entries cannot be selected from."""


class EmptyVocabulary(GwscError):
    """No eligible word of the requested part of speech."""


# ------------------------------------------------------------ training
class EmptyDataset(GwscError):
    """No training examples remain after input construction."""


class NonFiniteLoss(GwscError):
    """Training loss became NaN or infinite; carries the offending batch id."""

    def __init__(self, batch_id, value):
        super().__init__(f"non-finite loss {value!r} at batch {batch_id}")
        self.batch_id = batch_id


# ------------------------------------------------------------- metrics
class LengthMismatch(GwscError):
    """Correlation inputs have different lengths."""


class ZeroSeries(GwscError):
    """Uncentered correlation is undefined for an all-zero series."""


class ZeroVariance(GwscError):
    """Centered correlation is undefined for a constant series."""


class DegenerateDenominator(GwscError):
    """Harmonic mean is undefined when the two values sum to zero."""


class RowCountMismatch(GwscError):
    """Prediction and gold files have different numbers of rows."""
