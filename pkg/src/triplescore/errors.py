"""Exception taxonomy shared across the pipeline.

The CLI maps these onto its exit-code contract: configuration problems
exit 1, data/format problems exit 2, numerical failures exit 3.
"""


class ConfigurationError(ValueError):
    """Invalid configuration or unusable inputs (empty corpus, bad split)."""


class DataFormatError(ValueError):
    """A file violates its declared format; message carries the location."""


class NumericalError(ArithmeticError):
    """Non-finite values encountered during training."""


class UndefinedMetricError(ValueError):
    """A metric has no value on this input (empty set, no ordered pairs)."""
