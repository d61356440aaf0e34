"""Exception types shared across the package."""


class TypexpError(Exception):
    """Base class for all package-specific errors."""


class ValidationError(TypexpError):
    """Malformed input: bad probability vector, priors, or config."""


class AlphabetMismatchError(ValidationError):
    """Two objects that must share an alphabet do not."""


class DegenerateTiltError(TypexpError):
    """Geometric mixture undefined: disjoint supports at an interior weight."""


class EnumerationOverflowError(TypexpError):
    """Type-class enumeration would exceed the configured size guard."""


class InvalidQuantizationError(TypexpError):
    """Quantizing a distribution produced an out-of-range closing entry."""


class DegenerateRatioError(TypexpError):
    """Exponent ratio undefined because the minimum Chernoff information is 0."""


class UndefinedExponentError(TypexpError):
    """Too few usable points to fit an empirical error exponent."""
