"""Exception types shared across the package."""


class PauliPropError(Exception):
    """Base class for all package-specific errors."""


# -- arithmetic ---------------------------------------------------------------

class NotInvertible(PauliPropError):
    """Element has no multiplicative inverse modulo the given modulus."""


class NonPrimeModulus(PauliPropError):
    """Operation requires a prime modulus."""


class DuplicatePoint(PauliPropError):
    """Interpolation nodes must be mutually distinct."""


# -- shape / compatibility ----------------------------------------------------

class ShapeMismatch(PauliPropError):
    """Operands have incompatible lengths or qudit counts."""


class ModulusMismatch(PauliPropError):
    """Operands live over different moduli."""


class DirectionMismatch(PauliPropError):
    """Automorphisms with different direction conventions cannot be combined."""


class OutOfRange(PauliPropError):
    """Numeric parameter outside its admissible range."""


class IndexOutOfRange(PauliPropError):
    """Qudit index outside the register."""


class IllegalMultiplier(PauliPropError):
    """Multiplication gate requires a unit multiplier."""


class OddN(PauliPropError):
    """Repeater line operations require an even station count."""


class NoEncoding(PauliPropError):
    """Operation requires a scenario with an encoding."""


class ThresholdExceedsDistance(PauliPropError):
    """Abortion threshold must stay below the code distance."""


class NonCommutingGenerators(PauliPropError):
    """Stabilizer generators must commute pairwise."""


class InvalidCode(PauliPropError):
    """Code parameters violate the admissible family."""


class UnsupportedFamily(PauliPropError):
    """Explicit construction only exists for the maximal-distance family."""


class TooFewPositions(PauliPropError):
    """Erasure recovery needs at least as many known positions as coefficients."""


class IllegalInstruction(PauliPropError):
    """Circuit instruction is malformed or not executable in context."""


class ConfigError(PauliPropError):
    """Scenario configuration file is invalid."""


# -- resource caps ------------------------------------------------------------

class CapExceeded(PauliPropError):
    """A configured resource cap would be exceeded."""


class OracleCapExceeded(CapExceeded):
    """Dense-matrix oracle dimension exceeds the configured cap."""


class DenseCapExceeded(CapExceeded):
    """Dense table would exceed the configured size cap."""


class SpanTooLarge(CapExceeded):
    """Stabilizer span enumeration exceeds the configured cap."""


class BruteForceCapExceeded(CapExceeded):
    """Exhaustive enumeration exceeds the configured cap."""


class ParseError(PauliPropError):
    """Circuit file parse failure, carrying line and column of the offense."""

    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column
