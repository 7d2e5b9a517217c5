from __future__ import annotations

from typing import Optional, Sequence, Type


class ParamLowRankError(Exception):
    """Base error for this package.

    This is useful for client code to know whether the error is expected or
    whether there is a bug in the library code.

    >>> from paramlowrank import *

    >>> try:
    ...     schatten_norm([[1.0, 0.0], [0.0, 1.0]], 0.5)
    ... except ParamLowRankError:
    ...     print("Error in the client")
    ... except Exception:
    ...     print("Error in paramlowrank")
    Error in the client
    """

    error_string = "Error"

    @staticmethod
    def from_string(error_string: str) -> Optional[Type[ParamLowRankError]]:
        """Convert a diagnostic error string to an error class.

        >>> ParamLowRankError.from_string("Spectrum.Degenerate")
        <class 'paramlowrank.errors.DegenerateGapError'>

        Unknown strings give nothing back.

        >>> ParamLowRankError.from_string("Spectrum.Imaginary") is None
        True

        Args:
            error_string: The error string, such as "Input.Shape".

        Returns:
            The error class if the string is known.
        """
        mapping = {
            error_class.error_string: error_class
            for error_class in {
                ParamLowRankError,
                ParamLowRankValueError,
                NonFiniteError,
                ShapeMismatchError,
                DegenerateGapError,
                RankDeficiencyError,
                SweepError,
                VerificationError,
                NumericalError,
            }
        }
        return mapping.get(error_string)


class ParamLowRankValueError(ParamLowRankError):
    """A bad value was specified.

    >>> from paramlowrank import *

    >>> schatten_norm([[1.0]], 0.5)
    Traceback (most recent call last):
        ...
    paramlowrank.errors.ParamLowRankValueError: p must be at least 1, got 0.5
    """

    error_string = "Input.Invalid"


class NonFiniteError(ParamLowRankValueError):
    """Raised when an array holds NaN or Inf entries."""

    error_string = "Input.NonFinite"

    def __init__(self, name: str, index: Sequence[int]):
        """Initialize a NonFiniteError.

        Args:
            name: The name of the offending argument.
            index: The index of the first non-finite entry.
        """
        self.index = tuple(int(i) for i in index)
        super().__init__(f"{name} has a non-finite entry at index {self.index}")


class ShapeMismatchError(ParamLowRankValueError):
    """Raised when operands have incompatible shapes."""

    error_string = "Input.Shape"


class DegenerateGapError(ParamLowRankError):
    """Raised when an operation needs a strict spectral gap and there is none.

    The parameter values where the gap closes are kept in `xis`.
    """

    error_string = "Spectrum.Degenerate"

    def __init__(self, message: str, *, xis: Sequence[float] = ()):
        """Initialize a DegenerateGapError.

        Args:
            message: A human-readable description of the error.
            xis: The parameter values where the gap is degenerate.
        """
        super().__init__(message)
        self.xis = [float(xi) for xi in xis]

    def __repr__(self) -> str:
        """Return a representation of the DegenerateGapError.

        Returns:
            String representation of the DegenerateGapError.
        """
        return f"{self.__class__.__name__}({str(self)!r}, xis={self.xis!r})"


class RankDeficiencyError(ParamLowRankError):
    """Raised when a computation would divide by a vanishing singular value."""

    error_string = "Spectrum.RankDeficient"

    def __init__(self, message: str, *, index: int):
        """Initialize a RankDeficiencyError.

        Args:
            message: A human-readable description of the error.
            index: The 1-based index of the first vanishing value.
        """
        super().__init__(message)
        self.index = index


class SweepError(ParamLowRankError):
    """Raised when one member of a parameter sweep fails.

    The failing parameter value is kept in `xi` and the original error is
    chained as the cause.
    """

    error_string = "Sweep.Failed"

    def __init__(self, message: str, *, xi: float):
        """Initialize a SweepError.

        Args:
            message: A human-readable description of the error.
            xi: The parameter value of the failing member.
        """
        super().__init__(f"at xi={xi!r}: {message}")
        self.xi = xi


class VerificationError(ParamLowRankError):
    """Raised when property suites fail."""

    error_string = "Verify.Failed"

    def __init__(self, failed: Sequence[str]):
        """Initialize a VerificationError.

        Args:
            failed: The names of the failed suites.
        """
        self.failed = list(failed)
        super().__init__("failed suites: " + ", ".join(self.failed))


class NumericalError(ParamLowRankError):
    """Raised when round-off exceeds what an algorithm can tolerate.

    This points at a bug or at input far outside the supported range, not at
    a client mistake.
    """

    error_string = "Internal.Numerical"
