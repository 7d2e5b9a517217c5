import pytest

from paramlowrank.errors import (
    DegenerateGapError,
    NonFiniteError,
    NumericalError,
    ParamLowRankError,
    ParamLowRankValueError,
    RankDeficiencyError,
    ShapeMismatchError,
    SweepError,
    VerificationError,
)


@pytest.mark.parametrize(
    ("error_string", "error_class"),
    [
        ("Error", ParamLowRankError),
        ("Input.Invalid", ParamLowRankValueError),
        ("Input.NonFinite", NonFiniteError),
        ("Input.Shape", ShapeMismatchError),
        ("Spectrum.Degenerate", DegenerateGapError),
        ("Spectrum.RankDeficient", RankDeficiencyError),
        ("Sweep.Failed", SweepError),
        ("Verify.Failed", VerificationError),
        ("Internal.Numerical", NumericalError),
    ],
)
def test_from_string(error_string, error_class):
    assert ParamLowRankError.from_string(error_string) is error_class


def test_value_errors_are_not_builtin_value_errors():
    assert not issubclass(ParamLowRankValueError, ValueError)
    assert issubclass(NonFiniteError, ParamLowRankValueError)


def test_non_finite_error_names_index():
    error = NonFiniteError("a", (1, 2))
    assert error.index == (1, 2)
    assert str(error) == "a has a non-finite entry at index (1, 2)"


def test_degenerate_gap_error_keeps_xis():
    error = DegenerateGapError("No gap", xis=[0.5])
    assert error.xis == [0.5]
    assert repr(error) == "DegenerateGapError('No gap', xis=[0.5])"


def test_sweep_error_message():
    error = SweepError("boom", xi=0.25)
    assert error.xi == 0.25
    assert str(error) == "at xi=0.25: boom"


def test_verification_error_lists_suites():
    error = VerificationError(["pod", "lipschitz"])
    assert error.failed == ["pod", "lipschitz"]
    assert str(error) == "failed suites: pod, lipschitz"
