"""Exit criteria 1-11, each run end to end at zero tolerance and within its time bound."""
import pytest

from mfwb.corpus import CHECKS, run_criterion


@pytest.mark.acceptance
@pytest.mark.parametrize("number", range(1, len(CHECKS) + 1), ids=lambda k: f"criterion{k:02d}")
def test_criterion(number, capsys):
    result = run_criterion(number)
    with capsys.disabled():
        print("\n" + result.line())
    assert result.passed, "\n".join(result.failures) or "time bound exceeded"
