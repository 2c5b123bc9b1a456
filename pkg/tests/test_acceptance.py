"""One line per acceptance criterion; run with -s to see the PASS/FAIL lines."""

import pytest

from clonekit.verify import CHECKS


@pytest.mark.parametrize("check", CHECKS, ids=[c.__name__.removeprefix("check_") for c in CHECKS])
def test_criterion(check):
    result = check()
    print(result.line())
    assert result.passed, result.line()
