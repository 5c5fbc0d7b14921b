"""Acceptance gate: every shipped claim runs once and reports a single
pass/fail line with its measured detail and time budget."""

import pytest

from quaddyn.acceptance import ALL_CRITERIA


def _ident(fn):
    return fn.__name__.replace("criterion_", "")


@pytest.mark.parametrize("criterion", ALL_CRITERIA, ids=_ident)
def test_criterion(criterion):
    result = criterion()
    print(result.line)
    assert result.passed, result.line
