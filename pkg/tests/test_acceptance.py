"""Acceptance criteria 1-12, one test each, at their stated tolerances.

Each test prints one ``criterion NN PASS/FAIL`` line; the lines are also
collected into an "acceptance criteria" section of the pytest summary.
"""

import pytest

from conftest import criterion_lines
from kmatch.suite import CRITERIA, run_criterion


@pytest.mark.parametrize("number", sorted(CRITERIA))
def test_criterion(number, request):
    c = run_criterion(number, seed=0)
    request.config.stash[criterion_lines].append(c.line())
    print(c.line())
    assert c.passed, c.details
