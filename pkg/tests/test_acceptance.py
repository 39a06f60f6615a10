"""One test per acceptance criterion, each printing a PASS/FAIL line.

Run with ``pytest tests/test_acceptance.py -v -s`` to see the lines.
"""

import json

import pytest

from stabring.suites import CRITERIA, run_criterion


@pytest.mark.parametrize("number", [c[0] for c in CRITERIA], ids=[f"c{c[0]:02d}" for c in CRITERIA])
def test_criterion(number):
    res = run_criterion(number)
    print(res.line())
    if not res.ok:
        print(json.dumps(res.detail, sort_keys=True)[:2000])
    assert res.ok, res.line()
