import numpy as np
import pytest

from rlframe.core import Transition

# criterion number -> (passed, detail); filled by test_acceptance.py
ACCEPTANCE = {}


def transition(s, a, r, s_next, absorbing=False, last=None):
    """Transition with discrete or vector fields given as plain numbers."""
    return Transition(np.atleast_1d(np.asarray(s)), np.atleast_1d(np.asarray(a)), float(r),
                      np.atleast_1d(np.asarray(s_next)), bool(absorbing),
                      bool(absorbing if last is None else last))


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section('acceptance criteria')
    for number in sorted(ACCEPTANCE):
        passed, detail = ACCEPTANCE[number]
        terminalreporter.write_line(f'criterion {number:2d}: {"PASS" if passed else "FAIL"}  {detail}')
