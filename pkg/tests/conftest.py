import pytest

from pier.textnorm import Token

ACCEPTANCE_RESULTS = []


def toks(*texts):
    return [Token(t) for t in texts]


@pytest.fixture
def acceptance_log():
    return ACCEPTANCE_RESULTS


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section('acceptance criteria')
    for number, name, ok, detail in sorted(ACCEPTANCE_RESULTS):
        terminalreporter.write_line(f'[{"PASS" if ok else "FAIL"}] {number:>2}. {name}: {detail}')
