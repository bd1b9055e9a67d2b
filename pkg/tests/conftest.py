import pytest

CRITERIA = {}


def record(number, passed, detail):
    CRITERIA[number] = f'criterion {number}: {"PASS" if passed else "FAIL"} {detail}'
    return CRITERIA[number]


@pytest.fixture
def criterion(capsys):
    def emit(number, passed, detail):
        line = record(number, passed, detail)
        with capsys.disabled():
            print('\n' + line)
    return emit


def pytest_terminal_summary(terminalreporter):
    if CRITERIA:
        terminalreporter.section('acceptance criteria')
        for n in sorted(CRITERIA):
            terminalreporter.write_line(CRITERIA[n])
