import pytest

from quarticlab.field import field_create

_ACCEPTANCE = []


def record_acceptance(number: int, ok: bool, detail: str = ""):
    line = f"criterion {number:2d}: {'PASS' if ok else 'FAIL'}  {detail}".rstrip()
    _ACCEPTANCE.append((number, line))
    print(line)


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for _, line in sorted(_ACCEPTANCE, key=lambda item: item[0]):
        terminalreporter.write_line(line)


@pytest.fixture(scope="session")
def F2():
    return field_create(2)


@pytest.fixture(scope="session")
def F3():
    return field_create(3)


@pytest.fixture(scope="session")
def F5():
    return field_create(5)


@pytest.fixture(scope="session")
def F7():
    return field_create(7)


@pytest.fixture(scope="session")
def F9():
    return field_create(3, 2, (2, 2, 1))


@pytest.fixture(scope="session")
def F4():
    return field_create(2, 2)
