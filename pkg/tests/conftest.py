import pytest
from hypothesis import settings

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")


@pytest.fixture(scope="session")
def model():
    from cyclic_cubics.order3.model import build_reference_model

    return build_reference_model()


@pytest.fixture(scope="session")
def flag():
    from cyclic_cubics.pfaffian.flag import load_appendix

    return load_appendix()


@pytest.fixture(scope="session")
def dual(flag):
    from cyclic_cubics.pfaffian.lines import dual_data

    return dual_data(flag)


# one line per acceptance criterion, repeated in the terminal summary
ACCEPTANCE_LINES: list = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.write_sep("=", "acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
