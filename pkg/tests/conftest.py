import pytest

from mlix.datagen import DatasetSpec, generate

# |P|, |S|, n, m, r of the published experimental setup
PAPER_SCALE = dict(parameter_count=1000, service_count=20000, inputs_per_service=10,
                   outputs_per_service=10, request_size=32)


@pytest.fixture(scope="session")
def small_dataset():
    return generate(DatasetSpec(1000, 2000, 10, 10, 100, 32, seed=7))


@pytest.fixture(scope="session")
def paper_dataset():
    return generate(DatasetSpec(request_count=1000, seed=7, **PAPER_SCALE))


_acceptance_lines = []


@pytest.fixture
def acceptance_log():
    return _acceptance_lines


def pytest_terminal_summary(terminalreporter):
    if _acceptance_lines:
        terminalreporter.section("acceptance criteria")
        for line in _acceptance_lines:
            terminalreporter.write_line(line)
