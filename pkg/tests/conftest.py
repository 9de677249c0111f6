import pytest

from efsmgen import load_document, load_scp, scp_model_path

_acceptance_results: list[tuple[str, str]] = []


@pytest.fixture(scope="session")
def scp():
    return load_scp()


@pytest.fixture(scope="session")
def scp_path():
    return str(scp_model_path())


@pytest.fixture(scope="session")
def scp_doc():
    return load_document(scp_model_path().read_bytes())


def pytest_runtest_logreport(report):
    if "test_acceptance.py" not in report.nodeid:
        return
    if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
        name = report.nodeid.split("::")[-1]
        _acceptance_results.append((name, "PASS" if report.passed else "FAIL"))


def pytest_terminal_summary(terminalreporter):
    if not _acceptance_results:
        return
    terminalreporter.section("acceptance criteria")
    for name, verdict in _acceptance_results:
        terminalreporter.write_line(f"{verdict}  {name}")
