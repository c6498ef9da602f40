import pytest

from topkagree import make_corpus, make_instance

_ACCEPTANCE_RESULTS: dict[str, str] = {}


def pytest_configure(config):
    config.addinivalue_line(
        "markers", "criterion(name): labels a test as one acceptance criterion"
    )


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker and report.when == "call":
        if report.passed:
            _ACCEPTANCE_RESULTS[marker.args[0]] = "PASS"
        elif report.skipped:
            _ACCEPTANCE_RESULTS[marker.args[0]] = "SKIP"
        else:
            _ACCEPTANCE_RESULTS[marker.args[0]] = "FAIL"
    elif marker and report.when == "setup" and report.failed:
        _ACCEPTANCE_RESULTS[marker.args[0]] = "FAIL"


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not _ACCEPTANCE_RESULTS:
        return
    terminalreporter.write_sep("-", "acceptance criteria")
    for name, verdict in _ACCEPTANCE_RESULTS.items():
        terminalreporter.write_line(f"[{verdict}] {name}")


@pytest.fixture
def two_method_corpus():
    """Two instances, two methods, with hand-checkable profiles."""
    return make_corpus(
        [
            make_instance(
                "a",
                ["the", "cat", "sat", "down", "."],
                {
                    "m1": [0.1, 0.9, 0.2, 0.8, 0.1],
                    "m2": [0.9, 0.1, 0.8, 0.1, 0.0],
                },
                human_selections=[[0, 1, 0, 1, 0], [0, 1, 0, 0, 0]],
            ),
            make_instance(
                "b",
                ["birds", "fly", "south", "."],
                {
                    "m1": [0.2, 0.7, 0.1, 0.0],
                    "m2": [0.0, 0.6, 0.2, 0.1],
                },
            ),
        ]
    )
