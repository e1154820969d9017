import re

_ACCEPTANCE: dict[int, str] = {}
_TITLES = {
    1: "Lagrangian condition",
    2: "mu2 identity on L2",
    3: "median segment",
    4: "transversality",
    5: "one-to-one property",
    6: "contrast counts",
    7: "great circle",
    8: "reduction scaling",
    9: "representation checks",
    10: "moment-map machinery",
    11: "topology shadow",
    12: "lifting direction",
    13: "determinism",
}


def pytest_runtest_logreport(report):
    m = re.search(r"test_acceptance\.py::test_criterion_(\d+)", report.nodeid)
    if not m:
        return
    k = int(m.group(1))
    if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
        _ACCEPTANCE[k] = "PASS" if report.outcome == "passed" else "FAIL"


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(_ACCEPTANCE):
        terminalreporter.write_line(f"criterion {k:2d}  {_ACCEPTANCE[k]}  {_TITLES.get(k, '')}")
