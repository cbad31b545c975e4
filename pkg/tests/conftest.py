import functools

import pytest

from hilbertclass.analytic import hilbert_analytic
from hilbertclass.classpoly_split import default_cache
from hilbertclass.quadform import fundamental_part, is_discriminant


@functools.lru_cache(maxsize=None)
def analytic(D):
    return hilbert_analytic(D)


def discriminants(bound, fundamental=False):
    out = []
    for D in range(-3, -bound - 1, -1):
        if not is_discriminant(D):
            continue
        if fundamental and fundamental_part(D)[1] != 1:
            continue
        out.append(D)
    return out


@pytest.fixture(scope="session")
def phi_cache():
    return default_cache()


# acceptance criteria: one summary line per criterion, collected from the
# outcome of every test carrying @pytest.mark.criterion(k, text)

_criteria = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(k, text): acceptance criterion k")


def pytest_runtest_logreport(report):
    if report.when != "call" and not (report.when == "setup" and report.outcome != "passed"):
        return
    mark = _marks.get(report.nodeid)
    if mark is None:
        return
    k, text = mark
    ok = report.outcome == "passed" and not hasattr(report, "wasxfail")
    entry = _criteria.setdefault(k, {"text": text, "ok": True, "failed": []})
    if not ok:
        entry["ok"] = False
        entry["failed"].append(report.nodeid.split("::")[-1])


_marks = {}


def pytest_collection_modifyitems(items):
    for item in items:
        m = item.get_closest_marker("criterion")
        if m is not None:
            _marks[item.nodeid] = m.args


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(_criteria):
        e = _criteria[k]
        line = f"criterion {k}: {'PASS' if e['ok'] else 'FAIL'}  {e['text']}"
        if e["failed"]:
            line += f"  [failed: {', '.join(e['failed'])}]"
        terminalreporter.write_line(line)
