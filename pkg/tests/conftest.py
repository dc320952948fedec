import os
import time
from contextlib import contextmanager

import pytest
from hypothesis import HealthCheck, settings

from lieconf.repweight import clear_caches

settings.register_profile(
    "default", max_examples=60, deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.register_profile("thorough", max_examples=500, deadline=None)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))

_ACCEPTANCE: dict = {}


@contextmanager
def _criterion(number: int, limit: float):
    """Time a block cold and record a pass/fail line for the summary."""
    clear_caches()
    start = time.perf_counter()
    entry = {"limit": limit, "ok": False, "elapsed": None, "note": ""}
    _ACCEPTANCE[number] = entry
    try:
        yield entry
    except BaseException as exc:
        entry["elapsed"] = time.perf_counter() - start
        entry["note"] = f"{type(exc).__name__}: {exc}".splitlines()[0][:120]
        raise
    entry["elapsed"] = time.perf_counter() - start
    entry["ok"] = entry["elapsed"] < limit
    if not entry["ok"]:
        entry["note"] = "over time limit"
    assert entry["elapsed"] < limit, f"took {entry['elapsed']:.2f}s (limit {limit}s)"


@pytest.fixture
def criterion():
    return _criterion


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_ACCEPTANCE):
        e = _ACCEPTANCE[number]
        status = "PASS" if e["ok"] else "FAIL"
        took = f"{e['elapsed']:.2f}s" if e["elapsed"] is not None else "n/a"
        line = f"criterion {number}: {status}  ({took}, limit {e['limit']:g}s)"
        if e["note"]:
            line += f"  {e['note']}"
        terminalreporter.write_line(line)
