import sys
from functools import lru_cache
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from ballgap.approx import build_qn  # noqa: E402


@lru_cache(maxsize=None)
def cached_qn(d, n, seed=1):
    return build_qn(d, n, seed=seed)


@pytest.fixture(scope="session")
def qn():
    return cached_qn


def pytest_terminal_summary(terminalreporter):
    from _acceptance import RESULTS

    if not RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(RESULTS):
        title, status, detail = RESULTS[number]
        line = f"{status} criterion {number:2d}: {title}"
        terminalreporter.write_line(line + (f" ({detail})" if detail else ""))
