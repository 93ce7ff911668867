import shutil
from pathlib import Path

import pytest
from hypothesis import HealthCheck, settings

from sunlet8.corpus import default_dir

settings.register_profile(
    "default", deadline=None, max_examples=60, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("default")


@pytest.fixture
def corpus_copy(tmp_path, monkeypatch) -> Path:
    """A private copy of the shipped corpus, selected through the env var."""
    d = tmp_path / "corpus"
    shutil.copytree(default_dir(), d)
    monkeypatch.setenv("SUNLET8_CORPUS", str(d))
    return d


_VERDICTS: list[str] = []


@pytest.fixture
def verdict():
    """Record the one-line outcome of an acceptance criterion."""

    def record(label: str, ok: bool, detail: str) -> None:
        _VERDICTS.append(f"{'PASS' if ok else 'FAIL'}  {label}: {detail}")

    return record


def pytest_terminal_summary(terminalreporter):
    if _VERDICTS:
        terminalreporter.section("acceptance criteria")
        for line in _VERDICTS:
            terminalreporter.write_line(line)
