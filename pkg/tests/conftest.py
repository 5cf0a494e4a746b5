import sys
from importlib import resources
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from qhtt.surface import parse  # noqa: E402

CORPUS = resources.files("qhtt") / "corpus"


def corpus_path(name):
    return Path(str(CORPUS / name))


def load(name):
    return parse(corpus_path(name).read_text(encoding="utf-8"))


@pytest.fixture
def corpus():
    return load


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(mod.RESULTS):
        terminalreporter.write_line(mod.RESULTS[n])
