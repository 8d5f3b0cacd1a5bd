import os
import re
import sys
from importlib import resources

import hypothesis
import pytest

from clvernacular import engine, tptp

hypothesis.settings.register_profile("default", deadline=None, max_examples=50)
hypothesis.settings.register_profile("fast", deadline=None, max_examples=10)
hypothesis.settings.register_profile("thorough", deadline=None, max_examples=500)
hypothesis.settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))

HERE = os.path.dirname(os.path.abspath(__file__))
GOLDEN = os.path.join(HERE, "golden")
CORPUS = str(resources.files("clvernacular").joinpath("data/tarski"))


def corpus(name):
    return os.path.join(CORPUS, name)


def golden(name):
    with open(os.path.join(GOLDEN, name), encoding="utf-8") as fh:
        return fh.read()


def normalize(text):
    """Collapse runs of whitespace and drop blank lines."""
    lines = (re.sub(r"\s+", " ", l).strip() for l in text.splitlines())
    return [l for l in lines if l]


def between(text, start, end):
    """Lines from the first one starting with ``start`` through the next one starting with ``end``."""
    lines = normalize(text)
    i = next(k for k, l in enumerate(lines) if l.startswith(start))
    j = next(k for k in range(i, len(lines)) if lines[k].startswith(end))
    return lines[i:j + 1]


@pytest.fixture(scope="session")
def th_4_19():
    theory, conjs = tptp.load(corpus("th_4_19.p"))
    return theory, conjs[0]


@pytest.fixture(scope="session")
def th_4_19_result(th_4_19):
    theory, conj = th_4_19
    return engine.prove(theory, conj)


@pytest.fixture
def write(tmp_path):
    def _write(name, text):
        p = tmp_path / name
        p.write_text(text, encoding="utf-8")
        return str(p)
    return _write


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod and mod.RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in mod.RESULTS:
            terminalreporter.write_line(line)
