import os
import random

import pytest
from hypothesis import settings

from invmon.stephen import cached_source
from invmon.words import parse_presentation

settings.register_profile("default", deadline=None, max_examples=200)
settings.load_profile("default")

DATA = os.path.join(os.path.dirname(__file__), "..", "src", "invmon", "data")

FIG1 = "gens: a b c d ; rels: a c b, a d b, c c', d d'"
ACB_ADB = "gens: a b c d ; rels: a c b, a d b"
FIG2 = "gens: x y ; rels: x y x'"
FIG3 = "gens: x y ; rels: y y' x y x'"
FIG4 = "gens: x y ; rels: x y x y x' y' x'"
XPY = "gens: x p y ; rels: x p y, x p' y"
XPQY = "gens: x p q y ; rels: x p y, x p' y"
ABC = "gens: a b c ; rels: a b' a' a b a' c' a b c"
AA = "gens: a v ; rels: a a"

REFERENCE_PRESENTATIONS = {name: parse_presentation(text) for name, text in [
    ("fig1", FIG1), ("acb_adb", ACB_ADB), ("fig2", FIG2), ("fig3", FIG3),
    ("fig4", FIG4), ("xpy", XPY), ("xpqy", XPQY), ("aa", AA)]}


@pytest.fixture(scope="session")
def src():
    return cached_source(maxsize=None)


@pytest.fixture
def rng():
    return random.Random(20240611)


def pres(text):
    return parse_presentation(text)


# one summary line per acceptance criterion

_criteria = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n, title): acceptance criterion")


def pytest_runtest_makereport(item, call):
    m = item.get_closest_marker("criterion")
    if m is None:
        return
    if call.when != "call" and not (call.when == "setup" and call.excinfo):
        return
    n, title = m.args
    ok = call.excinfo is None
    prev = _criteria.get(n, (title, True))
    _criteria[n] = (title, prev[1] and ok)


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_criteria):
        title, ok = _criteria[n]
        terminalreporter.write_line(f"criterion {n:>2}: {'PASS' if ok else 'FAIL'}  {title}")
