import pytest

from laysumm.attributes import AttributeContext, unigram_from_texts
from laysumm.corpus import Article, Split, Venue
from laysumm.synthetic import load_bundled_corpus


def make_article(
    id="a1",
    venue=Venue.PLOS,
    split=Split.TRAIN,
    abstract="We measured the protein. The receptor binds ligands.",
    lay="Proteins help cells talk. This study shows how.",
    sections=(("Intro", "Cells talk using proteins. Receptors bind ligands."),),
    title="A title",
):
    return Article(id, title, tuple(sections), abstract, lay, venue, split)


@pytest.fixture
def article():
    return make_article()


@pytest.fixture(scope="session")
def bundled():
    return load_bundled_corpus()


@pytest.fixture
def ctx():
    return AttributeContext(unigram=unigram_from_texts(["the protein binds receptors protein cells"]))


_acceptance = []


def pytest_runtest_logreport(report):
    if "test_acceptance.py" in report.nodeid and (report.when == "call" or report.outcome != "passed"):
        if report.when == "setup" and report.outcome == "passed":
            return
        _acceptance.append((report.nodeid.split("::")[-1], report.outcome))


def pytest_terminal_summary(terminalreporter):
    if not _acceptance:
        return
    terminalreporter.section("acceptance criteria")
    for name, outcome in _acceptance:
        label = {"passed": "PASS", "failed": "FAIL", "skipped": "SKIP"}.get(outcome, outcome.upper())
        terminalreporter.write_line(f"{label:5s} {name}")
