from pathlib import Path

import pytest

from normforge.rules import parse_rulebase
from normforge.vocabulary import load_vocabulary
from normforge.workspace import Workspace

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"

WORKED_RULE = (
    "It is obligatory that the office_action includes Paragraph_7_33_01, "
    "if claim is_rejected_under essential_subject_matter_requirement."
)


@pytest.fixture
def fixtures_dir() -> Path:
    return FIXTURES


@pytest.fixture
def section112() -> Workspace:
    return Workspace(FIXTURES / "section112")


@pytest.fixture
def adversarial() -> Workspace:
    return Workspace(FIXTURES / "adversarial")


@pytest.fixture
def patent_vocab():
    return load_vocabulary(FIXTURES / "section112" / "us_patent_law.vocab.json")


@pytest.fixture
def worked_rulebase():
    return parse_rulebase(WORKED_RULE)
