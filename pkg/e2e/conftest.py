"""Shared fixtures: the golden formulas and proofs in fixtures/.

Every test starts from default settings; tests that need other caps set
MRT_* variables with monkeypatch and the cache is dropped around them.
"""

from pathlib import Path

import pytest

from core.config import reset_settings
from mres.checker import MResLine
from mres.checker import lines_from_entries as mres_lines
from mrest.checker import MResTLine
from mrest.checker import lines_from_entries as mrest_lines
from proofs.formats import MRS, MRT, parse_proof
from qbf.model import Qbf
from qbf.qdimacs import parse_qdimacs

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"


def fixture_text(name: str) -> str:
    return (FIXTURES / name).read_text(encoding="utf-8")


def load_qbf(name: str) -> Qbf:
    return parse_qdimacs(fixture_text(name))


def load_mrest(name: str) -> list[MResTLine]:
    return mrest_lines(parse_proof(fixture_text(name), MRT))


def load_mres(name: str) -> list[MResLine]:
    return mres_lines(parse_proof(fixture_text(name), MRS))


@pytest.fixture(autouse=True)
def fresh_settings():
    reset_settings()
    yield
    reset_settings()


@pytest.fixture
def xuy() -> Qbf:
    return load_qbf("xuy.qdimacs")


@pytest.fixture
def xyuab() -> Qbf:
    return load_qbf("xyuab.qdimacs")


@pytest.fixture
def hash_proof() -> list[MResTLine]:
    return load_mrest("hash_proof.mrt")


@pytest.fixture
def branch_proof() -> list[MResTLine]:
    return load_mrest("branch_proof.mrt")
