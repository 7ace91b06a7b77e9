"""Shared test fixtures for toricchow tests."""

import random
from collections.abc import Callable
from pathlib import Path

import pytest
import yaml
from typer.testing import CliRunner

from toricchow.complex import PolyhedralComplex
from toricchow.exactalg import ZMat
from toricchow.fixtures import fixture

# ============================================================================
# CLI Fixtures
# ============================================================================


@pytest.fixture
def runner() -> CliRunner:
    """Provide a Typer CLI test runner."""
    return CliRunner()


@pytest.fixture
def workdir(tmp_path: Path, monkeypatch) -> Path:
    """Run in an empty directory so no stray settings file is picked up."""
    monkeypatch.chdir(tmp_path)
    for name in ("AUDIT_SEED", "AUDIT_FACTOR", "TEXT_MATRIX_LIMIT", "LOG_LEVEL"):
        monkeypatch.delenv(f"TORICHOW_{name}", raising=False)
    return tmp_path


# ============================================================================
# Complex Fixtures
# ============================================================================


@pytest.fixture(scope="session")
def p1_3() -> PolyhedralComplex:
    return fixture("p1:3")


@pytest.fixture(scope="session")
def p1_half() -> PolyhedralComplex:
    return fixture("p1-half")


@pytest.fixture(scope="session")
def p2_model() -> PolyhedralComplex:
    return fixture("p2-model")


@pytest.fixture(scope="session")
def blp2_model() -> PolyhedralComplex:
    return fixture("blp2-model")


@pytest.fixture(scope="session")
def projective2() -> PolyhedralComplex:
    return fixture("projective:2")


@pytest.fixture(scope="session")
def canonical_p2() -> PolyhedralComplex:
    return fixture("canonical:p2-model")


# ============================================================================
# Document Fixtures
# ============================================================================


NON_REGULAR_LINE = {
    "lattice_rank": 1,
    "vertices": [[0], ["1/2"]],
    "rays": [[-1], [1]],
    "maximal_cells": [
        {"vertices": [0], "rays": [0]},
        {"vertices": [0, 1]},
        {"vertices": [1], "rays": [1]},
    ],
}


@pytest.fixture
def non_regular_document() -> dict:
    """The line subdivided at 0 and 1/2; the unbounded cell at 1/2 has multiplicity 2."""
    return yaml.safe_load(yaml.safe_dump(NON_REGULAR_LINE))


@pytest.fixture
def non_regular_file(tmp_path: Path, non_regular_document: dict) -> Path:
    path = tmp_path / "non-regular.yaml"
    path.write_text(yaml.safe_dump(non_regular_document))
    return path


# ============================================================================
# Randomness
# ============================================================================


@pytest.fixture
def rng() -> random.Random:
    """Seeded generator so randomized tests are reproducible."""
    return random.Random(20240601)


@pytest.fixture
def random_unimodular(rng: random.Random) -> Callable[[int], ZMat]:
    """Factory for random unimodular matrices built from elementary row operations."""

    def build(n: int) -> ZMat:
        rows = [[1 if i == j else 0 for j in range(n)] for i in range(n)]
        if n == 1:
            return ZMat.from_rows([[rng.choice((1, -1))]], ncols=1)
        for _ in range(4):
            i, j = rng.sample(range(n), 2)
            factor = rng.choice((-2, -1, 1, 2))
            rows[i] = [a + factor * b for a, b in zip(rows[i], rows[j])]
        if rng.random() < 0.5:
            rows[0] = [-a for a in rows[0]]
        rng.shuffle(rows)
        return ZMat.from_rows(rows, ncols=n)

    return build
