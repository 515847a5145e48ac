from __future__ import annotations

import pytest

from strnim.solver import TranspositionTable


@pytest.fixture(scope="session")
def shared_table() -> TranspositionTable:
    """One table for the whole run; keys are canonical so sharing is sound."""
    return TranspositionTable()
