"""
Shared fixtures: the worked-example games and a settings cache reset
"""
import math
from pathlib import Path

import numpy as np
import pytest

from netgood.config import get_settings
from netgood.models.game import DependenceMatrix, Exponential, GameSpec

SAMPLES = Path(__file__).resolve().parents[1] / "samples"
INV_E = math.exp(-1.0)


def symmetric_pair(g: float) -> GameSpec:
    return GameSpec.uniform(np.array([[0.0, g], [g, 0.0]]), Exponential(1.0), INV_E)


def example2(g13: float) -> GameSpec:
    g = np.array([[0.0, 0.2, g13], [0.2, 0.0, 0.0], [0.0, 0.0, 0.0]])
    return GameSpec.uniform(g, Exponential(1.0), INV_E)


def star(g_in: float, g_out: float = 0.2) -> GameSpec:
    g = np.zeros((4, 4))
    g[0, 1:] = g_out
    g[1:, 0] = g_in
    return GameSpec.uniform(g, Exponential(1.0), INV_E)


def isolated(n: int, cost: float = INV_E) -> GameSpec:
    return GameSpec.uniform(DependenceMatrix.zeros(n), Exponential(1.0), cost)


@pytest.fixture
def substitutes_game():
    """Two agents, g = 0.5: unique equilibrium (2/3, 2/3)"""
    return symmetric_pair(0.5)


@pytest.fixture
def multiple_game():
    """Two agents, g = 2: three equilibria"""
    return symmetric_pair(2.0)


@pytest.fixture
def complements_game():
    """Two agents, g = -2: no equilibrium"""
    return symmetric_pair(-2.0)


@pytest.fixture
def star_game():
    return star(0.2)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture
def samples_dir():
    return SAMPLES


@pytest.fixture
def fresh_settings():
    get_settings.cache_clear()
    yield
    get_settings.cache_clear()
