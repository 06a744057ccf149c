"""Shared fixtures: expensive problem bundles built once per session."""

import pytest

from vqsm.chem import chain_geometry
from vqsm.experiments import build_problem


@pytest.fixture(scope="session")
def h2_bundle():
    return build_problem(chain_geometry(2, 0.7414))


@pytest.fixture(scope="session")
def h4_bundle():
    return build_problem(chain_geometry(4, 1.0))
