"""Shared fixtures: extended-precision contexts and cached reference nodes."""

import numpy as np
import pytest

from lagspec.oracle import HpContext, hp_gauss_nodes_mpf


@pytest.fixture(scope="session")
def hp_ctx():
    return HpContext(digits=24)


@pytest.fixture(scope="session")
def oracle_nodes_256(hp_ctx):
    """Reference nodes of the 256-point rule (alpha=0) as floats."""
    return np.array([float(v) for v in hp_gauss_nodes_mpf(hp_ctx, 0.0, 255)])
