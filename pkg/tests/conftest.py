import pytest

from wncs.cli import DEFAULT_GRID
from wncs.campaign import run_sweep
from wncs.loop import LoopConfig

DESK_EPISODES = 20


@pytest.fixture(scope="session")
def flagship_records():
    """Desk-scale campaign on the default grid: 600 s episodes, 20 per point.

    Shared by the trade-off and feasible-region gates; takes on the order of
    a minute with numba available.
    """
    return run_sweep(LoopConfig(), list(DEFAULT_GRID), DESK_EPISODES, workers=1)
