import functools

import pytest

from fluxring import classical
from fluxring.model import ClassicalConfig


@functools.lru_cache(maxsize=None)
def _ramped_run(b_final: float) -> classical.Trajectory:
    # ramp over 100 orbital periods, two settling periods appended
    return classical.run_scenario(ClassicalConfig(b_final=b_final))


@pytest.fixture(scope="session")
def ramped_run():
    """Factory for the long smoothstep-ramp scenario, cached per field value."""
    return _ramped_run
