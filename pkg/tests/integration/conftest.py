"""
Full-resolution suite datasets and runs shared by the acceptance tests.

Datasets and runs are cached per session; every test here is marked slow.
"""

from typing import Dict, Tuple

import pytest

from slam_booster.config.run_config import RunConfig
from slam_booster.core.runner import BoosterRunner, RunResult
from slam_booster.simulation.suites import suite_dataset
from slam_booster.storage.dataset import Dataset


@pytest.fixture(scope="session")
def suite_cache() -> Dict[Tuple[str, bool], Dataset]:
    return {}


@pytest.fixture(scope="session")
def run_cache() -> Dict[Tuple, RunResult]:
    return {}


@pytest.fixture(scope="session")
def load_dataset(suite_cache):
    def load(name: str, noiseless: bool = False) -> Dataset:
        key = (name, noiseless)
        if key not in suite_cache:
            suite_cache[key] = suite_dataset(name, noiseless=noiseless)
        return suite_cache[key]

    return load


@pytest.fixture(scope="session")
def run_suite(load_dataset, run_cache):
    """Run a suite under one strategy and precision mode, caching the result."""

    def run(name: str, strategy: str, precision: str = "full", noiseless: bool = False) -> RunResult:
        key = (name, strategy, precision, noiseless)
        if key not in run_cache:
            config = RunConfig().with_controller(strategy=strategy, precision_mode=precision)
            run_cache[key] = BoosterRunner(config).run(load_dataset(name, noiseless), name=name)
        return run_cache[key]

    return run
