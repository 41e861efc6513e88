from __future__ import annotations

import sys
from pathlib import Path

import pytest

from tempobench.gen import GenConfig, gen_catalogue

DEFAULT_SEED = 2024


@pytest.fixture(scope="session")
def default_config() -> GenConfig:
    return GenConfig(seed=DEFAULT_SEED)


@pytest.fixture(scope="session")
def default_catalogue(default_config):
    return gen_catalogue(default_config)


@pytest.fixture()
def stub_solver(tmp_path):
    """Factory writing a small python stub and an adapter invoking it."""
    from tempobench.harness import SolverAdapter

    def make(name: str, script: str, patterns, target: str = "ladr"):
        path = tmp_path / f"{name}.py"
        path.write_text(script, encoding="utf-8")
        return SolverAdapter(
            name=name,
            executable=sys.executable,
            args=(str(path), "{input}"),
            target=target,
            patterns=tuple(patterns),
        )

    return make
