import os
import subprocess
import sys

import pytest


def _run_cli(*args, env_extra=None, timeout=600):
    env = os.environ.copy()
    env.setdefault("ARTIFACT_WORKERS", "1")
    if env_extra:
        env.update(env_extra)
    return subprocess.run(
        [sys.executable, "-m", "artifact.cli", *map(str, args)],
        capture_output=True,
        text=True,
        env=env,
        timeout=timeout,
    )


@pytest.fixture(scope="session")
def cli():
    return _run_cli
