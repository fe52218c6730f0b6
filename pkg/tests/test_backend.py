"""Backend selection: explicit resolution, env default, validation."""

from __future__ import annotations

import os
import subprocess
import sys

import pytest

from triplescore import backend


def test_active_backend_is_valid():
    assert backend.ACTIVE in ("numba", "numpy")


def test_resolve_explicit_names():
    assert backend.resolve("numpy") == "numpy"
    if backend.HAS_NUMBA:
        assert backend.resolve("numba") == "numba"
    assert backend.resolve(None) == backend.ACTIVE


def test_resolve_rejects_unknown_name():
    with pytest.raises(ValueError):
        backend.resolve("fortran")


def test_resolve_numba_without_numba_fails_clearly():
    if backend.HAS_NUMBA:
        pytest.skip("numba is installed here")
    with pytest.raises(ImportError):
        backend.resolve("numba")


@pytest.mark.parametrize("value,expected", [("numpy", "numpy"), ("", None)])
def test_env_var_controls_default(value, expected):
    # fresh interpreter so the import-time selection sees the variable
    env = dict(os.environ)
    if value:
        env[backend.ENV_VAR] = value
    else:
        env.pop(backend.ENV_VAR, None)
    out = subprocess.run(
        [sys.executable, "-c", "from triplescore import backend; print(backend.ACTIVE)"],
        capture_output=True,
        text=True,
        env=env,
        check=True,
    ).stdout.strip()
    if expected is None:
        assert out in ("numba", "numpy")
    else:
        assert out == expected


def test_env_var_bogus_value_fails_fast():
    env = dict(os.environ, **{backend.ENV_VAR: "cuda"})
    proc = subprocess.run(
        [sys.executable, "-c", "import triplescore"],
        capture_output=True,
        text=True,
        env=env,
    )
    assert proc.returncode != 0
    assert "cuda" in proc.stderr
