"""Fixtures for the reference-side suite.

Nothing here imports the production package; traces and primary record
streams come from subprocess CLI calls (see _drive), so every
comparison happens at the file-format boundary.
"""

from __future__ import annotations

from pathlib import Path

import pytest

from _drive import run_primary, write_config


@pytest.fixture(scope="session")
def work(tmp_path_factory) -> Path:
    return tmp_path_factory.mktemp("golden")


@pytest.fixture(scope="session")
def planar3_cfg(work) -> Path:
    return write_config(work / "planar3.cfg", kind="planar", d=3,
                        p_data=0.01, seed=11)


@pytest.fixture(scope="session")
def planar3_trace(work, planar3_cfg) -> dict:
    """A 600-round clean planar d=3 trace plus its primary decode."""
    gen = work / "p3-gen"
    run_primary("gen-trace", "--config", planar3_cfg, "--out", gen,
                "--rounds", 600)
    pri = work / "p3-pri"
    run_primary("decode", "--config", planar3_cfg, "--trace",
                gen / "trace.bin", "--out", pri, "--rounds", 600,
                "--single-thread")
    return {"config": planar3_cfg, "trace": gen / "trace.bin",
            "records": pri / "records.txt", "rounds": 600}
