"""Subprocess drivers: the production package is used only via its CLI."""

from __future__ import annotations

import subprocess
import sys
from pathlib import Path

PRIMARY = (sys.executable, "-m", "qecdesk.cli")
GOLDEN = (sys.executable, "-m", "qecgolden")


def run_primary(*args, check=True):
    proc = subprocess.run([*PRIMARY, *map(str, args)],
                          capture_output=True, text=True)
    if check and proc.returncode != 0:
        raise AssertionError(
            f"primary CLI failed ({proc.returncode}):\n{proc.stderr}")
    return proc


def run_golden(*args, check=False):
    proc = subprocess.run([*GOLDEN, *map(str, args)],
                          capture_output=True, text=True)
    if check and proc.returncode != 0:
        raise AssertionError(
            f"golden CLI failed ({proc.returncode}):\n{proc.stderr}")
    return proc


def write_config(path: Path, **fields) -> Path:
    lines = [f"{key} = {value}" for key, value in fields.items()]
    path.write_text("\n".join(lines) + "\n")
    return path
