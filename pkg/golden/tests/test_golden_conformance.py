"""Differential conformance: production decoder vs this reference.

The matrix below replays every functional-tier configuration plus one
campaign per fault class (bit flips, packet drops, burst corruption),
14500 seeded rounds in total, and requires byte-identical record files
throughout.  A second group perturbs a known-good primary stream one
field at a time and requires the harness to name the exact first
divergent round.
"""

from __future__ import annotations

import hashlib
import subprocess
import sys
from pathlib import Path

import pytest

from _drive import run_golden, run_primary, write_config

MIN_TOTAL_ROUNDS = 10_000

# name, config fields, rounds, inject args (None = clean)
MATRIX = [
    ("t1-planar-3",
     dict(kind="planar", d=3, p_data=0.01, seed=101), 4000, None),
    ("t1-planar-5",
     dict(kind="planar", d=5, p_data=0.01, seed=102), 2000, None),
    ("t1-toric-4",
     dict(kind="toric", l=4, p_data=0.01, seed=103), 2000, None),
    ("t1-planar-3-w2",
     dict(kind="planar", d=3, p_data=0.005, q_meas=0.002, window=2,
          seed=104), 2000, None),
    ("fault-flip",
     dict(kind="planar", d=3, p_data=0.01, seed=105), 1500,
     ("--flip-rate", "0.02")),
    ("fault-drop",
     dict(kind="planar", d=3, p_data=0.01, seed=106), 1500,
     ("--drop-rate", "0.02")),
    ("fault-burst",
     dict(kind="planar", d=3, p_data=0.01, seed=107), 1500,
     ("--burst-rate", "0.01", "--burst-min", "2", "--burst-max", "10")),
]


def sha256(path: Path) -> str:
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()


def _run_case(base: Path, name, fields, rounds, inject):
    case = base / name
    case.mkdir(parents=True, exist_ok=True)
    cfg_path = write_config(case.with_suffix(".cfg"), **fields)
    run_primary("gen-trace", "--config", cfg_path, "--out", case / "gen",
                "--rounds", rounds)
    trace = case / "gen" / "trace.bin"
    if inject is not None:
        run_primary("inject", "--config", cfg_path, "--trace", trace,
                    "--out", case / "inj", *inject)
        trace = case / "inj" / "trace.bin"
        log = (case / "inj" / "inject.log").read_text().splitlines()
        assert log, f"{name}: fault plan injected nothing"
    run_primary("decode", "--config", cfg_path, "--trace", trace,
                "--out", case / "pri", "--rounds", rounds, "--single-thread",
                check=False)   # SLA exit 4 is fine; records are still written
    primary_records = case / "pri" / "records.txt"
    assert primary_records.is_file()
    proc = run_golden("compare", "--config", cfg_path, "--trace", trace,
                      "--primary", primary_records, "--out", case / "gold",
                      "--rounds", rounds)
    return proc, primary_records, case / "gold" / "records.txt"


def test_conformance_matrix_bit_exact(work):
    total = 0
    fault_kinds = set()
    for name, fields, rounds, inject in MATRIX:
        proc, primary_records, golden_records = _run_case(
            work / "matrix", name, fields, rounds, inject)
        assert proc.returncode == 0, \
            f"{name}: diverged\n{proc.stdout}{proc.stderr}"
        assert "conformance: PASS" in proc.stdout
        assert sha256(primary_records) == sha256(golden_records), \
            f"{name}: comparator passed but files differ"
        total += rounds
        if inject:
            fault_kinds.add(inject[0])
        print(f"CONFORM {name}: PASS rounds={rounds} "
              f"sha={sha256(primary_records)[:12]}")
    assert total >= MIN_TOTAL_ROUNDS
    assert fault_kinds == {"--flip-rate", "--drop-rate", "--burst-rate"}
    print(f"CONFORM total: {total} rounds bit-exact across {len(MATRIX)} "
          "configurations")


@pytest.fixture(scope="module")
def judged(work):
    """One clean decoded case reused by all perturbation tests."""
    name, fields, rounds, inject = MATRIX[0]
    proc, primary_records, golden_records = _run_case(
        work / "perturb", name, fields, rounds, inject)
    assert proc.returncode == 0
    return {"config": (work / "perturb" / name).with_suffix(".cfg"),
            "trace": work / "perturb" / name / "gen" / "trace.bin",
            "records": primary_records, "rounds": rounds}


def _perturbed(tmp_path, records: Path, round_t: int, mutate):
    lines = records.read_text().splitlines(keepends=True)
    idx = 1 + round_t                      # header line, then one per round
    parts = lines[idx].split()
    assert int(parts[0]) == round_t
    lines[idx] = " ".join(mutate(parts)) + "\n"
    out = tmp_path / "perturbed.txt"
    out.write_text("".join(lines))
    return out


def _compare(tmp_path, judged, primary_records):
    return run_golden("compare", "--config", judged["config"],
                      "--trace", judged["trace"],
                      "--primary", primary_records,
                      "--out", tmp_path / "gold",
                      "--rounds", judged["rounds"])


def test_flipped_correction_bit_names_exact_round(tmp_path, judged):
    target = 1234

    def flip_bit(parts):
        corr = bytearray.fromhex(parts[3])
        corr[0] ^= 1
        parts[3] = corr.hex()
        return parts

    proc = _compare(tmp_path, judged,
                    _perturbed(tmp_path, judged["records"], target, flip_bit))
    assert proc.returncode == 1
    assert f"first divergence at round {target}" in proc.stdout
    assert "field correction" in proc.stdout


def test_flipped_flag_names_exact_round(tmp_path, judged):
    target = 77

    def set_stale(parts):
        parts[1] = "08"                    # OK -> STALE
        return parts

    proc = _compare(tmp_path, judged,
                    _perturbed(tmp_path, judged["records"], target,
                               set_stale))
    assert proc.returncode == 1
    assert f"first divergence at round {target}" in proc.stdout
    assert "field flags" in proc.stdout


def test_truncated_primary_reported_as_length_mismatch(tmp_path, judged):
    lines = judged["records"].read_text().splitlines(keepends=True)
    short = tmp_path / "short.txt"
    short.write_text("".join(lines[:-10]))
    proc = _compare(tmp_path, judged, short)
    assert proc.returncode == 1
    assert "stream length mismatch" in proc.stdout
    assert "desync" in proc.stdout
    first_missing = int(lines[-10].split()[0])
    assert str(first_missing) in proc.stdout


def test_primary_conformance_subcommand_end_to_end(tmp_path, judged):
    """The production CLI's own conformance gate drives this harness."""
    proc = run_primary("conformance", "--config", judged["config"],
                       "--trace", judged["trace"], "--out", tmp_path / "c",
                       "--rounds", judged["rounds"], "--single-thread",
                       check=False)
    assert proc.returncode == 0, proc.stdout + proc.stderr
    assert "conformance: PASS" in proc.stdout
    # and the gate actually fails loudly when the reference is unreachable
    env_probe = subprocess.run(
        [sys.executable, "-c", "import qecgolden"], capture_output=True)
    assert env_probe.returncode == 0


def test_reference_decode_is_deterministic(tmp_path, judged):
    for tag in ("a", "b"):
        proc = run_golden("decode", "--config", judged["config"],
                          "--trace", judged["trace"],
                          "--out", tmp_path / tag,
                          "--rounds", judged["rounds"], check=True)
    assert sha256(tmp_path / "a" / "records.txt") \
        == sha256(tmp_path / "b" / "records.txt")
