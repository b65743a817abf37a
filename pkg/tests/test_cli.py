"""Command-line surface: subcommands, files produced, exit codes."""

import json
import subprocess
import sys

import pytest

from qecdesk import cli, pipeline
from _kit import make_cfg


@pytest.fixture
def ws(tmp_path):
    """Workspace with a written config file."""
    cfg = make_cfg(p_data=0.02, seed=5)
    cfg_path = tmp_path / "run.cfg"
    cfg_path.write_text(cfg.canonical_text())
    return tmp_path, cfg, cfg_path


def test_gen_trace_then_decode_ok(ws):
    root, cfg, cfg_path = ws
    rc = cli.main(["gen-trace", "--config", str(cfg_path),
                   "--out", str(root / "g"), "--rounds", "200"])
    assert rc == cli.EXIT_OK
    trace = root / "g" / "trace.bin"
    truth = root / "g" / "truth.txt"
    assert trace.exists() and truth.exists()

    rc = cli.main(["decode", "--config", str(cfg_path),
                   "--trace", str(trace), "--out", str(root / "d"),
                   "--truth", str(truth), "--rounds", "200"])
    assert rc == cli.EXIT_OK
    records = root / "d" / "records.txt"
    assert records.exists()
    assert (root / "d" / "report.txt").exists()
    meta = json.loads((root / "d" / "metrics.json").read_text())
    assert meta["rounds"] == 200
    assert meta["sla_pass"] is True
    _, _, _, recs = pipeline.read_records(records)
    assert len(recs) == 200


def test_decode_rejects_mismatched_config(ws):
    root, cfg, cfg_path = ws
    cli.main(["gen-trace", "--config", str(cfg_path),
              "--out", str(root / "g"), "--rounds", "50"])
    other = make_cfg(p_data=0.03, seed=5)
    other_path = root / "other.cfg"
    other_path.write_text(other.canonical_text())
    rc = cli.main(["decode", "--config", str(other_path),
                   "--trace", str(root / "g" / "trace.bin"),
                   "--out", str(root / "d")])
    assert rc == cli.EXIT_CONFIG


def test_bad_config_file_exits_2(tmp_path):
    bad = tmp_path / "bad.cfg"
    bad.write_text("kind = dodecahedral\n")
    rc = cli.main(["gen-trace", "--config", str(bad),
                   "--out", str(tmp_path / "g")])
    assert rc == cli.EXIT_CONFIG
    rc = cli.main(["gen-trace", "--config", str(tmp_path / "missing.cfg"),
                   "--out", str(tmp_path / "g")])
    assert rc == cli.EXIT_CONFIG


def test_inject_then_decode_accounts_for_faults(ws):
    root, cfg, cfg_path = ws
    cli.main(["gen-trace", "--config", str(cfg_path),
              "--out", str(root / "g"), "--rounds", "300"])
    rc = cli.main(["inject", "--config", str(cfg_path),
                   "--trace", str(root / "g" / "trace.bin"),
                   "--out", str(root / "f"),
                   "--drop-rate", "0.03", "--flip-rate", "0.03",
                   "--seed", "99"])
    assert rc == cli.EXIT_OK
    faulted = root / "f" / "trace.bin"
    log = root / "f" / "inject.log"
    assert faulted.exists() and log.exists()

    rc = cli.main(["decode", "--config", str(cfg_path),
                   "--trace", str(faulted), "--out", str(root / "d"),
                   "--rounds", "300"])
    assert rc == cli.EXIT_OK
    meta = json.loads((root / "d" / "metrics.json").read_text())
    n_faults = len(log.read_text().splitlines())
    assert n_faults > 0
    assert meta["flag_erasure"] >= n_faults * 0.5


def test_report_from_records(ws):
    root, cfg, cfg_path = ws
    cli.main(["gen-trace", "--config", str(cfg_path),
              "--out", str(root / "g"), "--rounds", "100"])
    cli.main(["decode", "--config", str(cfg_path),
              "--trace", str(root / "g" / "trace.bin"),
              "--out", str(root / "d"), "--rounds", "100"])
    rc = cli.main(["report", "--config", str(cfg_path),
                   "--records", str(root / "d" / "records.txt"),
                   "--out", str(root / "r")])
    assert rc == cli.EXIT_OK
    text = (root / "r" / "report.txt").read_text()
    assert "latency_p999" in text
    # re-rendered percentiles equal the decode-time ones
    a = json.loads((root / "d" / "metrics.json").read_text())
    b = json.loads((root / "r" / "metrics.json").read_text())
    assert a["latency_p999"] == b["latency_p999"]
    assert a["latency_p50"] == b["latency_p50"]


def test_single_thread_flag_matches_default(ws):
    root, cfg, cfg_path = ws
    cli.main(["gen-trace", "--config", str(cfg_path),
              "--out", str(root / "g"), "--rounds", "150"])
    for out, extra in (("d1", []), ("d2", ["--single-thread"])):
        rc = cli.main(["decode", "--config", str(cfg_path),
                       "--trace", str(root / "g" / "trace.bin"),
                       "--out", str(root / out), "--rounds", "150"] + extra)
        assert rc == cli.EXIT_OK
    assert (pipeline.file_digest(root / "d1" / "records.txt")
            == pipeline.file_digest(root / "d2" / "records.txt"))


def test_bench_tier0_smoke(tmp_path):
    rc = cli.main(["bench", "--tier", "0", "--out", str(tmp_path / "b")])
    assert rc == cli.EXIT_OK
    listing = list((tmp_path / "b").iterdir())
    assert any(p.suffix == ".txt" for p in listing)


def test_seed_override_changes_trace(ws):
    root, cfg, cfg_path = ws
    for out, seed in (("g1", []), ("g2", ["--seed", "1234"])):
        cli.main(["gen-trace", "--config", str(cfg_path),
                  "--out", str(root / out), "--rounds", "50"] + seed)
    a = (root / "g1" / "trace.bin").read_bytes()
    b = (root / "g2" / "trace.bin").read_bytes()
    assert a != b


def test_console_entry_point_runs():
    out = subprocess.run([sys.executable, "-m", "qecdesk.cli", "--version"],
                         capture_output=True, text=True)
    assert out.returncode == 0
    assert "qecdesk" in out.stdout
