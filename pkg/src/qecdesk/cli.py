"""Command-line driver.

Subcommands: gen-trace, decode, inject, bench, conformance, report.
Exit codes: 0 success, 2 configuration or input error, 3 conformance
failure, 4 SLA failure.
"""

from __future__ import annotations

import argparse
import json
import subprocess
import sys
from pathlib import Path

from . import __version__
from . import faults, metrics, pipeline
from .config import DecoderConfig, load_config, with_seed
from .errors import InvalidParameter

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_CONFORMANCE = 3
EXIT_SLA = 4

# Tier suites: 0 smoke, 1 functional, 2 stress, 3 fault campaigns.
TIER_CONFIGS: dict[int, list[tuple[str, dict, int]]] = {
    0: [
        ("smoke-planar-2", dict(kind="planar", size=2, p_data=0.01), 200),
        ("smoke-planar-3", dict(kind="planar", size=3, p_data=0.01), 200),
    ],
    1: [
        ("t1-planar-3", dict(kind="planar", size=3, p_data=0.01), 4000),
        ("t1-planar-5", dict(kind="planar", size=5, p_data=0.01), 4000),
        ("t1-toric-4", dict(kind="toric", size=4, p_data=0.01), 3000),
        ("t1-planar-3-w2", dict(kind="planar", size=3, p_data=0.005,
                                q_meas=0.002, window=2), 3000),
    ],
    2: [
        ("t2-planar-5-dense", dict(kind="planar", size=5, p_data=0.08), 6000),
        ("t2-toric-5-dense", dict(kind="toric", size=5, p_data=0.06,
                                  q_meas=0.01, window=2), 4000),
        ("t2-planar-3-burst", dict(kind="planar", size=3, p_data=0.12,
                                   fifo_depth=8), 8000),
    ],
    3: [
        ("t3-flip", dict(kind="planar", size=3, p_data=0.01), 4000),
        ("t3-drop", dict(kind="planar", size=3, p_data=0.01), 4000),
        ("t3-burst", dict(kind="planar", size=3, p_data=0.01), 4000),
    ],
}

TIER3_PLANS = {
    "t3-flip": dict(flip_rate=0.02),
    "t3-drop": dict(drop_rate=0.02),
    "t3-burst": dict(burst_rate=0.01, burst_min=2, burst_max=10),
}


def _load_cfg(args) -> DecoderConfig:
    cfg = load_config(args.config)
    if getattr(args, "seed", None) is not None:
        cfg = with_seed(cfg, args.seed)
    return cfg


def _outdir(args) -> Path:
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    return out


def cmd_gen_trace(args) -> int:
    cfg = _load_cfg(args)
    out = _outdir(args)
    trace = out / "trace.bin"
    truth = out / "truth.txt"
    pipeline.gen_trace_file(cfg, args.rounds, trace, truth)
    print(f"cfg_id: {cfg.cfg_id:016x}")
    print(f"trace: {trace}")
    print(f"truth: {truth}")
    return EXIT_OK


def _decode_stream(cfg: DecoderConfig, trace_path, out: Path,
                   single_thread: bool, rounds: int | None,
                   truth_path=None) -> tuple[pipeline.RunResult, Path]:
    text, stream = pipeline.read_trace(trace_path)
    from .config import parse_config
    embedded = parse_config(text)
    if embedded.cfg_id != cfg.cfg_id:
        raise InvalidParameter(
            "trace was generated under a different configuration "
            f"({embedded.cfg_id:016x} != {cfg.cfg_id:016x})")
    result = pipeline.run_stream(cfg, stream, expected_rounds=rounds,
                                 single_thread=single_thread)
    code = cfg.build_code()
    rec_path = out / "records.txt"
    pipeline.write_records(rec_path, cfg.cfg_id, code, result.records)
    if truth_path is not None and result.metrics is not None:
        truth = pipeline.read_truth(truth_path)
        result.metrics.logical_failures = pipeline.score_against_truth(
            result.records, truth, code)
    return result, rec_path


def _cfg_lines(cfg: DecoderConfig) -> dict:
    return {
        "version": __version__,
        "cfg_id": f"{cfg.cfg_id:016x}",
        "kind": cfg.kind,
        cfg.size_key: cfg.size,
        "window": cfg.window,
        "p_data": cfg.p_data,
        "q_meas": cfg.q_meas,
        "seed": cfg.seed,
    }


def cmd_decode(args) -> int:
    cfg = _load_cfg(args)
    out = _outdir(args)
    result, rec_path = _decode_stream(cfg, args.trace, out,
                                      args.single_thread, args.rounds,
                                      args.truth)
    if result.metrics is None:
        print("no records produced (empty stream)", file=sys.stderr)
        return EXIT_CONFIG
    artifacts = {"records": str(rec_path)}
    text = metrics.report(result.metrics, _cfg_lines(cfg), artifacts,
                          json_path=out / "metrics.json")
    (out / "report.txt").write_text(text)
    print(text, end="")
    return EXIT_OK if result.metrics.sla_pass else EXIT_SLA


def cmd_inject(args) -> int:
    out = _outdir(args)
    text, stream = pipeline.read_trace(args.trace)
    from .config import parse_config
    cfg = parse_config(text)   # keep the trace's own identity intact
    given = load_config(args.config)
    if given.cfg_id != cfg.cfg_id:
        raise InvalidParameter(
            "config file does not match the trace's embedded config")
    # --seed here seeds the fault plan; the stream identity is untouched
    plan = faults.FaultPlan(
        flip_rate=args.flip_rate, drop_rate=args.drop_rate,
        burst_rate=args.burst_rate, burst_min=args.burst_min,
        burst_max=args.burst_max, desync_shifts=tuple(args.shift),
        seed=args.seed if args.seed is not None else cfg.seed)
    faulted, log = faults.inject_faults(stream, plan, cfg.packet_len())
    trace = out / "trace.bin"
    logpath = out / "inject.log"
    pipeline.write_trace(trace, cfg, faulted)
    logpath.write_text("".join(ev.line() + "\n" for ev in log))
    print(f"injected: {len(log)} events")
    print(f"trace: {trace}")
    print(f"log: {logpath}")
    return EXIT_OK


def _first_failure_dump(name: str, cfg: DecoderConfig, result, out: Path):
    """Counterexample dump: seed, cfg_id, first bad round, record tail."""
    bad = next((r for r in result.records if r.flags), None)
    lines = [f"case: {name}", f"seed: {cfg.seed}",
             f"cfg_id: {cfg.cfg_id:016x}",
             f"first_flagged_round: {bad.round_t if bad else -1}"]
    code = cfg.build_code()
    tail = result.records[-32:]
    lines.append("last_records:")
    lines.extend("  " + pipeline.format_record(r, code.n, code.k).rstrip()
                 for r in tail)
    (out / f"fail-{name}.txt").write_text("\n".join(lines) + "\n")


def cmd_bench(args) -> int:
    out = _outdir(args)
    tier = args.tier
    if tier not in TIER_CONFIGS:
        print(f"unknown tier {tier}", file=sys.stderr)
        return EXIT_CONFIG
    worst = EXIT_OK
    for name, params, rounds in TIER_CONFIGS[tier]:
        cfg = DecoderConfig(seed=args.seed if args.seed is not None else 1,
                            **params)
        stream, _ = pipeline.build_stream(cfg, rounds)
        expected = rounds
        if tier == 3:
            plan = faults.FaultPlan(seed=cfg.seed + 1, **TIER3_PLANS[name])
            stream, log = faults.inject_faults(stream, plan, cfg.packet_len())
            (out / f"{name}-inject.log").write_text(
                "".join(ev.line() + "\n" for ev in log))
        result = pipeline.run_stream(cfg, stream, expected_rounds=expected,
                                     single_thread=args.single_thread)
        code = cfg.build_code()
        rec_path = out / f"{name}-records.txt"
        pipeline.write_records(rec_path, cfg.cfg_id, code, result.records)
        m = result.metrics
        ok = (m is not None
              and result.counters["rounds_accounted"] == expected)
        sla = m.sla_pass if m else False
        if tier != 3 and not sla:
            worst = max(worst, EXIT_SLA)
        if not ok:
            worst = max(worst, EXIT_SLA)
            _first_failure_dump(name, cfg, result, out)
        digest = pipeline.file_digest(rec_path)[:16]
        print(f"{name}: rounds={result.counters['rounds_accounted']}/{expected} "
              f"records={len(result.records)} "
              f"p999={m.p999 if m else '-'} miss={m.deadline_misses if m else '-'} "
              f"overflow={m.overflow_dropped if m else '-'} "
              f"hash={digest} {'ok' if ok else 'FAIL'}")
    return worst


def cmd_conformance(args) -> int:
    cfg = _load_cfg(args)
    out = _outdir(args)
    primary_dir = out / "primary"
    primary_dir.mkdir(exist_ok=True)
    try:
        result, rec_path = _decode_stream(cfg, args.trace, primary_dir,
                                          args.single_thread, args.rounds)
    except InvalidParameter as exc:
        print(f"primary decode failed: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    cmd = [sys.executable, "-m", "qecgolden", "compare",
           "--config", str(args.config), "--trace", str(args.trace),
           "--primary", str(rec_path), "--out", str(out / "golden")]
    if args.rounds is not None:
        cmd += ["--rounds", str(args.rounds)]
    try:
        proc = subprocess.run(cmd, capture_output=True, text=True)
    except OSError as exc:
        print(f"could not invoke the reference harness: {exc}",
              file=sys.stderr)
        return EXIT_CONFORMANCE
    sys.stdout.write(proc.stdout)
    sys.stderr.write(proc.stderr)
    if proc.returncode != 0:
        return EXIT_CONFORMANCE
    return EXIT_OK


def cmd_report(args) -> int:
    cfg = _load_cfg(args)
    out = _outdir(args)
    cfg_id, n, k, records = pipeline.read_records(args.records)
    if cfg_id != cfg.cfg_id:
        print("records were produced under a different configuration",
              file=sys.stderr)
        return EXIT_CONFIG
    if not records:
        print("record file holds no records", file=sys.stderr)
        return EXIT_CONFIG
    samples = [metrics.LatencySample(r.round_t, r.a_t, r.f_t)
               for r in records]
    flag_counts: dict[str, int] = {}
    from . import flags as fl
    for r in records:
        if r.flags == 0:
            flag_counts["OK"] = flag_counts.get("OK", 0) + 1
        for bit, name in fl._NAMES:
            if r.flags & bit:
                flag_counts[name] = flag_counts.get(name, 0) + 1
    m = metrics.collect(samples, t_cycle=cfg.t_cycle, deadline=cfg.deadline,
                        flag_counts=flag_counts)
    if args.truth:
        truth = pipeline.read_truth(args.truth)
        m.logical_failures = pipeline.score_against_truth(
            records, truth, cfg.build_code())
    text = metrics.report(m, _cfg_lines(cfg),
                          {"records": str(args.records)},
                          json_path=out / "metrics.json")
    (out / "report.txt").write_text(text)
    print(text, end="")
    return EXIT_OK if m.sla_pass else EXIT_SLA


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="qecdesk",
                                 description=__doc__.splitlines()[0])
    ap.add_argument("--version", action="version",
                    version=f"qecdesk {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p, config=True, trace=False, out=True):
        if config:
            p.add_argument("--config", required=True, help="config file path")
        if trace:
            p.add_argument("--trace", required=True, help="trace file path")
        if out:
            p.add_argument("--out", required=True, help="output directory")
        p.add_argument("--seed", type=int, default=None,
                       help="override the config seed")

    p = sub.add_parser("gen-trace", help="write a trace and truth sidecar")
    common(p, trace=False)
    p.add_argument("--rounds", type=int, default=1000)
    p.set_defaults(func=cmd_gen_trace)

    p = sub.add_parser("decode", help="stream a trace through the pipeline")
    common(p, trace=True)
    p.add_argument("--rounds", type=int, default=None,
                   help="expected round count (accounts for tail loss)")
    p.add_argument("--truth", default=None, help="truth sidecar path")
    p.add_argument("--single-thread", action="store_true",
                   help="run parse and decode in one thread")
    p.set_defaults(func=cmd_decode)

    p = sub.add_parser("inject", help="apply a fault plan to a trace")
    common(p, trace=True)
    p.add_argument("--flip-rate", type=float, default=0.0)
    p.add_argument("--drop-rate", type=float, default=0.0)
    p.add_argument("--burst-rate", type=float, default=0.0)
    p.add_argument("--burst-min", type=int, default=1)
    p.add_argument("--burst-max", type=int, default=8)
    p.add_argument("--shift", type=int, action="append", default=[],
                   help="delete one byte at this stream offset (repeatable)")
    p.set_defaults(func=cmd_inject)

    p = sub.add_parser("bench", help="run a tiered suite")
    p.add_argument("--tier", type=int, choices=(0, 1, 2, 3), default=0)
    p.add_argument("--out", required=True)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--single-thread", action="store_true")
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("conformance",
                       help="compare against the reference implementation")
    common(p, trace=True)
    p.add_argument("--rounds", type=int, default=None)
    p.add_argument("--single-thread", action="store_true")
    p.set_defaults(func=cmd_conformance)

    p = sub.add_parser("report", help="re-render a report from records")
    common(p, trace=False)
    p.add_argument("--records", required=True)
    p.add_argument("--truth", default=None)
    p.set_defaults(func=cmd_report)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except InvalidParameter as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
