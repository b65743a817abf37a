"""Command line: `decode` re-derives records, `compare` judges a primary.

Exit codes: 0 pass, 1 conformance divergence, 2 configuration or input
error.  `compare` always writes the reference record stream plus a
verdict file into --out, so a failing run leaves everything needed to
inspect the divergence.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import __version__, contract, framing, recordfile
from .configfile import ConfigError, load_config, parse_config
from .replay import decode_stream

EXIT_OK = 0
EXIT_DIVERGED = 1
EXIT_CONFIG = 2


def _replay_trace(config_path, trace_path, rounds):
    cfg = load_config(config_path)
    embedded_text, stream = framing.read_trace(trace_path)
    embedded = parse_config(embedded_text)
    if embedded.cfg_id != cfg.cfg_id:
        raise ConfigError(
            "trace was generated under a different configuration "
            f"({embedded.cfg_id:016x} != {cfg.cfg_id:016x})")
    return cfg, decode_stream(cfg, stream, expected_rounds=rounds)


def _write_reference_records(out: Path, cfg, replay) -> Path:
    out.mkdir(parents=True, exist_ok=True)
    path = out / "records.txt"
    lat = replay.lattice
    recordfile.write_records(path, cfg.cfg_id, lat.n_edges, lat.k,
                             replay.records)
    return path


def cmd_decode(args) -> int:
    cfg, replay = _replay_trace(args.config, args.trace, args.rounds)
    path = _write_reference_records(Path(args.out), cfg, replay)
    c = replay.counters
    print(f"cfg_id: {cfg.cfg_id:016x}")
    print(f"records: {len(replay.records)} "
          f"(packets={c.packets} erasures={c.erasures} "
          f"dup_or_reorder={c.dup_or_reorder})")
    for name in sorted(c.flag_counts):
        print(f"flag_{name.lower()}: {c.flag_counts[name]}")
    print(f"records file: {path}")
    return EXIT_OK


def cmd_compare(args) -> int:
    cfg, replay = _replay_trace(args.config, args.trace, args.rounds)
    out = Path(args.out)
    golden_path = _write_reference_records(out, cfg, replay)

    primary_cfg, pn, pk, primary_records = \
        recordfile.read_records(args.primary)
    lat = replay.lattice
    result = contract.compare_streams(
        (primary_cfg, pn, pk), primary_records,
        (cfg.cfg_id, lat.n_edges, lat.k), replay.records)

    tag = contract.contract_tag()
    lines = [f"contract: {tag}"]
    if result.ok:
        lines.append(f"conformance: PASS records={result.records_compared} "
                     f"rounds={replay.counters.rounds_accounted}")
    else:
        lines.append("conformance: FAIL")
        lines.extend(result.detail)
    lines.append(f"reference records: {golden_path}")
    report = "\n".join(lines) + "\n"
    (out / "compare.txt").write_text(report + "\n" + contract.contract_text())
    print(report, end="")
    return EXIT_OK if result.ok else EXIT_DIVERGED


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="qecgolden",
        description="reference decoder and conformance harness")
    ap.add_argument("--version", action="version",
                    version=f"qecgolden {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p, primary=False):
        p.add_argument("--config", required=True, help="config file path")
        p.add_argument("--trace", required=True, help="trace file path")
        if primary:
            p.add_argument("--primary", required=True,
                           help="primary record file to judge")
        p.add_argument("--out", required=True, help="output directory")
        p.add_argument("--rounds", type=int, default=None,
                       help="expected round count (accounts for tail loss)")

    p = sub.add_parser("decode", help="re-derive records from a trace")
    common(p)
    p.set_defaults(func=cmd_decode)

    p = sub.add_parser("compare",
                       help="compare a primary record stream to the reference")
    common(p, primary=True)
    p.set_defaults(func=cmd_compare)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ConfigError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
