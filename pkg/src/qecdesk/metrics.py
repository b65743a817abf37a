"""Latency, jitter, backlog, throughput, and budget arithmetic.

Everything here is deterministic and replayable: percentiles are
nearest-rank (no interpolation), the backlog recurrence is exact, and
recomputing any series offline from the per-round log reproduces the
online values bit for bit.  Wall-clock timing never feeds these
numbers; the pipeline advances a simulated cycle counter instead.
"""

from __future__ import annotations

import hashlib
import json
import statistics
from collections import Counter
from dataclasses import dataclass, field
from pathlib import Path

from . import flags as flagbits
from .errors import InvalidParameter


def backlog_step(b_t, l_t, t_cycle):
    """B_{t+1} = max(0, B_t + L_t - T_cycle); exact for any numeric type."""
    if b_t < 0 or l_t < 0 or t_cycle < 0:
        raise InvalidParameter("backlog inputs must be nonnegative")
    nxt = b_t + l_t - t_cycle
    return nxt if nxt > 0 else b_t - b_t   # preserves the input type's zero


def backlog_trace(latencies, t_cycle, b_0=0):
    """Backlog after each round; offline replay equals the online trace."""
    out = []
    b = b_0
    for l_t in latencies:
        b = backlog_step(b, l_t, t_cycle)
        out.append(b)
    return out


def percentiles(samples) -> tuple:
    """(p50, p99, p999, max) by nearest rank: index ceil(q*N) on the sort."""
    if not samples:
        raise InvalidParameter("percentiles of an empty sample set")
    s = sorted(samples)
    n = len(s)

    def rank(q):
        k = -(-int(q * 1000 * n) // 1000)   # ceil(q*n) without float fuzz
        return s[max(k, 1) - 1]

    return rank(0.5), rank(0.99), rank(0.999), s[-1]


def worst_case_cycles(p: int, n: int, r: int, c_upd: int) -> int:
    """Hard per-decode bound: passes x lanes-rounded node sweeps x cycles."""
    if min(p, n, r, c_upd) < 1:
        raise InvalidParameter("budget inputs must be positive")
    return p * (-(-n // r)) * c_upd


def bandwidth_budget(b_bits: int, reads: int, writes: int, p: int, n: int,
                     deadline_s: float) -> tuple:
    """(bytes/update, bytes/decode, required bytes/second)."""
    if b_bits < 0 or reads < 0 or writes < 0:
        raise InvalidParameter("negative bandwidth inputs")
    if b_bits % 8:
        raise InvalidParameter("record size must be whole bytes")
    if p < 1 or n < 1 or deadline_s <= 0:
        raise InvalidParameter("bad decode shape or deadline")
    per_update = (b_bits // 8) * (reads + writes)
    per_decode = p * n * per_update
    return per_update, per_decode, per_decode / deadline_s


@dataclass(frozen=True)
class LatencySample:
    round_t: int
    a_t: int
    f_t: int

    def __post_init__(self):
        if self.f_t < self.a_t:
            raise InvalidParameter("finish stamp precedes arrival")

    @property
    def l_t(self) -> int:
        return self.f_t - self.a_t


@dataclass
class RunMetrics:
    n_rounds: int
    mean: float
    p50: int
    p99: int
    p999: int
    l_max: int
    j_abs: float
    j_diff: float
    histogram: dict
    backlog: list
    flag_counts: dict
    fifo_high_water: int
    deadline: int
    t_cycle: int
    deadline_misses: int
    overflow_dropped: int
    logical_failures: int = -1     # -1: no ground truth available
    suppressed: int = 0

    @property
    def sla_pass(self) -> bool:
        return self.p999 <= self.deadline and self.overflow_dropped == 0


def collect(samples: list[LatencySample], t_cycle: int, deadline: int,
            flag_counts: dict | None = None, fifo_high_water: int = 0,
            overflow_dropped: int = 0, logical_failures: int = -1,
            suppressed: int = 0) -> RunMetrics:
    if not samples:
        raise InvalidParameter("metrics require at least one sample")
    lat = [s.l_t for s in samples]
    p50, p99, p999, l_max = percentiles(lat)
    diffs = [b - a for a, b in zip(lat, lat[1:])]
    return RunMetrics(
        n_rounds=len(samples),
        mean=statistics.fmean(lat),
        p50=p50, p99=p99, p999=p999, l_max=l_max,
        j_abs=statistics.pstdev(lat),
        j_diff=statistics.pstdev(diffs) if diffs else 0.0,
        histogram=dict(sorted(Counter(lat).items())),
        backlog=backlog_trace(lat, t_cycle),
        flag_counts=dict(flag_counts or {}),
        fifo_high_water=fifo_high_water,
        deadline=deadline,
        t_cycle=t_cycle,
        deadline_misses=sum(1 for l in lat if l > deadline),
        overflow_dropped=overflow_dropped,
        logical_failures=logical_failures,
        suppressed=suppressed,
    )


_build_hash_cache: str | None = None


def build_hash() -> str:
    """Digest of this package's own sources; ties a report to the code."""
    global _build_hash_cache
    if _build_hash_cache is None:
        h = hashlib.sha256()
        pkg = Path(__file__).resolve().parent
        for src in sorted(pkg.glob("*.py")):
            h.update(src.name.encode())
            h.update(src.read_bytes())
        _build_hash_cache = h.hexdigest()[:12]
    return _build_hash_cache


def report(metrics: RunMetrics, cfg_lines: dict, artifacts: dict | None = None,
           json_path: str | None = None) -> str:
    """Line-oriented `key: value` benchmark report.

    cfg_lines supplies the configuration identity (kind, size, window,
    noise, seed, cfg_id); artifacts maps names to output paths.
    """
    if metrics.n_rounds < 1:
        raise InvalidParameter("refusing to report an empty run")
    kv: list[tuple[str, object]] = [("build", build_hash())]
    kv.extend(cfg_lines.items())
    kv.extend([
        ("t_cycle", metrics.t_cycle),
        ("deadline", metrics.deadline),
        ("rounds", metrics.n_rounds),
        ("latency_mean", f"{metrics.mean:.6f}"),
        ("latency_p50", metrics.p50),
        ("latency_p99", metrics.p99),
        ("latency_p999", metrics.p999),
        ("latency_max", metrics.l_max),
        ("jitter_abs", f"{metrics.j_abs:.6f}"),
        ("jitter_diff", f"{metrics.j_diff:.6f}"),
        ("backlog_final", metrics.backlog[-1] if metrics.backlog else 0),
        ("backlog_max", max(metrics.backlog) if metrics.backlog else 0),
        ("fifo_high_water", metrics.fifo_high_water),
        ("overflow_dropped", metrics.overflow_dropped),
        ("deadline_misses", metrics.deadline_misses),
        ("logical_failures", metrics.logical_failures),
        ("records_suppressed", metrics.suppressed),
    ])
    for bit, name in flagbits._NAMES:
        kv.append((f"flag_{name.lower()}",
                   metrics.flag_counts.get(name, 0)))
    kv.append(("sla_pass", "yes" if metrics.sla_pass else "no"))
    for name, path in (artifacts or {}).items():
        kv.append((f"artifact_{name}", path))
    text = "".join(f"{k}: {v}\n" for k, v in kv)
    if json_path is not None:
        payload = {k: v for k, v in kv}
        payload["sla_pass"] = metrics.sla_pass
        payload["latency_mean"] = metrics.mean
        payload["jitter_abs"] = metrics.j_abs
        payload["jitter_diff"] = metrics.j_diff
        payload["histogram"] = {str(k): v for k, v in metrics.histogram.items()}
        Path(json_path).write_text(json.dumps(payload, indent=2) + "\n")
    return text
