"""Configuration files: flat `key = value` text with a hashed identity.

The canonical serialization is the contract: keys sorted, one
`key = value` line each, integers in plain decimal, floats via repr().
The configuration identity is the first eight little-endian bytes of
SHA-256 over that exact text, so two tools agree on cfg_id if and only
if they agree on every field byte for byte.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass

SCHEMA_VERSION = 1
KINDS = ("planar", "toric")

_INT_KEYS = ("d", "l", "window", "r_max", "p_max", "fifo_depth", "deadline",
             "t_cycle", "staleness", "seed", "schema")
_FLOAT_KEYS = ("p_data", "q_meas")

_DEFAULTS = {
    "window": 1,
    "p_data": 0.001,
    "q_meas": 0.0,
    "r_max": 0,
    "p_max": 0,
    "fifo_depth": 64,
    "deadline": 2000,
    "t_cycle": 1000,
    "staleness": 10000,
    "seed": 1,
    "schema": SCHEMA_VERSION,
}


class ConfigError(ValueError):
    """Any malformed or out-of-range configuration input."""


@dataclass(frozen=True)
class GoldenConfig:
    kind: str
    size: int
    window: int
    p_data: float
    q_meas: float
    r_max: int
    p_max: int
    fifo_depth: int
    deadline: int
    t_cycle: int
    staleness: int
    seed: int
    schema: int

    @property
    def size_key(self) -> str:
        return "d" if self.kind == "planar" else "l"

    def effective_r_max(self) -> int:
        return self.r_max if self.r_max else self.size

    def effective_p_max(self) -> int:
        return self.p_max if self.p_max else 10 * self.size

    def canonical_text(self) -> str:
        items = dict(
            deadline=self.deadline, fifo_depth=self.fifo_depth,
            kind=self.kind, p_data=self.p_data, p_max=self.p_max,
            q_meas=self.q_meas, r_max=self.r_max, schema=self.schema,
            seed=self.seed, staleness=self.staleness, t_cycle=self.t_cycle,
            window=self.window)
        items[self.size_key] = self.size
        lines = []
        for key in sorted(items):
            value = items[key]
            text = repr(value) if isinstance(value, float) else str(value)
            lines.append(f"{key} = {text}\n")
        return "".join(lines)

    @property
    def cfg_id(self) -> int:
        digest = hashlib.sha256(self.canonical_text().encode()).digest()
        return int.from_bytes(digest[:8], "little")


def _validate(cfg: GoldenConfig) -> GoldenConfig:
    if cfg.schema != SCHEMA_VERSION:
        raise ConfigError(f"unknown config schema {cfg.schema}; this tool "
                          f"reads schema {SCHEMA_VERSION} only")
    if cfg.kind not in KINDS:
        raise ConfigError(f"kind must be one of {KINDS}")
    if cfg.size < 2:
        raise ConfigError("code size must be >= 2")
    if not 1 <= cfg.window <= 64:
        raise ConfigError("window must lie in [1, 64]")
    for name in ("p_data", "q_meas"):
        if not 0.0 <= getattr(cfg, name) < 0.5:
            raise ConfigError(f"{name} must lie in [0, 0.5)")
    for name in ("r_max", "p_max", "staleness"):
        if getattr(cfg, name) < 0:
            raise ConfigError(f"{name} must be nonnegative")
    for name in ("fifo_depth", "deadline", "t_cycle"):
        if getattr(cfg, name) < 1:
            raise ConfigError(f"{name} must be positive")
    if not 0 <= cfg.seed < 1 << 64:
        raise ConfigError("seed must fit in 64 bits")
    return cfg


def parse_config(text: str) -> GoldenConfig:
    """Parse key = value lines; `#` comments and blank lines are skipped."""
    seen: dict[str, object] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected key = value")
        key, _, value = line.partition("=")
        key = key.strip()
        value = value.strip()
        if key in seen:
            raise ConfigError(f"line {lineno}: duplicate key {key!r}")
        if key == "kind":
            seen[key] = value
        elif key in _INT_KEYS:
            try:
                seen[key] = int(value)
            except ValueError:
                raise ConfigError(f"line {lineno}: {key} wants an integer")
        elif key in _FLOAT_KEYS:
            try:
                seen[key] = float(value)
            except ValueError:
                raise ConfigError(f"line {lineno}: {key} wants a number")
        else:
            raise ConfigError(f"line {lineno}: unknown key {key!r}")

    kind = seen.pop("kind", None)
    if kind is None:
        raise ConfigError("config is missing `kind`")
    if kind not in KINDS:
        raise ConfigError(f"kind must be one of {KINDS}")
    size_key = "d" if kind == "planar" else "l"
    if size_key not in seen:
        raise ConfigError(f"config is missing `{size_key}` for {kind}")
    size = seen.pop(size_key)
    if "d" in seen or "l" in seen:
        raise ConfigError(f"{kind} config must set only `{size_key}`")

    fields = dict(_DEFAULTS)
    fields.update(seen)
    return _validate(GoldenConfig(kind=kind, size=size, **fields))


def load_config(path) -> GoldenConfig:
    with open(path, "r") as fh:
        return parse_config(fh.read())
