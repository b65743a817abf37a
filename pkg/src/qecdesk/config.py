"""Decoder configuration: parsing, validation, canonical form, identity.

Config files are flat `key = value` lines; `#` comments and blank lines
are ignored on input.  The canonical serialization (keys sorted, single
spaces, plain decimal numbers) is byte-stable, and the configuration
identity is the first 8 little-endian bytes of SHA-256 over that exact
text, so equal canonical text always yields an equal cfg_id.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, replace
from pathlib import Path

from . import wire
from .errors import InvalidParameter
from .geometry import CodeSpec, build_planar, build_toric

SCHEMA_VERSION = 1

KINDS = ("planar", "toric")


@dataclass(frozen=True)
class DecoderConfig:
    kind: str                 # "planar" (size d) or "toric" (size l)
    size: int                 # code distance d, or torus width l
    window: int = 1
    p_data: float = 0.001
    q_meas: float = 0.0
    r_max: int = 0            # 0 means "use the code distance"
    p_max: int = 0            # 0 means "ten times the code distance"
    fifo_depth: int = 64
    deadline: int = 2000
    t_cycle: int = 1000
    staleness: int = 10000
    seed: int = 1
    schema: int = SCHEMA_VERSION

    def __post_init__(self):
        if self.schema != SCHEMA_VERSION:
            raise InvalidParameter(
                f"unknown config schema {self.schema}; this build reads "
                f"schema {SCHEMA_VERSION} only")
        if self.kind not in KINDS:
            raise InvalidParameter(f"kind must be one of {KINDS}")
        if self.size < 2:
            raise InvalidParameter("code size must be >= 2")
        if not 1 <= self.window <= 64:
            raise InvalidParameter("window must lie in [1, 64]")
        for name in ("p_data", "q_meas"):
            v = getattr(self, name)
            if not 0.0 <= v < 0.5:
                raise InvalidParameter(f"{name} must lie in [0, 0.5)")
        for name in ("r_max", "p_max", "staleness"):
            if getattr(self, name) < 0:
                raise InvalidParameter(f"{name} must be nonnegative")
        for name in ("fifo_depth", "deadline", "t_cycle"):
            if getattr(self, name) < 1:
                raise InvalidParameter(f"{name} must be positive")
        if not 0 <= self.seed < 1 << 64:
            raise InvalidParameter("seed must fit in 64 bits")

    # -- derived quantities ------------------------------------------------

    @property
    def size_key(self) -> str:
        return "d" if self.kind == "planar" else "l"

    def effective_r_max(self) -> int:
        return self.r_max if self.r_max else self.size

    def effective_p_max(self) -> int:
        return self.p_max if self.p_max else 10 * self.size

    def build_code(self) -> CodeSpec:
        if self.kind == "planar":
            return build_planar(self.size)
        return build_toric(self.size)

    def payload_bytes(self) -> int:
        code = self.build_code()
        return wire.payload_bytes_for(code.m_x)

    def packet_len(self) -> int:
        return wire.HDR_BYTES + self.payload_bytes() + wire.CRC_BYTES

    # -- canonical form ----------------------------------------------------

    def canonical_text(self) -> str:
        items = {
            "deadline": self.deadline,
            "fifo_depth": self.fifo_depth,
            self.size_key: self.size,
            "kind": self.kind,
            "p_data": self.p_data,
            "p_max": self.p_max,
            "q_meas": self.q_meas,
            "r_max": self.r_max,
            "schema": self.schema,
            "seed": self.seed,
            "staleness": self.staleness,
            "t_cycle": self.t_cycle,
            "window": self.window,
        }
        return "".join(f"{k} = {_fmt(items[k])}\n" for k in sorted(items))

    @property
    def cfg_id(self) -> int:
        digest = hashlib.sha256(self.canonical_text().encode()).digest()
        return int.from_bytes(digest[:8], "little")


def _fmt(value) -> str:
    if isinstance(value, bool):
        raise InvalidParameter("boolean config values are not defined")
    if isinstance(value, float):
        return repr(value)
    return str(value)


_INT_KEYS = {"d", "l", "window", "r_max", "p_max", "fifo_depth", "deadline",
             "t_cycle", "staleness", "seed", "schema"}
_FLOAT_KEYS = {"p_data", "q_meas"}


def parse_config(text: str) -> DecoderConfig:
    values: dict[str, object] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise InvalidParameter(f"line {lineno}: expected key = value")
        key, _, val = line.partition("=")
        key = key.strip()
        val = val.strip()
        if key in values:
            raise InvalidParameter(f"line {lineno}: duplicate key {key!r}")
        if key == "kind":
            values[key] = val
        elif key in _INT_KEYS:
            try:
                values[key] = int(val)
            except ValueError:
                raise InvalidParameter(f"line {lineno}: {key} wants an integer")
        elif key in _FLOAT_KEYS:
            try:
                values[key] = float(val)
            except ValueError:
                raise InvalidParameter(f"line {lineno}: {key} wants a number")
        else:
            raise InvalidParameter(f"line {lineno}: unknown key {key!r}")
    if "kind" not in values:
        raise InvalidParameter("config is missing `kind`")
    kind = values.pop("kind")
    if kind not in KINDS:
        raise InvalidParameter(f"kind must be one of {KINDS}")
    size_key = "d" if kind == "planar" else "l"
    if size_key not in values:
        raise InvalidParameter(f"config is missing `{size_key}` for {kind}")
    size = values.pop(size_key)
    if "d" in values or "l" in values:
        raise InvalidParameter(f"{kind} config must set only `{size_key}`")
    return DecoderConfig(kind=kind, size=size, **values)


def load_config(path) -> DecoderConfig:
    p = Path(path)
    if not p.is_file():
        raise InvalidParameter(f"config file not found: {p}")
    return parse_config(p.read_text())


def with_seed(cfg: DecoderConfig, seed: int) -> DecoderConfig:
    return replace(cfg, seed=seed)
