"""Reproducible noise sampling and detection-event trace generation.

Randomness comes from the Philox counter-based generator with one
independent stream per lattice object: data edge i draws from key
(seed, i), check j from key (seed, 2^32 + j).  Stream splitting by key
makes every trace independent of iteration order: drawing round bits
one at a time or as a whole-run batch yields identical values.

Only one error species is simulated: phase-type data errors checked by
the star (vertex) side.  The dual species is symmetric and out of scope.
A data error injected at round t flips that same round's syndrome.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from numpy.random import Generator, Philox

from . import gf2
from .errors import InvalidParameter
from .geometry import CodeSpec, boundary

_MEAS_STREAM_BASE = 1 << 32


@dataclass(frozen=True)
class NoiseModel:
    p_data: float      # per-edge flip probability per round
    q_meas: float      # per-check reported-bit flip probability per round
    seed: int          # 64-bit stream seed

    def __post_init__(self):
        for name in ("p_data", "q_meas"):
            v = getattr(self, name)
            if not 0.0 <= v <= 1.0:
                raise InvalidParameter(f"{name} must lie in [0, 1]")
        if not 0 <= self.seed < 1 << 64:
            raise InvalidParameter("seed must fit in 64 bits")


@dataclass
class DetectionFrame:
    """One round's detection events: the syndrome XOR'd with the previous."""
    round_t: int
    bits: int            # packed over check indices
    valid: bool = True
    flags: int = 0


@dataclass
class ErrorHistory:
    """Ground truth for correctness scoring; one entry per round."""
    new_errors: list[int] = field(default_factory=list)
    cum_errors: list[int] = field(default_factory=list)
    syndromes: list[int] = field(default_factory=list)    # before meas flips
    meas_flips: list[int] = field(default_factory=list)


def _stream(seed: int, stream_id: int) -> Generator:
    return Generator(Philox(key=np.array([seed, stream_id], dtype=np.uint64)))


class RoundSampler:
    """Draws one flip decision per stream per round, in round order."""

    def __init__(self, code: CodeSpec, model: NoiseModel):
        self.code = code
        self.model = model
        self._edge = [_stream(model.seed, i) for i in range(code.n)]
        self._meas = [_stream(model.seed, _MEAS_STREAM_BASE + j)
                      for j in range(code.m_x)]

    def sample_round(self) -> tuple[int, int]:
        """(new data-error chain, measurement-flip mask) for the next round."""
        p, q = self.model.p_data, self.model.q_meas
        err = gf2.vec_from_indices(
            i for i, g in enumerate(self._edge) if g.random() < p)
        flips = gf2.vec_from_indices(
            j for j, g in enumerate(self._meas) if g.random() < q)
        return err, flips


def sample_round(model: NoiseModel, state: RoundSampler) -> tuple[int, int]:
    if state.model is not model and state.model != model:
        raise InvalidParameter("sampler was built for a different model")
    return state.sample_round()


def detection_events(s_t: int, s_prev: int, nbits: int, round_t: int) -> DetectionFrame:
    """Round-to-round syndrome difference; round 0 diffs against zero."""
    if s_t >> nbits or s_prev >> nbits:
        raise InvalidParameter("syndrome wider than the check count")
    return DetectionFrame(round_t=round_t, bits=s_t ^ s_prev)


def _pack_columns(mat: np.ndarray) -> list[int]:
    """Pack each column of a (streams x rounds) bit matrix into an int."""
    as_bytes = np.packbits(mat.T, axis=1, bitorder="little")
    return [int.from_bytes(row.tobytes(), "little") for row in as_bytes]


def gen_trace(code: CodeSpec, model: NoiseModel, rounds: int,
              window: int = 1) -> tuple[list[DetectionFrame], ErrorHistory]:
    """Deterministic detection-event frames plus the ground-truth history.

    The batch draw per stream equals the per-round draw sequence of
    RoundSampler, so incremental and whole-run generation agree bit for
    bit.  `window` is validated for callers that group rounds downstream;
    frames themselves are always one per round.
    """
    if rounds < 1:
        raise InvalidParameter("rounds must be >= 1")
    if window < 1:
        raise InvalidParameter("window must be >= 1")
    p, q = model.p_data, model.q_meas

    edge_flips = np.zeros((code.n, rounds), dtype=bool)
    for i in range(code.n):
        edge_flips[i] = _stream(model.seed, i).random(rounds) < p
    meas_flips = np.zeros((code.m_x, rounds), dtype=bool)
    for j in range(code.m_x):
        meas_flips[j] = _stream(model.seed, _MEAS_STREAM_BASE + j).random(rounds) < q

    cum = np.logical_xor.accumulate(edge_flips, axis=1)
    hx = np.array([gf2.vec_to_bits(row, code.n) for row in code.h_x], dtype=np.uint8)
    true_syn = (hx @ cum.astype(np.uint8)) % 2

    hist = ErrorHistory(
        new_errors=_pack_columns(edge_flips),
        cum_errors=_pack_columns(cum),
        syndromes=_pack_columns(true_syn.astype(bool)),
        meas_flips=_pack_columns(meas_flips),
    )
    frames = []
    prev_reported = 0
    for t in range(rounds):
        reported = hist.syndromes[t] ^ hist.meas_flips[t]
        frames.append(DetectionFrame(round_t=t, bits=reported ^ prev_reported))
        prev_reported = reported
    return frames, hist


def check_history(code: CodeSpec, hist: ErrorHistory) -> None:
    """Internal consistency: stored syndromes equal boundaries of the truth."""
    cum = 0
    for t, new in enumerate(hist.new_errors):
        cum ^= new
        if cum != hist.cum_errors[t]:
            raise InvalidParameter(f"cumulative error mismatch at round {t}")
        if boundary(code, cum) != hist.syndromes[t]:
            raise InvalidParameter(f"syndrome mismatch at round {t}")
