"""GF(2) linear algebra on bit-packed integers.

Vectors are plain Python ints with bit i = coordinate i (LSB first).
Matrices are lists of row ints over a stated column count.  This packing
matches the wire payload layout (index -> byte -> bit, LSB first), so
payload bytes and algebra vectors convert with int.to_bytes/from_bytes
and no re-packing step.
"""

from __future__ import annotations

from typing import Iterable, Sequence


def parity(x: int) -> int:
    return x.bit_count() & 1


def weight(v: int) -> int:
    return v.bit_count()


def lowest_bit(x: int) -> int:
    """Index of the lowest set bit; -1 for zero."""
    return (x & -x).bit_length() - 1


def vec_from_indices(indices: Iterable[int]) -> int:
    v = 0
    for i in indices:
        v ^= 1 << i
    return v


def vec_to_indices(v: int) -> list[int]:
    out = []
    while v:
        b = lowest_bit(v)
        out.append(b)
        v &= v - 1
    return out


def vec_from_bits(bits: Sequence[int]) -> int:
    v = 0
    for i, b in enumerate(bits):
        if b & 1:
            v |= 1 << i
    return v


def vec_to_bits(v: int, n: int) -> list[int]:
    return [(v >> i) & 1 for i in range(n)]


def vec_to_bytes(v: int, nbytes: int) -> bytes:
    return v.to_bytes(nbytes, "little")


def vec_from_bytes(data: bytes) -> int:
    return int.from_bytes(data, "little")


def matvec(rows: Sequence[int], v: int) -> int:
    """y = A v over GF(2); bit j of y is the parity of rows[j] & v."""
    y = 0
    for j, row in enumerate(rows):
        if parity(row & v):
            y |= 1 << j
    return y


def transpose(rows: Sequence[int], ncols: int) -> list[int]:
    cols = [0] * ncols
    for j, row in enumerate(rows):
        while row:
            b = lowest_bit(row)
            cols[b] |= 1 << j
            row &= row - 1
    return cols


def _reduce(row: int, pivots: dict[int, int]) -> int:
    """Reduce a row against pivot rows keyed by their lowest set bit."""
    while row:
        b = lowest_bit(row)
        p = pivots.get(b)
        if p is None:
            return row
        row ^= p
    return 0


def rank(rows: Sequence[int]) -> int:
    """Rank by Gaussian elimination, pivoting on the first set bit.

    Deterministic and exact: no tolerances exist over GF(2).
    """
    pivots: dict[int, int] = {}
    for row in rows:
        row = _reduce(row, pivots)
        if row:
            pivots[lowest_bit(row)] = row
    return len(pivots)


def in_rowspace(rows: Sequence[int], v: int) -> bool:
    pivots: dict[int, int] = {}
    for row in rows:
        row = _reduce(row, pivots)
        if row:
            pivots[lowest_bit(row)] = row
    return _reduce(v, pivots) == 0


def solve(rows: Sequence[int], rhs: int) -> int | None:
    """One solution x of the system {rows[j] . x = bit j of rhs}, or None.

    Free coordinates are set to zero, so the result is deterministic.
    """
    pivots: dict[int, tuple[int, int]] = {}
    for j, m in enumerate(rows):
        r = (rhs >> j) & 1
        while m:
            b = lowest_bit(m)
            got = pivots.get(b)
            if got is None:
                pivots[b] = (m, r)
                break
            m ^= got[0]
            r ^= got[1]
        if m == 0 and r == 1:
            return None
    x = 0
    # Pivot bit is each equation's lowest set bit, so scanning pivots in
    # descending order means every other set coordinate is already fixed.
    for b in sorted(pivots, reverse=True):
        m, r = pivots[b]
        if r ^ parity(m & ~(1 << b) & x):
            x |= 1 << b
    return x


def kernel_basis(rows: Sequence[int], ncols: int) -> list[int]:
    """Basis of {x : A x = 0}, one vector per free column."""
    pivots: dict[int, int] = {}
    for row in rows:
        row = _reduce(row, pivots)
        if row:
            pivots[lowest_bit(row)] = row
    # Full reduction, descending: rows visited later only ever XOR in
    # already-reduced rows, which carry their pivot bit plus free bits.
    for b in sorted(pivots, reverse=True):
        m = pivots[b]
        t = m & ~(1 << b)
        while t:
            b2 = lowest_bit(t)
            t &= t - 1
            p = pivots.get(b2)
            if p is not None:
                m ^= p
        pivots[b] = m
    basis = []
    for f in range(ncols):
        if f in pivots:
            continue
        v = 1 << f
        for b, m in pivots.items():
            if (m >> f) & 1:
                v |= 1 << b
        basis.append(v)
    return basis
