"""Table-driven CRC-32 (reflected IEEE polynomial).

The production side delegates to zlib; this module builds the classic
256-entry lookup table from the reversed polynomial 0xEDB88320 so the
two sides compute the checksum by genuinely different routes.  Both
must give 0xCBF43926 over b"123456789".
"""

from __future__ import annotations

_POLY = 0xEDB88320


def _build_table() -> list[int]:
    table = []
    for byte in range(256):
        crc = byte
        for _ in range(8):
            if crc & 1:
                crc = (crc >> 1) ^ _POLY
            else:
                crc >>= 1
        table.append(crc)
    return table


_TABLE = _build_table()

CHECK_VALUE = 0xCBF43926


def crc32(data: bytes) -> int:
    """CRC-32 with init and final xor 0xFFFFFFFF, one table step per byte."""
    crc = 0xFFFFFFFF
    for b in data:
        crc = (crc >> 8) ^ _TABLE[(crc ^ b) & 0xFF]
    return crc ^ 0xFFFFFFFF
