"""Packed GF(2) linear algebra, checked against brute-force span oracles."""

import itertools
import random

from qecdesk import gf2


def span(rows):
    """Every XOR combination of the rows; the oracle for rank/membership."""
    out = {0}
    for r in rows:
        out |= {x ^ r for x in out}
    return out


def random_rows(rng, nrows, ncols):
    return [rng.getrandbits(ncols) for _ in range(nrows)]


# -- scalar helpers ------------------------------------------------------

def test_parity_and_weight_match_bin():
    rng = random.Random(1)
    for _ in range(200):
        x = rng.getrandbits(rng.randrange(1, 80))
        ones = bin(x).count("1")
        assert gf2.weight(x) == ones
        assert gf2.parity(x) == ones % 2


def test_lowest_bit():
    assert gf2.lowest_bit(0b1011000) == 3
    assert gf2.lowest_bit(1) == 0
    assert gf2.lowest_bit(0) == -1


def test_vector_round_trips():
    rng = random.Random(2)
    for _ in range(100):
        n = rng.randrange(1, 70)
        v = rng.getrandbits(n)
        bits = gf2.vec_to_bits(v, n)
        assert len(bits) == n
        assert gf2.vec_from_bits(bits) == v
        idx = gf2.vec_to_indices(v)
        assert gf2.vec_from_indices(idx) == v
        assert idx == sorted(idx)
        nbytes = (n + 7) // 8
        assert gf2.vec_from_bytes(gf2.vec_to_bytes(v, nbytes)) == v


def test_vec_to_bytes_is_lsb_first():
    # bit 0 lands in byte 0 bit 0, bit 8 in byte 1 bit 0
    assert gf2.vec_to_bytes(0b1, 2) == b"\x01\x00"
    assert gf2.vec_to_bytes(1 << 8, 2) == b"\x00\x01"
    assert gf2.vec_to_bytes(0x1234, 2) == bytes([0x34, 0x12])


def test_matvec_is_row_dot_products():
    rows = [0b101, 0b011, 0b110]
    # x = 0b110: dots are parity(100)=1, parity(010)=1, parity(110)=0
    assert gf2.matvec(rows, 0b110) == 0b011


def test_transpose_involution_and_shape():
    rng = random.Random(3)
    for _ in range(50):
        nrows = rng.randrange(1, 8)
        ncols = rng.randrange(1, 12)
        rows = random_rows(rng, nrows, ncols)
        t = gf2.transpose(rows, ncols)
        assert len(t) == ncols
        assert gf2.transpose(t, nrows) == rows
        # (A^T)_ji == A_ij
        for i, j in itertools.product(range(nrows), range(ncols)):
            assert (rows[i] >> j) & 1 == (t[j] >> i) & 1


# -- rank / membership / solve / kernel ----------------------------------

def test_rank_matches_span_size():
    rng = random.Random(4)
    for _ in range(60):
        rows = random_rows(rng, rng.randrange(0, 7), rng.randrange(1, 10))
        assert 1 << gf2.rank(rows) == len(span(rows))


def test_in_rowspace_matches_span():
    rng = random.Random(5)
    for _ in range(40):
        ncols = rng.randrange(1, 9)
        rows = random_rows(rng, rng.randrange(0, 6), ncols)
        members = span(rows)
        for v in range(1 << ncols):
            assert gf2.in_rowspace(rows, v) == (v in members)


def test_solve_finds_solution_iff_consistent():
    rng = random.Random(6)
    for _ in range(80):
        ncols = rng.randrange(1, 9)
        nrows = rng.randrange(1, 7)
        rows = random_rows(rng, nrows, ncols)
        reachable = {gf2.matvec(rows, x) for x in range(1 << ncols)}
        for _ in range(8):
            rhs = rng.getrandbits(nrows)
            x = gf2.solve(rows, rhs)
            if rhs in reachable:
                assert x is not None and gf2.matvec(rows, x) == rhs
            else:
                assert x is None


def test_solve_is_deterministic():
    rows = [0b0111, 0b1010]
    assert gf2.solve(rows, 0b11) == gf2.solve(rows, 0b11)


def test_kernel_basis_spans_exact_kernel():
    rng = random.Random(7)
    for _ in range(50):
        ncols = rng.randrange(1, 9)
        rows = random_rows(rng, rng.randrange(0, 6), ncols)
        basis = gf2.kernel_basis(rows, ncols)
        assert len(basis) == ncols - gf2.rank(rows)
        for b in basis:
            assert gf2.matvec(rows, b) == 0
        # independent and complete
        assert gf2.rank(basis) == len(basis)
        kernel = {x for x in range(1 << ncols) if gf2.matvec(rows, x) == 0}
        assert span(basis) == kernel


def test_rank_nullity():
    rng = random.Random(8)
    for _ in range(50):
        ncols = rng.randrange(1, 10)
        rows = random_rows(rng, rng.randrange(0, 8), ncols)
        assert gf2.rank(rows) + len(gf2.kernel_basis(rows, ncols)) == ncols
