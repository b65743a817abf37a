"""Surface-code lattices and generic CSS codes as GF(2) chain complexes.

A code is two parity-check matrices H_X (stars or Tanner checks on one
side) and H_Z (plaquettes or the dual side) over n data-qubit bits, with
every X-row/Z-row overlap even.  Data errors are 1-chains (bit vectors
over edges), syndromes are 0-chains over checks, and logical operators
are cycles modulo plaquette boundaries.

Lattice conventions (planar, distance d):
  vertices   (r, c) on a d-row by (d+1)-column grid
  horizontal edges (r, c)-(r, c+1) for r in [0,d), c in [0,d)
  vertical edges   (r, c)-(r+1, c) for interior columns c in [1,d-1)
  X-checks sit on interior-column vertices, Z-checks on faces (the
  leftmost/rightmost face columns have weight 3), so n = d^2 + (d-1)^2,
  m_X = m_Z = d(d-1), and one logical qubit survives.
Toric (side L): everything wraps, all stars/plaquettes weight 4,
  n = 2 L^2 and two logical qubits survive.

Edge indexing enumerates horizontal edges first, then vertical, each
row-major; this fixed order is what traces, records, and correction
vectors all share.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from . import gf2
from .errors import InvalidParameter, UnsupportedSize


@dataclass(frozen=True)
class CodeSpec:
    """An immutable CSS code instance; safe to share across stages."""

    kind: str                      # "planar" | "toric" | "css-generic"
    n: int                         # data qubits
    h_x: tuple[int, ...]           # m_X rows, packed over n columns
    h_z: tuple[int, ...]           # m_Z rows, packed over n columns
    logical_z: tuple[int, ...]     # k representatives, cycles of H_X
    logical_x: tuple[int, ...]     # paired dual representatives
    d: int | None = None
    L: int | None = None
    edge_coords: tuple[tuple, ...] = ()        # per edge: (kind, r, c)
    edge_index: dict = field(default_factory=dict, repr=False)
    x_check_coords: tuple[tuple, ...] = ()
    x_check_index: dict = field(default_factory=dict, repr=False)

    @property
    def m_x(self) -> int:
        return len(self.h_x)

    @property
    def m_z(self) -> int:
        return len(self.h_z)

    @property
    def k(self) -> int:
        return len(self.logical_z)

    def edge_between(self, a: tuple[int, int], b: tuple[int, int]) -> int:
        """Edge index for two adjacent lattice vertices (r, c)."""
        if self.kind not in ("planar", "toric"):
            raise InvalidParameter("vertex-pair lookup needs a lattice code")
        (r1, c1), (r2, c2) = a, b
        wrap = self.L if self.kind == "toric" else None
        for u, v in (((r1, c1), (r2, c2)), ((r2, c2), (r1, c1))):
            ur, uc = u
            vr, vc = v
            if ur == vr and (uc + 1 == vc or (wrap and (uc + 1) % wrap == vc)):
                k = ("h", ur, uc)
            elif uc == vc and (ur + 1 == vr or (wrap and (ur + 1) % wrap == vr)):
                k = ("v", ur, uc)
            else:
                continue
            if k in self.edge_index:
                return self.edge_index[k]
        raise InvalidParameter(f"no lattice edge between {a} and {b}")


def build_planar(d: int) -> CodeSpec:
    """Planar patch of distance d with rough left/right columns."""
    if not isinstance(d, int) or d < 2:
        raise InvalidParameter("planar distance must be an integer >= 2")
    n = d * d + (d - 1) * (d - 1)
    edge_index: dict = {}
    edge_coords: list[tuple] = []
    for r in range(d):
        for c in range(d):
            edge_index[("h", r, c)] = len(edge_coords)
            edge_coords.append(("h", r, c))
    for r in range(d - 1):
        for c in range(1, d):
            edge_index[("v", r, c)] = len(edge_coords)
            edge_coords.append(("v", r, c))
    assert len(edge_coords) == n

    x_rows = []
    x_coords = []
    x_index = {}
    for r in range(d):
        for c in range(1, d):
            bits = [edge_index[("h", r, c - 1)], edge_index[("h", r, c)]]
            if r >= 1:
                bits.append(edge_index[("v", r - 1, c)])
            if r <= d - 2:
                bits.append(edge_index[("v", r, c)])
            x_index[(r, c)] = len(x_rows)
            x_coords.append((r, c))
            x_rows.append(gf2.vec_from_indices(bits))

    z_rows = []
    for r in range(d - 1):
        for c in range(d):
            bits = [edge_index[("h", r, c)], edge_index[("h", r + 1, c)]]
            if c >= 1:
                bits.append(edge_index[("v", r, c)])
            if c + 1 <= d - 1:
                bits.append(edge_index[("v", r, c + 1)])
            z_rows.append(gf2.vec_from_indices(bits))

    logical_z = gf2.vec_from_indices(edge_index[("h", 0, c)] for c in range(d))
    logical_x = gf2.vec_from_indices(edge_index[("h", r, 0)] for r in range(d))
    code = CodeSpec(
        kind="planar", n=n, d=d,
        h_x=tuple(x_rows), h_z=tuple(z_rows),
        logical_z=(logical_z,), logical_x=(logical_x,),
        edge_coords=tuple(edge_coords), edge_index=edge_index,
        x_check_coords=tuple(x_coords), x_check_index=x_index,
    )
    _validate(code)
    return code


def build_toric(L: int) -> CodeSpec:
    """Periodic L x L lattice; two wrap-around logical pairs."""
    if not isinstance(L, int) or L < 2:
        raise InvalidParameter("toric side must be an integer >= 2")
    n = 2 * L * L
    edge_index: dict = {}
    edge_coords: list[tuple] = []
    for r in range(L):
        for c in range(L):
            edge_index[("h", r, c)] = len(edge_coords)
            edge_coords.append(("h", r, c))
    for r in range(L):
        for c in range(L):
            edge_index[("v", r, c)] = len(edge_coords)
            edge_coords.append(("v", r, c))

    x_rows = []
    x_coords = []
    x_index = {}
    for r in range(L):
        for c in range(L):
            bits = [
                edge_index[("h", r, c)],
                edge_index[("h", r, (c - 1) % L)],
                edge_index[("v", r, c)],
                edge_index[("v", (r - 1) % L, c)],
            ]
            x_index[(r, c)] = len(x_rows)
            x_coords.append((r, c))
            x_rows.append(gf2.vec_from_indices(bits))

    z_rows = []
    for r in range(L):
        for c in range(L):
            bits = [
                edge_index[("h", r, c)],
                edge_index[("h", (r + 1) % L, c)],
                edge_index[("v", r, c)],
                edge_index[("v", r, (c + 1) % L)],
            ]
            z_rows.append(gf2.vec_from_indices(bits))

    logical_z = (
        gf2.vec_from_indices(edge_index[("h", 0, c)] for c in range(L)),
        gf2.vec_from_indices(edge_index[("v", r, 0)] for r in range(L)),
    )
    logical_x = (
        gf2.vec_from_indices(edge_index[("h", r, 0)] for r in range(L)),
        gf2.vec_from_indices(edge_index[("v", 0, c)] for c in range(L)),
    )
    code = CodeSpec(
        kind="toric", n=n, L=L, d=L,
        h_x=tuple(x_rows), h_z=tuple(z_rows),
        logical_z=logical_z, logical_x=logical_x,
        edge_coords=tuple(edge_coords), edge_index=edge_index,
        x_check_coords=tuple(x_coords), x_check_index=x_index,
    )
    _validate(code)
    return code


def build_css(h_x: list[int], h_z: list[int], n: int) -> CodeSpec:
    """Generic CSS code from packed parity rows; rejects non-commuting pairs."""
    for rows in (h_x, h_z):
        for row in rows:
            if row >> n:
                raise InvalidParameter("parity row exceeds the column count")
    if not css_commutes(h_x, h_z):
        raise InvalidParameter("H_X and H_Z do not commute (odd row overlap)")
    lz, lx = _logical_pairs(h_x, h_z, n)
    code = CodeSpec(
        kind="css-generic", n=n,
        h_x=tuple(h_x), h_z=tuple(h_z),
        logical_z=tuple(lz), logical_x=tuple(lx),
    )
    _validate(code)
    return code


def _validate(code: CodeSpec) -> None:
    for xr in code.h_x:
        for zr in code.h_z:
            if gf2.parity(xr & zr):
                raise InvalidParameter("commutation violated")
    k = logical_count(code)
    if k != len(code.logical_z) or k != len(code.logical_x):
        raise InvalidParameter("logical representative count disagrees with k")
    for i, lz in enumerate(code.logical_z):
        if gf2.matvec(code.h_x, lz) != 0:
            raise InvalidParameter("logical Z is not a cycle")
        for j, lx in enumerate(code.logical_x):
            want = 1 if i == j else 0
            if gf2.parity(lz & lx) != want:
                raise InvalidParameter("logical pairing is not symplectic")


def boundary(code: CodeSpec, chain: int) -> int:
    """Defect set of a 1-chain: H_X . chain, interior endpoints cancel mod 2."""
    if chain >> code.n:
        raise InvalidParameter("chain index out of range")
    return gf2.matvec(code.h_x, chain)


def syndrome_css(h_rows: list[int], ncols: int, e: int) -> int:
    """s = H e over GF(2) for any packed parity matrix."""
    if e >> ncols:
        raise InvalidParameter("error vector wider than the matrix")
    for row in h_rows:
        if row >> ncols:
            raise InvalidParameter("parity row wider than stated column count")
    return gf2.matvec(h_rows, e)


def css_commutes(h_x: list[int], h_z: list[int]) -> bool:
    """True iff every X-row/Z-row overlap has even parity."""
    return all(not gf2.parity(xr & zr) for xr in h_x for zr in h_z)


rank_gf2 = gf2.rank


def logical_count(code: CodeSpec) -> int:
    return code.n - gf2.rank(code.h_x) - gf2.rank(code.h_z)


@dataclass(frozen=True)
class HomologyClass:
    trivial: bool
    label: tuple[int, ...]   # overlap parity with each paired dual logical


def homology_class(code: CodeSpec, cycle: int) -> HomologyClass:
    """Class of a cycle: trivial iff it is a sum of plaquette boundaries."""
    if boundary(code, cycle) != 0:
        raise InvalidParameter("input chain is not a cycle")
    trivial = gf2.in_rowspace(code.h_z, cycle)
    label = tuple(gf2.parity(cycle & lx) for lx in code.logical_x)
    return HomologyClass(trivial=trivial, label=label)


def min_logical_weight(code: CodeSpec) -> int:
    """Minimum weight of a nontrivial cycle, by exhaustive kernel search.

    Intended for d <= 3 / L <= 3 scale instances; anything whose cycle
    space is too large to enumerate is rejected rather than estimated.
    """
    basis = gf2.kernel_basis(code.h_x, code.n)
    if len(basis) > 20:
        raise UnsupportedSize("cycle space too large for exhaustive search")
    best = None
    v = 0
    # Gray-code walk: combo i differs from i-1 in exactly one basis vector.
    for i in range(1, 1 << len(basis)):
        v ^= basis[gf2.lowest_bit(i)]
        # Nondegenerate pairing: nontrivial iff some dual-logical overlap is odd.
        if any(gf2.parity(v & lx) for lx in code.logical_x):
            w = gf2.weight(v)
            if best is None or w < best:
                best = w
    if best is None:
        raise InvalidParameter("code has no nontrivial cycles")
    return best


def _logical_pairs(h_x: list[int], h_z: list[int], n: int):
    """Symplectically paired logical representatives for a generic CSS code."""
    k = n - gf2.rank(h_x) - gf2.rank(h_z)
    if k == 0:
        return [], []
    z_reps = _quotient_basis(gf2.kernel_basis(h_x, n), list(h_z))
    x_reps = _quotient_basis(gf2.kernel_basis(h_z, n), list(h_x))
    assert len(z_reps) == len(x_reps) == k
    # Gram matrix of the overlap pairing, packed rows over x_reps.
    gram = [gf2.vec_from_bits([gf2.parity(z & x) for x in x_reps]) for z in z_reps]
    inv = _invert_bits(gram, k)
    paired_x = []
    for j in range(k):
        acc = 0
        for l in range(k):
            # row j of inv^T is column j of inv
            if (inv[l] >> j) & 1:
                acc ^= x_reps[l]
        paired_x.append(acc)
    return z_reps, paired_x


def _quotient_basis(candidates: list[int], modulo_rows: list[int]) -> list[int]:
    """Subset of candidates forming a basis of span(candidates)/span(modulo)."""
    pivots: dict[int, int] = {}
    for row in modulo_rows:
        row = gf2._reduce(row, pivots)
        if row:
            pivots[gf2.lowest_bit(row)] = row
    kept = []
    for v in candidates:
        r = gf2._reduce(v, pivots)
        if r:
            pivots[gf2.lowest_bit(r)] = r
            kept.append(v)
    return kept


def _invert_bits(rows: list[int], k: int) -> list[int]:
    """Inverse of a k x k GF(2) matrix given as packed rows."""
    aug = [rows[i] | (1 << (k + i)) for i in range(k)]
    for col in range(k):
        pivot = next(
            (r for r in range(col, k) if (aug[r] >> col) & 1), None)
        if pivot is None:
            raise InvalidParameter("pairing matrix is singular")
        aug[col], aug[pivot] = aug[pivot], aug[col]
        for r in range(k):
            if r != col and (aug[r] >> col) & 1:
                aug[r] ^= aug[col]
    return [row >> k for row in aug]
