"""GF(2) vectors and sparse matrices with packed-bitset elimination kernels.

Matrices are stored as sorted per-row column supports (the canonical form) plus a
lazily built packed view: one Python int per row, bit c = entry in column c.  The
packed view makes elimination-heavy operations word-parallel, so dimensions of a
few times 10^5 per axis stay workable; memory is O(nnz) for storage and about
rows*cols/8 bytes while an elimination runs.

All operations are pure functions and all values are immutable after construction.
Pivoting is deterministic (columns left to right, rows top down), so every caller
sees reproducible results.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence, TextIO

__all__ = [
    "BitVector",
    "BitMatrix",
    "ShapeError",
    "RankDeficiencyError",
    "mat_mul",
    "mul_vec",
    "rank",
    "invert",
    "systematic_form",
    "null_space_basis",
    "permute",
    "transpose",
    "identity",
    "read_matrix",
    "write_matrix",
]


class ShapeError(ValueError):
    """Dimension mismatch; the message names both offending shapes."""


class RankDeficiencyError(ValueError):
    """Matrix rank too small for the requested operation."""

    def __init__(self, message: str, computed_rank: int):
        super().__init__(message)
        self.rank = computed_rank


@dataclass(frozen=True)
class BitVector:
    """Immutable GF(2) vector: ``length`` bits packed into one Python int."""

    length: int
    bits: int

    def __post_init__(self):
        if self.length < 1:
            raise ShapeError(f"BitVector length must be >= 1, got {self.length}")
        if self.bits < 0 or self.bits >> self.length:
            raise ShapeError(f"bits out of range for length {self.length}")

    @classmethod
    def from_support(cls, length: int, support: Iterable[int]) -> "BitVector":
        bits = 0
        for idx in support:
            if not 0 <= idx < length:
                raise ShapeError(f"support index {idx} outside [0, {length})")
            bits |= 1 << idx
        return cls(length, bits)

    @classmethod
    def from_bits_list(cls, values: Sequence[int]) -> "BitVector":
        if any(v not in (0, 1) for v in values):
            raise ValueError("entries must be 0 or 1")
        bits = 0
        for i, v in enumerate(values):
            if v:
                bits |= 1 << i
        return cls(len(values), bits)

    @property
    def support(self) -> tuple[int, ...]:
        out, bits = [], self.bits
        while bits:
            low = bits & -bits
            out.append(low.bit_length() - 1)
            bits ^= low
        return tuple(out)

    def to_list(self) -> list[int]:
        return [(self.bits >> i) & 1 for i in range(self.length)]

    def weight(self) -> int:
        return self.bits.bit_count()

    def __getitem__(self, i: int) -> int:
        if not 0 <= i < self.length:
            raise IndexError(i)
        return (self.bits >> i) & 1

    def __xor__(self, other: "BitVector") -> "BitVector":
        if self.length != other.length:
            raise ShapeError(f"length {self.length} vs {other.length}")
        return BitVector(self.length, self.bits ^ other.bits)

    def hamming(self, other: "BitVector") -> int:
        if self.length != other.length:
            raise ShapeError(f"length {self.length} vs {other.length}")
        return (self.bits ^ other.bits).bit_count()


class BitMatrix:
    """Immutable GF(2) matrix; ``row_support[i]`` is the sorted support of row i.

    ``rows == 0`` is permitted solely so that an empty null-space basis is
    representable; every other constructor path produces rows >= 1.
    """

    __slots__ = ("rows", "cols", "row_support", "_bitrows")

    def __init__(self, rows: int, cols: int, row_support: Iterable[Iterable[int]]):
        if rows < 0 or cols < 1:
            raise ShapeError(f"bad shape {rows}x{cols}")
        supports = []
        for i, sup in enumerate(row_support):
            tup = tuple(sorted(sup))
            for a, b in zip(tup, tup[1:]):
                if a == b:
                    raise ShapeError(f"row {i} has duplicate column {a}")
            if tup and (tup[0] < 0 or tup[-1] >= cols):
                raise ShapeError(f"row {i} support outside [0, {cols})")
            supports.append(tup)
        if len(supports) != rows:
            raise ShapeError(f"expected {rows} rows, got {len(supports)}")
        object.__setattr__(self, "rows", rows)
        object.__setattr__(self, "cols", cols)
        object.__setattr__(self, "row_support", tuple(supports))
        object.__setattr__(self, "_bitrows", None)

    def __setattr__(self, name, value):
        raise AttributeError("BitMatrix is immutable")

    def __reduce__(self):
        # the blocked __setattr__ defeats slot-state unpickling
        return (BitMatrix, (self.rows, self.cols, self.row_support))

    @classmethod
    def from_dense(cls, dense: Sequence[Sequence[int]]) -> "BitMatrix":
        rows = len(dense)
        cols = len(dense[0]) if rows else 1
        return cls(rows, cols, [[j for j, v in enumerate(r) if v] for r in dense])

    @classmethod
    def from_bitrows(cls, rows: int, cols: int, bitrows: Sequence[int]) -> "BitMatrix":
        return cls(rows, cols, [_bit_indices(b) for b in bitrows])

    def bitrows(self) -> tuple[int, ...]:
        """Packed view, built on first use and cached."""
        cached = object.__getattribute__(self, "_bitrows")
        if cached is None:
            cached = tuple(sum(1 << c for c in sup) for sup in self.row_support)
            object.__setattr__(self, "_bitrows", cached)
        return cached

    def row(self, i: int) -> BitVector:
        return BitVector(self.cols, self.bitrows()[i])

    def to_dense(self) -> list[list[int]]:
        return [[1 if c in set(sup) else 0 for c in range(self.cols)]
                for sup in self.row_support]

    def density(self) -> float:
        nnz = sum(len(s) for s in self.row_support)
        return nnz / (self.rows * self.cols) if self.rows else 0.0

    def __eq__(self, other) -> bool:
        return (isinstance(other, BitMatrix) and self.rows == other.rows
                and self.cols == other.cols and self.row_support == other.row_support)

    def __hash__(self):
        return hash((self.rows, self.cols, self.row_support))

    def __repr__(self) -> str:
        return f"BitMatrix({self.rows}x{self.cols}, nnz={sum(map(len, self.row_support))})"


def _bit_indices(bits: int) -> list[int]:
    out = []
    while bits:
        low = bits & -bits
        out.append(low.bit_length() - 1)
        bits ^= low
    return out


def identity(n: int) -> BitMatrix:
    return BitMatrix(n, n, [[i] for i in range(n)])


def mat_mul(a: BitMatrix, b: BitMatrix) -> BitMatrix:
    """GF(2) product a @ b; row i of the result is the XOR of b-rows in a's support."""
    if a.cols != b.rows:
        raise ShapeError(f"cannot multiply {a.rows}x{a.cols} by {b.rows}x{b.cols}")
    brows = b.bitrows()
    out = []
    for sup in a.row_support:
        acc = 0
        for k in sup:
            acc ^= brows[k]
        out.append(acc)
    return BitMatrix.from_bitrows(a.rows, b.cols, out)


def mul_vec(a: BitMatrix, v: BitVector) -> BitVector:
    """Matrix-vector product over GF(2): entry i is the parity of row i AND v."""
    if a.cols != v.length:
        raise ShapeError(f"cannot apply {a.rows}x{a.cols} to length-{v.length} vector")
    bits = 0
    for i, row in enumerate(a.bitrows()):
        if (row & v.bits).bit_count() & 1:
            bits |= 1 << i
    return BitVector(a.rows, bits)


def transpose(a: BitMatrix) -> BitMatrix:
    if a.rows == 0:
        raise ShapeError("cannot transpose an empty matrix")
    cols: list[list[int]] = [[] for _ in range(a.cols)]
    for i, sup in enumerate(a.row_support):
        for c in sup:
            cols[c].append(i)
    return BitMatrix(a.cols, a.rows, cols)


def _row_reduce(bitrows: list[int], cols: int) -> tuple[list[int], list[int]]:
    """In-place RREF on packed rows.  Returns (reduced rows, pivot columns).

    Deterministic: scans columns left to right, picks the topmost unused row with
    a one in the pivot column, eliminates above and below.
    """
    rows = list(bitrows)
    pivot_cols: list[int] = []
    pivot_rows: list[int] = []
    next_row = 0
    for col in range(cols):
        mask = 1 << col
        pivot = None
        for r in range(next_row, len(rows)):
            if rows[r] & mask:
                pivot = r
                break
        if pivot is None:
            continue
        rows[next_row], rows[pivot] = rows[pivot], rows[next_row]
        prow = rows[next_row]
        for r in range(len(rows)):
            if r != next_row and rows[r] & mask:
                rows[r] ^= prow
        pivot_cols.append(col)
        pivot_rows.append(next_row)
        next_row += 1
        if next_row == len(rows):
            break
    return rows, pivot_cols


def rank(a: BitMatrix) -> int:
    _, pivots = _row_reduce(list(a.bitrows()), a.cols)
    return len(pivots)


def _invert_rows(bitrows: Sequence[int], n: int) -> list[int]:
    """Packed rows of the inverse of the n x n matrix given as packed rows.

    Works on raw row ints so that dense inverses of large matrices never
    materialize per-row supports.  Raises RankDeficiencyError (carrying the
    computed rank) when the matrix is singular.
    """
    aug = [bits | 1 << (n + i) for i, bits in enumerate(bitrows)]
    reduced, pivots = _row_reduce(aug, n)
    if len(pivots) < n:
        raise RankDeficiencyError(
            f"matrix {n}x{n} has rank {len(pivots)} < {n}", len(pivots))
    return [bits >> n for bits in reduced[:n]]


def invert(a: BitMatrix) -> BitMatrix:
    """Inverse of a square full-rank matrix over GF(2)."""
    if a.rows != a.cols:
        raise ShapeError(f"cannot invert non-square {a.rows}x{a.cols}")
    return BitMatrix.from_bitrows(a.rows, a.cols, _invert_rows(a.bitrows(), a.rows))


def systematic_form(a: BitMatrix) -> tuple[BitMatrix, tuple[int, ...]]:
    """Row reduce and move pivot columns to the front.

    Returns (matrix, col_perm) where col_perm maps new column index to original
    column index; the result equals the RREF of a with its columns so permuted
    and carries an identity block in the first a.rows columns.  The row space of
    the result equals the row space of permute(a, identity, col_perm).
    Raises RankDeficiencyError (carrying the computed rank) on rank < rows.
    """
    reduced, pivots = _row_reduce(list(a.bitrows()), a.cols)
    if len(pivots) < a.rows:
        raise RankDeficiencyError(
            f"matrix {a.rows}x{a.cols} has rank {len(pivots)} < {a.rows}", len(pivots))
    pivot_set = set(pivots)
    col_perm = tuple(pivots) + tuple(c for c in range(a.cols) if c not in pivot_set)
    out = []
    for bits in reduced[: a.rows]:
        permuted = 0
        for new_c, old_c in enumerate(col_perm):
            if bits >> old_c & 1:
                permuted |= 1 << new_c
        out.append(permuted)
    return BitMatrix.from_bitrows(a.rows, a.cols, out), col_perm


def null_space_basis(a: BitMatrix) -> BitMatrix:
    """Basis of {v : a v^T = 0} as rows; cols - rank(a) rows (possibly zero)."""
    reduced, pivots = _row_reduce(list(a.bitrows()), a.cols)
    pivot_set = set(pivots)
    free_cols = [c for c in range(a.cols) if c not in pivot_set]
    basis = []
    for free in free_cols:
        vec = 1 << free
        # pivot row r has its pivot at pivots[r]; coefficient is that row's entry
        # in the free column.
        for r, pc in enumerate(pivots):
            if reduced[r] >> free & 1:
                vec |= 1 << pc
        basis.append(vec)
    return BitMatrix.from_bitrows(len(basis), a.cols, basis)


def permute(a: BitMatrix, row_perm: Sequence[int], col_perm: Sequence[int]) -> BitMatrix:
    """Entry (i, j) of the result is entry (row_perm[i], col_perm[j]) of a."""
    if sorted(row_perm) != list(range(a.rows)):
        raise ValueError("row_perm is not a permutation of range(rows)")
    if sorted(col_perm) != list(range(a.cols)):
        raise ValueError("col_perm is not a permutation of range(cols)")
    inv_col = [0] * a.cols
    for new_c, old_c in enumerate(col_perm):
        inv_col[old_c] = new_c
    return BitMatrix(
        a.rows, a.cols,
        [[inv_col[c] for c in a.row_support[row_perm[i]]] for i in range(a.rows)])


def write_matrix(f: TextIO, a: BitMatrix) -> None:
    """Interchange format: "rows cols" header, one line of 1-based column indices
    per row, and a terminating blank line."""
    f.write(f"{a.rows} {a.cols}\n")
    for sup in a.row_support:
        f.write(" ".join(str(c + 1) for c in sup) + "\n")
    f.write("\n")


def read_matrix(f: TextIO) -> BitMatrix:
    header = f.readline()
    parts = header.split()
    if len(parts) != 2:
        raise ValueError(f"bad header line: {header!r}")
    rows, cols = int(parts[0]), int(parts[1])
    supports = []
    for i in range(rows):
        line = f.readline()
        if line == "":
            raise ValueError(f"unexpected end of file at row {i}")
        supports.append([int(tok) - 1 for tok in line.split()])
    return BitMatrix(rows, cols, supports)
