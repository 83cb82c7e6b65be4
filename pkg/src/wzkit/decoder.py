"""Syndrome-conditioned Sum-Product decoding and exact coset search."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .gf2 import BitMatrix, BitVector, ShapeError, null_space_basis

__all__ = [
    "SpParams",
    "DecodeResult",
    "sp_decode",
    "coset_members",
    "coset_nearest",
]

COSET_ENUM_LIMIT = 24  # 2^24 members is the largest exact search we attempt


@dataclass(frozen=True)
class SpParams:
    crossover: float
    max_iter: int = 100
    llr_clip: float = 30.0

    def __post_init__(self):
        if not 0.0 < self.crossover < 0.5:
            raise ValueError(f"crossover must lie in (0, 0.5), got {self.crossover}")
        if self.max_iter < 1:
            raise ValueError("max_iter must be >= 1")
        if self.llr_clip <= 0:
            raise ValueError("llr_clip must be positive")


@dataclass(frozen=True)
class DecodeResult:
    bits: BitVector
    converged: bool
    iterations: int


class _TannerArrays:
    """Flat edge arrays for one parity-check matrix, grouped by check row."""

    def __init__(self, h: BitMatrix):
        degs = [len(s) for s in h.row_support]
        self.rows = h.rows
        self.cols = h.cols
        self.edge_check = np.repeat(np.arange(h.rows), degs)
        self.edge_var = np.fromiter(
            (c for sup in h.row_support for c in sup), dtype=np.int64,
            count=sum(degs))


def _check_pass(theta: np.ndarray, edge_check: np.ndarray, n_checks: int) -> np.ndarray:
    """Per-edge product of the other incoming values on the same check.

    Exact leave-one-out via log-magnitude sums with explicit zero counting, so
    a zero message poisons every other edge of its check but not its own.
    """
    zero = theta == 0.0
    safe = np.where(zero, 1.0, theta)
    log_abs = np.log(np.abs(safe))
    neg = (theta < 0.0).astype(np.float64)
    log_sum = np.bincount(edge_check, weights=log_abs, minlength=n_checks)
    neg_sum = np.bincount(edge_check, weights=neg, minlength=n_checks)
    zero_sum = np.bincount(edge_check, weights=zero.astype(np.float64), minlength=n_checks)

    others_zero = zero_sum[edge_check] - zero
    log_others = log_sum[edge_check] - np.where(zero, 0.0, log_abs)
    sign_others = 1.0 - 2.0 * ((neg_sum[edge_check] - neg) % 2)
    prod = sign_others * np.exp(log_others)
    return np.where(others_zero > 0, 0.0, prod)


def sp_decode(h: BitMatrix, syndrome: BitVector, side_info: BitVector,
              params: SpParams) -> DecodeResult:
    """Find the member of the syndrome coset of h closest to the side information.

    Messages follow the tanh product rule; a set syndrome bit flips the sign of
    its check's outgoing messages.  Hard decisions are re-checked against the
    syndrome every iteration and the first match returns early.  Without
    convergence the final hard decision comes back with converged=False.
    """
    if h.rows != syndrome.length:
        raise ShapeError(f"syndrome length {syndrome.length} != rows {h.rows}")
    if h.cols != side_info.length:
        raise ShapeError(f"side info length {side_info.length} != cols {h.cols}")
    g = _TannerArrays(h)
    syn = np.array(syndrome.to_list(), dtype=np.int64)
    syn_sign = 1.0 - 2.0 * syn[g.edge_check]
    llr0 = float(np.log((1.0 - params.crossover) / params.crossover))
    j_bits = np.array(side_info.to_list(), dtype=np.int64)
    channel = llr0 * (1.0 - 2.0 * j_bits)

    def syndrome_ok(bits: np.ndarray) -> bool:
        par = np.bincount(g.edge_check, weights=bits[g.edge_var], minlength=g.rows)
        return bool(np.all(par.astype(np.int64) % 2 == syn))

    hard = j_bits.copy()
    if syndrome_ok(hard):
        return DecodeResult(BitVector.from_bits_list(hard.tolist()), True, 0)

    msg_vc = channel[g.edge_var].astype(np.float64)
    for it in range(1, params.max_iter + 1):
        t = np.tanh(msg_vc / 2.0)
        prod = _check_pass(t, g.edge_check, g.rows)
        prod = np.clip(prod, -1.0 + 1e-15, 1.0 - 1e-15)
        msg_cv = syn_sign * 2.0 * np.arctanh(prod)
        msg_cv = np.clip(msg_cv, -params.llr_clip, params.llr_clip)

        sum_cv = np.bincount(g.edge_var, weights=msg_cv, minlength=g.cols)
        posterior = channel + sum_cv
        msg_vc = posterior[g.edge_var] - msg_cv
        msg_vc = np.clip(msg_vc, -params.llr_clip, params.llr_clip)

        hard = (posterior < 0.0).astype(np.int64)
        if syndrome_ok(hard):
            return DecodeResult(BitVector.from_bits_list(hard.tolist()), True, it)
    return DecodeResult(BitVector.from_bits_list(hard.tolist()), False, params.max_iter)


def _particular_solution(h: BitMatrix, syndrome: BitVector) -> int:
    """One solution of h x = syndrome, or raise if the coset is empty."""
    aug_col = h.cols
    rows = [bits | (1 << aug_col) if syndrome[i] else bits
            for i, bits in enumerate(h.bitrows())]
    pivots: dict[int, int] = {}
    for bits in rows:
        for col in range(h.cols):
            if not bits >> col & 1:
                continue
            if col in pivots:
                bits ^= pivots[col]
            else:
                pivots[col] = bits
                bits = 0
                break
        if bits:
            raise ValueError("empty coset: syndrome outside the row space image")
    solution = 0
    # back substitution over the echelon rows, free columns left at zero
    for col in sorted(pivots, reverse=True):
        row = pivots[col]
        acc = (row >> aug_col) & 1
        rest = row & ~(1 << col) & ((1 << h.cols) - 1)
        acc ^= (rest & solution).bit_count() & 1
        if acc:
            solution |= 1 << col
    return solution


def _lex_key(bits: int, length: int) -> tuple[int, ...]:
    return tuple((bits >> i) & 1 for i in range(length))


def _coset_iter(h: BitMatrix, syndrome: BitVector):
    if h.rows != syndrome.length:
        raise ShapeError(f"syndrome length {syndrome.length} != rows {h.rows}")
    basis = null_space_basis(h)
    if basis.rows > COSET_ENUM_LIMIT:
        raise ValueError(
            f"coset has 2^{basis.rows} members, beyond the 2^{COSET_ENUM_LIMIT} search limit")
    start = _particular_solution(h, syndrome)
    basis_bits = basis.bitrows()
    current = start
    yield current
    # Gray-code walk: one basis XOR per member
    for k in range(1, 1 << basis.rows):
        current ^= basis_bits[(k & -k).bit_length() - 1]
        yield current


def coset_members(h: BitMatrix, syndrome: BitVector) -> list[BitVector]:
    """All solutions of h x = syndrome, sorted lexicographically."""
    members = sorted(_coset_iter(h, syndrome), key=lambda b: _lex_key(b, h.cols))
    return [BitVector(h.cols, b) for b in members]


def coset_nearest(h: BitMatrix, syndrome: BitVector, target: BitVector
                  ) -> tuple[BitVector, int]:
    """Exact nearest coset member to target; ties pick the lexicographically
    smallest vector.  Returns (member, Hamming distance)."""
    if h.cols != target.length:
        raise ShapeError(f"target length {target.length} != cols {h.cols}")
    best_bits = None
    best_dist = None
    for cand in _coset_iter(h, syndrome):
        dist = (cand ^ target.bits).bit_count()
        if best_dist is None or dist < best_dist:
            best_bits, best_dist = cand, dist
        elif dist == best_dist and _lex_key(cand, h.cols) < _lex_key(best_bits, h.cols):
            best_bits = cand
    return BitVector(h.cols, best_bits), best_dist
