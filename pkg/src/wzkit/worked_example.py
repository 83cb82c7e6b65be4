"""Hand-checkable ten-bit fixture wired through every stage of the pipeline.

All values here were verified by hand.  The fixture exercises the general
two-level nesting (an inner length-8 message behind a length-10 word), so its
shape is exempt from the structural inequalities that the mirrored production
construction enforces; what it pins down are the algorithms: exhaustive
quantization, syndrome formation, coset enumeration, and decoding.
"""

from __future__ import annotations

from dataclasses import dataclass

from .decoder import SpParams, coset_members, coset_nearest, sp_decode
from .gf2 import (BitMatrix, BitVector, mat_mul, mul_vec, rank,
                  systematic_form, transpose)
from .quantizer import exhaustive_quantize, generator_codeword

__all__ = [
    "SOURCE", "SIDE_INFO", "INNER_GENERATOR", "INNER_CHECK_TOP",
    "INNER_CHECK_BOTTOM", "QUANT_GENERATOR", "CODE_GENERATOR", "OUTER_CHECK",
    "OUTER_CHECK_SYS", "COEFFS", "INNER_WORD", "QUANT_WORD", "SYNDROME",
    "TOTAL_SYNDROME", "COSET", "RECONSTRUCTION", "QUANT_DISTANCE",
    "DECODE_DISTANCE", "CheckOutcome", "verify",
]

SOURCE = BitVector.from_bits_list((1, 0, 0, 1, 1, 0, 0, 1, 0, 0))
SIDE_INFO = BitVector.from_bits_list((1, 0, 1, 1, 1, 0, 0, 1, 0, 1))

# inner stage: an 8-bit message word behind the 10-bit output word
INNER_GENERATOR = BitMatrix(8, 10, [
    (0, 1, 2, 3, 4, 5, 6, 7, 8, 9),
    (0, 1, 2, 3, 4, 5, 6, 7, 8, 9),
    (0, 1, 2, 3, 4, 5, 6, 7, 8, 9),
    (0, 1, 2, 3, 4, 5, 6, 8, 9),
    (6,),
    (7,),
    (0, 2, 4, 8),
    (1, 2, 5, 9),
])
INNER_CHECK_TOP = BitMatrix(4, 8, [(0, 6, 7), (1, 6, 7), (2, 6, 7), (3, 6, 7)])
INNER_CHECK_BOTTOM = BitMatrix(2, 8, [(4, 6, 7), (5, 6, 7)])

# composed generators at the word level
QUANT_GENERATOR = BitMatrix(4, 10, [
    (6,), (7,), (0, 2, 4, 7, 8), (1, 2, 5, 7, 9)])
CODE_GENERATOR = BitMatrix(2, 10, [(0, 2, 4, 6, 8), (1, 2, 5, 6, 9)])

OUTER_CHECK = BitMatrix(8, 10, [
    (0, 4), (1, 5), (2, 6), (3, 7), (4, 8), (5, 9), (0, 2, 7, 9), (0, 3, 4)])
OUTER_CHECK_SYS = BitMatrix(8, 10, [
    (0, 8), (1, 9), (2, 8, 9), (3,), (4, 8), (5, 9), (6, 8, 9), (7,)])

COEFFS = BitVector.from_bits_list((0, 0, 1, 0))
INNER_WORD = BitVector.from_bits_list((1, 1, 1, 1, 0, 0, 1, 0))
QUANT_WORD = BitVector.from_bits_list((1, 0, 1, 0, 1, 0, 0, 1, 1, 0))
SYNDROME = BitVector.from_bits_list((1, 1))
TOTAL_SYNDROME = BitVector.from_bits_list((0, 0, 0, 0, 0, 0, 1, 1))

COSET = (
    BitVector.from_bits_list((0, 0, 0, 0, 0, 0, 1, 1, 0, 0)),
    BitVector.from_bits_list((0, 1, 1, 0, 0, 1, 0, 1, 0, 1)),
    BitVector.from_bits_list((1, 0, 1, 0, 1, 0, 0, 1, 1, 0)),
    BitVector.from_bits_list((1, 1, 0, 0, 1, 1, 1, 1, 1, 1)),
)
RECONSTRUCTION = COSET[2]
QUANT_DISTANCE = 3
DECODE_DISTANCE = 3


@dataclass(frozen=True)
class CheckOutcome:
    name: str
    ok: bool
    detail: str = ""


def _is_zero(a: BitMatrix) -> bool:
    return all(not sup for sup in a.row_support)


def verify() -> list[CheckOutcome]:
    """Re-derive every stated value and report each comparison."""
    checks: list[CheckOutcome] = []

    def add(name: str, ok, detail: str = "") -> None:
        checks.append(CheckOutcome(name, bool(ok), detail))

    best_u, best_d = exhaustive_quantize(QUANT_GENERATOR, SOURCE)
    add("exhaustive_quantizer", best_u == COEFFS and best_d == 0.3,
        f"coeffs={best_u.to_list()} distortion={best_d}")
    word = generator_codeword(QUANT_GENERATOR, COEFFS)
    add("quantized_word", word == QUANT_WORD, f"word={word.to_list()}")
    add("quantization_distance",
        SOURCE.hamming(QUANT_WORD) == QUANT_DISTANCE,
        f"distance={SOURCE.hamming(QUANT_WORD)}")

    inner_out = generator_codeword(INNER_GENERATOR, INNER_WORD)
    add("inner_composition", inner_out == QUANT_WORD,
        f"word={inner_out.to_list()}")
    top_syn = mul_vec(INNER_CHECK_TOP, INNER_WORD)
    add("inner_checks_clear", top_syn.weight() == 0,
        f"syndrome={top_syn.to_list()}")
    bottom_syn = mul_vec(INNER_CHECK_BOTTOM, INNER_WORD)
    add("inner_syndrome", bottom_syn == SYNDROME,
        f"syndrome={bottom_syn.to_list()}")

    stacked = BitMatrix(10, 10,
                        INNER_GENERATOR.row_support + CODE_GENERATOR.row_support)
    add("code_generator_in_inner_span",
        rank(stacked) == rank(INNER_GENERATOR),
        f"rank={rank(stacked)} vs {rank(INNER_GENERATOR)}")

    add("code_orthogonal_to_check",
        _is_zero(mat_mul(CODE_GENERATOR, transpose(OUTER_CHECK))))
    add("code_orthogonal_to_sys",
        _is_zero(mat_mul(CODE_GENERATOR, transpose(OUTER_CHECK_SYS))))

    sys_form, col_perm = systematic_form(OUTER_CHECK)
    add("systematic_form",
        sys_form == OUTER_CHECK_SYS and col_perm == tuple(range(10)),
        f"perm={col_perm}")

    top = BitMatrix(6, 10, OUTER_CHECK_SYS.row_support[:6])
    add("quant_rows_clear_top_checks",
        _is_zero(mat_mul(QUANT_GENERATOR, transpose(top))))

    total = mul_vec(OUTER_CHECK_SYS, QUANT_WORD)
    add("total_syndrome", total == TOTAL_SYNDROME,
        f"syndrome={total.to_list()}")
    add("syndrome_tail_matches", total.bits >> 6 == SYNDROME.bits)

    members = coset_members(OUTER_CHECK_SYS, TOTAL_SYNDROME)
    add("coset_enumeration", tuple(members) == COSET,
        f"count={len(members)}")
    nearest, dist = coset_nearest(OUTER_CHECK_SYS, TOTAL_SYNDROME, SIDE_INFO)
    add("nearest_in_coset",
        nearest == RECONSTRUCTION and dist == DECODE_DISTANCE,
        f"distance={dist}")

    sp = sp_decode(OUTER_CHECK_SYS, TOTAL_SYNDROME, SIDE_INFO,
                   SpParams(crossover=0.3))
    add("sp_decoder",
        sp.converged and sp.bits == RECONSTRUCTION,
        f"converged={sp.converged} iterations={sp.iterations}")

    add("reconstruction_equals_word", RECONSTRUCTION == QUANT_WORD)
    return checks
