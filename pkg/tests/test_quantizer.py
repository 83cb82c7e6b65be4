"""Bias propagation against the exhaustive minimum-distortion oracle."""

import math
import random

import pytest

from wzkit.gf2 import BitMatrix, BitVector, ShapeError
from wzkit.quantizer import (EXHAUSTIVE_LIMIT, BipParams, bip_quantize,
                             exhaustive_quantize, generator_codeword,
                             has_four_cycle)


def random_generator(rng, rows, cols, density=0.35):
    mat = [[c for c in range(cols) if rng.random() < density]
           for _ in range(rows)]
    for r, sup in enumerate(mat):
        if not sup:
            sup.append(rng.randrange(cols))
    return BitMatrix(rows, cols, mat)


class TestGeneratorCodeword:
    def test_matches_row_xor(self):
        g = BitMatrix(3, 6, [[0, 1], [1, 2, 3], [4, 5]])
        word = generator_codeword(g, BitVector(3, 0b101))
        assert word == BitVector(6, (1 << 0 | 1 << 1) ^ (1 << 4 | 1 << 5))

    def test_shape_error(self):
        g = BitMatrix(3, 6, [[0], [1], [2]])
        with pytest.raises(ShapeError):
            generator_codeword(g, BitVector(4, 0))


class TestExhaustive:
    def test_zero_source_picks_zero_word(self):
        g = BitMatrix(3, 8, [[0, 1], [2, 3], [4, 5]])
        u, d = exhaustive_quantize(g, BitVector(8, 0))
        assert u.bits == 0 and d == 0.0

    def test_exact_on_codeword(self):
        rng = random.Random(2)
        g = random_generator(rng, 6, 14)
        u_true = BitVector(6, rng.getrandbits(6))
        word = generator_codeword(g, u_true)
        u, d = exhaustive_quantize(g, word)
        assert d == 0.0
        assert generator_codeword(g, u) == word

    def test_lexicographic_tie_break(self):
        # u=01, u=10, and u=11 all sit at distance 1; coordinate-order
        # comparison must pick u with the zero first bit over the earlier find
        g = BitMatrix(2, 4, [[0, 2], [1, 2]])
        src = BitVector(4, 0b0111)
        u, d = exhaustive_quantize(g, src)
        assert d == pytest.approx(1 / 4)
        assert u == BitVector(2, 0b10)

    def test_row_limit_enforced(self):
        rows = EXHAUSTIVE_LIMIT + 1
        g = BitMatrix(rows, rows, [[i] for i in range(rows)])
        with pytest.raises(ValueError):
            exhaustive_quantize(g, BitVector(rows, 0))

    def test_shape_error(self):
        g = BitMatrix(2, 4, [[0], [1]])
        with pytest.raises(ShapeError):
            exhaustive_quantize(g, BitVector(5, 0))


class TestHasFourCycle:
    def test_positive(self):
        # rows 0 and 1 share columns 0 and 1
        g = BitMatrix(2, 3, [[0, 1], [0, 1, 2]])
        assert has_four_cycle(g)

    def test_negative(self):
        g = BitMatrix(3, 6, [[0, 1], [1, 2], [3, 4]])
        assert not has_four_cycle(g)


class TestBipParams:
    def test_defaults_resolve_lazily(self):
        p = BipParams()
        assert p.gamma is None and p.damping is None

    @pytest.mark.parametrize("kwargs", [
        {"gamma": 0.0},
        {"gamma": -1.0},
        {"threshold": 0.0},
        {"threshold": 1.0},
        {"iters_per_round": 0},
        {"damping": 1.0},
        {"damping": -0.1},
    ])
    def test_rejects_bad_knobs(self, kwargs):
        with pytest.raises(ValueError):
            BipParams(**kwargs)


class TestBipQuantize:
    def test_never_beats_exhaustive_oracle(self):
        """Heuristic distortion is bounded below by the exact minimum, 100 codebooks."""
        rng = random.Random(0xBEEF)
        for _ in range(100):
            rows = rng.randrange(4, 13)
            cols = rows + rng.randrange(4, 12)
            g = random_generator(rng, rows, cols)
            src = BitVector(cols, rng.getrandbits(cols))
            res = bip_quantize(g, src)
            _, d_min = exhaustive_quantize(g, src)
            assert res.distortion >= d_min - 1e-12
            word = generator_codeword(g, res.u)
            assert res.distortion == pytest.approx(
                (word ^ src).weight() / cols)

    def test_reaches_codewords_exactly(self):
        rng = random.Random(7)
        hits = 0
        for _ in range(50):
            g = random_generator(rng, 6, 16)
            word = generator_codeword(g, BitVector(6, rng.getrandbits(6)))
            res = bip_quantize(g, word)
            hits += res.distortion == 0.0
        assert hits >= 45

    def test_rounds_and_shapes(self):
        rng = random.Random(3)
        g = random_generator(rng, 8, 20)
        res = bip_quantize(g, BitVector(20, rng.getrandbits(20)))
        assert res.rounds >= 1
        assert res.u.length == 8
        assert res.conflict_events >= 0

    def test_shape_error(self):
        g = BitMatrix(2, 4, [[0], [1]])
        with pytest.raises(ShapeError):
            bip_quantize(g, BitVector(3, 0))

    def test_deterministic(self):
        rng = random.Random(11)
        g = random_generator(rng, 10, 24)
        src = BitVector(24, rng.getrandbits(24))
        a = bip_quantize(g, src)
        b = bip_quantize(g, src)
        assert a == b

    def test_warm_start_still_valid(self):
        rng = random.Random(13)
        g = random_generator(rng, 10, 24)
        src = BitVector(24, rng.getrandbits(24))
        res = bip_quantize(g, src, BipParams(warm_start=True))
        word = generator_codeword(g, res.u)
        assert res.distortion == pytest.approx((word ^ src).weight() / 24)


def test_ratio_form_matches_atanh_sum():
    """Product form of the check update equals the hyperbolic form to 1e-10."""
    rng = random.Random(99)
    for _ in range(200):
        k = rng.randrange(2, 9)
        vals = [rng.uniform(-0.999, 0.999) for _ in range(k)]
        plus = math.prod(1 + v for v in vals)
        minus = math.prod(1 - v for v in vals)
        ratio = (plus - minus) / (plus + minus)
        hyper = math.tanh(sum(math.atanh(v) for v in vals))
        assert abs(ratio - hyper) <= 1e-10
