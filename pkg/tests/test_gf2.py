"""Tests for the bit-packed GF(2) linear algebra core."""

import itertools
import math
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qtanner.errors import DimensionMismatchError, ValidationError
from qtanner import gf2
from qtanner.gf2 import BitMatrix, BitVector


def naive_mat_mul(a, b):
    """Triple-loop product oracle, independent of the packed implementation."""
    out = []
    for r in range(a.rows):
        bits = 0
        for c in range(b.cols):
            s = 0
            for k in range(a.cols):
                s ^= a.get(r, k) & b.get(k, c)
            bits |= s << c
        out.append(bits)
    return BitMatrix(a.rows, b.cols, out)


def random_bitmatrix(rng, rows, cols):
    return BitMatrix(rows, cols, [rng.getrandbits(cols) for _ in range(rows)])


class TestRank:
    def test_identity(self):
        assert gf2.rank(BitMatrix.identity(3)) == 3

    def test_zero(self):
        assert gf2.rank(BitMatrix.zeros(3, 3)) == 0

    def test_dependent_rows(self):
        # Third row is the sum of the first two.
        m = BitMatrix.from_rows(["110", "011", "101"])
        assert gf2.rank(m) == 2

    def test_rank_equals_transpose_rank(self):
        rng = random.Random(7)
        for _ in range(50):
            m = random_bitmatrix(rng, rng.randrange(1, 7), rng.randrange(1, 7))
            assert gf2.rank(m) == gf2.rank(m.transpose())

    def test_idempotent(self):
        m = BitMatrix.from_rows(["110", "011", "101"])
        assert gf2.rank(m) == gf2.rank(m)


class TestKernel:
    def test_identity_has_empty_kernel(self):
        assert gf2.kernel_basis(BitMatrix.identity(3)).rows == 0

    def test_zero_matrix_kernel_is_full_space(self):
        k = gf2.kernel_basis(BitMatrix.zeros(2, 4))
        assert k.rows == 4
        assert gf2.rank(k) == 4

    def test_single_all_ones_row(self):
        # Kernel of [1111] is the even-weight code; enumerate it directly.
        m = BitMatrix.from_rows(["1111"])
        k = gf2.kernel_basis(m)
        assert k.rows == 3
        expected = {
            v.bits
            for v in gf2.enumerate_by_weight(4, 4)
            if v.weight() % 2 == 0
        }
        spanned = set()
        for coeffs in itertools.product([0, 1], repeat=k.rows):
            acc = 0
            for c, bits in zip(coeffs, k.row_bits):
                if c:
                    acc ^= bits
            spanned.add(acc)
        assert spanned == expected

    @given(
        st.integers(1, 6),
        st.integers(1, 6),
        st.randoms(use_true_random=False),
    )
    @settings(max_examples=60, deadline=None)
    def test_rank_nullity_and_membership(self, rows, cols, rnd):
        m = random_bitmatrix(rnd, rows, cols)
        k = gf2.kernel_basis(m)
        assert gf2.rank(m) + k.rows == cols
        for r in range(k.rows):
            assert gf2.mat_vec(m, k.row(r)).bits == 0


class TestSolve:
    def test_identity(self):
        m = BitMatrix.identity(4)
        b = BitVector.from01("1011")
        assert gf2.solve(m, b) == b

    def test_zero_matrix_inconsistent(self):
        m = BitMatrix.zeros(2, 3)
        assert gf2.solve(m, BitVector.from01("10")) is None

    def test_two_row_system_against_enumeration(self):
        m = BitMatrix.from_rows(["110", "011"])
        b = BitVector.from01("11")
        solutions = {
            v.bits for v in gf2.enumerate_by_weight(3, 3) if gf2.mat_vec(m, v) == b
        }
        x = gf2.solve(m, b)
        assert x is not None and x.bits in solutions

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionMismatchError):
            gf2.solve(BitMatrix.zeros(2, 3), BitVector.from01("101"))

    @given(
        st.integers(1, 6),
        st.integers(1, 6),
        st.randoms(use_true_random=False),
    )
    @settings(max_examples=60, deadline=None)
    def test_solution_satisfies_system(self, rows, cols, rnd):
        m = random_bitmatrix(rnd, rows, cols)
        b = BitVector(rows, rnd.getrandbits(rows))
        x = gf2.solve(m, b)
        if x is None:
            # Inconsistent: confirm by exhausting all 2^cols candidates.
            assert all(
                gf2.mat_vec(m, v) != b for v in gf2.enumerate_by_weight(cols, cols)
            )
        else:
            assert gf2.mat_vec(m, x) == b

    def test_deterministic(self):
        m = BitMatrix.from_rows(["1100", "0110"])
        b = BitVector.from01("11")
        assert gf2.solve(m, b) == gf2.solve(m, b)


class TestMatMul:
    def test_identity_is_neutral(self):
        rng = random.Random(3)
        a = random_bitmatrix(rng, 3, 5)
        assert gf2.mat_mul(a, BitMatrix.identity(5)) == a

    def test_characteristic_two_cancellation(self):
        a = BitMatrix.from_rows(["11"])
        b = BitMatrix(2, 1, [1, 1])
        assert gf2.mat_mul(a, b) == BitMatrix.zeros(1, 1)

    def test_against_naive_oracle(self):
        rng = random.Random(11)
        for _ in range(40):
            a = random_bitmatrix(rng, 4, 4)
            b = random_bitmatrix(rng, 4, 4)
            assert gf2.mat_mul(a, b) == naive_mat_mul(a, b)

    def test_associativity(self):
        rng = random.Random(13)
        for _ in range(20):
            a = random_bitmatrix(rng, rng.randrange(1, 5), rng.randrange(1, 5))
            b = random_bitmatrix(rng, a.cols, rng.randrange(1, 5))
            c = random_bitmatrix(rng, b.cols, rng.randrange(1, 5))
            assert gf2.mat_mul(gf2.mat_mul(a, b), c) == gf2.mat_mul(
                a, gf2.mat_mul(b, c)
            )

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionMismatchError):
            gf2.mat_mul(BitMatrix.zeros(2, 3), BitMatrix.zeros(2, 3))


class TestEnumerateByWeight:
    def test_weight_zero(self):
        assert [v.to01() for v in gf2.enumerate_by_weight(3, 0)] == ["000"]

    def test_weight_one_order(self):
        got = [v.to01() for v in gf2.enumerate_by_weight(3, 1)]
        assert got == ["000", "100", "010", "001"]

    def test_binomial_count(self):
        got = list(gf2.enumerate_by_weight(5, 2))
        assert len(got) == 1 + 5 + 10
        assert len(set(v.bits for v in got)) == 16

    def test_nondecreasing_weight_and_uniqueness(self):
        seen = set()
        last_w = 0
        for v in gf2.enumerate_by_weight(6, 6):
            assert v.weight() >= last_w
            last_w = v.weight()
            assert v.bits not in seen
            seen.add(v.bits)
        assert len(seen) == 64

    def test_rejects_excess_weight(self):
        with pytest.raises(ValidationError):
            list(gf2.enumerate_by_weight(3, 4))


class TestSerialization:
    def test_round_trip(self):
        rng = random.Random(5)
        for _ in range(10):
            m = random_bitmatrix(rng, rng.randrange(0, 5), rng.randrange(1, 8))
            assert BitMatrix.from_text(m.to_text()) == m

    def test_text_layout(self):
        m = BitMatrix.from_rows(["100", "011"])
        assert m.to_text() == "2 3\n100\n011\n"

    def test_leftmost_char_is_column_zero(self):
        m = BitMatrix.from_text("1 3\n100\n")
        assert m.get(0, 0) == 1 and m.get(0, 1) == 0 and m.get(0, 2) == 0


class TestRowSpace:
    def test_membership_matches_solve(self):
        rng = random.Random(17)
        for _ in range(30):
            m = random_bitmatrix(rng, 4, 6)
            space = gf2.RowSpace(m)
            v = BitVector(6, rng.getrandbits(6))
            expected = gf2.solve(m.transpose(), v) is not None
            assert space.contains(v) == expected
            assert gf2.in_rowspan(m, v) == expected


class TestTranspose:
    def test_involution(self):
        rng = random.Random(19)
        m = random_bitmatrix(rng, 3, 7)
        assert m.transpose().transpose() == m

    def test_entries(self):
        m = BitMatrix.from_rows(["10", "11", "01"])
        t = m.transpose()
        for r in range(m.rows):
            for c in range(m.cols):
                assert m.get(r, c) == t.get(c, r)
