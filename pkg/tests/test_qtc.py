"""Tests for quantum Tanner code assembly, syndromes, and distance scans."""

import random

import pytest

from qtanner import cayley_complex as cc
from qtanner import gf2, local_codes as lc, qtc
from qtanner.errors import DimensionMismatchError, ValidationError
from qtanner.gf2 import BitMatrix, BitVector

from conftest import build_z12_code, even_code, rep_code


class TestAssemble:
    def test_z12_commutation_and_size(self, z12_code):
        code = z12_code
        assert code.n == 96  # Delta^2 |G| / 2
        assert gf2.mat_mul(code.h_x, code.h_z.transpose()).is_zero()

    def test_z_generator_row_count(self, z12_code):
        code = z12_code
        # one row per V0 vertex per C_A x C_B basis element
        assert code.h_z.rows == 12 * code.code_a.k * code.code_b.k
        assert code.h_x.rows == 12 * code.x_block

    def test_k_formula(self, z12_code):
        code = z12_code
        k_x = code.n - gf2.rank(code.h_x)
        k_z = code.n - gf2.rank(code.h_z)
        assert code.k == k_x + k_z - code.n
        assert code.k == code.n - gf2.rank(code.h_x) - gf2.rank(code.h_z)

    def test_zero_local_code_side(self):
        # k_A = 0: no Z generators at all; k = n - rank(h_x).
        group = cc.build_cyclic(12)
        pair = cc.GeneratingSetPair(gens_a=(1, 5, 7, 11), gens_b=(2, 3, 9, 10))
        complex_ = cc.LeftRightCayleyComplex(group, pair)
        zero_a = lc.ClassicalCode.from_parity_check(BitMatrix.identity(4))
        code = qtc.assemble(complex_, zero_a, even_code(4))
        assert code.h_z.rows == 0
        assert code.k == code.n - gf2.rank(code.h_x)

    def test_row_weights_and_qubit_locality(self, z12_code):
        code = z12_code
        d2 = code.delta**2
        for m in (code.h_x, code.h_z):
            assert all(bits.bit_count() <= d2 for bits in m.row_bits)
        # every qubit appears in generators of at most 4 vertices
        for q in range(code.n):
            verts = set()
            for r, bits in enumerate(code.h_x.row_bits):
                if (bits >> q) & 1:
                    verts.add(("x", r // code.x_block))
            for r, bits in enumerate(code.h_z.row_bits):
                if (bits >> q) & 1:
                    verts.add(("z", r // code.z_block))
            assert len(verts) <= 4

    def test_psl2_5_assembles(self, psl2_5_code):
        code = psl2_5_code
        assert code.n == 16 * 60 // 2
        assert gf2.mat_mul(code.h_x, code.h_z.transpose()).is_zero()

    def test_mismatched_blocklength_rejected(self):
        group = cc.build_cyclic(12)
        pair = cc.GeneratingSetPair(gens_a=(1, 5, 7, 11), gens_b=(2, 3, 9, 10))
        complex_ = cc.LeftRightCayleyComplex(group, pair)
        with pytest.raises(DimensionMismatchError):
            qtc.assemble(complex_, rep_code(3), even_code(3))


class TestSyndrome:
    def test_zero_error(self, z12_code):
        code = z12_code
        assert qtc.syndrome(code, BitVector.zeros(code.n)).bits == 0

    def test_stabilizer_row_has_zero_syndrome(self, z12_code):
        code = z12_code
        row = code.h_z.row(5)
        assert qtc.syndrome(code, row).bits == 0

    def test_single_qubit_syndrome_support(self, z12_code):
        code = z12_code
        sq = code.complex.squares[17]
        e = BitVector.from_support(code.n, [17])
        sigma = qtc.syndrome(code, e)
        corner_blocks = {h for (h, _, _) in code.complex.v1_corners(sq)}
        for bit in sigma.support():
            assert bit // code.x_block in corner_blocks

    def test_linearity(self, z12_code):
        code = z12_code
        rng = random.Random(3)
        for _ in range(50):
            e1 = BitVector(code.n, rng.getrandbits(code.n))
            e2 = BitVector(code.n, rng.getrandbits(code.n))
            assert qtc.syndrome(code, e1 ^ e2) == qtc.syndrome(code, e1) ^ qtc.syndrome(
                code, e2
            )

    def test_length_mismatch(self, z12_code):
        with pytest.raises(DimensionMismatchError):
            qtc.syndrome(z12_code, BitVector.zeros(5))


class TestStabilizerEquivalence:
    def test_zero_residual(self, z12_code):
        assert qtc.is_stabilizer_equivalent(z12_code, BitVector.zeros(z12_code.n))

    def test_sum_of_rows(self, z12_code):
        code = z12_code
        residual = code.h_z.row(0) ^ code.h_z.row(7)
        assert qtc.is_stabilizer_equivalent(code, residual)

    def test_weight_one_not_equivalent(self, z12_code):
        code = z12_code
        assert lc.min_distance(code.code_a) >= 2
        assert lc.min_distance(code.code_b) >= 2
        assert not qtc.is_stabilizer_equivalent(
            code, BitVector.from_support(code.n, [3])
        )


class TestDistanceCertification:
    def test_w_zero_certifies_one(self, z12_code):
        cert = qtc.certify_distance_lower_bound(z12_code, 0)
        assert not cert.found
        assert cert.certified_floor == 0

    def test_zero_k_code_has_no_logicals(self):
        # Full-space C_A makes k_X cover everything: k = 0.
        group = cc.build_cyclic(12)
        pair = cc.GeneratingSetPair(gens_a=(1, 5, 7, 11), gens_b=(2, 3, 9, 10))
        complex_ = cc.LeftRightCayleyComplex(group, pair)
        full_a = lc.ClassicalCode.from_generator(BitMatrix.identity(4))
        code = qtc.assemble(complex_, full_a, even_code(4))
        if code.k == 0:
            cert = qtc.certify_distance_lower_bound(code, 2)
            assert not cert.found

    def test_agrees_with_kernel_enumeration_oracle(self, z5_tiny_code):
        code = z5_tiny_code
        assert code.n == 10
        # Oracle: enumerate ker h_x fully, find the true minimal Z-logical
        # weight; do the same for X.
        def min_logical(h_ker, other_space):
            kb = gf2.kernel_basis(h_ker)
            best = None
            for v in lc._gray_span(kb.row_bits, code.n):
                if v.bits and not other_space.contains(v):
                    w = v.weight()
                    if best is None or w < best:
                        best = w
            return best

        true_dz = min_logical(code.h_x, code.hz_rowspace())
        true_dx = min_logical(code.h_z, code.hx_rowspace())
        assert code.k > 0 and true_dz is not None and true_dx is not None
        true_d = min(true_dz, true_dx)
        cert = qtc.certify_distance_lower_bound(code, true_d)
        assert cert.found
        assert cert.logical.weight() == true_d
        below = qtc.certify_distance_lower_bound(code, true_d - 1)
        assert not below.found


class TestBundle:
    def test_byte_exact_round_trip(self, z12_code):
        text = qtc.bundle_to_text(z12_code)
        again = qtc.bundle_from_text(text)
        assert qtc.bundle_to_text(again) == text
        assert again.n == z12_code.n and again.k == z12_code.k
        assert again.h_x == z12_code.h_x and again.h_z == z12_code.h_z

    def test_rejects_corrupt_bundle(self, z12_code):
        text = qtc.bundle_to_text(z12_code)
        with pytest.raises(ValidationError):
            qtc.bundle_from_text(text.replace('"n":96', '"n":95'))

    def test_rejects_non_json(self):
        with pytest.raises(ValidationError):
            qtc.bundle_from_text("definitely not json")
