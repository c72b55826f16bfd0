"""Shared instance builders for the test suite."""

import pytest

from qtanner import cayley_complex as cc
from qtanner import local_codes as lc
from qtanner import qtc
from qtanner.gf2 import BitMatrix


def rep_code(delta):
    """[delta, 1] repetition code."""
    rows = []
    for i in range(delta - 1):
        rows.append("0" * i + "11" + "0" * (delta - i - 2))
    return lc.ClassicalCode.from_parity_check(BitMatrix.from_rows(rows))


def even_code(delta):
    """[delta, delta-1] single-parity-check code."""
    return lc.ClassicalCode.from_parity_check(BitMatrix.from_rows(["1" * delta]))


def build_z12_code():
    """Z_12, Delta=4, C_A=[4,1] repetition, C_B=[4,3] even; n = 96."""
    group = cc.build_cyclic(12)
    pair = cc.GeneratingSetPair(gens_a=(1, 5, 7, 11), gens_b=(2, 3, 9, 10))
    complex_ = cc.LeftRightCayleyComplex(group, pair)
    return qtc.assemble(complex_, rep_code(4), even_code(4))


def build_z5_tiny_code():
    """Z_5, Delta=2, repetition local codes; n = 10."""
    group = cc.build_cyclic(5)
    pair = cc.GeneratingSetPair(gens_a=(1, 4), gens_b=(2, 3))
    complex_ = cc.LeftRightCayleyComplex(group, pair)
    return qtc.assemble(complex_, rep_code(2), even_code(2))


def build_psl2_5_code(delta=4, seed=1):
    group = cc.build_psl2(5)
    pair, _ = cc.find_generating_pair(group, delta=delta, rng_seed=seed)
    complex_ = cc.LeftRightCayleyComplex(group, pair)
    if delta == 4:
        code_a, code_b = rep_code(4), even_code(4)
    else:
        code_a = lc.sample_random_code(delta, lc.Fraction(1, 3), 7)
        code_b = lc.sample_random_code(delta, lc.Fraction(2, 3), 8)
    return qtc.assemble(complex_, code_a, code_b)


@pytest.fixture(scope="session")
def z12_code():
    return build_z12_code()


@pytest.fixture(scope="session")
def z5_tiny_code():
    return build_z5_tiny_code()


@pytest.fixture(scope="session")
def psl2_5_code():
    return build_psl2_5_code()
