"""Linear hash family: linearity, two-universality, serialization."""

from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st

from otbec.hashing import (
    LinearHash,
    apply,
    collision_probability,
    deserialize_hash,
    joint_collision_probability,
    pack_bits,
    sample_linear_hash,
    serialize_hash,
    unpack_bits,
)


@given(st.integers(1, 6), st.integers(1, 6), st.data())
def test_apply_is_linear(m, k, data):
    rng = np.random.default_rng(data.draw(st.integers(0, 2**32 - 1)))
    h = sample_linear_hash(m, k, rng)
    x = np.array(data.draw(st.lists(st.integers(0, 1), min_size=m, max_size=m)), dtype=np.uint8)
    y = np.array(data.draw(st.lists(st.integers(0, 1), min_size=m, max_size=m)), dtype=np.uint8)
    assert np.array_equal(apply(h, x ^ y), apply(h, x) ^ apply(h, y))


def test_apply_rejects_length_mismatch(rng):
    h = sample_linear_hash(3, 2, rng)
    with pytest.raises(ValueError):
        apply(h, [0, 1])


def test_linear_hash_validates_matrix():
    with pytest.raises(ValueError):
        LinearHash(np.array([0, 1]))
    with pytest.raises(ValueError):
        LinearHash(np.array([[0, 2]]))


def test_sample_is_seed_deterministic():
    a = sample_linear_hash(4, 3, np.random.default_rng(5))
    b = sample_linear_hash(4, 3, np.random.default_rng(5))
    assert a == b
    assert a.matrix.shape == (3, 4)


def test_exact_collision_probability_is_two_universal():
    # uniform linear families collide at exactly 2^-k for every nonzero difference
    for m, k in ((1, 1), (2, 1), (2, 2), (3, 2), (4, 3)):
        est = collision_probability(m, k, mode="exact")
        assert est.exact == Fraction(1, 2**k)
        assert est.mode == "exact"


def test_exact_mode_guard():
    with pytest.raises(ValueError):
        collision_probability(7, 3, mode="exact")
    with pytest.raises(ValueError):
        collision_probability(2, 2, mode="nope")


def test_monte_carlo_mode_brackets_exact(rng):
    est = collision_probability(3, 2, mode="monte-carlo", rng=rng, trials=20000)
    lo, hi = est.ci
    assert lo <= 0.25 <= hi
    assert est.exact is None
    with pytest.raises(ValueError):
        collision_probability(3, 2, mode="monte-carlo")


def test_joint_collision_of_two_single_bit_hashes():
    assert joint_collision_probability(1, 1, 1, 1) == Fraction(1, 4)
    assert joint_collision_probability(3, 1, 2, 1) == Fraction(1, 4)


def test_joint_collision_identical_component_collides_surely():
    assert joint_collision_probability(2, 1, 2, 1, identical1=True) == Fraction(1, 2)
    assert joint_collision_probability(2, 1, 2, 2, identical1=True, identical2=True) == 1


@given(st.integers(1, 5), st.integers(1, 5), st.integers(0, 2**32 - 1))
def test_serialize_roundtrip(m, k, seed):
    h = sample_linear_hash(m, k, np.random.default_rng(seed))
    assert deserialize_hash(serialize_hash(h)) == h


@given(st.lists(st.integers(0, 1), min_size=0, max_size=40))
def test_pack_bits_roundtrip(bits):
    assert list(unpack_bits(pack_bits(bits))) == bits
