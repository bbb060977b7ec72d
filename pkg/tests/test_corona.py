"""Certified corona bounds: soundness, failure witnesses, monotonicity."""

import numpy as np
import pytest

from diskmod import (
    CoronaFailure,
    MultiplierPair,
    QuotientSpec,
    certify,
    certify_spec,
    check_corona,
    common_zeros_in_disk,
    lipschitz_bound,
    poly,
)
from diskmod.holofun import poly_mul

PAIR_1Z = MultiplierPair(poly([1]), poly([0, 1]))
PAIR_Z_1MZ = MultiplierPair(poly([0, 1]), poly([1, -1]))
PAIR_Z_Z2 = MultiplierPair(poly([0, 1]), poly([0, 0, 1]))


def dense_disk_min(theta, n=2000):
    """Brute-force minimum of |t1|^2 + |t2|^2 over an n x n cover of the disk."""
    xs = np.linspace(-1.0, 1.0, n)
    grid = xs[None, :] + 1j * xs[:, None]
    pts = grid[np.abs(grid) <= 1.0]
    t1, t2 = theta
    u = np.abs(t1(pts)) ** 2 + np.abs(t2(pts)) ** 2
    return float(u.min())


def test_certify_1z():
    cert = certify(PAIR_1Z, target_gap=0.5)
    assert 0.5 <= cert.epsilon <= 1.0  # true infimum is 1
    assert cert.boxes_checked > 0


def test_certify_z_1mz_derived_bracket():
    # u = 2y^2 + x^2 + (1-x)^2 has its minimum 1/2 at z = 1/2
    cert = certify(PAIR_Z_1MZ, target_gap=0.25)
    assert 0.25 <= cert.epsilon <= 0.5
    dense = dense_disk_min(PAIR_Z_1MZ)
    assert abs(dense - 0.5) < 1e-3
    assert cert.epsilon <= dense


def test_certify_failure_witness_near_origin():
    with pytest.raises(CoronaFailure) as info:
        certify(PAIR_Z_Z2, target_gap=1e-6)
    assert abs(info.value.witness) < 1e-3
    assert info.value.value < 1e-5


def test_certificate_never_exceeds_sampled_values():
    for pair, target in ((PAIR_1Z, 0.5), (PAIR_Z_1MZ, 0.25), (PAIR_1Z, 1e-6)):
        cert = certify(pair, target_gap=target)
        assert cert.epsilon <= dense_disk_min(pair) + 1e-12


def test_soundness_on_corpus(corpus):
    for spec in corpus:
        assert spec.certificate.epsilon <= dense_disk_min(spec.theta) + 1e-12


def test_monotone_under_scaling():
    for pair in (PAIR_1Z, PAIR_Z_1MZ):
        for c in (2.0, 2j):
            scaled = pair.scale(poly([c]))
            eps = certify(pair, target_gap=1e-6).epsilon
            eps_scaled = certify(scaled, target_gap=1e-6).epsilon
            assert eps_scaled >= eps


def test_check_corona_examples():
    assert check_corona(PAIR_1Z) is True
    assert check_corona(PAIR_Z_Z2) is False
    # distinct zeros at +-1/2: no common zero, u bounded below
    pair = MultiplierPair(poly([-0.5, 1]), poly([0.5, 1]))
    assert check_corona(pair) is True
    cert = certify(pair, target_gap=1e-6)
    assert cert.epsilon > 0
    assert cert.epsilon <= dense_disk_min(pair) + 1e-12


def test_check_corona_false_with_planted_common_zero():
    rng = np.random.default_rng(53)
    for _ in range(25):
        root = 0.9 * np.sqrt(rng.uniform()) * np.exp(2j * np.pi * rng.uniform())
        factor = [-root, 1.0]
        p1 = poly(poly_mul(factor, rng.standard_normal(2) + 0.5))
        p2 = poly(poly_mul(factor, rng.standard_normal(3) + 0.5))
        pair = MultiplierPair(p1, p2)
        assert common_zeros_in_disk(pair)
        assert check_corona(pair) is False


def test_common_zeros_empty_whenever_certified(corpus):
    for spec in corpus:
        assert common_zeros_in_disk(spec.theta) == []


def test_lipschitz_bound_dominates_gradient_samples():
    rng = np.random.default_rng(59)
    for pair in (PAIR_1Z, PAIR_Z_1MZ, MultiplierPair(poly([2, 1]), poly([0, 2, 1]))):
        L = lipschitz_bound(pair)
        t1, t2 = pair
        h = 1e-6
        for _ in range(50):
            z = np.sqrt(rng.uniform()) * np.exp(2j * np.pi * rng.uniform()) * 0.999

            def u(w):
                return abs(t1(w)) ** 2 + abs(t2(w)) ** 2

            gx = (u(z + h) - u(z - h)) / (2 * h)
            gy = (u(z + 1j * h) - u(z - 1j * h)) / (2 * h)
            assert np.hypot(gx, gy) <= L + 1e-6


def test_certify_spec_attaches_certificate():
    from diskmod import HARDY

    bare = QuotientSpec(base=HARDY, theta=PAIR_1Z)
    assert not bare.certified
    done = certify_spec(bare)
    assert done.certified
    assert done.certificate.epsilon > 0
    assert not bare.certified  # original untouched


def test_certify_rejects_bad_target():
    with pytest.raises(ValueError):
        certify(PAIR_1Z, target_gap=0.0)


def test_depth_exceeded_on_sharp_dip():
    # u dips to 5e-7 at z = 1/2, below what the Lipschitz allowance can clear
    # at maximal depth, but stays above ten times the target there
    from diskmod import DepthExceeded

    pair = MultiplierPair(poly([-0.5, 1]), poly([np.sqrt(5e-7)]))
    with pytest.raises(DepthExceeded) as info:
        certify(pair, target_gap=4e-8)
    assert abs(info.value.witness - 0.5) < 1e-3
    assert info.value.value == pytest.approx(5e-7, rel=1e-2)
    assert info.value.best_bound <= 5e-7


def test_depth_exceeded_fast_on_flat_tied_region():
    # a huge high-degree coefficient inflates the Lipschitz bound so no box
    # can ever clear while u is exactly 1.0 over the whole center; the
    # deepest-first tie-break must drill to the cap instead of flooding
    from diskmod import DepthExceeded

    pair = MultiplierPair(poly([1]), poly([0] * 30 + [1e4]))
    with pytest.raises(DepthExceeded) as info:
        certify(pair, target_gap=1e-6)
    assert info.value.value >= 10 * 1e-6
