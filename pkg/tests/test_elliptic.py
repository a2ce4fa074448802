"""Elliptic kernel: function identities, anchors with closed-form values,
and agreement with the brute-force lattice-sum oracle.

Expected numbers here come from classical closed forms reachable through
the stdlib (gamma at quarter-integers, pi), never from the implementation
under test.
"""
from __future__ import annotations

import cmath
import math

import numpy as np
import pytest

from isl.elliptic import (
    canonical_representative,
    curve_map,
    dedekind_eta,
    invert_wp,
    lattice_distance,
    lattice_invariants,
    oracle_lattice_sums_extrapolated,
    reduce_to_cell,
    tau_derivative_suite,
    theta1,
    weierstrass_suite,
    wp,
    wp_prime,
    wsigma,
    wzeta,
)
from isl.errors import DomainError, PoleError

TAUS = [1j, 1.5j, 0.2 + 1.3j, -0.35 + 0.9j]


def test_square_lattice_anchor_values():
    # lemniscatic case: e1 = Gamma(1/4)^4 / (8 pi), e3 = 0, eta1 = pi
    inv = lattice_invariants(1j)
    e1_exact = math.gamma(0.25) ** 4 / (8.0 * math.pi)
    assert abs(inv.e1 - e1_exact) < 1e-12 * e1_exact
    assert abs(inv.e2 + e1_exact) < 1e-12 * e1_exact
    assert abs(inv.e3) < 1e-12
    assert abs(inv.eta1 - math.pi) < 1e-12
    assert abs(inv.g3) < 1e-10
    assert abs(inv.g2 - 4.0 * e1_exact * e1_exact) < 1e-10 * e1_exact**2


def test_dedekind_eta_at_i():
    # eta(i) = Gamma(1/4) / (2 pi^{3/4})
    want = math.gamma(0.25) / (2.0 * math.pi ** 0.75)
    assert abs(dedekind_eta(1j) - want) < 1e-13


def test_curve_map_anchor_and_derivative():
    cm = curve_map(1j)
    assert abs(cm.t - 0.5) < 1e-12
    # dt/dtau against a central difference of t itself
    h = 1e-5
    for tau in TAUS:
        c0 = curve_map(tau)
        fd = (curve_map(tau + h).t - curve_map(tau - h).t) / (2.0 * h)
        assert abs(c0.dt_dtau - fd) < 1e-7 * max(1.0, abs(fd))


@pytest.mark.parametrize("tau", TAUS)
def test_parity_and_quasi_periodicity(tau):
    rng = np.random.default_rng(11)
    for _ in range(4):
        z = complex(rng.uniform(0.08, 0.42), rng.uniform(0.08, 0.42) * tau.imag)
        w = weierstrass_suite(z, tau)
        wn = weierstrass_suite(-z, tau)
        scale = max(1.0, abs(w.wp))
        assert abs(w.wp - wn.wp) < 1e-12 * scale
        assert abs(w.wp_prime + wn.wp_prime) < 1e-12 * max(1.0, abs(w.wp_prime))
        assert abs(w.zeta + wn.zeta) < 1e-12 * max(1.0, abs(w.zeta))
        assert abs(w.sigma + wn.sigma) < 1e-12 * max(1.0, abs(w.sigma))

        inv = lattice_invariants(tau)
        # zeta gains eta1 per unit step, sigma its exponential factor
        z1 = weierstrass_suite(z + 1.0, tau)
        assert abs(z1.zeta - w.zeta - inv.eta1) < 1e-11
        sig_ratio = z1.sigma / w.sigma
        want = -cmath.exp(inv.eta1 * (z + 0.5))
        assert abs(sig_ratio - want) < 1e-11 * abs(want)
        # wp and wp' are plainly periodic in both directions
        zt = weierstrass_suite(z + tau, tau)
        assert abs(zt.wp - w.wp) < 1e-11 * scale
        assert abs(zt.wp_prime - w.wp_prime) < 1e-11 * max(1.0, abs(w.wp_prime))


@pytest.mark.parametrize("tau", TAUS)
def test_cubic_and_duplication(tau):
    inv = lattice_invariants(tau)
    rng = np.random.default_rng(5)
    for _ in range(4):
        z = complex(rng.uniform(0.1, 0.4), rng.uniform(0.1, 0.4) * tau.imag)
        w = weierstrass_suite(z, tau)
        cubic = 4.0 * w.wp**3 - inv.g2 * w.wp - inv.g3
        assert abs(w.wp_prime**2 - cubic) < 1e-11 * max(1.0, abs(cubic))
        # duplication: wp(2z) + 2 wp(z) = (wp''/ (2 wp'))^2
        lhs = wp(2.0 * z, tau) + 2.0 * w.wp
        rhs = (w.wp_prime2 / (2.0 * w.wp_prime)) ** 2
        assert abs(lhs - rhs) < 1e-9 * max(1.0, abs(rhs))


def test_wp_prime2_matches_difference_quotient():
    tau = 0.1 + 1.1j
    z = 0.27 + 0.33j
    h = 1e-5
    fd = (wp_prime(z + h, tau) - wp_prime(z - h, tau)) / (2.0 * h)
    assert abs(weierstrass_suite(z, tau).wp_prime2 - fd) < 1e-6 * abs(fd)


def test_oracle_lattice_sums_spot():
    for tau, z in [(1j, 0.31 + 0.22j), (0.2 + 1.3j, 0.18 + 0.4j)]:
        w = weierstrass_suite(z, tau)
        ora = oracle_lattice_sums_extrapolated(z, tau)
        assert abs(w.wp - ora.wp) < 1e-8 * max(1.0, abs(ora.wp))
        assert abs(w.zeta - ora.zeta) < 1e-8 * max(1.0, abs(ora.zeta))
        inv = lattice_invariants(tau)
        assert abs(inv.eta1 - ora.eta1) < 1e-8 * max(1.0, abs(ora.eta1))


def test_theta1_oddness_and_zero():
    tau = 0.3 + 1.2j
    z = 0.21 + 0.17j
    assert abs(theta1(z, tau) + theta1(-z, tau)) < 1e-13
    assert abs(theta1(0.0, tau)) < 1e-13
    # theta1'(0) enters sigma normalization; cross-check against eta^3
    d1 = theta1(0.0, tau, deriv=1)
    assert abs(d1 - 2.0 * math.pi * dedekind_eta(tau) ** 3) < 1e-12 * abs(d1)


def test_reduce_to_cell_round_trip():
    tau = 0.25 + 1.4j
    z = 3.7 - 2.2j
    red = reduce_to_cell(z, tau)
    assert abs(red.cell + red.m + red.n * tau - z) < 1e-12
    assert 0.0 <= (red.cell.imag / tau.imag) < 1.0 + 1e-12


def test_canonical_representative_pair_invariance():
    rng = np.random.default_rng(3)
    for tau in TAUS:
        for _ in range(5):
            p = complex(rng.uniform(-1.2, 1.2), rng.uniform(-1.2, 1.2))
            c_plus = canonical_representative(p, tau)
            c_minus = canonical_representative(-p, tau)
            assert abs(c_plus - c_minus) < 1e-12
            # idempotent, and congruent to +-p mod the lattice
            assert abs(canonical_representative(c_plus, tau) - c_plus) < 1e-12
            d1 = lattice_distance(c_plus - p, tau)
            d2 = lattice_distance(c_plus + p, tau)
            assert min(d1, d2) < 1e-10


def test_invert_wp_round_trip():
    tau = 0.15 + 1.25j
    rng = np.random.default_rng(8)
    for _ in range(5):
        z = complex(rng.uniform(0.1, 0.4), rng.uniform(0.1, 0.4) * tau.imag)
        target = wp(z, tau)
        back = invert_wp(target, tau)
        assert abs(wp(back, tau) - target) < 1e-10 * max(1.0, abs(target))


def test_tau_derivative_spot_checks():
    tau = 0.1 + 1.2j
    z = 0.23 + 0.31j
    h = 2e-6
    d = tau_derivative_suite(z, tau)
    fd_wp = (wp(z, tau + h) - wp(z, tau - h)) / (2.0 * h)
    fd_zeta = (wzeta(z, tau + h) - wzeta(z, tau - h)) / (2.0 * h)
    # ratio form avoids the log branch for the sigma check
    fd_lsig = (wsigma(z, tau + h) - wsigma(z, tau - h)) / (
        2.0 * h * wsigma(z, tau))
    assert abs(d.dwp - fd_wp) < 1e-6 * max(1.0, abs(fd_wp))
    assert abs(d.dzeta - fd_zeta) < 1e-6 * max(1.0, abs(fd_zeta))
    assert abs(d.dlog_sigma - fd_lsig) < 1e-6 * max(1.0, abs(fd_lsig))


def test_rejects_pole_and_flat_tau():
    with pytest.raises(PoleError):
        weierstrass_suite(0.0, 1j)
    with pytest.raises(PoleError):
        weierstrass_suite(1.0 + 1j, 1j)  # lattice point
    with pytest.raises(DomainError):
        lattice_invariants(0.5 + 0.01j)
    with pytest.raises(DomainError):
        lattice_invariants(0.5)
