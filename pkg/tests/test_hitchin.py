"""Closed-form weight-free family: the algebraic constraint, explicit
solutions, degenerate seed, and agreement with the integrated flow."""
from __future__ import annotations

import cmath
import math

import numpy as np
import pytest

from isl.errors import DomainError
from isl.flow import integrate_flow
from isl.hitchin import (
    HitchinSeed,
    constraint_residual,
    expected_traces,
    hitchin_lame_data,
    hitchin_p,
    hitchin_trajectory,
    hitchin_y,
    ratio_f,
    schwarzian_residual,
    solution_residual,
)

SEED = HitchinSeed(0.3, 0.2)
TAUS = [1.05j, 1.4j, 0.2 + 1.3j]


def test_degenerate_seed_is_exact():
    # r = s = 1/4 pins p on the quarter point: p(tau) = (tau - 1)/4, A = 0
    seed = HitchinSeed(0.25, 0.25)
    for tau in TAUS:
        data = hitchin_lame_data(seed, tau, near=(tau - 1.0) / 4.0)
        assert abs(data.p - (tau - 1.0) / 4.0) < 1e-10
        assert abs(data.A) < 1e-10


@pytest.mark.parametrize("tau", TAUS)
def test_constraint_holds_on_family(tau):
    assert constraint_residual(SEED, tau) < 1e-10


def test_half_lattice_seed_rejected():
    # degenerate only when a1 = r + s*tau sits on the half lattice, i.e.
    # both coordinates are half integers; mixed seeds are fine
    for r, s in [(0.5, 0.0), (0.0, 0.5), (0.5, 0.5), (1.0, 0.0)]:
        with pytest.raises(DomainError):
            HitchinSeed(r, s)
    HitchinSeed(0.5, 0.2)
    HitchinSeed(0.3, 1.0)


@pytest.mark.parametrize("tau", TAUS)
def test_solution_solves_equation(tau):
    rng = np.random.default_rng(21)
    for _ in range(3):
        z = complex(rng.uniform(0.05, 0.45), rng.uniform(0.05, 0.45) * tau.imag)
        assert solution_residual(SEED, tau, z, sign=+1) < 1e-8
        assert solution_residual(SEED, tau, z, sign=-1) < 1e-8


def test_apparent_and_schwarzian():
    tau = 1.2j
    data = hitchin_lame_data(SEED, tau)
    assert data.apparent
    assert schwarzian_residual(SEED, tau, 0.17 + 0.29j) < 1e-7


def test_ratio_multipliers_are_pure_phases():
    # f = y_+/y_- is single valued; its two period multipliers are the
    # squares of the diagonal monodromy entries
    tau = 1.15j
    f = ratio_f(SEED, tau)
    z = 0.11 + 0.21j
    m1 = f(z + 1.0) / f(z)
    m2 = f(z + tau) / f(z)
    assert abs(m1 - cmath.exp(-4j * math.pi * SEED.s)) < 1e-10
    assert abs(m2 - cmath.exp(4j * math.pi * SEED.r)) < 1e-10


def test_trajectory_matches_integrated_flow():
    path = (1.0j, 1.35j)
    exact = hitchin_trajectory(SEED, path, samples_per_segment=64)
    data0 = hitchin_lame_data(SEED, path[0])
    num = integrate_flow(data0.p, data0.A, (0, 0, 0, 0), path,
                         rel_tol=1e-12, abs_tol=1e-14,
                         samples_per_segment=64)
    sup = np.max(np.abs(exact.states - num.states))
    assert sup < 1e-9
    assert exact.kind == "hitchin-exact"
    assert exact.rel_tol == 0.0  # closed form carries no integration error


def test_expected_traces_table():
    t = expected_traces(SEED)
    assert t["omega0"] == t["omega3"] == 2.0
    assert t["p_plus"] == t["p_minus"] == -2.0
    assert abs(t["ell1"] - 2.0 * math.cos(2 * math.pi * 0.2)) < 1e-15
    assert abs(t["ell2"] - 2.0 * math.cos(2 * math.pi * 0.3)) < 1e-15


def test_hitchin_p_branch_tracking():
    # near-continuation picks the branch connected to the previous sample
    tau0, tau1 = 1.1j, 1.1j + 0.02j
    p0 = hitchin_p(SEED, tau0)
    p1 = hitchin_p(SEED, tau1, near=p0)
    assert abs(p1 - p0) < 0.05
    y = hitchin_y(SEED, tau0, +1)
    assert abs(y(0.13 + 0.27j)) > 0  # callable form evaluates
