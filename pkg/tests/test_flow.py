"""Tau-flow of (p, A): integrator behavior, the scalar second-order form,
parameter dictionaries, and the companion Hamiltonian systems."""
from __future__ import annotations

import numpy as np
import pytest

from isl.errors import DomainError
from isl.flow import (
    FlowState,
    PainleveParams,
    a_from_p_dot,
    alphas_from_n,
    alphas_from_pvi,
    elliptic_pvi_residual,
    f_log_derivative_residual,
    flow_rhs,
    integrate_flow,
    integrate_manin,
    n_from_alphas,
    pvi_from_alphas,
    pvi_from_thetas,
)
from isl.hitchin import HitchinSeed, hitchin_lame_data

N = (1.0, 0.0, 2.0, 1.0)
P0 = 0.23 + 0.31j
A0 = 0.4 - 0.27j
PATH = (1.0j, 1.25j)


@pytest.fixture(scope="module")
def traj():
    return integrate_flow(P0, A0, N, PATH, rel_tol=1e-11, abs_tol=1e-13)


def test_trajectory_layout(traj):
    assert traj.taus[0] == PATH[0] and traj.taus[-1] == PATH[1]
    assert np.all(np.diff(traj.s) > 0)
    assert traj.states.shape == (len(traj.taus), 2)
    end = traj.endpoint()
    assert isinstance(end, FlowState)
    assert end.p == traj.states[-1, 0] and end.tau == traj.taus[-1]


def test_scalar_form_residual_small(traj):
    assert elliptic_pvi_residual(traj, alphas_from_n(N)) < 1e-8


def test_fixed_step_agrees_with_adaptive(traj):
    fixed = integrate_flow(P0, A0, N, PATH, fixed_step=1.0 / 512.0)
    d = abs(fixed.states[-1, 0] - traj.states[-1, 0])
    assert d < 1e-8


def test_a_from_p_dot_inverts_rhs():
    for p, A in [(P0, A0), (0.31 + 0.17j, -0.6 + 0.2j)]:
        p_dot, _ = flow_rhs(p, A, N, 1.1j)
        assert abs(a_from_p_dot(p, p_dot, 1.1j) - A) < 1e-12 * max(1.0, abs(A))


def test_parameter_dictionaries_round_trip():
    al = alphas_from_n(N)
    n_back = n_from_alphas(al)
    # alphas are even in (n_k + 1/2); the representative with
    # Re(n_k + 1/2) >= 0 comes back
    assert all(abs(a - b) < 1e-12 for a, b in zip(n_back, N))
    pv = pvi_from_alphas(al)
    al_back = alphas_from_pvi(pv)
    assert all(abs(a - b) < 1e-12 for a, b in zip(al, al_back))


def test_pvi_from_thetas_anchor():
    got = pvi_from_thetas((0.5, 0.5, 0.5, 0.5))
    want = PainleveParams(alpha=0.125, beta=-0.125, gamma=0.125, delta=0.375)
    for a, b in zip(
        (got.alpha, got.beta, got.gamma, got.delta),
        (want.alpha, want.beta, want.gamma, want.delta),
    ):
        assert abs(a - b) < 1e-14


def test_weight_free_log_derivative_identity():
    pr = hitchin_lame_data(HitchinSeed(0.3, 0.2), 1.1j)
    traj0 = integrate_flow(pr.p, pr.A, (0, 0, 0, 0), (1.1j, 1.3j),
                           rel_tol=1e-11, abs_tol=1e-13)
    assert f_log_derivative_residual(traj0) < 1e-7


def test_log_derivative_identity_needs_weight_free(traj):
    with pytest.raises(DomainError):
        f_log_derivative_residual(traj)


def test_manin_companion_shares_p():
    pr = hitchin_lame_data(HitchinSeed(0.3, 0.2), 1.1j)
    path = (1.1j, 1.22j)
    ftraj = integrate_flow(pr.p, pr.A, (0, 0, 0, 0), path,
                           rel_tol=1e-12, abs_tol=1e-13)
    q0, _ = flow_rhs(pr.p, pr.A, (0, 0, 0, 0), 1.1j)
    mtraj = integrate_manin(pr.p, q0, alphas_from_n((0, 0, 0, 0)), path,
                            rel_tol=1e-12, abs_tol=1e-13)
    sup = np.max(np.abs(mtraj.states[:, 0] - ftraj.states[:, 0]))
    assert sup < 1e-9
    # the second components live in different charts; if they coincided the
    # two systems would secretly be the same integration
    assert np.max(np.abs(mtraj.states[:, 1] - ftraj.states[:, 1])) > 1e-2


def test_path_validation():
    with pytest.raises(DomainError):
        integrate_flow(P0, A0, N, (1.0j,))
    with pytest.raises(DomainError):
        integrate_flow(P0, A0, N, (1.0j, 0.01j))
