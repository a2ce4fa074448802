"""Hamiltonian tau-flow of the apparent-singularity data and companions.

The pair (p, A) evolves in tau so that the monodromy of the torus equation
stays fixed.  This module integrates that flow along polyline paths in the
upper half plane, checks the scalar second-order form of the motion
(elliptic Painleve VI) by finite differences, and carries the side-by-side
Hamiltonian systems used for cross-validation: the second-order form
itself, the half-argument variant, and the projective-line system in the
cross-ratio coordinate.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from . import ode
from .elliptic import lattice_distance, lattice_invariants, weierstrass_suite
from .errors import BranchPointError, DomainError
from .lame import half_periods, _check_n

_I4PI = 1j / (4.0 * math.pi)
_I2PI = 1j / (2.0 * math.pi)
SAMPLES_PER_SEGMENT = 200
BRANCH_GUARD = 1e-4


@dataclass(frozen=True)
class FlowState:
    p: complex
    A: complex
    tau: complex


@dataclass(frozen=True)
class PainleveParams:
    """The four classical coefficients of the second-order rational form."""

    alpha: complex
    beta: complex
    gamma: complex
    delta: complex


@dataclass(frozen=True)
class Trajectory:
    """Dense samples of a two-component complex flow along a tau-polyline.

    states[:, 0] is the configuration coordinate (p, or b, or lambda
    depending on `kind`), states[:, 1] its conjugate partner.  Each path
    segment occupies a contiguous block of rows sampled uniformly in the
    arclength parameter; seg_bounds holds (start, stop, direction, h) per
    segment.
    """

    kind: str
    taus: np.ndarray
    states: np.ndarray
    s: np.ndarray
    path: tuple
    seg_bounds: tuple
    rel_tol: float
    abs_tol: float
    n: tuple | None = None

    @property
    def p(self) -> np.ndarray:
        return self.states[:, 0]

    @property
    def A(self) -> np.ndarray:
        return self.states[:, 1]

    def endpoint(self) -> FlowState:
        return FlowState(
            p=complex(self.states[-1, 0]),
            A=complex(self.states[-1, 1]),
            tau=complex(self.taus[-1]),
        )


def flow_rhs(p: complex, A: complex, n, tau: complex) -> tuple[complex, complex]:
    """Hamiltonian vector field for (p, A) at fixed n."""
    inv = lattice_invariants(tau)
    w2 = weierstrass_suite(2.0 * p, tau)
    p_dot = -_I4PI * (2.0 * A - w2.zeta + 2.0 * p * inv.eta1)
    acc = (2.0 * w2.wp + 2.0 * inv.eta1) * A - 1.5 * w2.wp_prime
    for nk, hk in zip(n, half_periods(tau)):
        wk = nk * (nk + 1.0)
        if wk != 0:
            acc -= wk * weierstrass_suite(p + hk, tau).wp_prime
    return p_dot, _I4PI * acc


def _validate_path(path) -> tuple[complex, ...]:
    path = tuple(complex(v) for v in path)
    if len(path) < 2:
        raise DomainError("path needs at least two vertices")
    for v in path:
        if v.imag < 0.05:
            raise DomainError(f"path vertex {v!r} below Im(tau) = 0.05")
    for a, b in zip(path, path[1:]):
        if abs(b - a) == 0:
            raise DomainError("zero-length path segment")
    return path


def _integrate_polyline(
    rhs_of_tau: Callable,
    y0: Sequence[complex],
    path,
    rel_tol: float,
    abs_tol: float,
    samples_per_segment: int,
    fixed_step: float | None,
    guard_of_tau=None,
) -> tuple[np.ndarray, np.ndarray, np.ndarray, tuple]:
    """Chain the adaptive integrator over a tau-polyline.

    Each segment is parametrized by real arclength; the complex direction
    enters the right side as the chain-rule factor.
    """
    path = _validate_path(path)
    taus_all = []
    ys_all = []
    s_all = []
    bounds = []
    y = np.asarray(y0, dtype=complex)
    s_off = 0.0
    row = 0
    for a, b in zip(path, path[1:]):
        seg = b - a
        length = abs(seg)
        u = seg / length

        def f(s, yv, a=a, u=u):
            return np.asarray(rhs_of_tau(a + s * u, yv), dtype=complex) * u

        guard = None
        if guard_of_tau is not None:

            def guard(s, yv, a=a, u=u):
                guard_of_tau(a + s * u, yv)

        grid = np.linspace(0.0, length, samples_per_segment + 1)
        res = ode.integrate(
            f, y, grid, rel_tol=rel_tol, abs_tol=abs_tol,
            fixed_step=fixed_step, guard=guard,
        )
        taus_all.append(a + grid * u)
        ys_all.append(res.y)
        s_all.append(s_off + grid)
        h = length / samples_per_segment
        bounds.append((row, row + len(grid), u, h))
        row += len(grid)
        s_off += length
        y = res.y[-1]
    return (
        np.concatenate(taus_all),
        np.vstack(ys_all),
        np.concatenate(s_all),
        tuple(bounds),
    )


def integrate_flow(
    p0: complex,
    A0: complex,
    n,
    path,
    rel_tol: float = 1e-10,
    abs_tol: float = 1e-12,
    samples_per_segment: int = SAMPLES_PER_SEGMENT,
    fixed_step: float | None = None,
) -> Trajectory:
    """Integrate the Hamiltonian flow from (p0, A0) along a tau-polyline.

    Aborts with BranchPointError if p gets within 1e-4 (reduced metric) of
    any half period along the way.
    """
    n = _check_n(n)

    def rhs(tau, y):
        return flow_rhs(y[0], y[1], n, tau)

    def guard(tau, y):
        for h in half_periods(tau):
            if lattice_distance(y[0] - h, tau) < BRANCH_GUARD:
                raise BranchPointError(
                    f"p = {y[0]!r} hit half period {h!r} near tau = {tau!r}"
                )

    taus, ys, s, bounds = _integrate_polyline(
        rhs, (p0, A0), path, rel_tol, abs_tol, samples_per_segment,
        fixed_step, guard_of_tau=guard,
    )
    return Trajectory(
        kind="flow", taus=taus, states=ys, s=s, path=tuple(path),
        seg_bounds=bounds, rel_tol=rel_tol, abs_tol=abs_tol, n=n,
    )


# ---------------------------------------------------------------------------
# finite-difference residual machinery

def _fd_block(vals: np.ndarray, h: float, order: int):
    """5-point central derivative of given order (1 or 2) with one
    Richardson pass; returns (interior_indices, derivative_values)."""
    m = len(vals)
    if m < 9:
        raise DomainError("need at least 9 uniform samples for the stencil")
    idx = np.arange(4, m - 4)

    def stencil(stride):
        hh = stride * h
        vm2 = vals[idx - 2 * stride]
        vm1 = vals[idx - stride]
        v0 = vals[idx]
        vp1 = vals[idx + stride]
        vp2 = vals[idx + 2 * stride]
        if order == 1:
            return (vm2 - 8.0 * vm1 + 8.0 * vp1 - vp2) / (12.0 * hh)
        return (-vm2 + 16.0 * vm1 - 30.0 * v0 + 16.0 * vp1 - vp2) / (
            12.0 * hh * hh
        )

    d_h = stencil(1)
    d_2h = stencil(2)
    return idx, (16.0 * d_h - d_2h) / 15.0


def elliptic_pvi_residual(traj: Trajectory, alphas, coord_scale: float = 1.0) -> float:
    """Sup-norm defect of the second-order form of the motion.

    Checks p'' = -(1/4pi^2) * sum_k alpha_k wp'(p + omega_k/2) on each
    uniformly sampled segment, with p'' from 5-point finite differences
    (one Richardson pass).  coord_scale rescales the configuration
    coordinate first (the half-argument companion uses 1/2).
    """
    alphas = tuple(complex(a) for a in alphas)
    worst = 0.0
    for (i0, i1, u, h) in traj.seg_bounds:
        ps = traj.states[i0:i1, 0] * coord_scale
        taus = traj.taus[i0:i1]
        idx, d2s = _fd_block(ps, h, order=2)
        for j, d2 in zip(idx, d2s):
            p = ps[j]
            tau = taus[j]
            rhs = 0j
            for ak, hk in zip(alphas, half_periods(tau)):
                if ak != 0:
                    rhs += ak * weierstrass_suite(p + hk, tau).wp_prime
            res = abs(d2 / (u * u) + rhs / (4.0 * math.pi**2))
            if res > worst:
                worst = res
    return worst


# ---------------------------------------------------------------------------
# derived quantities

def a_from_p_dot(p: complex, p_dot: complex, tau: complex) -> complex:
    """Momentum A recovered from the velocity of p."""
    inv = lattice_invariants(tau)
    w2 = weierstrass_suite(2.0 * p, tau)
    return 2j * math.pi * p_dot + 0.5 * (w2.zeta - 2.0 * p * inv.eta1)


def f_of_state(p: complex, A: complex, tau: complex) -> complex:
    """The shifted momentum whose log-derivative closes in (p, tau) alone."""
    w2 = weierstrass_suite(2.0 * p, tau)
    w1 = weierstrass_suite(p, tau)
    return A + 0.5 * (w2.zeta - 2.0 * w1.zeta)


def alphas_from_n(n) -> tuple[complex, complex, complex, complex]:
    return tuple(0.5 * (complex(nk) + 0.5) ** 2 for nk in n)


def n_from_alphas(alphas) -> tuple[complex, complex, complex, complex]:
    """Inverse of alphas_from_n on the branch Re(n_k) >= -1/2."""
    out = []
    for ak in alphas:
        root = (2.0 * complex(ak)) ** 0.5
        if root.real < 0:
            root = -root
        out.append(-0.5 + root)
    return tuple(out)


def pvi_from_alphas(alphas) -> PainleveParams:
    a0, a1, a2, a3 = (complex(a) for a in alphas)
    return PainleveParams(alpha=a0, beta=-a1, gamma=a2, delta=0.5 - a3)


def alphas_from_pvi(params: PainleveParams):
    return (
        params.alpha,
        -params.beta,
        params.gamma,
        0.5 - params.delta,
    )


def pvi_from_thetas(thetas) -> PainleveParams:
    """Angle parameters (theta_0, theta_1, theta_t, theta_inf) to the four
    classical coefficients."""
    t0, t1, tt, tinf = (complex(v) for v in thetas)
    return PainleveParams(
        alpha=0.5 * tinf**2,
        beta=-0.5 * t0**2,
        gamma=0.5 * t1**2,
        delta=0.5 * (1.0 - tt**2),
    )


def f_log_derivative_residual(traj: Trajectory) -> float:
    """Closure defect of d(log F)/dtau for weight-free n (all n_k in {0,-1}).

    F is evaluated on the trajectory samples; its log-derivative comes from
    5-point finite differences and is compared with the closed expression
    (i/2pi)(2 wp(2p) - wp(p) + eta1).
    """
    if traj.n is None or any(nk * (nk + 1.0) != 0 for nk in traj.n):
        raise DomainError("F closure requires n_k(n_k+1) = 0 for all k")
    worst = 0.0
    for (i0, i1, u, h) in traj.seg_bounds:
        ps = traj.states[i0:i1, 0]
        As = traj.states[i0:i1, 1]
        taus = traj.taus[i0:i1]
        fs = np.array(
            [f_of_state(p, a, t) for p, a, t in zip(ps, As, taus)],
            dtype=complex,
        )
        idx, dfs = _fd_block(fs, h, order=1)
        for j, df in zip(idx, dfs):
            p, tau = ps[j], taus[j]
            w2 = weierstrass_suite(2.0 * p, tau)
            w1 = weierstrass_suite(p, tau)
            inv = lattice_invariants(tau)
            target = _I2PI * (2.0 * w2.wp - w1.wp + inv.eta1)
            res = abs(df / (u * fs[j]) - target)
            if res > worst:
                worst = res
    return worst


# ---------------------------------------------------------------------------
# companion Hamiltonian systems

def manin_rhs(p: complex, q: complex, alphas, tau: complex) -> tuple[complex, complex]:
    """Second-order form as a first-order pair: p_dot = q, q_dot = -grad."""
    acc = 0j
    for ak, hk in zip(alphas, half_periods(tau)):
        if ak != 0:
            acc += ak * weierstrass_suite(p + hk, tau).wp_prime
    return q, -acc / (4.0 * math.pi**2)


def kawai_rhs(b: complex, mu: complex, theta: complex, tau: complex) -> tuple[complex, complex]:
    """Half-argument companion system with a single angle parameter."""
    inv = lattice_invariants(tau)
    w = weierstrass_suite(b, tau)
    b_dot = -_I2PI * (2.0 * mu - w.zeta + b * inv.eta1)
    mu_dot = _I2PI * (
        mu * w.wp + mu * inv.eta1 - 0.25 * (theta**2 - 1.0) * w.wp_prime
    )
    return b_dot, mu_dot


def integrate_manin(
    p0: complex, q0: complex, alphas, path,
    rel_tol: float = 1e-10, abs_tol: float = 1e-12,
    samples_per_segment: int = SAMPLES_PER_SEGMENT,
) -> Trajectory:
    alphas = tuple(complex(a) for a in alphas)

    def rhs(tau, y):
        return manin_rhs(y[0], y[1], alphas, tau)

    taus, ys, s, bounds = _integrate_polyline(
        rhs, (p0, q0), path, rel_tol, abs_tol, samples_per_segment, None,
    )
    return Trajectory(
        kind="manin", taus=taus, states=ys, s=s, path=tuple(path),
        seg_bounds=bounds, rel_tol=rel_tol, abs_tol=abs_tol,
    )


def integrate_kawai(
    b0: complex, mu0: complex, theta: complex, path,
    rel_tol: float = 1e-10, abs_tol: float = 1e-12,
    samples_per_segment: int = SAMPLES_PER_SEGMENT,
) -> Trajectory:
    def rhs(tau, y):
        return kawai_rhs(y[0], y[1], theta, tau)

    taus, ys, s, bounds = _integrate_polyline(
        rhs, (b0, mu0), path, rel_tol, abs_tol, samples_per_segment, None,
    )
    return Trajectory(
        kind="kawai", taus=taus, states=ys, s=s, path=tuple(path),
        seg_bounds=bounds, rel_tol=rel_tol, abs_tol=abs_tol,
    )


def integrate_cp1(
    lam0: complex, mu0: complex, thetas, path,
    rel_tol: float = 1e-10, abs_tol: float = 1e-12,
    samples_per_segment: int = SAMPLES_PER_SEGMENT,
) -> Trajectory:
    """Integrate the projective-line Hamiltonian system along a tau-path.

    The system lives on the t-line; the tau parametrization enters through
    the chain rule with dt/dtau, so the samples line up with a torus flow
    over the same path.
    """
    from .correspondence import fuchsian_K_partials
    from .elliptic import curve_map

    thetas = tuple(complex(v) for v in thetas)

    def rhs(tau, y):
        cm = curve_map(tau)
        dK_dlam, dK_dmu = fuchsian_K_partials(y[0], y[1], cm.t, thetas)
        return dK_dmu * cm.dt_dtau, -dK_dlam * cm.dt_dtau

    taus, ys, s, bounds = _integrate_polyline(
        rhs, (lam0, mu0), path, rel_tol, abs_tol, samples_per_segment, None,
    )
    return Trajectory(
        kind="cp1", taus=taus, states=ys, s=s, path=tuple(path),
        seg_bounds=bounds, rel_tol=rel_tol, abs_tol=abs_tol,
    )


def pvi_residual(ts: np.ndarray, lams: np.ndarray, params: PainleveParams) -> float:
    """Sup-norm defect of the classical rational second-order equation.

    ts and lams must be sampled on a uniform grid of some smooth curve
    parameter; derivatives in t are formed by the chain rule through that
    parameter.
    """
    ts = np.asarray(ts, dtype=complex)
    lams = np.asarray(lams, dtype=complex)
    m = len(ts)
    idx, dlam = _fd_block(lams, 1.0, order=1)
    _, dt = _fd_block(ts, 1.0, order=1)
    lam_t = np.full(m, np.nan, dtype=complex)
    lam_t[idx] = dlam / dt
    inner = idx[(idx >= 8) & (idx < m - 8)]
    idx2, dlam_t = _fd_block(lam_t[4 : m - 4], 1.0, order=1)
    # indices of dlam_t refer to the sliced array; shift back
    lam_tt = {int(j) + 4: v for j, v in zip(idx2, dlam_t)}
    worst = 0.0
    a, b, g, d = params.alpha, params.beta, params.gamma, params.delta
    for j in inner:
        t = ts[j]
        lam = lams[j]
        lp = lam_t[j]
        lpp = lam_tt[j] / dt[j - 4]
        rhs = (
            0.5 * (1.0 / lam + 1.0 / (lam - 1.0) + 1.0 / (lam - t)) * lp**2
            - (1.0 / t + 1.0 / (t - 1.0) + 1.0 / (lam - t)) * lp
            + lam * (lam - 1.0) * (lam - t) / (t**2 * (t - 1.0) ** 2)
            * (
                a
                + b * t / lam**2
                + g * (t - 1.0) / (lam - 1.0) ** 2
                + d * t * (t - 1.0) / (lam - t) ** 2
            )
        )
        res = abs(lpp - rhs)
        if res > worst:
            worst = res
    return worst
