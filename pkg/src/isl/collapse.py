"""Local model of the p -> 0 collapse and fits against flow trajectories.

When p vanishes at some tau0 the deformation develops a square-root branch
point: p = c0 (tau-tau0)^{1/2} (1 + h_tilde (tau-tau0) + ...), with c0^2
quantized to +-i(n0+1/2)/pi, and the equation's potential converges to a
classical one with the weight at the origin shifted to m(m+1),
m = n0 +- 1.  Everything here works on p^2 and A*p, which stay
single-valued across the branch point.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .elliptic import curve_map, lattice_distance, lattice_invariants, wp
from .errors import DomainError, FitError
from .lame import LameParams, half_periods, potential_I

THETA4_TOL = 1e-10
P_WINDOW = 0.02
TAU_WINDOW = 0.05
MIN_FIT_SAMPLES = 8
Z_LATTICE_MIN = 0.05


@dataclass(frozen=True)
class CollapseData:
    """Branch-point constants at tau0 for weights n."""

    tau0: complex
    c0_squared: complex
    h_tilde: complex
    branch: str  # "plus": m = n0+1; "minus": m = n0-1
    m: complex
    B0: complex
    theta4: complex
    t0: complex
    beta: complex

    @property
    def c(self) -> complex:
        """Leading coefficient of A ~ c/p; satisfies
        c^2 - c/2 - 3/16 - n0(n0+1) = 0 on both branches."""
        return 1j * math.pi * self.c0_squared + 0.25

    @property
    def e(self) -> complex:
        """Subleading coefficient of A ~ c/p + e p."""
        return 4j * math.pi * self.h_tilde - self._eta1_tau0

    @property
    def _eta1_tau0(self) -> complex:
        return lattice_invariants(self.tau0).eta1


def collapse_constants(n, branch: str, h_tilde: complex,
                       tau0: complex) -> CollapseData:
    """Closed-form branch constants; branch 'plus' selects
    c0^2 = +i(n0+1/2)/pi, m = n0+1 (and 'minus' the mirrored pair)."""
    n = tuple(complex(v) for v in n)
    if len(n) != 4:
        raise DomainError("n must have exactly four entries")
    theta4 = n[0] + 0.5
    if abs(theta4) <= THETA4_TOL:
        raise DomainError("collapse model needs n0 + 1/2 != 0")
    if branch not in ("plus", "minus"):
        raise DomainError(f"branch must be 'plus' or 'minus', got {branch!r}")
    tau0 = complex(tau0)
    h_tilde = complex(h_tilde)
    sign = 1.0 if branch == "plus" else -1.0
    c0sq = sign * 1j * theta4 / math.pi
    m = n[0] + sign
    inv = lattice_invariants(tau0)
    weights_sum = sum(
        nk * (nk + 1.0) * ek
        for nk, ek in zip(n[1:], (inv.e1, inv.e2, inv.e3))
    )
    B0 = 2j * math.pi * c0sq * (4j * math.pi * h_tilde - inv.eta1) - weights_sum
    t0 = curve_map(tau0).t
    beta = -sign * t0 * (t0 - 1.0) / theta4
    return CollapseData(tau0=tau0, c0_squared=c0sq, h_tilde=h_tilde,
                        branch=branch, m=m, B0=B0, theta4=theta4,
                        t0=t0, beta=beta)


def branch_from_c0sq(n0: complex, c0_squared: complex) -> str:
    """Classify a fitted c0^2 against the two quantized values."""
    theta4 = complex(n0) + 0.5
    if abs(theta4) <= THETA4_TOL:
        raise DomainError("collapse model needs n0 + 1/2 != 0")
    ref = 1j * theta4 / math.pi
    d_plus = abs(c0_squared - ref)
    d_minus = abs(c0_squared + ref)
    if min(d_plus, d_minus) > 0.5 * abs(ref):
        raise FitError(
            f"c0^2 = {c0_squared!r} is not near either quantized value "
            f"+-{ref!r}"
        )
    return "plus" if d_plus <= d_minus else "minus"


def collapse_seed_state(cd: CollapseData, d: complex):
    """(p, A, tau) from the truncated local model at tau = tau0 + d.

    Used to steer a flow into (or out of) the branch point; the truncation
    error is O(d^2) in p, so keep |d| small but outside the integrator's
    branch guard.
    """
    d = complex(d)
    if d == 0:
        raise DomainError("seed distance must be nonzero")
    tau = cd.tau0 + d
    p = cmath.sqrt(cd.c0_squared * d) * (1.0 + cd.h_tilde * d)
    A = cd.c / p + cd.e * p
    return p, A, tau


@dataclass(frozen=True)
class CollapseFit:
    tau0: complex
    c0_squared: complex
    h_tilde: complex
    residual: float
    n_samples: int


def _window_mask(traj):
    taus = np.asarray(traj.taus)
    ps = np.asarray(traj.states[:, 0])
    dist = np.array([lattice_distance(p, tau) for p, tau in zip(ps, taus)])
    mask = dist < P_WINDOW
    if not mask.any():
        raise FitError(
            f"p stays outside |p| < {P_WINDOW} along the whole trajectory; "
            "nothing to fit"
        )
    if mask.sum() < MIN_FIT_SAMPLES:
        raise FitError(
            f"only {int(mask.sum())} samples inside |p| < {P_WINDOW}; "
            f"need at least {MIN_FIT_SAMPLES}"
        )
    return taus, ps, mask


def fit_collapse(traj, degree: int = 3) -> CollapseFit:
    """Recover (tau0, c0^2, h_tilde) from a trajectory approaching p = 0.

    Fits p^2 by a polynomial in tau on the samples with |p| < 0.02
    (reduced cell), takes tau0 as the root nearest the path end, and reads
    c0^2, h_tilde off the first two derivatives there.  degree 2 is the
    bare model p^2 = c0^2 (tau-tau0)(1 + 2 h_tilde (tau-tau0)); the
    default keeps one guard order so the h_tilde estimate is not polluted
    by the model's own truncation.
    """
    if not 2 <= degree <= 4:
        raise DomainError("fit degree must be 2, 3, or 4")
    taus, ps, mask = _window_mask(traj)
    tsel = taus[mask]
    psq = ps[mask] ** 2
    t_ref = tsel[-1]
    dt = tsel - t_ref  # center for conditioning
    V = np.vander(dt, degree + 1, increasing=True)
    coef, res_, rank, sv = np.linalg.lstsq(V, psq, rcond=None)
    if rank < degree + 1 or sv[-1] < 1e-13 * sv[0]:
        raise FitError("collapse fit is rank-deficient; samples too clustered")
    roots = np.roots(coef[::-1])
    d0 = min(roots, key=abs)  # branch point nearest the path end
    tau0 = t_ref + d0
    dcoef = np.polyder(coef[::-1])
    c0sq = complex(np.polyval(dcoef, d0))
    if abs(c0sq) < 1e-12:
        raise FitError("degenerate fit: vanishing leading coefficient")
    h_tilde = complex(np.polyval(np.polyder(dcoef), d0)) / (4.0 * c0sq)
    model = V @ coef
    residual = float(np.max(np.abs(psq - model)))
    tau_span = np.abs(tsel - tau0)
    if not (tau_span < TAU_WINDOW).all():
        raise FitError(
            "fit window extends beyond |tau - tau0| < 0.05; "
            "trim the trajectory closer to the branch point"
        )
    return CollapseFit(tau0=complex(tau0), c0_squared=c0sq,
                       h_tilde=h_tilde, residual=residual,
                       n_samples=int(mask.sum()))


@dataclass(frozen=True)
class AFit:
    c: complex
    e: complex
    residual: float
    n_samples: int


def fit_a_series(traj) -> AFit:
    """Fit A*p = c + e*p^2 (+ one guard order) over the collapse window.

    Both sides are single-valued across the branch point.  c lands on
    {-n0-1/4, n0+3/4}; e = 4*pi*i*h_tilde - eta1(tau0) pins B0 through
    B0 = (4c-1)/2 * e - sum_j n_j(n_j+1) e_j(tau0), which is the sharp way
    to the limit constant (no h_tilde round trip).
    """
    taus, ps, mask = _window_mask(traj)
    x = ps[mask] ** 2
    y = ps[mask] * np.asarray(traj.states[:, 1])[mask]
    V = np.vander(x, 3, increasing=True)
    coef, res_, rank, sv = np.linalg.lstsq(V, y, rcond=None)
    if rank < 3 or sv[-1] < 1e-14 * sv[0]:
        raise FitError("A-series fit is rank-deficient; samples too clustered")
    residual = float(np.max(np.abs(y - V @ coef)))
    return AFit(c=complex(coef[0]), e=complex(coef[1]), residual=residual,
                n_samples=int(mask.sum()))


def limit_potential(z: complex, cd: CollapseData, n) -> complex:
    """The classical limiting potential at tau0 (weights n1..n3 kept,
    weight m(m+1) at the origin, additive constant B0)."""
    n = tuple(complex(v) for v in n)
    hp = half_periods(cd.tau0)
    acc = cd.m * (cd.m + 1.0) * wp(z, cd.tau0) + cd.B0
    for nk, hk in zip(n[1:], hp[1:]):
        wk = nk * (nk + 1.0)
        if wk != 0:
            acc += wk * wp(z + hk, cd.tau0)
    return acc


@dataclass(frozen=True)
class LimitReport:
    residual: float
    trend: tuple  # potential residuals at the last samples, path order
    b_slope: float
    p_abs: tuple
    b_diff: tuple


def limit_potential_residual(traj, cd: CollapseData, z_samples,
                             trend_length: int = 4) -> LimitReport:
    """Convergence of the deforming potential to the classical limit.

    residual: max over z_samples of |I(z; params(tau)) - limit(z)| at the
    trajectory's final sample.  trend: the same residual at the last
    trend_length samples.  b_slope: log-log slope of |B(tau) - B0| against
    |p| over the fit window (the O(p^2) check).
    """
    if traj.n is None:
        raise DomainError("trajectory carries no weights; integrate a flow")
    n = traj.n
    z_samples = [complex(z) for z in z_samples]
    if not z_samples:
        raise DomainError("need at least one z sample")
    for z in z_samples:
        if lattice_distance(z, cd.tau0) < Z_LATTICE_MIN:
            raise DomainError(
                f"z = {z!r} is within {Z_LATTICE_MIN} of a lattice point"
            )
    limits = {z: limit_potential(z, cd, n) for z in z_samples}

    def residual_at(idx: int) -> float:
        params = LameParams.apparent_from(
            n=n, p=traj.states[idx, 0], A=traj.states[idx, 1],
            tau=traj.taus[idx],
        )
        return max(abs(potential_I(z, params) - limits[z]) for z in z_samples)

    m = len(traj.taus)
    take = min(trend_length, m)
    trend = tuple(residual_at(m - take + j) for j in range(take))

    p_abs = []
    b_diff = []
    for idx in range(m):
        p = traj.states[idx, 0]
        tau = traj.taus[idx]
        d = lattice_distance(p, tau)
        if d >= P_WINDOW:
            continue
        params = LameParams.apparent_from(
            n=n, p=p, A=traj.states[idx, 1], tau=tau)
        p_abs.append(d)
        b_diff.append(abs(params.B - cd.B0))
    if len(p_abs) < 3:
        raise FitError(
            "too few samples inside the collapse window for the B trend"
        )
    slope = float(np.polyfit(np.log(np.asarray(p_abs)),
                             np.log(np.asarray(b_diff)), 1)[0])
    return LimitReport(residual=trend[-1], trend=trend, b_slope=slope,
                       p_abs=tuple(p_abs), b_diff=tuple(b_diff))
