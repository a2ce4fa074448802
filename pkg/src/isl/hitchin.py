"""Exact weight-free solutions parametrized by a pair of real constants.

For n = (0, 0, 0, 0) the flow admits a closed-form family: pick real
(r, s) outside the half-integer lattice, set a1 = r + s*tau, and the
apparent singularity p(tau) is given algebraically in terms of elliptic
data at a1.  The corresponding second-order equation solves in sigma
functions, so monodromy, log-derivative residuals, and Schwarzian
identities can all be checked against explicit formulas.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Callable

from .elliptic import (
    canonical_representative,
    invert_wp,
    lattice_invariants,
    weierstrass_suite,
    wsigma,
)
from .errors import DomainError
from .lame import LameParams, potential_I

HALF_INT_TOL = 1e-8


def _near_half_int(x: float) -> bool:
    return abs(2.0 * x - round(2.0 * x)) <= 2.0 * HALF_INT_TOL


@dataclass(frozen=True)
class HitchinSeed:
    """Real pair (r, s), excluded from the half-integer lattice."""

    r: float
    s: float

    def __post_init__(self):
        if _near_half_int(self.r) and _near_half_int(self.s):
            raise DomainError(
                f"(r, s) = ({self.r}, {self.s}) lies on the half-integer "
                "lattice (within 1e-8); the closed-form family degenerates"
            )

    def a1(self, tau: complex) -> complex:
        return self.r + self.s * tau

    def eta_pairing(self, tau: complex) -> complex:
        """r*eta1 + s*eta2, the quasi-period pairing of a1."""
        inv = lattice_invariants(tau)
        return self.r * inv.eta1 + self.s * inv.eta2


def hitchin_wp_p(seed: HitchinSeed, tau: complex) -> complex:
    """wp(p(tau)) for the closed-form solution."""
    a1 = seed.a1(tau)
    w = weierstrass_suite(a1, tau)
    denom = 2.0 * (w.zeta - seed.eta_pairing(tau))
    return w.wp + w.wp_prime / denom


def hitchin_p(seed: HitchinSeed, tau: complex, near: complex | None = None) -> complex:
    """A representative p with wp(p) matching the closed form.

    Without `near` the canonical representative is returned (the sign and
    cell are a convention; both signs solve the flow).  With `near`, the
    root-find is seeded there and the raw root is returned, so sampling
    along a tau-path keeps a continuous branch.
    """
    w = hitchin_wp_p(seed, tau)
    p = invert_wp(w, tau, near=near)
    if near is None:
        return canonical_representative(p, tau)
    return p


def constraint_residual(seed: HitchinSeed, tau: complex, p: complex | None = None) -> float:
    """Defect of zeta(a1+p) + zeta(a1-p) - 2(r eta1 + s eta2).

    Zero (to root-finder accuracy) whenever p comes from hitchin_p; a
    genuine cross-check of quasi-periodicity plus the algebraic formula.
    """
    if p is None:
        p = hitchin_p(seed, tau)
    a1 = seed.a1(tau)
    val = (
        weierstrass_suite(a1 + p, tau).zeta
        + weierstrass_suite(a1 - p, tau).zeta
        - 2.0 * seed.eta_pairing(tau)
    )
    return abs(val)


def hitchin_lame_data(
    seed: HitchinSeed, tau: complex, near: complex | None = None
) -> LameParams:
    """Full apparent-singularity data (p, A, B) of the closed-form solution."""
    p = hitchin_p(seed, tau, near=near)
    a1 = seed.a1(tau)
    zp = weierstrass_suite(p + a1, tau).zeta
    zm = weierstrass_suite(p - a1, tau).zeta
    A = 0.5 * (zp + zm - weierstrass_suite(2.0 * p, tau).zeta)
    return LameParams.apparent_from(p=p, A=A, n=(0.0, 0.0, 0.0, 0.0), tau=tau)


def _exponent_rate(seed: HitchinSeed, tau: complex, p: complex) -> complex:
    """zeta(a1+p) + zeta(a1-p); equals 2(r eta1 + s eta2) on the family."""
    a1 = seed.a1(tau)
    return (
        weierstrass_suite(a1 + p, tau).zeta
        + weierstrass_suite(a1 - p, tau).zeta
    )


def hitchin_y(
    seed: HitchinSeed, tau: complex, sign: int = +1
) -> Callable[[complex], complex]:
    """One of the two explicit solutions y_{+-a1} as a plain callable.

    The square root in the denominator is taken pointwise on the principal
    branch, so the callable is only continuous away from the branch cut;
    residual checks use log-derivative forms instead of differentiating it.
    """
    if sign not in (+1, -1):
        raise DomainError("sign must be +1 or -1")
    p = hitchin_p(seed, tau)
    a1 = seed.a1(tau)
    c = _exponent_rate(seed, tau, p)

    def y(z: complex) -> complex:
        num = wsigma(z - sign * a1, tau)
        den = (wsigma(z + p, tau) * wsigma(z - p, tau)) ** 0.5
        return cmath.exp(sign * 0.5 * c * z) * num / den

    return y


def solution_residual(
    seed: HitchinSeed, tau: complex, z: complex, sign: int = +1
) -> float:
    """|y''/y - I| at z, evaluated through closed log-derivatives.

    Writing G = y'/y, the residual is G^2 + G' - I; both G and G' are
    elementary in zeta and wp, so no branch tracking or finite differences
    enter.
    """
    if sign not in (+1, -1):
        raise DomainError("sign must be +1 or -1")
    params = hitchin_lame_data(seed, tau)
    p = params.p
    a1 = seed.a1(tau)
    c = _exponent_rate(seed, tau, p)
    wm = weierstrass_suite(z - sign * a1, tau)
    wp_ = weierstrass_suite(z + p, tau)
    wm_ = weierstrass_suite(z - p, tau)
    G = sign * 0.5 * c + wm.zeta - 0.5 * (wp_.zeta + wm_.zeta)
    Gp = -wm.wp + 0.5 * (wp_.wp + wm_.wp)
    I = potential_I(z, params)
    return abs(G * G + Gp - I)


def ratio_f(seed: HitchinSeed, tau: complex) -> Callable[[complex], complex]:
    """The ratio f = y_{+a1} / y_{-a1}; single valued up to exp factors."""
    p = hitchin_p(seed, tau)
    c = _exponent_rate(seed, tau, p)
    a1 = seed.a1(tau)

    def f(z: complex) -> complex:
        return (
            cmath.exp(c * z)
            * wsigma(z - a1, tau)
            / wsigma(z + a1, tau)
        )

    return f


def expected_traces(seed: HitchinSeed) -> dict[str, float]:
    """Monodromy traces of the weight-free solution, keyed by loop name.

    Loops around the four half periods are trivial (no singularity there
    for n = 0); loops around +-p give -2 (apparent, exponents -1/2 and
    3/2); the two period loops see the a1-exponentials of the ratio f.
    The period values match the normalized matrices reported by the
    transport (the bare path-ordered transport of ell1/ell2 differs by an
    overall sign; see monodromy.monodromy_rep).
    """
    two_pi = 2.0 * math.pi
    return {
        "omega0": 2.0,
        "omega1": 2.0,
        "omega2": 2.0,
        "omega3": 2.0,
        "p_plus": -2.0,
        "p_minus": -2.0,
        "ell1": 2.0 * math.cos(two_pi * seed.s),
        "ell2": 2.0 * math.cos(two_pi * seed.r),
    }


def schwarzian_from_log_ratio(g: complex, gp: complex, gpp: complex) -> complex:
    """Schwarzian {f; z} from g = f'/f and its first two derivatives."""
    v1 = g + gp / g
    v2 = gp + (gpp * g - gp * gp) / (g * g)
    return v2 - 0.5 * v1 * v1


def schwarzian_residual(seed: HitchinSeed, tau: complex, z: complex) -> float:
    """|{f; z} + 2 I(z)| for the solution ratio f = y_{+}/y_{-}."""
    params = hitchin_lame_data(seed, tau)
    p = params.p
    a1 = seed.a1(tau)
    c = _exponent_rate(seed, tau, p)
    wm = weierstrass_suite(z - a1, tau)
    wpz = weierstrass_suite(z + a1, tau)
    g = c + wm.zeta - wpz.zeta
    gp = -wm.wp + wpz.wp
    gpp = -wm.wp_prime + wpz.wp_prime
    sch = schwarzian_from_log_ratio(g, gp, gpp)
    I = potential_I(z, params)
    return abs(sch + 2.0 * I)


def hitchin_trajectory(seed: HitchinSeed, path, samples_per_segment: int = 200):
    """Closed-form (p, A) samples along a tau-polyline as a Trajectory.

    Branch continuity is kept by seeding each root solve with the previous
    sample.  The layout (uniform per-segment grids, seg_bounds) matches the
    integrated trajectories, so the same residual evaluators apply.
    """
    import numpy as np

    from .flow import Trajectory, _validate_path

    path = _validate_path(path)
    taus_all = []
    ys_all = []
    s_all = []
    bounds = []
    s_off = 0.0
    row = 0
    prev_p = None
    for a, b in zip(path, path[1:]):
        seg = b - a
        length = abs(seg)
        u = seg / length
        grid = np.linspace(0.0, length, samples_per_segment + 1)
        block = np.empty((len(grid), 2), dtype=complex)
        for j, sv in enumerate(grid):
            tau = a + sv * u
            p = hitchin_p(seed, tau, near=prev_p)
            prev_p = p
            a1 = seed.a1(tau)
            block[j, 0] = p
            block[j, 1] = 0.5 * (
                weierstrass_suite(p + a1, tau).zeta
                + weierstrass_suite(p - a1, tau).zeta
                - weierstrass_suite(2.0 * p, tau).zeta
            )
        taus_all.append(a + grid * u)
        ys_all.append(block)
        s_all.append(s_off + grid)
        bounds.append((row, row + len(grid), u, length / samples_per_segment))
        row += len(grid)
        s_off += length
    return Trajectory(
        kind="hitchin-exact",
        taus=np.concatenate(taus_all),
        states=np.vstack(ys_all),
        s=np.concatenate(s_all),
        path=path,
        seg_bounds=tuple(bounds),
        rel_tol=0.0,
        abs_tol=0.0,
        n=(0.0, 0.0, 0.0, 0.0),
    )
