"""Second-order torus potential with four half-period singularities and an
extra apparent pair at +-p.

The scalar equation is y'' = I(z) y with

    I(z) = sum_k n_k(n_k+1) wp(z + omega_k/2)
         + (3/4)(wp(z+p) + wp(z-p))
         + A (zeta(z+p) - zeta(z-p)) + B,

where k runs over the four half periods.  For +-p to be apparent
singularities (local exponents -1/2, 3/2 and no logarithm), B must take
one specific value given (p, A, n, tau); that value and everything tied to
it (Hamiltonian, deformation one-form, integrability data, local expansion
coefficients) lives here.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .elliptic import (
    lattice_distance,
    lattice_invariants,
    weierstrass_suite,
)
from .errors import DomainError, InconsistencyError, PoleError

APPARENT_TOL = 1e-10
P_HALF_PERIOD_TOL = 1e-8
RESONANT_TOL = 1e-10
RING_RADIUS = 1e-2

_I4PI = 1j / (4.0 * math.pi)


def half_periods(tau: complex) -> tuple[complex, complex, complex, complex]:
    """The four points omega_k/2 for k = 0..3: 0, 1/2, tau/2, (1+tau)/2."""
    return (0j, 0.5 + 0j, tau / 2.0, (1.0 + tau) / 2.0)


def _check_n(n) -> tuple[complex, complex, complex, complex]:
    n = tuple(complex(v) for v in n)
    if len(n) != 4:
        raise DomainError("n must have exactly four entries")
    for k, v in enumerate(n):
        nearest = round(v.real - 0.5) + 0.5
        if abs(v - nearest) <= RESONANT_TOL:
            raise DomainError(
                f"n[{k}] = {v!r} is resonant (half-odd-integer)"
            )
    return n


def _check_p(p: complex, tau: complex) -> complex:
    p = complex(p)
    for h in half_periods(tau):
        if lattice_distance(p - h, tau) <= P_HALF_PERIOD_TOL:
            raise PoleError(f"p = {p!r} collides with half period {h!r}")
    return p


def apparent_B(p: complex, A: complex, n, tau: complex) -> complex:
    """The unique B making +-p apparent singularities of the potential."""
    n = _check_n(n)
    p = _check_p(p, tau)
    w2 = weierstrass_suite(2.0 * p, tau)
    acc = A * A - w2.zeta * A - 0.75 * w2.wp
    for nk, hk in zip(n, half_periods(tau)):
        wk = nk * (nk + 1.0)
        if wk != 0:
            acc -= wk * weierstrass_suite(p + hk, tau).wp
    return acc


@dataclass(frozen=True)
class LameParams:
    """Parameter pack (n; p, A, B; tau) for the potential I(z).

    `apparent` records whether B satisfies the apparent-singularity
    constraint to APPARENT_TOL.  Use `LameParams.apparent_from` to build
    the constrained pack; passing B directly is allowed but flagged.
    """

    n: tuple[complex, complex, complex, complex]
    p: complex
    A: complex
    B: complex
    tau: complex
    apparent: bool = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "n", _check_n(self.n))
        object.__setattr__(self, "p", _check_p(complex(self.p), self.tau))
        object.__setattr__(self, "A", complex(self.A))
        object.__setattr__(self, "B", complex(self.B))
        object.__setattr__(self, "tau", complex(self.tau))
        gap = abs(self.B - apparent_B(self.p, self.A, self.n, self.tau))
        object.__setattr__(
            self, "apparent", gap <= APPARENT_TOL * max(1.0, abs(self.B))
        )

    @classmethod
    def apparent_from(cls, p: complex, A: complex, n, tau: complex) -> "LameParams":
        return cls(n=tuple(n), p=p, A=A, B=apparent_B(p, A, n, tau), tau=tau)

    @property
    def weights(self) -> tuple[complex, complex, complex, complex]:
        return tuple(nk * (nk + 1.0) for nk in self.n)


def potential_I(z: complex, params: LameParams) -> complex:
    w_plus = weierstrass_suite(z + params.p, params.tau)
    w_minus = weierstrass_suite(z - params.p, params.tau)
    acc = (
        0.75 * (w_plus.wp + w_minus.wp)
        + params.A * (w_plus.zeta - w_minus.zeta)
        + params.B
    )
    for wk, hk in zip(params.weights, half_periods(params.tau)):
        if wk != 0:
            acc += wk * weierstrass_suite(z + hk, params.tau).wp
    return acc


def potential_I_zderiv(z: complex, params: LameParams) -> complex:
    """d/dz of the potential at fixed (p, A, B, tau)."""
    w_plus = weierstrass_suite(z + params.p, params.tau)
    w_minus = weierstrass_suite(z - params.p, params.tau)
    acc = 0.75 * (w_plus.wp_prime + w_minus.wp_prime) - params.A * (
        w_plus.wp - w_minus.wp
    )
    for wk, hk in zip(params.weights, half_periods(params.tau)):
        if wk != 0:
            acc += wk * weierstrass_suite(z + hk, params.tau).wp_prime
    return acc


def hamiltonian_K(p: complex, A: complex, n, tau: complex) -> complex:
    """Hamiltonian generating the isomonodromic tau-flow in (p, A)."""
    inv = lattice_invariants(tau)
    B = apparent_B(p, A, n, tau)
    return -_I4PI * (B + 2.0 * p * inv.eta1 * A)


@dataclass(frozen=True)
class ExpansionCoeffs:
    """Local data of the potential: subleading coefficients at p and the
    constant terms at the four half periods."""

    H1: complex
    H2: complex
    Lam: tuple[complex, complex, complex, complex]


def expansion_coeffs(params: LameParams) -> ExpansionCoeffs:
    p, A, tau = params.p, params.A, params.tau
    inv = lattice_invariants(tau)
    w2 = weierstrass_suite(2.0 * p, tau)
    hs = half_periods(tau)
    wts = params.weights
    s1 = sum(
        wk * weierstrass_suite(p + hk, tau).wp_prime
        for wk, hk in zip(wts, hs)
        if wk != 0
    )
    s2 = sum(
        wk * weierstrass_suite(p + hk, tau).wp_prime2
        for wk, hk in zip(wts, hs)
        if wk != 0
    )
    H1 = s1 + 0.75 * w2.wp_prime - A * w2.wp
    H2 = 0.5 * (s2 + 0.75 * w2.wp_prime2 + 0.075 * inv.g2 - A * w2.wp_prime)
    lam = []
    for k in range(4):
        acc = params.B
        for j in range(4):
            if j == k or wts[j] == 0:
                continue
            acc += wts[j] * weierstrass_suite(hs[k] + hs[j], tau).wp
        wkp = weierstrass_suite(hs[k] + p, tau)
        wkm = weierstrass_suite(hs[k] - p, tau)
        acc += 1.5 * wkp.wp + A * (wkp.zeta - wkm.zeta)
        lam.append(acc)
    return ExpansionCoeffs(H1=H1, H2=H2, Lam=tuple(lam))


def omega12(z: complex, p: complex, tau: complex, deriv: int = 0) -> complex:
    """Upper-right entry of the deformation one-form, and z-derivatives 1..3.

    Odd elliptic-like function with simple poles at +-p; picks up -1 under
    z -> z + tau and is 1-periodic.
    """
    inv = lattice_invariants(tau)
    w_m = weierstrass_suite(z - p, tau)
    w_p = weierstrass_suite(z + p, tau)
    if deriv == 0:
        return -_I4PI * (w_m.zeta + w_p.zeta - 2.0 * z * inv.eta1)
    if deriv == 1:
        return -_I4PI * (-w_m.wp - w_p.wp - 2.0 * inv.eta1)
    if deriv == 2:
        return -_I4PI * (-w_m.wp_prime - w_p.wp_prime)
    if deriv == 3:
        return -_I4PI * (-w_m.wp_prime2 - w_p.wp_prime2)
    raise ValueError("deriv must be 0..3")


def omega_matrix(z: complex, params: LameParams) -> np.ndarray:
    """Full 2x2 deformation matrix built from omega12 and the potential."""
    o = [omega12(z, params.p, params.tau, deriv=d) for d in range(3)]
    iv = potential_I(z, params)
    o11 = -0.5 * o[1]
    o21 = -0.5 * o[2] + o[0] * iv
    o22 = 0.5 * o[1]
    return np.array([[o11, o[0]], [o21, o22]], dtype=complex)


def b_dot_apparent(
    params: LameParams, p_dot: complex, A_dot: complex
) -> complex:
    """Total tau-derivative of the constrained B along (p_dot, A_dot)."""
    from .elliptic import tau_derivative_suite

    p, A, tau = params.p, params.A, params.tau
    w2 = weierstrass_suite(2.0 * p, tau)
    d2 = tau_derivative_suite(2.0 * p, tau)
    acc = (
        2.0 * A * A_dot
        - A_dot * w2.zeta
        - A * (d2.dzeta - 2.0 * p_dot * w2.wp)
        - 0.75 * (d2.dwp + 2.0 * p_dot * w2.wp_prime)
    )
    vel = (0.0, 0.0, 0.5, 0.5)
    for wk, hk, ck in zip(params.weights, half_periods(tau), vel):
        if wk == 0:
            continue
        wv = weierstrass_suite(p + hk, tau)
        dv = tau_derivative_suite(p + hk, tau)
        acc -= wk * (dv.dwp + (p_dot + ck) * wv.wp_prime)
    return acc


def potential_I_tau_total(
    z: complex, params: LameParams, p_dot: complex, A_dot: complex
) -> complex:
    """d/dtau of the potential at fixed z, with B moving so the apparent
    constraint keeps holding along (p_dot, A_dot)."""
    from .elliptic import tau_derivative_suite

    p, A, tau = params.p, params.A, params.tau
    w_p = weierstrass_suite(z + p, tau)
    w_m = weierstrass_suite(z - p, tau)
    d_p = tau_derivative_suite(z + p, tau)
    d_m = tau_derivative_suite(z - p, tau)
    acc = 0.75 * (d_p.dwp + d_m.dwp + p_dot * (w_p.wp_prime - w_m.wp_prime))
    acc += A_dot * (w_p.zeta - w_m.zeta)
    acc += A * (d_p.dzeta - d_m.dzeta - p_dot * (w_p.wp + w_m.wp))
    vel = (0.0, 0.0, 0.5, 0.5)
    for wk, hk, ck in zip(params.weights, half_periods(tau), vel):
        if wk == 0:
            continue
        dv = tau_derivative_suite(z + hk, tau)
        wv = weierstrass_suite(z + hk, tau)
        acc += wk * (dv.dwp + ck * wv.wp_prime)
    acc += b_dot_apparent(params, p_dot, A_dot)
    return acc


@dataclass(frozen=True)
class DeformationCoeffs:
    """Pole-expansion coefficients of the integrability defect.

    All four vanish exactly when (p_dot, A_dot) is the Hamiltonian flow.
    """

    L: complex
    M: complex
    N: complex
    C: complex

    def max_abs(self) -> float:
        return max(abs(self.L), abs(self.M), abs(self.N), abs(self.C))


def deformation_coeffs(
    p: complex,
    A: complex,
    p_dot: complex,
    A_dot: complex,
    n,
    tau: complex,
) -> DeformationCoeffs:
    n = _check_n(n)
    inv = lattice_invariants(tau)
    w2 = weierstrass_suite(2.0 * p, tau)
    zeta2p = w2.zeta
    wp2p = w2.wp
    wpp2p = w2.wp_prime
    eta1 = inv.eta1
    sprime = sum(
        nk * (nk + 1.0) * weierstrass_suite(p + hk, tau).wp_prime
        for nk, hk in zip(n, half_periods(tau))
        if nk * (nk + 1.0) != 0
    )
    H1 = sprime + 0.75 * wpp2p - A * wp2p
    L = -0.5 * (3.0 * p_dot + _I4PI * (6.0 * A - 3.0 * (zeta2p - 2.0 * p * eta1)))
    M = -2.0 * A * p_dot + _I4PI * (
        -4.0 * A * A + 2.0 * A * (zeta2p - 2.0 * p * eta1)
    )
    N = -2.0 * A_dot + _I4PI * (
        4.0 * A * (wp2p + eta1) - 3.0 * wpp2p - 2.0 * sprime
    )
    C = (
        4.0 * A * A_dot
        - 2.0 * H1 * p_dot
        + _I4PI
        * (
            -4.0 * A * A * (wp2p + 2.0 * eta1)
            + 3.0 * A * wpp2p
            + 2.0 * H1 * (zeta2p - 2.0 * p * eta1)
        )
    )
    return DeformationCoeffs(L=L, M=M, N=N, C=C)


def integrability_residual(
    z: complex, params: LameParams, p_dot: complex, A_dot: complex
) -> complex:
    """Defect of the zero-curvature identity at z, computed twice.

    Route one combines omega12 derivatives with the potential and its total
    tau derivative; route two evaluates the closed pole expansion with the
    coefficients from `deformation_coeffs`.  The two must agree to 1e-8,
    otherwise an InconsistencyError is raised.
    """
    p, tau = params.p, params.tau
    o12 = omega12(z, p, tau, 0)
    o12_1 = omega12(z, p, tau, 1)
    o12_3 = omega12(z, p, tau, 3)
    iv = potential_I(z, params)
    iv_z = potential_I_zderiv(z, params)
    iv_tau = potential_I_tau_total(z, params, p_dot, A_dot)
    u_direct = o12_3 - 4.0 * iv * o12_1 - 2.0 * iv_z * o12 + 2.0 * iv_tau

    co = deformation_coeffs(p, params.A, p_dot, A_dot, params.n, tau)
    w_m = weierstrass_suite(z - p, tau)
    w_p = weierstrass_suite(z + p, tau)
    # The constant in the pole expansion is co.C only along the flow; for
    # arbitrary velocities the z^0 matching at p adds the combination below
    # (it vanishes when L = M = N = 0).
    w2 = weierstrass_suite(2.0 * p, tau)
    c_gen = co.C + co.L * w2.wp_prime - co.M * w2.wp + co.N * w2.zeta
    u_pole = (
        co.L * (w_m.wp_prime - w_p.wp_prime)
        + co.M * (w_m.wp + w_p.wp)
        + co.N * (w_m.zeta - w_p.zeta)
        + c_gen
    )
    gap = abs(u_direct - u_pole)
    if gap > 1e-8 * max(1.0, abs(u_direct), abs(u_pole)):
        raise InconsistencyError(
            f"integrability routes disagree by {gap:.3e} at z={z!r}"
        )
    return u_direct


def laurent_ring_fit(
    f,
    center: complex,
    radius: float = RING_RADIUS,
    kmin: int = -2,
    kmax: int = 8,
    npoints: int = 96,
) -> dict[int, complex]:
    """Least-squares Laurent coefficients of f around `center`.

    Samples f on a ring of the given radius and solves for the coefficients
    of u^k, kmin <= k <= kmax, with column scaling to keep the system well
    conditioned.
    """
    ang = 2.0 * math.pi * np.arange(npoints) / npoints
    u = radius * np.exp(1j * ang)
    vals = np.array([f(center + uu) for uu in u], dtype=complex)
    ks = np.arange(kmin, kmax + 1)
    design = u[:, None] ** ks[None, :]
    scale = np.abs(design).max(axis=0)
    sol, *_ = np.linalg.lstsq(design / scale, vals, rcond=None)
    sol = sol / scale
    return {int(k): complex(c) for k, c in zip(ks, sol)}


def frobenius_indicial_roots(params: LameParams) -> tuple[complex, complex]:
    """Indicial roots at z = p from a fitted Laurent expansion of I."""
    fit = laurent_ring_fit(lambda zz: potential_I(zz, params), params.p)
    a2 = fit[-2]
    disc = (1.0 + 4.0 * a2) ** 0.5
    return (0.5 * (1.0 - disc), 0.5 * (1.0 + disc))


def frobenius_log_coefficient(params: LameParams) -> complex:
    """Obstruction to a log-free local solution at z = p.

    Runs the Frobenius recursion for the exponent -1/2 branch on Laurent
    data extracted numerically from the potential; the resonance at offset
    2 produces this coefficient.  Zero (to ~1e-10) iff B is the apparent
    value.
    """
    fit = laurent_ring_fit(lambda zz: potential_I(zz, params), params.p)
    a_m1 = fit[-1]
    a_0 = fit[0]
    c1 = -a_m1
    return a_0 + a_m1 * c1
