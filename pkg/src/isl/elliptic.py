"""Elliptic kernel: theta series, Weierstrass functions, lattice data.

Everything downstream (potentials, flows, monodromy) is built on the
evaluations in this module.  Conventions, fixed once here:

* lattice Lambda = Z + Z*tau with Im(tau) >= 0.05,
* half periods  omega_0/2 = 0, omega_1/2 = 1/2, omega_2/2 = tau/2,
  omega_3/2 = (1+tau)/2, and e_i = wp(omega_i/2),
* first theta function from its q-series (q = exp(i*pi*tau)),
* eta1 = -theta1'''(0) / (3*theta1'(0)), eta2 from the Legendre relation
  tau*eta1 - eta2 = 2*pi*i.

The identities that make these conventions consistent (quasi-periodicity,
theta quartics, the lattice-sum oracle) are asserted in the test suite
rather than assumed.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import DomainError, PoleError, RootFindError, SeriesCapError

MIN_IM_TAU = 0.05
POLE_TOL = 1e-10
SERIES_CAP = 512
_TWO_PI_I = 2j * math.pi


def _check_tau(tau: complex) -> complex:
    tau = complex(tau)
    if not (tau.imag >= MIN_IM_TAU):
        raise DomainError(
            f"Im(tau) = {tau.imag!r} below supported minimum {MIN_IM_TAU}"
        )
    return tau


@dataclass(frozen=True)
class LatticePoint:
    """A point z split as z = cell + m + n*tau with cell coords in [-1/2, 1/2)."""

    cell: complex
    m: int
    n: int


def reduce_to_cell(z: complex, tau: complex) -> LatticePoint:
    """Reduce z modulo the lattice to the centered fundamental cell.

    The representative has coordinates x + y*tau with x, y in [-1/2, 1/2).
    """
    tau = _check_tau(tau)
    z = complex(z)
    y = z.imag / tau.imag
    x = z.real - y * tau.real
    m = math.floor(x + 0.5)
    n = math.floor(y + 0.5)
    return LatticePoint(z - m - n * tau, m, n)


def lattice_distance(z: complex, tau: complex) -> float:
    """Distance from z to the nearest lattice point of Z + Z*tau."""
    zr = reduce_to_cell(z, tau).cell
    best = abs(zr)
    for dm in (-1, 0, 1):
        for dn in (-1, 0, 1):
            d = abs(zr - dm - dn * tau)
            if d < best:
                best = d
    return best


class _ThetaContext:
    """Per-tau caches for the theta q-series and halved-argument helpers."""

    __slots__ = (
        "tau",
        "base",
        "c0",
        "c1",
        "c2",
        "c3",
        "k1",
        "theta1_prime0",
        "theta1_ppp0",
        "eta1",
        "eta2",
        "g2",
    )

    def __init__(self, tau: complex):
        self.tau = tau
        nterm = _term_count(tau)
        m = np.arange(nterm)
        k1 = (2 * m + 1) * math.pi
        sign = np.where(m % 2 == 0, 1.0, -1.0)
        self.base = 1j * math.pi * tau * (m + 0.5) ** 2
        self.k1 = k1
        self.c0 = sign
        self.c1 = sign * k1
        self.c2 = sign * k1**2
        self.c3 = sign * k1**3
        # null values: sin terms vanish at z = 0, cos terms are 1
        e0 = np.exp(self.base)
        self.theta1_prime0 = complex(2.0 * np.sum(self.c1 * e0))
        self.theta1_ppp0 = complex(-2.0 * np.sum(self.c3 * e0))
        self.eta1 = -self.theta1_ppp0 / (3.0 * self.theta1_prime0)
        self.eta2 = tau * self.eta1 - _TWO_PI_I
        self.g2 = None  # filled by lattice_invariants

    def derivs(self, zr: complex) -> tuple[complex, complex, complex, complex]:
        """theta1 and its first three z-derivatives at a reduced point."""
        ap = np.exp(self.base + 1j * self.k1 * zr)
        am = np.exp(self.base - 1j * self.k1 * zr)
        s = (ap - am) * -1j
        c = ap + am
        t0 = complex(np.sum(self.c0 * s))
        t1 = complex(np.sum(self.c1 * c))
        t2 = complex(-np.sum(self.c2 * s))
        t3 = complex(-np.sum(self.c3 * c))
        return t0, t1, t2, t3


def _term_count(tau: complex) -> int:
    """Terms needed so the tail is below 1e-18 of the accumulated series.

    Worst case over the reduced cell (|Im z| <= Im(tau)/2) the m-th term of
    any cached series is bounded by |q|^((m+1/2)^2 - (m+1/2)) times a cubic
    weight, with q = exp(i*pi*tau).
    """
    t = math.pi * tau.imag
    m = 1
    while True:
        decay = t * ((m + 0.5) ** 2 - (m + 0.5))
        if decay - 3.0 * math.log(2 * m + 1.0) > 42.0:  # 42 ln 10 ~ e-18 margin
            return m + 2
        m += 1
        if m > SERIES_CAP:
            raise SeriesCapError(
                f"theta series needs more than {SERIES_CAP} terms at tau={tau!r}"
            )


@lru_cache(maxsize=2048)
def _ctx(tau: complex) -> _ThetaContext:
    return _ThetaContext(tau)


def theta1(z: complex, tau: complex, deriv: int = 0) -> complex:
    """First Jacobi theta function, or its z-derivative of order 1..3.

    The point is reduced to the fundamental cell first; the quasi-period
    factor (and its interaction with the derivatives) is applied exactly.
    """
    if deriv not in (0, 1, 2, 3):
        raise ValueError("deriv must be 0, 1, 2 or 3")
    tau = _check_tau(tau)
    ctx = _ctx(tau)
    red = reduce_to_cell(z, tau)
    zr, m, n = red.cell, red.m, red.n
    t = ctx.derivs(zr)
    if m == 0 and n == 0:
        return t[deriv]
    # theta1(zr + m + n*tau) = mu(zr) * theta1(zr) with
    # mu = (-1)^(m+n) exp(-i pi n^2 tau - 2 pi i n zr)
    mu = (-1) ** ((m + n) % 2) * cmath.exp(
        -1j * math.pi * n * n * tau - _TWO_PI_I * n * zr
    )
    c = -_TWO_PI_I * n
    if deriv == 0:
        return mu * t[0]
    if deriv == 1:
        return mu * (t[1] + c * t[0])
    if deriv == 2:
        return mu * (t[2] + 2 * c * t[1] + c * c * t[0])
    return mu * (t[3] + 3 * c * t[2] + 3 * c * c * t[1] + c**3 * t[0])


@dataclass(frozen=True)
class LatticeData:
    """Scalar invariants of the lattice Z + Z*tau."""

    tau: complex
    eta1: complex
    eta2: complex
    e1: complex
    e2: complex
    e3: complex
    g2: complex
    g3: complex
    theta1_prime0: complex
    theta2_null: complex
    theta3_null: complex
    theta4_null: complex


def _wp_from_derivs(ctx: _ThetaContext, zr: complex) -> complex:
    t0, t1, t2, t3 = ctx.derivs(zr)
    return -ctx.eta1 - (t2 * t0 - t1 * t1) / (t0 * t0)


@lru_cache(maxsize=2048)
def lattice_invariants(tau: complex) -> LatticeData:
    """Half-period values, quasi-period constants and curve invariants.

    eta1 comes from the theta-series coefficient ratio; eta2 from the
    Legendre relation.  The e_i are wp at the half periods; g2, g3 from
    their elementary symmetric functions.
    """
    tau = _check_tau(tau)
    ctx = _ctx(tau)
    half = (0.5, tau / 2.0, (1.0 + tau) / 2.0)
    es = []
    for w in half:
        zr = reduce_to_cell(w, tau).cell
        es.append(_wp_from_derivs(ctx, zr))
    e1, e2, e3 = es
    g2 = -4.0 * (e1 * e2 + e1 * e3 + e2 * e3)
    g3 = 4.0 * e1 * e2 * e3
    if ctx.g2 is None:
        ctx.g2 = g2
    # null values of the companion thetas, q = exp(i pi tau)
    nterm = _term_count(tau)
    m = np.arange(nterm)
    th2 = complex(2.0 * np.sum(np.exp(1j * math.pi * tau * (m + 0.5) ** 2)))
    msq = np.arange(1, nterm)
    qpow = np.exp(1j * math.pi * tau * msq**2)
    th3 = complex(1.0 + 2.0 * np.sum(qpow))
    th4 = complex(1.0 + 2.0 * np.sum(np.where(msq % 2 == 0, 1.0, -1.0) * qpow))
    return LatticeData(
        tau=tau,
        eta1=ctx.eta1,
        eta2=ctx.eta2,
        e1=e1,
        e2=e2,
        e3=e3,
        g2=g2,
        g3=g3,
        theta1_prime0=ctx.theta1_prime0,
        theta2_null=th2,
        theta3_null=th3,
        theta4_null=th4,
    )


def dedekind_eta(tau: complex) -> complex:
    """Dedekind eta by its q-product (independent of the theta series)."""
    tau = _check_tau(tau)
    q = cmath.exp(_TWO_PI_I * tau)
    n = max(8, int(42.0 * math.log(10.0) / (2.0 * math.pi * tau.imag)) + 2)
    k = np.arange(1, n + 1)
    prod = complex(np.prod(1.0 - q**k))
    return cmath.exp(1j * math.pi * tau / 12.0) * prod


@dataclass(frozen=True)
class WeierstrassValues:
    sigma: complex
    zeta: complex
    wp: complex
    wp_prime: complex
    wp_prime2: complex


def weierstrass_suite(z: complex, tau: complex) -> WeierstrassValues:
    """sigma, zeta, wp, wp', wp'' at z for the lattice Z + Z*tau.

    All values come from theta derivatives at the reduced point, with the
    quasi-period corrections applied in closed form (zeta picks up
    m*eta1 + n*eta2, sigma its exponential factor, wp and wp' nothing).
    """
    tau = _check_tau(tau)
    z = complex(z)
    inv = lattice_invariants(tau)
    ctx = _ctx(tau)
    red = reduce_to_cell(z, tau)
    zr, m, n = red.cell, red.m, red.n
    if abs(zr) <= POLE_TOL:
        raise PoleError(f"z = {z!r} within {POLE_TOL} of a lattice point")
    t0, t1, t2, t3 = ctx.derivs(zr)
    r1 = t1 / t0
    zeta = inv.eta1 * zr + r1 + m * inv.eta1 + n * inv.eta2
    wp = -inv.eta1 - (t2 / t0 - r1 * r1)
    wp_prime = -(t3 / t0 - 3.0 * r1 * (t2 / t0) + 2.0 * r1**3)
    wp_prime2 = 6.0 * wp * wp - inv.g2 / 2.0
    mu = (-1) ** ((m + n) % 2) * cmath.exp(
        -1j * math.pi * n * n * tau - _TWO_PI_I * n * zr
    )
    sigma = cmath.exp(inv.eta1 * z * z / 2.0) * mu * t0 / inv.theta1_prime0
    return WeierstrassValues(sigma, zeta, wp, wp_prime, wp_prime2)


def wp(z: complex, tau: complex) -> complex:
    return weierstrass_suite(z, tau).wp


def wp_prime(z: complex, tau: complex) -> complex:
    return weierstrass_suite(z, tau).wp_prime


def wzeta(z: complex, tau: complex) -> complex:
    return weierstrass_suite(z, tau).zeta


def wsigma(z: complex, tau: complex) -> complex:
    """Weierstrass sigma; unlike the other evaluators it is fine at lattice
    points (sigma has zeros there, not poles)."""
    tau = _check_tau(tau)
    z = complex(z)
    inv = lattice_invariants(tau)
    return (
        cmath.exp(inv.eta1 * z * z / 2.0)
        * theta1(z, tau)
        / inv.theta1_prime0
    )


@dataclass(frozen=True)
class TauDerivatives:
    """Partial tau-derivatives at fixed z of the basic lattice functions."""

    dlog_sigma: complex
    dzeta: complex
    dwp: complex
    dwp_prime: complex
    deta1: complex
    dlog_theta1_prime: complex


def tau_derivative_suite(z: complex, tau: complex) -> TauDerivatives:
    """Closed-form tau-derivatives of log sigma, zeta, wp, wp', eta1, log theta1'.

    These are the heat-flow identities for the sigma/zeta/wp family; they
    hold for the unreduced z, and the test suite pins them against central
    finite differences in tau.
    """
    tau = _check_tau(tau)
    z = complex(z)
    inv = lattice_invariants(tau)
    w = weierstrass_suite(z, tau)
    pref = 1j / (4.0 * math.pi)
    eta1, g2 = inv.eta1, inv.g2
    zt, wpv, wpp = w.zeta, w.wp, w.wp_prime
    dlog_sigma = pref * (
        wpv - zt * zt + 2.0 * eta1 * (z * zt - 1.0) - g2 * z * z / 12.0
    )
    dzeta = pref * (
        wpp + 2.0 * (zt - z * eta1) * wpv + 2.0 * eta1 * zt - z * g2 / 6.0
    )
    dwp = -pref * (
        2.0 * (zt - z * eta1) * wpp + 4.0 * (wpv - eta1) * wpv - g2 * 2.0 / 3.0
    )
    dwp_prime = -pref * (
        6.0 * (wpv - eta1) * wpp + (zt - z * eta1) * (12.0 * wpv * wpv - g2)
    )
    deta1 = pref * (2.0 * eta1 * eta1 - g2 / 6.0)
    dlog_theta1_prime = 3.0 * pref * eta1
    return TauDerivatives(
        dlog_sigma, dzeta, dwp, dwp_prime, deta1, dlog_theta1_prime
    )


def eta1_tau_derivative(tau: complex) -> complex:
    inv = lattice_invariants(tau)
    return 1j / (4.0 * math.pi) * (2.0 * inv.eta1**2 - inv.g2 / 6.0)


@dataclass(frozen=True)
class CurveMap:
    """Cross-ratio coordinate of the curve and its tau-velocity."""

    t: complex
    dt_dtau: complex


def curve_map(tau: complex) -> CurveMap:
    """t = (e3 - e1)/(e2 - e1) and dt/dtau = -i*pi*t*theta2(0)^4."""
    inv = lattice_invariants(tau)
    t = (inv.e3 - inv.e1) / (inv.e2 - inv.e1)
    dt = -1j * math.pi * t * inv.theta2_null**4
    return CurveMap(t=t, dt_dtau=dt)


def curve_map_point(p: complex, tau: complex) -> complex:
    """lambda = (wp(p) - e1)/(e2 - e1): torus point to the Fuchsian line."""
    inv = lattice_invariants(tau)
    return (wp(p, tau) - inv.e1) / (inv.e2 - inv.e1)


@dataclass(frozen=True)
class OracleSums:
    wp: complex
    zeta: complex
    eta1: complex
    radius: int


def oracle_lattice_sums(
    z: complex, tau: complex, radius: int = 100
) -> OracleSums:
    """Brute-force lattice sums for wp, zeta and eta1.

    Direct symmetric truncation over |m|, |n| <= radius of the defining
    series; eta1 via the doubling identity eta1 = 2*zeta(1/2).  No theta
    machinery is involved, so this is an independent oracle.  Plain
    truncation converges like radius^-2; see
    ``oracle_lattice_sums_extrapolated`` for tight comparisons.
    """
    tau = _check_tau(tau)
    z = complex(z)

    def pair(zz: complex) -> tuple[complex, complex]:
        r = np.arange(-radius, radius + 1)
        mm, nn = np.meshgrid(r, r, indexing="ij")
        w = mm + nn * tau
        mask = (mm != 0) | (nn != 0)
        w = w[mask]
        dz = zz - w
        wp_val = 1.0 / zz**2 + np.sum(1.0 / dz**2 - 1.0 / w**2)
        zeta_val = 1.0 / zz + np.sum(1.0 / dz + 1.0 / w + zz / w**2)
        return complex(wp_val), complex(zeta_val)

    wp_val, zeta_val = pair(z)
    _, zeta_half = pair(0.5 + 0j)
    return OracleSums(wp=wp_val, zeta=zeta_val, eta1=2.0 * zeta_half, radius=radius)


def oracle_lattice_sums_extrapolated(
    z: complex, tau: complex, radius: int = 120
) -> OracleSums:
    """Lattice-sum oracle pushed to convergence by Richardson extrapolation.

    Runs the raw truncated sums at radius, 2*radius and 4*radius and removes
    the R^-2 and R^-3 tail terms of the symmetric square truncation.
    """
    sums = [oracle_lattice_sums(z, tau, radius * k) for k in (1, 2, 4)]
    rs = np.array([float(s.radius) for s in sums])
    basis = np.vstack([np.ones(3), rs**-2.0, rs**-3.0]).T

    def extrap(vals):
        coef = np.linalg.solve(basis, np.asarray(vals))
        return complex(coef[0])

    return OracleSums(
        wp=extrap([s.wp for s in sums]),
        zeta=extrap([s.zeta for s in sums]),
        eta1=extrap([s.eta1 for s in sums]),
        radius=4 * radius,
    )


def canonical_representative(p: complex, tau: complex) -> complex:
    """Pick one of +-p in the fundamental cell: Im >= 0, ties toward Re >= 0."""
    a = reduce_to_cell(p, tau).cell
    b = reduce_to_cell(-p, tau).cell
    if abs(a.imag - b.imag) > 1e-12:
        return a if a.imag > b.imag else b
    return a if a.real >= b.real else b


def invert_wp(
    w: complex,
    tau: complex,
    near: complex | None = None,
    tol: float = 1e-13,
) -> complex:
    """Solve wp(p) = w by Newton iteration.

    Seeded from `near` when given, otherwise from the best point of a coarse
    grid over the fundamental cell (with further grid points as fallback
    seeds).  The result is reduced to the fundamental cell; use
    ``canonical_representative`` to fix the +-p choice.
    """
    tau = _check_tau(tau)
    w = complex(w)
    seeds: list[complex] = []
    if near is not None:
        seeds.append(complex(near))
    grid: list[tuple[float, complex]] = []
    for a in np.linspace(-0.45, 0.45, 10):
        for b in np.linspace(-0.45, 0.45, 10):
            zc = a + b * tau
            if lattice_distance(zc, tau) < 0.06:
                continue
            grid.append((abs(wp(zc, tau) - w), zc))
    grid.sort(key=lambda itm: itm[0])
    seeds.extend(zc for _, zc in grid[:6])
    scale = max(1.0, abs(w))
    for seed in seeds:
        p = seed
        ok = True
        for _ in range(60):
            try:
                vals = weierstrass_suite(p, tau)
            except PoleError:
                ok = False
                break
            f = vals.wp - w
            if abs(f) <= tol * scale:
                break
            if vals.wp_prime == 0:
                ok = False
                break
            step = f / vals.wp_prime
            # keep Newton inside a couple of cells
            if abs(step) > 0.75:
                step *= 0.75 / abs(step)
            p = p - step
        else:
            ok = False
        if ok and abs(wp(p, tau) - w) <= 1e-11 * scale:
            return reduce_to_cell(p, tau).cell
    raise RootFindError(f"could not invert wp at w={w!r}, tau={tau!r}")
