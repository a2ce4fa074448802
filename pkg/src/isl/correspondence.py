"""Bidirectional map between torus data and the five-point equation on the line.

The double cover x = (wp(z) - e1)/(e2 - e1) turns the torus equation with
an apparent pair at +-p into a Fuchsian equation with regular points at
{0, 1, t, infinity, lambda}, lambda apparent.  This module carries the
parameter dictionaries in both directions, the rational coefficient
builders (plain and gauge-transformed), residue extraction, Riemann
scheme tables, and the gauge transport of solution samples.
"""
from __future__ import annotations

import cmath
import math
import warnings
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .elliptic import (
    canonical_representative,
    invert_wp,
    lattice_invariants,
    weierstrass_suite,
)
from .errors import DomainError, InconsistencyError, ValidationError
from .lame import LameParams, apparent_B

LAMBDA_TOL = 1e-8
T_MATCH_TOL = 1e-8
K_CROSS_TOL = 1e-9


def alpha_hat_from_thetas(thetas) -> complex:
    t0, t1, tt, tinf = (complex(v) for v in thetas)
    return -0.5 * (tt + t0 + t1 + tinf - 1.0)


def kappa_hat_from_thetas(thetas) -> complex:
    ah = alpha_hat_from_thetas(thetas)
    return ah * (ah + complex(thetas[3]))


@dataclass(frozen=True)
class FuchsianParams:
    """Apparent-lambda data of the five-point equation.

    thetas order: (theta0, theta1, theta_t, theta_inf).  alpha_hat and
    kappa_hat are forced by the angle sums; K must equal the closed form
    in (lam, mu, t) -- all three are validated at construction.
    """

    t: complex
    lam: complex
    mu: complex
    K: complex
    theta0: complex
    theta1: complex
    theta_t: complex
    theta_inf: complex
    alpha_hat: complex = field(default=None)  # type: ignore[assignment]
    kappa_hat: complex = field(default=None)  # type: ignore[assignment]

    def __post_init__(self):
        th = self.thetas
        ah = alpha_hat_from_thetas(th)
        kh = ah * (ah + self.theta_inf)
        if self.alpha_hat is None:
            object.__setattr__(self, "alpha_hat", ah)
        elif abs(self.alpha_hat - ah) > 1e-10 * max(1.0, abs(ah)):
            raise ValidationError("alpha_hat inconsistent with the angle sum")
        if self.kappa_hat is None:
            object.__setattr__(self, "kappa_hat", kh)
        elif abs(self.kappa_hat - kh) > 1e-10 * max(1.0, abs(kh)):
            raise ValidationError("kappa_hat != alpha_hat*(alpha_hat+theta_inf)")
        for bad, nm in ((0.0, "0"), (1.0, "1"), (self.t, "t")):
            if abs(self.lam - bad) <= LAMBDA_TOL:
                raise ValidationError(f"lambda collides with {nm}")
        k_check = fuchsian_K(self.lam, self.mu, self.t, th)
        if abs(self.K - k_check) > K_CROSS_TOL * max(1.0, abs(k_check)):
            raise ValidationError(
                f"K = {self.K!r} does not match the apparent closed form "
                f"{k_check!r}"
            )

    @property
    def thetas(self):
        return (self.theta0, self.theta1, self.theta_t, self.theta_inf)

    @classmethod
    def from_state(cls, lam, mu, t, thetas) -> "FuchsianParams":
        K = fuchsian_K(lam, mu, t, thetas)
        t0, t1, tt, tinf = (complex(v) for v in thetas)
        return cls(t=complex(t), lam=complex(lam), mu=complex(mu), K=K,
                   theta0=t0, theta1=t1, theta_t=tt, theta_inf=tinf)


def fuchsian_K(lam, mu, t, thetas) -> complex:
    """Closed form of the Hamiltonian forced by lambda being apparent."""
    lam = complex(lam); mu = complex(mu); t = complex(t)
    t0, t1, tt, _ = (complex(v) for v in thetas)
    kh = kappa_hat_from_thetas(thetas)
    lin = (t0 * (lam - 1.0) * (lam - t) + t1 * lam * (lam - t)
           + (tt - 1.0) * lam * (lam - 1.0))
    return (lam * (lam - 1.0) * (lam - t) * mu**2 + kh * (lam - t)
            - lin * mu) / (t * (t - 1.0))


def fuchsian_K_partials(lam, mu, t, thetas) -> tuple[complex, complex]:
    """(dK/dlam, dK/dmu) of the closed form, for the Hamiltonian system."""
    lam = complex(lam); mu = complex(mu); t = complex(t)
    t0, t1, tt, _ = (complex(v) for v in thetas)
    kh = kappa_hat_from_thetas(thetas)
    denom = t * (t - 1.0)
    lin = (t0 * (lam - 1.0) * (lam - t) + t1 * lam * (lam - t)
           + (tt - 1.0) * lam * (lam - 1.0))
    dlin = (t0 * (2.0 * lam - 1.0 - t) + t1 * (2.0 * lam - t)
            + (tt - 1.0) * (2.0 * lam - 1.0))
    dK_dlam = ((3.0 * lam**2 - 2.0 * (1.0 + t) * lam + t) * mu**2 + kh
               - dlin * mu) / denom
    dK_dmu = (2.0 * lam * (lam - 1.0) * (lam - t) * mu - lin) / denom
    return dK_dlam, dK_dmu


def _frak_p(x, t):
    return 4.0 * x * (x - 1.0) * (x - t)


def _frak_p_prime(x, t):
    return 4.0 * (3.0 * x**2 - 2.0 * (1.0 + t) * x + t)


def _mu_base(lam, t, n) -> complex:
    """The n-dependent part of mu; the A-term is strictly linear on top."""
    n0, n1, n2, n3 = n
    return ((2.0 * n3 - 1.0) / (4.0 * (lam - t))
            + (2.0 * n2 - 1.0) / (4.0 * (lam - 1.0))
            + (2.0 * n1 - 1.0) / (4.0 * lam)
            + 0.375 * _frak_p_prime(lam, t) / _frak_p(lam, t))


def lame_to_fuchsian(params: LameParams) -> FuchsianParams:
    """Map apparent torus data to the five-point side.

    Cross-checks the torus-side expression for K against the closed form
    in (lam, mu, t) to 1e-9 before returning.
    """
    if not params.apparent:
        raise DomainError("the map requires apparent data (B forced by p, A, n)")
    tau = params.tau
    inv = lattice_invariants(tau)
    b = inv.e2 - inv.e1
    t = (inv.e3 - inv.e1) / b
    wp = weierstrass_suite(params.p, tau)
    lam = (wp.wp - inv.e1) / b
    n0, n1, n2, n3 = params.n
    thetas = (n1 + 0.5, n2 + 0.5, n3 + 0.5, n0 + 0.5)
    mu = _mu_base(lam, t, params.n) + params.A * wp.wp_prime / (
        b**2 * _frak_p(lam, t))
    zeta_p = wp.zeta
    K_torus = (
        -(2.0 * n2 * n3 - n2 - n3) / (4.0 * (t - 1.0))
        - (2.0 * n1 * n3 - n1 - n3) / (4.0 * t)
        - (2.0 * n3 - 1.0) / (4.0 * (t - lam))
        + (1.0 / (4.0 * t * (t - 1.0))) * (
            1.5 * lam * (lam - 1.0) / (lam - t)
            - 1.5 * (wp.wp + inv.e3) / b
            + params.A * wp.wp_prime / ((lam - t) * b**2)
            + n0 * (n0 + 1.0) * inv.e3 / b
            + n1 * (n1 + 1.0) * inv.e2 / b
            + n2 * (n2 + 1.0) * inv.e1 / b
            - 2.0 * n3 * (n3 + 1.0) * inv.e3 / b
            + 2.0 * params.A * zeta_p / b
            + params.B / b
        )
    )
    K_line = fuchsian_K(lam, mu, t, thetas)
    if abs(K_torus - K_line) > K_CROSS_TOL * max(1.0, abs(K_line)):
        raise InconsistencyError(
            f"torus-side K = {K_torus!r} disagrees with the closed form "
            f"{K_line!r} by {abs(K_torus - K_line):.2e}"
        )
    return FuchsianParams(
        t=t, lam=lam, mu=mu, K=K_torus,
        theta0=thetas[0], theta1=thetas[1], theta_t=thetas[2],
        theta_inf=thetas[3],
    )


def fuchsian_to_lame(
    fp: FuchsianParams, tau: complex, near: complex | None = None
) -> LameParams:
    """Reverse map at a given modulus; fp.t must match t(tau) to 1e-8.

    Returns the canonical-representative p (its sign partner gives the
    same equation with A negated).
    """
    inv = lattice_invariants(tau)
    b = inv.e2 - inv.e1
    t = (inv.e3 - inv.e1) / b
    if abs(t - fp.t) > T_MATCH_TOL * max(1.0, abs(t)):
        raise ValidationError(
            f"fp.t = {fp.t!r} does not match t(tau) = {t!r}"
        )
    n = (fp.theta_inf - 0.5, fp.theta0 - 0.5, fp.theta1 - 0.5,
         fp.theta_t - 0.5)
    wp_target = inv.e1 + fp.lam * b
    p = invert_wp(wp_target, tau, near=near)
    if near is None:
        p = canonical_representative(p, tau)
    wp = weierstrass_suite(p, tau)
    A = (fp.mu - _mu_base(fp.lam, t, n)) * b**2 * _frak_p(fp.lam, t) / wp.wp_prime
    B = apparent_B(p, A, n, tau)
    return LameParams(n=n, p=p, A=A, B=B, tau=tau)


# ---------------------------------------------------------------------------
# coefficient evaluators

@dataclass(frozen=True)
class FuchsianCoefficients:
    """Callable coefficient bundle; hatted forms need the torus data."""

    p1: Callable
    p2: Callable
    p1_hat: Callable
    p2_hat: Callable | None


def fuchsian_coefficients(
    fp: FuchsianParams, params: LameParams | None = None
) -> FuchsianCoefficients:
    """Rational coefficients of the plain and gauge-transformed equations.

    p1/p2 need only fp.  p1_hat is the same function as p1 written in the
    half-integer-shift variables; p2_hat is evaluated from the torus-side
    data (requires params) and equals p2 identically -- the equality is
    what the round-trip tests pin down.
    """
    t, lam, mu, K = fp.t, fp.lam, fp.mu, fp.K
    t0, t1, tt = fp.theta0, fp.theta1, fp.theta_t
    kh = fp.kappa_hat

    def p1(x):
        x = complex(x)
        return ((1.0 - tt) / (x - t) + (1.0 - t0) / x
                + (1.0 - t1) / (x - 1.0) - 1.0 / (x - lam))

    def p2(x):
        x = complex(x)
        return (kh / (x * (x - 1.0))
                - t * (t - 1.0) * K / (x * (x - 1.0) * (x - t))
                + lam * (lam - 1.0) * mu / (x * (x - 1.0) * (x - lam)))

    n1 = t0 - 0.5
    n2 = t1 - 0.5
    n3 = tt - 0.5

    def p1_hat(x):
        x = complex(x)
        return ((0.5 - n1) / x + (0.5 - n2) / (x - 1.0)
                + (0.5 - n3) / (x - t) - 1.0 / (x - lam))

    p2_hat = None
    if params is not None:
        inv = lattice_invariants(params.tau)
        b = inv.e2 - inv.e1
        wp = weierstrass_suite(params.p, params.tau)
        n0g, n1g, n2g, n3g = params.n
        A, B = params.A, params.B
        pl = _frak_p(lam, t)

        def p2_hat(x):
            x = complex(x)
            px = _frak_p(x, t)
            bracket = (
                n0g * (n0g + 1.0) * (x + inv.e1 / b)
                - n1g * (n1g + 1.0) * (x + 2.0 * inv.e1 / b)
                - n2g * (n2g + 1.0) * (x - inv.e3 / b)
                - n3g * (n3g + 1.0) * (x - inv.e2 / b)
                + 0.75 * ((px + pl) / (2.0 * (x - lam) ** 2) - 2.0 * x
                          - 2.0 * (wp.wp + inv.e1) / b)
                + A * (2.0 * wp.zeta / b
                       - wp.wp_prime / (b**2 * (x - lam)))
                + B / b
            )
            # the (2n1-1) cross term pairs x with (x-lam), matching the
            # residue at lam; pairing it with (x-1) breaks that residue
            return (
                0.75 / (x - lam) ** 2
                + (2.0 * n1g * n2g - n1g - n2g) / (4.0 * x * (x - 1.0))
                + (2.0 * n2g * n3g - n2g - n3g) / (4.0 * (x - 1.0) * (x - t))
                + (2.0 * n1g * n3g - n1g - n3g) / (4.0 * x * (x - t))
                + (2.0 * n1g - 1.0) / (4.0 * x * (x - lam))
                + (2.0 * n2g - 1.0) / (4.0 * (x - 1.0) * (x - lam))
                + (2.0 * n3g - 1.0) / (4.0 * (x - t) * (x - lam))
                - bracket / px
            )

    return FuchsianCoefficients(p1=p1, p2=p2, p1_hat=p1_hat, p2_hat=p2_hat)


def torus_q(x, params: LameParams) -> complex:
    """The numerator potential of the pushed-forward equation; equals
    I(z)/b under x = (wp(z) - e1)/b."""
    inv = lattice_invariants(params.tau)
    b = inv.e2 - inv.e1
    t = (inv.e3 - inv.e1) / b
    wp = weierstrass_suite(params.p, params.tau)
    lam = (wp.wp - inv.e1) / b
    n0, n1, n2, n3 = params.n
    x = complex(x)
    px = _frak_p(x, t)
    pl = _frak_p(lam, t)
    return (
        n0 * (n0 + 1.0) * (x + inv.e1 / b)
        + 0.5 * n1 * (n1 + 1.0) * (px / (2.0 * x**2) - 2.0 * x
                                   - 4.0 * inv.e1 / b)
        + 0.5 * n2 * (n2 + 1.0) * (px / (2.0 * (x - 1.0) ** 2) - 2.0 * x
                                   + 2.0 * inv.e3 / b)
        + 0.5 * n3 * (n3 + 1.0) * (px / (2.0 * (x - t) ** 2) - 2.0 * x
                                   + 2.0 * inv.e2 / b)
        + 0.75 * ((px + pl) / (2.0 * (x - lam) ** 2) - 2.0 * x
                  - 2.0 * (wp.wp + inv.e1) / b)
        + params.A * (2.0 * wp.zeta / b - wp.wp_prime / (b**2 * (x - lam)))
        + params.B / b
    )


def residue(fn: Callable, center: complex, radius: float = 1e-3,
            npoints: int = 64) -> complex:
    """Contour residue by the trapezoid rule on a small circle."""
    total = 0j
    for k in range(npoints):
        ang = 2.0 * math.pi * k / npoints
        u = radius * cmath.exp(1j * ang)
        total += fn(center + u) * u
    return total / npoints


# ---------------------------------------------------------------------------
# gauge transport and schemes

def gauge_psi(x, fp: FuchsianParams) -> complex:
    """Principal-branch gauge factor; cuts run along the principal logs of
    (x - lam), x, (x - 1), (x - t)."""
    x = complex(x)
    n1 = fp.theta0 - 0.5
    n2 = fp.theta1 - 0.5
    n3 = fp.theta_t - 0.5
    return ((x - fp.lam) ** (-0.5) * x ** (-0.5 * n1)
            * (x - 1.0) ** (-0.5 * n2) * (x - fp.t) ** (-0.5 * n3))


def _crossed_cut(a: complex, b: complex) -> bool:
    # crossing the negative real axis of this factor between two samples
    if a.imag == 0.0 or b.imag == 0.0:
        return a.real < 0.0 or b.real < 0.0
    return (a.imag < 0.0) != (b.imag < 0.0) and (a.real < 0.0 or b.real < 0.0)


def _poly_derivs(xs, ys, j, width=2):
    """First and second derivative at xs[j] by a local degree-4 fit."""
    sl = slice(j - width, j + width + 1)
    xloc = np.asarray(xs[sl], dtype=complex)
    yloc = np.asarray(ys[sl], dtype=complex)
    x0 = xloc[width]
    dx = xloc - x0
    scale = max(abs(v) for v in dx if v != 0)
    V = np.vander(dx / scale, 5, increasing=True)
    coef = np.linalg.solve(V, yloc)
    return coef[1] / scale, 2.0 * coef[2] / scale**2


def gauge_transport(zs: Sequence[complex], ys: Sequence[complex],
                    params: LameParams):
    """Push torus solution samples through the cover and the gauge.

    zs must trace a smooth curve avoiding singular points and the
    principal cuts of the gauge factor; ys are samples of a solution of
    the torus equation at zs.  Returns (xs, y_hats, residual) where
    residual is the relative defect of the transformed second-order
    equation measured by local polynomial differentiation in x at
    interior samples.
    """
    zs = list(zs)
    ys = list(ys)
    if len(zs) != len(ys) or len(zs) < 5:
        raise DomainError("need matching sample lists, at least 5 points")
    fp = lame_to_fuchsian(params)
    inv = lattice_invariants(params.tau)
    b = inv.e2 - inv.e1
    xs = [(weierstrass_suite(z, params.tau).wp - inv.e1) / b for z in zs]
    for a_, b_ in zip(xs, xs[1:]):
        for shift in (fp.lam, 0.0, 1.0, fp.t):
            if _crossed_cut(a_ - shift, b_ - shift):
                warnings.warn(
                    f"gauge cut crossed between x={a_!r} and x={b_!r}",
                    stacklevel=2,
                )
    y_hats = [y / gauge_psi(x, fp) for x, y in zip(xs, ys)]
    co = fuchsian_coefficients(fp, params)
    worst = 0.0
    for j in range(2, len(xs) - 2):
        d1, d2 = _poly_derivs(xs, y_hats, j)
        x = xs[j]
        terms = (d2, co.p1_hat(x) * d1, co.p2_hat(x) * y_hats[j])
        scale = max(abs(v) for v in terms)
        if scale == 0.0:
            continue
        res = abs(sum(terms)) / scale
        if res > worst:
            worst = res
    return xs, y_hats, worst


@dataclass(frozen=True)
class RiemannScheme:
    points: tuple
    exponents: tuple  # pairs, one per point


def riemann_scheme(obj, gauged: bool = False) -> RiemannScheme:
    """Exponent tables of the three equivalent equations.

    FuchsianParams -> the five-point scheme (points t, 0, 1, inf, lam).
    LameParams     -> the pushed-forward scheme (0, 1, t, inf, lam), or
    with gauged=True the gauge-transformed one.
    """
    if isinstance(obj, FuchsianParams):
        if gauged:
            raise DomainError("gauged scheme is a torus-data table")
        ah = obj.alpha_hat
        return RiemannScheme(
            points=("t", "0", "1", "inf", "lambda"),
            exponents=((0.0, obj.theta_t), (0.0, obj.theta0),
                       (0.0, obj.theta1), (ah, ah + obj.theta_inf),
                       (0.0, 2.0)),
        )
    if isinstance(obj, LameParams):
        n0, n1, n2, n3 = obj.n
        if gauged:
            ah = -0.5 * (1.0 + n0 + n1 + n2 + n3)
            return RiemannScheme(
                points=("0", "1", "t", "inf", "lambda"),
                exponents=((0.0, n1 + 0.5), (0.0, n2 + 0.5),
                           (0.0, n3 + 0.5), (ah, ah + n0 + 0.5),
                           (0.0, 2.0)),
            )
        return RiemannScheme(
            points=("0", "1", "t", "inf", "lambda"),
            exponents=((-0.5 * n1, 0.5 * (n1 + 1.0)),
                       (-0.5 * n2, 0.5 * (n2 + 1.0)),
                       (-0.5 * n3, 0.5 * (n3 + 1.0)),
                       (-0.5 * n0, 0.5 * (n0 + 1.0)),
                       (-0.5, 1.5)),
        )
    raise DomainError(f"no scheme for {type(obj).__name__}")
