"""Monodromy transport along the eight standard generators.

The key oracle here is scalar: for the weight-free closed-form solutions
y with logarithmic derivative G = y'/y elementary in zeta, the period
multiplier is exp(integral of G) along the very polyline the matrix
transport walks.  Composite Gauss quadrature of G is independent of the
ODE integrator, of the 2x2 machinery, and of any sign convention, so it
pins the raw transport sign of the period loops.
"""
from __future__ import annotations

import cmath
import math

import numpy as np
import pytest

from isl.elliptic import weierstrass_suite
from isl.errors import ClearanceError
from isl.flow import integrate_flow
from isl.hitchin import HitchinSeed, expected_traces, hitchin_lame_data
from isl.lame import LameParams
from isl.monodromy import (
    CLEARANCE,
    LOOP_NAMES,
    isomonodromy_drift,
    monodromy_rep,
    singular_points,
    standard_loops,
    transport,
)

_GAUSS_X, _GAUSS_W = np.polynomial.legendre.leggauss(24)


def _quad_multiplier(vertices, p, a1, c, sign, tau) -> complex:
    """exp of the line integral of G = y'/y along the polyline."""
    total = 0.0j
    for a, b in zip(vertices, vertices[1:]):
        seg = b - a
        if abs(seg) == 0:
            continue
        chunks = max(1, math.ceil(abs(seg) / 0.05))
        for k in range(chunks):
            za = a + seg * (k / chunks)
            zb = a + seg * ((k + 1) / chunks)
            mid = 0.5 * (za + zb)
            half = 0.5 * (zb - za)
            for x, w in zip(_GAUSS_X, _GAUSS_W):
                z = mid + half * x
                G = (
                    sign * 0.5 * c
                    + weierstrass_suite(z - sign * a1, tau).zeta
                    - 0.5 * (weierstrass_suite(z + p, tau).zeta
                             + weierstrass_suite(z - p, tau).zeta)
                )
                total += w * half * G
    return cmath.exp(total)


@pytest.mark.parametrize("r,s,tau", [
    (0.3, 0.2, 1.05j),
    (0.3, 0.2, 1.3j),
    (0.3, 0.2, 0.2 + 1.3j),
    (0.15, 0.35, 1.05j),
    (0.15, 0.35, 1.3j),
    (0.15, 0.35, 0.2 + 1.3j),
])
def test_bare_period_transport_matches_scalar_quadrature(r, s, tau):
    seed = HitchinSeed(r, s)
    params = hitchin_lame_data(seed, tau)
    a1 = seed.a1(tau)
    c = (weierstrass_suite(a1 + params.p, tau).zeta
         + weierstrass_suite(a1 - params.p, tau).zeta)
    loops = standard_loops(params)
    for name, phase in (("ell1", -s), ("ell2", r)):
        verts = loops[name].vertices
        m_plus = _quad_multiplier(verts, params.p, a1, c, +1, tau)
        m_minus = _quad_multiplier(verts, params.p, a1, c, -1, tau)
        # quadrature agrees with the closed-form quasi-period factors,
        # overall minus included
        want_plus = -cmath.exp(2j * math.pi * phase)
        assert abs(m_plus - want_plus) < 1e-9
        assert abs(m_minus - 1.0 / want_plus) < 1e-9
        # and the raw matrix transport has exactly that spectrum
        m_bare = transport(loops[name], params)
        tr = m_bare[0, 0] + m_bare[1, 1]
        assert abs(tr - (m_plus + m_minus)) < 1e-8
        assert abs(tr + 2.0 * math.cos(2.0 * math.pi * phase)) < 1e-8


@pytest.mark.slow
def test_normalized_rep_matches_expected_traces():
    seed = HitchinSeed(0.3, 0.2)
    tau = 1.15j
    params = hitchin_lame_data(seed, tau)
    rep = monodromy_rep(params)
    want = expected_traces(seed)
    for name in LOOP_NAMES:
        m = rep.matrices[name]
        det = m[0, 0] * m[1, 1] - m[0, 1] * m[1, 0]
        assert abs(det - 1.0) < 1e-8
        assert abs(rep.trace(name) - want[name]) < 1e-5
        if name.startswith("omega"):
            # no weight at the half periods: the loop is contractible for
            # the equation and the matrix is the identity
            assert np.max(np.abs(m - np.eye(2))) < 1e-6
    bare = monodromy_rep(params, normalized=False)
    for name in ("ell1", "ell2"):
        assert np.max(np.abs(bare.matrices[name] + rep.matrices[name])) < 1e-12
    for name in ("omega0", "p_plus"):
        assert np.max(np.abs(bare.matrices[name] - rep.matrices[name])) < 1e-12


def test_traces_independent_of_basepoint():
    seed = HitchinSeed(0.3, 0.2)
    tau = 1.2j
    params = hitchin_lame_data(seed, tau)
    la = standard_loops(params)
    lb = standard_loops(params, q0=0.17 + 0.19 * tau)
    for name in ("omega1", "p_plus", "ell1"):
        ma = transport(la[name], params)
        mb = transport(lb[name], params)
        assert abs((ma[0, 0] + ma[1, 1]) - (mb[0, 0] + mb[1, 1])) < 1e-6


@pytest.mark.slow
def test_integer_weights_give_trivial_local_loops():
    # integer n_k: local exponents -n_k, n_k+1 are integers and the local
    # potential is even, so the solutions are single valued there
    params = LameParams.apparent_from(p=0.23 + 0.31j, A=0.4 - 0.27j,
                                      n=(1.0, 0.0, 2.0, 1.0), tau=1.1j)
    rep = monodromy_rep(params)
    for name in ("omega0", "omega2"):
        assert np.max(np.abs(rep.matrices[name] - np.eye(2))) < 1e-6
    for name in ("p_plus", "p_minus"):
        tr = rep.trace(name)
        assert abs(tr + 2.0) < 1e-6


def test_single_sample_drift_is_zero():
    pr = hitchin_lame_data(HitchinSeed(0.3, 0.2), 1.1j)
    traj = integrate_flow(pr.p, pr.A, (0, 0, 0, 0), (1.1j, 1.2j),
                          rel_tol=1e-11, abs_tol=1e-13,
                          samples_per_segment=16)
    drift = isomonodromy_drift(traj, num_samples=1)
    assert set(drift) == set(LOOP_NAMES)
    assert all(v == 0.0 for v in drift.values())


def test_singular_points_and_clearance_guard():
    params = LameParams.apparent_from(p=0.23 + 0.31j, A=0.1, n=(1, 0, 0, 0),
                                      tau=1.1j)
    pts = singular_points(params)
    assert set(pts) == {"omega0", "omega1", "omega2", "omega3",
                        "p_plus", "p_minus"}
    loops = standard_loops(params)
    for name, loop in loops.items():
        if name.startswith("ell"):
            shift = 1.0 if name == "ell1" else params.tau
            assert abs(loop.vertices[-1] - loop.vertices[0] - shift) < 1e-12
        else:
            assert abs(loop.vertices[-1] - loop.vertices[0]) < 1e-12
            # every vertex keeps distance from the other singular points
            center = pts[name]
            for v in loop.vertices:
                for pname, w in pts.items():
                    if abs(w - center) < 1e-12:
                        continue
                    assert abs(v - w) > CLEARANCE - 1e-9
    with pytest.raises(ClearanceError):
        standard_loops(params, q0=params.p + 0.001)
