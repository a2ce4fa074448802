"""Numerical monodromy of the second-order equation on the torus.

Fundamental 2x2 solutions are transported along explicit polyline loops by
the adaptive integrator; the monodromy of a loop is the transport matrix
Y(end) with Y(start) = I in the (y, y') frame.  The two period loops are
open segments in the plane (z to z+1 and z to z+tau) that close up on the
torus because the coefficient is elliptic.

Loop geometry is fully deterministic: regular 64-gons of radius 0.08
around each singular point, straight connectors from the basepoint with
circular-arc detours of radius 0.05 inserted on the left of the travel
direction whenever a connector would pass within 0.03 of another singular
point, and return legs that retrace the outgoing connector exactly (so a
local loop is a strict conjugate of its circle).
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from . import ode
from .elliptic import reduce_to_cell
from .errors import ClearanceError, InconsistencyError
from .lame import LameParams, half_periods, potential_I

LOOP_RADIUS = 0.08
LOOP_SEGMENTS = 64
BUMP_RADIUS = 0.05
CLEARANCE = 0.03
ARC_SEGMENTS = 12
DET_TOL = 1e-8

LOOP_NAMES = (
    "omega0", "omega1", "omega2", "omega3",
    "p_plus", "p_minus", "ell1", "ell2",
)


@dataclass(frozen=True)
class LoopPath:
    """Piecewise-linear path; closed on the torus, not necessarily in C."""

    name: str
    vertices: tuple


@dataclass(frozen=True)
class MonodromyRep:
    q0: complex
    tau: complex
    matrices: dict

    def trace(self, name: str) -> complex:
        m = self.matrices[name]
        return m[0, 0] + m[1, 1]

    def traces(self) -> dict:
        return {k: self.trace(k) for k in self.matrices}


def singular_points(params: LameParams) -> dict:
    """Cell representatives of the six regular singular points.

    All four half periods are listed even when their weight vanishes; the
    loop geometry must not depend on n, only the analytic content does.
    """
    tau = params.tau
    pts = {}
    for k, hk in enumerate(half_periods(tau)):
        pts[f"omega{k}"] = hk
    pp = reduce_to_cell(params.p, tau)
    pm = reduce_to_cell(-params.p, tau)
    pts["p_plus"] = pp.cell
    pts["p_minus"] = pm.cell
    return pts


def _seg_clearance(a: complex, b: complex, w: complex) -> float:
    u = b - a
    L = abs(u)
    if L == 0:
        return abs(a - w)
    u /= L
    t = ((w - a) * u.conjugate()).real
    t = min(max(t, 0.0), L)
    return abs(a + t * u - w)


def _translates(points, tau, reach=2):
    out = []
    for name, w in points.items():
        for m in range(-reach, reach + 1):
            for n in range(-reach, reach + 1):
                out.append((name, w + m + n * tau))
    return out


def _detoured(a: complex, b: complex, obstacles, bump: float, clearance: float):
    """Vertices from a to b (a excluded) with left-hand arc detours.

    obstacles is a list of points; any that the straight segment passes
    within `clearance` of gets a circular detour of radius `bump`,
    traversed on the side that keeps the arc to the left of the direction
    of travel.
    """
    u = b - a
    L = abs(u)
    u /= L
    hits = []
    for w in obstacles:
        t = ((w - a) * u.conjugate()).real
        if t <= 0.0 or t >= L:
            continue
        d = abs(a + t * u - w)
        if d < clearance:
            hits.append((t, w, d))
    hits.sort(key=lambda h: h[0])
    verts = []
    for t, w, d in hits:
        if d >= bump:
            continue
        chord = math.sqrt(bump * bump - d * d)
        t_in = t - chord
        t_out = t + chord
        e_in = a + t_in * u
        e_out = a + t_out * u
        th1 = cmath.phase(e_in - w)
        th2 = cmath.phase(e_out - w)
        th_left = cmath.phase(1j * u)
        ccw_total = (th2 - th1) % (2.0 * math.pi)
        ccw_to_left = (th_left - th1) % (2.0 * math.pi)
        if ccw_to_left <= ccw_total:
            sweep = ccw_total
        else:
            sweep = ccw_total - 2.0 * math.pi
        verts.append(e_in)
        for k in range(1, ARC_SEGMENTS):
            ang = th1 + sweep * k / ARC_SEGMENTS
            verts.append(w + bump * cmath.exp(1j * ang))
        verts.append(e_out)
    verts.append(b)
    return verts


def _validate_clearance(vertices, translated, skip_point, clearance, name):
    for a, b in zip(vertices, vertices[1:]):
        for pname, w in translated:
            if skip_point is not None and abs(w - skip_point) < 1e-12:
                continue
            d = _seg_clearance(a, b, w)
            if d < clearance - 1e-9:
                raise ClearanceError(
                    f"loop {name}: segment [{a!r}, {b!r}] passes within "
                    f"{d:.4f} of singular point {pname} at {w!r}"
                )


def standard_loops(
    params: LameParams,
    q0: complex | None = None,
    radius: float = LOOP_RADIUS,
    ngon: int = LOOP_SEGMENTS,
    bump: float = BUMP_RADIUS,
    clearance: float = CLEARANCE,
) -> dict:
    """The eight generator loops based at q0 (default 0.11 + 0.13*tau).

    Six local loops (four half periods, two apparent points) and the two
    period translations.  Raises ClearanceError if the configuration
    cannot accommodate the standard geometry.
    """
    tau = params.tau
    if q0 is None:
        q0 = 0.11 + 0.13 * tau
    pts = singular_points(params)
    translated = _translates(pts, tau)
    for pname, w in translated:
        if abs(q0 - w) < radius + clearance:
            raise ClearanceError(
                f"basepoint {q0!r} too close to singular point {pname} at {w!r}"
            )
    loops = {}
    for name, c in pts.items():
        others = [w for _pn, w in translated if abs(w - c) > 1e-12]
        phi0 = cmath.phase(q0 - c)
        entry = c + radius * cmath.exp(1j * phi0)
        go = [q0] + _detoured(q0, entry, others, bump, clearance)
        circle = [
            c + radius * cmath.exp(1j * (phi0 + 2.0 * math.pi * k / ngon))
            for k in range(1, ngon)
        ]
        back = list(reversed(go))[1:]  # exact reverse of the outgoing leg
        vertices = tuple(go + circle + [entry] + back)
        _validate_clearance(vertices, translated, c, clearance, name)
        loops[name] = LoopPath(name=name, vertices=vertices)
    for name, shift in (("ell1", 1.0), ("ell2", tau)):
        allpts = [w for _pn, w in translated]
        vertices = tuple([q0] + _detoured(q0, q0 + shift, allpts, bump, clearance))
        _validate_clearance(vertices, translated, None, clearance, name)
        loops[name] = LoopPath(name=name, vertices=vertices)
    return loops


def transport(
    loop: LoopPath,
    params: LameParams,
    rel_tol: float = 1e-11,
    abs_tol: float = 1e-13,
) -> np.ndarray:
    """Transport matrix of the (y, y') system along the polyline."""
    tau = params.tau

    def rhs_factory(a, u):
        def f(s, yv):
            z = a + s * u
            I = potential_I(z, params)
            # rows: (y, y'); flattened (Y00, Y01, Y10, Y11)
            return np.array(
                [u * yv[2], u * yv[3], u * I * yv[0], u * I * yv[1]],
                dtype=complex,
            )
        return f

    y = np.array([1.0, 0.0, 0.0, 1.0], dtype=complex)
    for a, b in zip(loop.vertices, loop.vertices[1:]):
        seg = b - a
        L = abs(seg)
        if L == 0:
            continue
        u = seg / L
        res = ode.integrate(
            rhs_factory(a, u), y, np.array([0.0, L]),
            rel_tol=rel_tol, abs_tol=abs_tol, h0=L,
        )
        y = res.y[-1]
    return y.reshape(2, 2)


def monodromy_rep(
    params: LameParams,
    q0: complex | None = None,
    rel_tol: float = 1e-11,
    abs_tol: float = 1e-13,
    loops: dict | None = None,
    normalized: bool = True,
) -> MonodromyRep:
    """Monodromy matrices of all eight generators at the standard basepoint.

    Unimodularity |det - 1| <= 1e-8 is enforced on every matrix (the
    system is trace free, so this measures transport error).

    The two period-loop matrices are reported, by default, in the
    normalization where the half-order prefactor attached to the apparent
    pair contributes its translation sign per factor; concretely this
    multiplies the bare path-ordered transport of ell1 and ell2 by -1
    (a character of the fundamental group, so the result is still a
    representation, and traces of the local loops, determinants, and
    drift are unaffected).  In this normalization the closed-form
    weight-free solutions have exactly diagonal period matrices.  Pass
    normalized=False for the bare transport.
    """
    if loops is None:
        loops = standard_loops(params, q0=q0)
    q0_eff = loops[LOOP_NAMES[0]].vertices[0]
    mats = {}
    for name in LOOP_NAMES:
        m = transport(loops[name], params, rel_tol=rel_tol, abs_tol=abs_tol)
        det = m[0, 0] * m[1, 1] - m[0, 1] * m[1, 0]
        if abs(det - 1.0) > DET_TOL:
            raise InconsistencyError(
                f"monodromy of {name} has |det - 1| = {abs(det - 1.0):.2e}"
            )
        if normalized and name in ("ell1", "ell2"):
            m = -m
        mats[name] = m
    return MonodromyRep(q0=q0_eff, tau=params.tau, matrices=mats)


def isomonodromy_drift(
    traj,
    num_samples: int = 5,
    rel_tol: float = 1e-11,
    abs_tol: float = 1e-13,
) -> dict:
    """Max variation of each generator trace along a flow trajectory.

    Samples the trajectory at num_samples evenly spread indices, builds the
    apparent-B data at each, and returns per-loop max |trace_i - trace_j|.
    The whole point of the flow is that these should vanish to integrator
    accuracy.
    """
    idxs = np.unique(np.round(np.linspace(0, len(traj.taus) - 1, num_samples)).astype(int))
    per_loop: dict = {name: [] for name in LOOP_NAMES}
    for i in idxs:
        params = LameParams.apparent_from(
            p=complex(traj.states[i, 0]),
            A=complex(traj.states[i, 1]),
            n=traj.n,
            tau=complex(traj.taus[i]),
        )
        rep = monodromy_rep(params, rel_tol=rel_tol, abs_tol=abs_tol)
        for name in LOOP_NAMES:
            per_loop[name].append(rep.trace(name))
    out = {}
    for name, vals in per_loop.items():
        out[name] = max(
            abs(a - b) for a in vals for b in vals
        )
    return out
