"""Command-line front end: scenario parsing, runs, CSV/JSON artifacts.

Subcommands mirror the library modules: eval | flow | hitchin | monodromy |
convert | collapse | verify.  Every run accepts direct flags or a scenario
file (INI-style sections; flags win).  Trajectories serialize as CSV with
convention metadata in comment lines, reports as text, structured data as
JSON with complex numbers in "re+imj" form.  Exit codes: 0 success,
2 validation problem, 3 numerical failure.
"""
from __future__ import annotations

import argparse
import configparser
import json
import logging
import math
import os
import sys

import numpy as np

from . import collapse as collapse_mod
from . import correspondence as corr
from .elliptic import lattice_invariants, weierstrass_suite, wp
from .errors import IslError, DomainError, ValidationError
from .flow import integrate_flow, alphas_from_n, elliptic_pvi_residual
from .hitchin import (
    HitchinSeed,
    constraint_residual,
    hitchin_trajectory,
)
from .lame import LameParams, apparent_B
from .monodromy import (
    BUMP_RADIUS,
    CLEARANCE,
    LOOP_NAMES,
    LOOP_RADIUS,
    LOOP_SEGMENTS,
    monodromy_rep,
)
from .verify import run_suite

log = logging.getLogger("isl")

META_LINES = (
    "# e-ordering: e1 = wp(1/2), e2 = wp(tau/2), e3 = wp((1+tau)/2)",
    "# p-representative: reduced cell, higher Im preferred, ties to higher Re",
    f"# loop-constants: radius={LOOP_RADIUS} segments={LOOP_SEGMENTS} "
    f"bump={BUMP_RADIUS} clearance={CLEARANCE}",
)


# ---------------------------------------------------------------------------
# value parsing / formatting

def parse_complex(text: str) -> complex:
    t = str(text).strip().replace(" ", "")
    if t.startswith("(") and t.endswith(")"):
        t = t[1:-1]
    t = t.replace("i", "j")
    try:
        return complex(t)
    except ValueError as exc:
        raise ValidationError(f"cannot parse complex number from {text!r}") from exc


def parse_complex_list(text: str, expect: int | None = None) -> tuple:
    vals = tuple(parse_complex(v) for v in str(text).split(",") if v.strip())
    if expect is not None and len(vals) != expect:
        raise ValidationError(
            f"expected {expect} comma-separated values, got {len(vals)} "
            f"in {text!r}"
        )
    return vals


def parse_path(text: str) -> tuple:
    verts = tuple(parse_complex(v) for v in str(text).split(":") if v.strip())
    if len(verts) < 2:
        raise ValidationError(
            f"tau path needs at least two ':'-separated vertices, got {text!r}"
        )
    return verts


def fmt_complex(z: complex) -> str:
    z = complex(z)
    re = repr(z.real)
    im = repr(z.imag)
    sign = "" if im.startswith("-") else "+"
    return f"{re}{sign}{im}j"


def _json_default(obj):
    if isinstance(obj, complex):
        return fmt_complex(obj)
    if isinstance(obj, (np.floating, np.integer)):
        return obj.item()
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    raise TypeError(f"not serializable: {type(obj).__name__}")


def dump_json(payload) -> str:
    return json.dumps(payload, default=_json_default, indent=2,
                      sort_keys=True) + "\n"


# ---------------------------------------------------------------------------
# scenario files

def load_scenario(path: str) -> dict:
    """INI scenario: [scenario] kind=...; [parameters] ...; [path]
    vertices=...; [output] file=..., format=..."""
    cp = configparser.ConfigParser()
    cp.optionxform = str  # keys are flag names; A vs a matters
    read = cp.read(path)
    if not read:
        raise ValidationError(f"cannot read scenario file {path!r}")
    out = {"kind": None, "parameters": {}, "path": None,
           "output_file": None, "output_format": None}
    if cp.has_section("scenario"):
        out["kind"] = cp.get("scenario", "kind", fallback=None)
    if cp.has_section("parameters"):
        out["parameters"] = dict(cp.items("parameters"))
    if cp.has_section("path"):
        out["path"] = cp.get("path", "vertices", fallback=None)
    if cp.has_section("output"):
        out["output_file"] = cp.get("output", "file", fallback=None)
        out["output_format"] = cp.get("output", "format", fallback=None)
    return out


class Options:
    """Merged view over CLI flags and an optional scenario file."""

    def __init__(self, args: argparse.Namespace, command: str):
        self.command = command
        self.scenario = None
        if getattr(args, "scenario", None):
            self.scenario = load_scenario(args.scenario)
            kind = self.scenario.get("kind")
            if kind and kind != command:
                raise ValidationError(
                    f"scenario kind {kind!r} does not match subcommand "
                    f"{command!r}"
                )
        self.args = args

    def get(self, name: str, default=None):
        val = getattr(self.args, name.replace("-", "_"), None)
        if val is not None:
            return val
        if self.scenario:
            if name == "tau-path" and self.scenario.get("path"):
                return self.scenario["path"]
            if name in self.scenario["parameters"]:
                return self.scenario["parameters"][name]
        return default

    def require(self, name: str):
        val = self.get(name)
        if val is None:
            raise ValidationError(f"missing required option --{name}")
        return val

    @property
    def out(self):
        return self.get("out") or (
            self.scenario["output_file"] if self.scenario else None)

    @property
    def fmt(self):
        return self.get("format") or (
            self.scenario["output_format"] if self.scenario else None)


# ---------------------------------------------------------------------------
# artifact writing

def emit(data_text: str, report_lines, out_path):
    """Data to --out (or stdout); the report to stdout (or stderr when the
    data already owns stdout)."""
    if out_path:
        with open(out_path, "w") as fh:
            fh.write(data_text)
        for line in report_lines:
            print(line)
        if report_lines:
            log.info("report printed; data written to %s", out_path)
    else:
        sys.stdout.write(data_text)
        for line in report_lines:
            print(line, file=sys.stderr)


def trajectory_csv(traj, meta: dict) -> str:
    lines = ["# isl trajectory"]
    lines.extend(META_LINES)
    for k in sorted(meta):
        lines.append(f"# {k}: {meta[k]}")
    lines.append("tau_re,tau_im,p_re,p_im,A_re,A_im,wp_p_re,wp_p_im")
    for k in range(len(traj.taus)):
        tau = complex(traj.taus[k])
        p = complex(traj.states[k, 0])
        A = complex(traj.states[k, 1])
        w = wp(p, tau)
        row = (tau.real, tau.imag, p.real, p.imag, A.real, A.imag,
               w.real, w.imag)
        lines.append(",".join(repr(v) for v in row))
    return "\n".join(lines) + "\n"


def trajectory_json(traj, meta: dict) -> str:
    samples = []
    for k in range(len(traj.taus)):
        tau = complex(traj.taus[k])
        p = complex(traj.states[k, 0])
        samples.append({
            "tau": tau,
            "p": p,
            "A": complex(traj.states[k, 1]),
            "wp_p": wp(p, tau),
        })
    return dump_json({"kind": traj.kind, "metadata": meta,
                      "samples": samples})


def table_csv(header, rows, meta: dict, title: str) -> str:
    lines = [f"# isl {title}"]
    lines.extend(META_LINES)
    for k in sorted(meta):
        lines.append(f"# {k}: {meta[k]}")
    lines.append(",".join(header))
    for row in rows:
        lines.append(",".join(
            repr(v) if isinstance(v, float) else str(v) for v in row))
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# subcommand runners

def run_eval(opt: Options) -> int:
    tau = parse_complex(opt.require("tau"))
    zs = parse_complex_list(opt.require("z"))
    inv = lattice_invariants(tau)
    meta = {
        "tau": fmt_complex(tau),
        "e1": fmt_complex(inv.e1), "e2": fmt_complex(inv.e2),
        "e3": fmt_complex(inv.e3), "eta1": fmt_complex(inv.eta1),
    }
    rows = []
    samples = []
    for z in zs:
        w = weierstrass_suite(z, tau)
        rows.append((z.real, z.imag, w.sigma.real, w.sigma.imag,
                     w.zeta.real, w.zeta.imag, w.wp.real, w.wp.imag,
                     w.wp_prime.real, w.wp_prime.imag))
        samples.append({"z": z, "sigma": w.sigma, "zeta": w.zeta,
                        "wp": w.wp, "wp_prime": w.wp_prime})
    if (opt.fmt or "csv") == "json":
        text = dump_json({"kind": "eval", "metadata": meta,
                          "samples": samples})
    else:
        header = ("z_re,z_im,sigma_re,sigma_im,zeta_re,zeta_im,"
                  "wp_re,wp_im,wp_prime_re,wp_prime_im").split(",")
        text = table_csv(header, rows, meta, "eval")
    emit(text, [], opt.out)
    return 0


def _check_tol(opt: Options) -> float:
    tol = opt.get("tol")
    return float(tol) if tol is not None else 1e-6


def run_flow(opt: Options) -> int:
    p0 = parse_complex(opt.require("p0"))
    A0 = parse_complex(opt.require("A0"))
    n = parse_complex_list(opt.require("n"), expect=4)
    path = parse_path(opt.require("tau-path"))
    samples = int(opt.get("samples", 200))
    rel_tol = float(opt.get("rel-tol", 1e-10))
    traj = integrate_flow(p0, A0, n, path, rel_tol=rel_tol,
                          samples_per_segment=samples)
    meta = {
        "n": ",".join(fmt_complex(v) for v in n),
        "path": ":".join(fmt_complex(v) for v in path),
        "rel_tol": repr(rel_tol),
    }
    report = []
    status = 0
    if opt.get("check", "none") == "pvi":
        res = elliptic_pvi_residual(traj, alphas_from_n(n))
        tol = _check_tol(opt)
        ok = res <= tol
        report.append(f"elliptic-pvi max residual: {res:.3e} "
                      f"({'pass' if ok else 'FAIL'}, tol {tol:.1e})")
        if not ok:
            status = 3
    end = traj.endpoint()
    report.append(f"endpoint: tau={fmt_complex(end.tau)} "
                  f"p={fmt_complex(end.p)} A={fmt_complex(end.A)}")
    text = (trajectory_json(traj, meta) if (opt.fmt or "csv") == "json"
            else trajectory_csv(traj, meta))
    emit(text, report, opt.out)
    return status


def run_hitchin(opt: Options) -> int:
    r = float(opt.require("r"))
    s = float(opt.require("s"))
    seed = HitchinSeed(r, s)
    path = parse_path(opt.require("tau-path"))
    samples = int(opt.get("samples", 200))
    traj = hitchin_trajectory(seed, path, samples_per_segment=samples)
    meta = {
        "seed": f"r={r} s={s}",
        "path": ":".join(fmt_complex(v) for v in path),
        "family": "weight-free closed form",
    }
    report = []
    status = 0
    check = opt.get("check", "none")
    tol = _check_tol(opt)
    if check == "pvi":
        res = elliptic_pvi_residual(traj, alphas_from_n((0, 0, 0, 0)))
        ok = res <= tol
        report.append(f"elliptic-pvi max residual: {res:.3e} "
                      f"({'pass' if ok else 'FAIL'}, tol {tol:.1e})")
        status = 0 if ok else 3
    elif check == "constraint":
        worst = 0.0
        for k in range(0, len(traj.taus), max(1, len(traj.taus) // 32)):
            worst = max(worst, constraint_residual(
                seed, complex(traj.taus[k]), p=complex(traj.states[k, 0])))
        ok = worst <= tol
        report.append(f"pairing-constraint max residual: {worst:.3e} "
                      f"({'pass' if ok else 'FAIL'}, tol {tol:.1e})")
        status = 0 if ok else 3
    elif check != "none":
        raise ValidationError(f"unknown --check {check!r}")
    text = (trajectory_json(traj, meta) if (opt.fmt or "csv") == "json"
            else trajectory_csv(traj, meta))
    emit(text, report, opt.out)
    return status


def run_monodromy(opt: Options) -> int:
    n = parse_complex_list(opt.require("n"), expect=4)
    p = parse_complex(opt.require("p"))
    A = parse_complex(opt.require("A"))
    tau = parse_complex(opt.require("tau"))
    B_raw = opt.get("B")
    if B_raw is None:
        params = LameParams.apparent_from(n=n, p=p, A=A, tau=tau)
    else:
        params = LameParams(n=n, p=p, A=A, B=parse_complex(B_raw), tau=tau)
    q0_raw = opt.get("q0")
    q0 = parse_complex(q0_raw) if q0_raw is not None else None
    normalized = not bool(opt.get("bare", False))
    rep = monodromy_rep(params, q0=q0, normalized=normalized)
    meta = {
        "tau": fmt_complex(tau),
        "n": ",".join(fmt_complex(v) for v in n),
        "p": fmt_complex(p), "A": fmt_complex(params.A),
        "B": fmt_complex(params.B),
        "q0": fmt_complex(rep.q0),
        "period-normalization": "character-twisted" if normalized else "bare",
    }
    report = [f"monodromy traces at q0 = {fmt_complex(rep.q0)}:"]
    rows = []
    recs = {}
    for name in LOOP_NAMES:
        m = rep.matrices[name]
        tr = m[0, 0] + m[1, 1]
        det = m[0, 0] * m[1, 1] - m[0, 1] * m[1, 0]
        report.append(f"  {name:<8} trace = {fmt_complex(tr)}")
        rows.append((name, tr.real, tr.imag, det.real, det.imag,
                     m[0, 0].real, m[0, 0].imag, m[0, 1].real, m[0, 1].imag,
                     m[1, 0].real, m[1, 0].imag, m[1, 1].real, m[1, 1].imag))
        recs[name] = {"trace": tr, "det": det,
                      "matrix": [[m[0, 0], m[0, 1]], [m[1, 0], m[1, 1]]]}
    if (opt.fmt or "csv") == "json":
        text = dump_json({"kind": "monodromy", "metadata": meta,
                          "loops": recs})
    else:
        header = ("loop,tr_re,tr_im,det_re,det_im,m00_re,m00_im,m01_re,"
                  "m01_im,m10_re,m10_im,m11_re,m11_im").split(",")
        text = table_csv(header, rows, meta, "monodromy")
    emit(text, report, opt.out)
    return 0


def _lame_from_record(rec: dict) -> LameParams:
    try:
        n = tuple(parse_complex(v) for v in rec["n"])
        p = parse_complex(rec["p"])
        A = parse_complex(rec["A"])
        tau = parse_complex(rec["tau"])
    except KeyError as exc:
        raise ValidationError(f"equation record missing field {exc}") from exc
    if "B" in rec:
        return LameParams(n=n, p=p, A=A, B=parse_complex(rec["B"]), tau=tau)
    return LameParams.apparent_from(n=n, p=p, A=A, tau=tau)


def _fuchs_from_record(rec: dict) -> corr.FuchsianParams:
    try:
        thetas = tuple(parse_complex(v) for v in rec["thetas"])
        t = parse_complex(rec["t"])
        lam = parse_complex(rec["lam"])
        mu = parse_complex(rec["mu"])
    except KeyError as exc:
        raise ValidationError(f"equation record missing field {exc}") from exc
    if len(thetas) != 4:
        raise ValidationError("thetas must have four entries")
    if "K" in rec:
        return corr.FuchsianParams(
            t=t, lam=lam, mu=mu, K=parse_complex(rec["K"]),
            theta0=thetas[0], theta1=thetas[1], theta_t=thetas[2],
            theta_inf=thetas[3])
    return corr.FuchsianParams.from_state(lam, mu, t, thetas)


def run_convert(opt: Options) -> int:
    direction = opt.require("direction")
    src = opt.require("input")
    with open(src) as fh:
        rec = json.load(fh)
    if direction == "lame2fuchs":
        params = _lame_from_record(rec)
        fp = corr.lame_to_fuchsian(params)
        back = corr.fuchsian_to_lame(fp, params.tau, near=params.p)
        diff = max(abs(back.p - params.p), abs(back.A - params.A),
                   abs(back.B - params.B))
        payload = {
            "t": fp.t, "lam": fp.lam, "mu": fp.mu, "K": fp.K,
            "thetas": list(fp.thetas),
            "alpha_hat": fp.alpha_hat, "kappa_hat": fp.kappa_hat,
            "round_trip": {"max_diff": diff,
                           "status": "pass" if diff < 1e-10 else "fail"},
        }
    elif direction == "fuchs2lame":
        tau = parse_complex(opt.require("tau"))
        fp = _fuchs_from_record(rec)
        params = corr.fuchsian_to_lame(fp, tau)
        fp2 = corr.lame_to_fuchsian(params)
        diff = max(abs(fp2.lam - fp.lam), abs(fp2.mu - fp.mu),
                   abs(fp2.K - fp.K))
        payload = {
            "n": list(params.n), "p": params.p, "A": params.A,
            "B": params.B, "tau": params.tau,
            "round_trip": {"max_diff": diff,
                           "status": "pass" if diff < 1e-10 else "fail"},
        }
    else:
        raise ValidationError(
            f"--direction must be lame2fuchs or fuchs2lame, got {direction!r}")
    emit(dump_json(payload), [f"round trip: {payload['round_trip']['status']} "
                              f"(max diff {payload['round_trip']['max_diff']:.2e})"],
         opt.out)
    return 0 if payload["round_trip"]["status"] == "pass" else 3


def run_collapse(opt: Options) -> int:
    n = parse_complex_list(opt.require("n"), expect=4)
    branch = opt.require("branch")
    h_tilde = parse_complex(opt.get("h-tilde", "0.05+0.02i"))
    tau0 = parse_complex(opt.require("tau0"))
    d_seed = float(opt.get("seed-dist", 9e-3))
    d_min = float(opt.get("min-dist", 4e-5))
    samples = int(opt.get("samples", 400))
    cd = collapse_mod.collapse_constants(n, branch, h_tilde, tau0)
    p0, A0, tau_seed = collapse_mod.collapse_seed_state(cd, d_seed)
    log.info("steering flow from tau0 + %g toward tau0 + %g", d_seed, d_min)
    traj = integrate_flow(p0, A0, n, (tau_seed, tau0 + d_min),
                          rel_tol=1e-12, abs_tol=1e-14,
                          samples_per_segment=samples)
    fit = collapse_mod.fit_collapse(traj)
    afit = collapse_mod.fit_a_series(traj)
    h_best = (afit.e + lattice_invariants(fit.tau0).eta1) / (4j * math.pi)
    branch_fit = collapse_mod.branch_from_c0sq(n[0], fit.c0_squared)
    cd_fit = collapse_mod.collapse_constants(n, branch_fit, h_best, fit.tau0)
    rel = abs(fit.c0_squared - cd.c0_squared) / abs(cd.c0_squared)
    report = [
        f"branch-point fit: tau0 = {fmt_complex(fit.tau0)} "
        f"({fit.n_samples} samples, residual {fit.residual:.2e})",
        f"c0^2 = {fmt_complex(fit.c0_squared)} "
        f"(quantized {fmt_complex(cd.c0_squared)}, rel err {rel:.2e})",
        f"branch: {branch_fit}  m = {fmt_complex(cd_fit.m)}",
        f"h_tilde = {fmt_complex(h_best)} (A-series) / "
        f"{fmt_complex(fit.h_tilde)} (p^2 fit)",
        f"A-series: c = {fmt_complex(afit.c)} e = {fmt_complex(afit.e)}",
        f"B0 = {fmt_complex(cd_fit.B0)}",
    ]
    meta = {
        "n": ",".join(fmt_complex(v) for v in n),
        "branch": branch_fit,
        "tau0": fmt_complex(fit.tau0),
        "c0_squared": fmt_complex(fit.c0_squared),
        "h_tilde": fmt_complex(h_best),
        "B0": fmt_complex(cd_fit.B0),
    }
    if (opt.fmt or "csv") == "json":
        text = dump_json({
            "kind": "collapse", "metadata": meta,
            "fit": {"tau0": fit.tau0, "c0_squared": fit.c0_squared,
                    "h_tilde_p2": fit.h_tilde, "h_tilde_a": h_best,
                    "c": afit.c, "e": afit.e, "B0": cd_fit.B0,
                    "branch": branch_fit, "m": cd_fit.m,
                    "residual": fit.residual},
        })
    else:
        text = trajectory_csv(traj, meta)
    emit(text, report, opt.out)
    return 0


def run_verify(opt: Options) -> int:
    suite = opt.get("suite", "all")
    tau_raw = opt.get("tau")
    tau = parse_complex(tau_raw) if tau_raw is not None else None
    results = run_suite(suite, tau=tau)
    report = [r.row() for r in results]
    n_fail = sum(1 for r in results if not r.passed)
    report.append(f"{len(results) - n_fail}/{len(results)} checks passed")
    rows = [(r.suite, r.name, r.measured, r.tolerance, r.mode,
             "pass" if r.passed else "FAIL") for r in results]
    meta = {"suite": suite}
    if tau is not None:
        meta["tau"] = fmt_complex(tau)
    if (opt.fmt or "csv") == "json":
        text = dump_json({
            "kind": "verify", "metadata": meta,
            "checks": [
                {"suite": r.suite, "name": r.name, "measured": r.measured,
                 "tolerance": r.tolerance, "mode": r.mode,
                 "passed": r.passed}
                for r in results
            ],
        })
    else:
        header = ["suite", "check", "measured", "tolerance", "mode", "status"]
        text = table_csv(header, rows, meta, "verify")
    emit(text, report, opt.out)
    return 0 if n_fail == 0 else 3


# ---------------------------------------------------------------------------
# argument wiring

def _build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--tol", type=float, default=argparse.SUPPRESS,
                        help="threshold for --check style reports "
                             "(default 1e-6)")
    common.add_argument("--out", default=argparse.SUPPRESS,
                        help="write the data artifact to this file")
    common.add_argument("--format", choices=("csv", "json"),
                        default=argparse.SUPPRESS, help="artifact format")
    common.add_argument("--scenario", default=argparse.SUPPRESS,
                        help="INI scenario file supplying defaults")

    ap = argparse.ArgumentParser(
        prog="isl",
        description="Deformation theory of the torus equation with an "
                    "apparent pair: flows, exact families, monodromy, the "
                    "projective-line dictionary, collapse fits.",
    )
    ap.add_argument("--tol", type=float, help=argparse.SUPPRESS)
    ap.add_argument("--out", help=argparse.SUPPRESS)
    ap.add_argument("--format", choices=("csv", "json"),
                    help=argparse.SUPPRESS)
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("eval", parents=[common],
                       help="evaluate sigma/zeta/wp/wp' at points")
    p.add_argument("--tau")
    p.add_argument("--z", help="comma-separated evaluation points")

    p = sub.add_parser("flow", parents=[common],
                       help="integrate the Hamiltonian deformation flow")
    p.add_argument("--p0")
    p.add_argument("--A0")
    p.add_argument("--n", help="four comma-separated weights")
    p.add_argument("--tau-path", help="colon-separated tau vertices")
    p.add_argument("--samples", type=int)
    p.add_argument("--rel-tol", type=float)
    p.add_argument("--check", choices=("none", "pvi"))

    p = sub.add_parser("hitchin", parents=[common],
                       help="closed-form weight-free trajectory")
    p.add_argument("--r", type=float)
    p.add_argument("--s", type=float)
    p.add_argument("--tau-path")
    p.add_argument("--samples", type=int)
    p.add_argument("--check", choices=("none", "pvi", "constraint"))

    p = sub.add_parser("monodromy", parents=[common],
                       help="transport the eight generators at one tau")
    p.add_argument("--n")
    p.add_argument("--p")
    p.add_argument("--A")
    p.add_argument("--B")
    p.add_argument("--tau")
    p.add_argument("--q0")
    p.add_argument("--bare", action="store_true", default=None,
                   help="report the raw period transport (no character twist)")

    p = sub.add_parser("convert", parents=[common],
                       help="map equation data between the torus and the line")
    p.add_argument("--direction", choices=("lame2fuchs", "fuchs2lame"))
    p.add_argument("--input", help="JSON equation record")
    p.add_argument("--tau", help="target modulus for fuchs2lame")

    p = sub.add_parser("collapse", parents=[common],
                       help="steer into a branch point and fit the constants")
    p.add_argument("--n")
    p.add_argument("--branch", choices=("plus", "minus"))
    p.add_argument("--h-tilde")
    p.add_argument("--tau0")
    p.add_argument("--seed-dist", type=float)
    p.add_argument("--min-dist", type=float)
    p.add_argument("--samples", type=int)

    p = sub.add_parser("verify", parents=[common],
                       help="run a residual verification suite")
    p.add_argument("--suite", help="suite name or 'all'")
    p.add_argument("--tau", help="pin the sample modulus where supported")
    return ap


RUNNERS = {
    "eval": run_eval,
    "flow": run_flow,
    "hitchin": run_hitchin,
    "monodromy": run_monodromy,
    "convert": run_convert,
    "collapse": run_collapse,
    "verify": run_verify,
}

_VALIDATION = (ValidationError, DomainError)


def main(argv=None) -> int:
    level = os.environ.get("ISL_LOG", "warning").upper()
    logging.basicConfig(level=getattr(logging, level, logging.WARNING),
                        format="%(name)s %(levelname)s %(message)s")
    ap = _build_parser()
    args = ap.parse_args(argv)
    try:
        opt = Options(args, args.command)
        return RUNNERS[args.command](opt)
    except _VALIDATION as exc:
        _error_record(exc, args.command, 2)
        return 2
    except IslError as exc:
        _error_record(exc, args.command, 3)
        return 3
    except OSError as exc:
        _error_record(exc, args.command, 2)
        return 2


def _error_record(exc: Exception, command: str, code: int):
    rec = {"error": type(exc).__name__, "message": str(exc),
           "command": command, "exit": code}
    print(json.dumps(rec, sort_keys=True), file=sys.stderr)


if __name__ == "__main__":
    raise SystemExit(main())
