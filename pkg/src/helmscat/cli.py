"""Command-line experiment runner.

Usage::

    helmscat <kind> --config <path-or-bundled-name> [--out <dir>]
    helmscat --list-bundled

Each run writes plot-ready CSV files and a ``manifest.json`` describing the
inputs, resolved knobs, headline residuals and wall time.  Data files contain
no timestamps and use ``repr`` floats, so re-running a config reproduces them
byte for byte.
"""

from __future__ import annotations

import argparse
import csv
import dataclasses
import datetime as _dt
import hashlib
import io
import json
import logging
import math
import re
import sys
import time
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import __version__
from ._accel import backend
from .biem import far_field_biem, solve_dirichlet
from .config import KINDS, ConfigError, ExperimentConfig, Section, bundled_configs, load_config
from .farfield import (
    FarField,
    grid_pair_set,
    read_far_field,
    synthesize_far_field,
    uniform_angles,
    write_far_field,
)
from .geometry import (
    Boundary,
    Circle,
    Ellipse,
    Kite,
    grating_profile,
    named_boundary,
    polar_directions,
    support_function_exact,
    support_function_sampled,
)
from .grating import GratingProblem, mode_table, solve_grating
from .lsm import FarFieldMatrix, scan, square_grid
from .mrc import DirectProblem, fit_far_field, solve_direct
from .oracles import (
    CircleScatterer,
    circle_amplitude,
    circle_far_field_matrix,
    exact_boundary_scattered_field,
)
from .sfm import (
    SupportSamples,
    approx_amplitude,
    localize_halfplanes,
    make_pair_set,
    recover_support_dirichlet,
    recover_support_robin,
    reconstruct_boundary,
)

logger = logging.getLogger("helmscat")

__all__ = ["RunReport", "RunError", "run", "main"]

MANIFEST_SCHEMA = 1


class RunError(RuntimeError):
    """A solver failure with the offending case attached."""


@dataclass
class RunReport:
    """Outcome of :func:`run`."""

    kind: str
    out_dir: Path
    files: list[str] = field(default_factory=list)
    results: dict = field(default_factory=dict)
    knobs: dict = field(default_factory=dict)
    wall_time: float = 0.0


# ---------------------------------------------------------------------------
# output helpers
# ---------------------------------------------------------------------------


def _fmt(v) -> str:
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        return repr(float(v))
    return str(v)


class _Writer:
    """Collects output files for one run."""

    def __init__(self, out_dir: Path):
        self.out_dir = out_dir
        self.files: list[str] = []
        out_dir.mkdir(parents=True, exist_ok=True)

    def csv(self, name: str, header: list[str], rows) -> None:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(header)
        for r in rows:
            w.writerow([_fmt(v) for v in r])
        (self.out_dir / name).write_text(buf.getvalue())
        self.files.append(name)

    def far_field(self, name: str, ff: FarField) -> None:
        write_far_field(ff, self.out_dir / name)
        self.files.append(name)

    def json(self, name: str, obj) -> None:
        (self.out_dir / name).write_text(json.dumps(obj, indent=2, sort_keys=True) + "\n")
        self.files.append(name)


def _slug(name: str) -> str:
    return re.sub(r"[^A-Za-z0-9]+", "-", name).strip("-").lower() or "case"


def _case_error(case: str, exc: Exception) -> RunError:
    return RunError(f"case {case!r}: {type(exc).__name__}: {exc}")


# ---------------------------------------------------------------------------
# shape parsing
# ---------------------------------------------------------------------------


def _boundary(sec: Section) -> Boundary:
    """Named boundary, optionally with ``center``/``radius``/``a``/``b``/``offset`` overrides."""
    name = sec.str("shape")
    try:
        b = named_boundary(name)
    except ValueError as exc:
        raise ConfigError(f"[{sec.name}] shape: {exc}") from None
    changes = {}
    if isinstance(b, (Circle, Ellipse)) and sec.has("center"):
        changes["center"] = tuple(sec.floats("center", length=2))
    if isinstance(b, Circle) and sec.has("radius"):
        changes["radius"] = sec.float("radius", positive=True)
    if isinstance(b, Ellipse):
        for key in ("a", "b"):
            if sec.has(key):
                changes[key] = sec.float(key, positive=True)
    if isinstance(b, Kite) and sec.has("offset"):
        changes["offset"] = tuple(sec.floats("offset", length=2))
    return dataclasses.replace(b, **changes) if changes else b


def _scatterer(sec: Section) -> CircleScatterer:
    b = _boundary(sec)
    if not isinstance(b, Circle):
        raise ConfigError(f"[{sec.name}] shape: a circle is required, got {b.kind}")
    h = sec.float("h") if sec.has("h") else None
    return CircleScatterer(tuple(float(v) for v in b.center), b.radius, h)


def _support_exact(b: Boundary, l) -> float:
    try:
        return support_function_exact(b, l)
    except TypeError:
        return support_function_sampled(b, l)


def _ratio(r: float, ref: float | None):
    return "" if ref is None or ref == 0 else r / ref


# ---------------------------------------------------------------------------
# runners
# ---------------------------------------------------------------------------


def _run_direct_mrc(cfg: ExperimentConfig, w: _Writer, rep: RunReport) -> None:
    rows, expansions = [], {}
    for sec in cfg.cases():
        b = _boundary(sec)
        knobs = {
            "shape": sec.str("shape"),
            "k": sec.float("k", positive=True),
            "alpha": list(sec.unit_vector("alpha")),
            "L": sec.int("L", 5, minimum=0),
            "J": sec.int("J", 4, minimum=1),
            "scale": sec.float("scale", 0.7, nonneg=True),
            "M": sec.int("M", 720, minimum=1),
            "w_min": sec.float("w_min", 1e-8, nonneg=True),
            "epsilon": sec.float("epsilon", 0.0, nonneg=True),
        }
        ref = sec.float("reference") if sec.has("reference") else None
        t0 = time.perf_counter()
        try:
            p = DirectProblem(b, knobs["k"], tuple(knobs["alpha"]), knobs["L"], knobs["J"], knobs["scale"],
                              knobs["M"], knobs["w_min"], knobs["epsilon"])
            e, sol = solve_direct(p)
        except (ValueError, np.linalg.LinAlgError) as exc:
            raise _case_error(sec.name, exc) from exc
        dt = time.perf_counter() - t0
        rows.append([sec.name, knobs["shape"], knobs["J"], knobs["k"], knobs["alpha"][0], knobs["alpha"][1],
                     sol.r_min, sol.rank_used, sol.converged, "" if ref is None else ref, _ratio(sol.r_min, ref)])
        expansions[sec.name] = e.to_dict()
        rep.knobs[sec.name] = knobs
        rep.results[sec.name] = {"r_min": sol.r_min, "rank": sol.rank_used, "reference": ref, "seconds": dt}
        logger.info("%s: r_min %.3e (%.2fs)", sec.name, sol.r_min, dt)
    w.csv("residuals.csv", ["case", "shape", "J", "k", "alpha_x", "alpha_y", "r_min", "rank", "converged",
                            "reference", "ratio"], rows)
    w.json("expansions.json", expansions)


def _run_direct_biem(cfg: ExperimentConfig, w: _Writer, rep: RunReport) -> None:
    cmp_rows = []
    for sec in cfg.cases():
        b = _boundary(sec)
        k = sec.float("k", positive=True)
        alpha = sec.unit_vector("alpha", "1, 0")
        n = sec.int("n", 64, minimum=2)
        eta = sec.float("eta", k, positive=True)
        ndir = sec.int("directions", 64, minimum=1)
        theta = uniform_angles(ndir)
        dirs = polar_directions(theta)
        knobs = {"shape": sec.str("shape"), "k": k, "alpha": list(alpha), "n": n, "eta": eta, "directions": ndir}
        t0 = time.perf_counter()
        try:
            A = np.asarray(far_field_biem(solve_dirichlet(b, k, alpha, n, eta), dirs))
        except (ValueError, np.linalg.LinAlgError) as exc:
            raise _case_error(sec.name, exc) from exc
        beta = math.atan2(alpha[1], alpha[0]) % (2 * math.pi)
        w.far_field(f"farfield_{_slug(sec.name)}.csv", FarField(k, [beta], theta, A[None, :]))
        res = {"seconds": None}
        if sec.bool("compare_mrc", "no"):
            knobs.update(L=sec.int("L", 5, minimum=0), J=sec.int("J", 4, minimum=1),
                         scale=sec.float("scale", 0.7, nonneg=True), M=sec.int("M", 720, minimum=1),
                         w_min=sec.float("w_min", 1e-8, nonneg=True))
            try:
                e, sol = solve_direct(DirectProblem(b, k, alpha, knobs["L"], knobs["J"], knobs["scale"],
                                                    knobs["M"], knobs["w_min"]))
            except (ValueError, np.linalg.LinAlgError) as exc:
                raise _case_error(sec.name, exc) from exc
            B = np.asarray(e.far_field(dirs))
            rel = np.abs(B - A) / np.max(np.abs(A))
            for th, a, bb, r in zip(theta, A, B, rel):
                cmp_rows.append([sec.name, th, a.real, a.imag, bb.real, bb.imag, r])
            res.update(max_rel_err=float(rel.max()), mrc_r_min=sol.r_min)
        res["seconds"] = time.perf_counter() - t0
        rep.knobs[sec.name] = knobs
        rep.results[sec.name] = res
    if cmp_rows:
        w.csv("comparison.csv", ["case", "theta", "biem_re", "biem_im", "mrc_re", "mrc_im", "rel_err"], cmp_rows)


def _run_grating(cfg: ExperimentConfig, w: _Writer, rep: RunReport) -> None:
    rows, mrows = [], []
    for sec in cfg.cases():
        knobs = {
            "profile": sec.str("profile"),
            "k": sec.float("k", 1.0, positive=True),
            "theta": sec.float("theta", positive=True),
            "period": sec.float("period", math.pi, positive=True),
            "N": sec.int("N", 256, minimum=2),
            "M": sec.int("M", 64, minimum=1),
            "w_min": sec.float("w_min", 1e-8, nonneg=True),
            "epsilon": sec.float("epsilon", 0.0, nonneg=True),
            "b_depth": sec.float("b_depth", 1.2, positive=True),
            "jmax": sec.int("jmax", 120, minimum=0),
            "refine": sec.bool("refine", "no"),
        }
        ref = sec.float("reference") if sec.has("reference") else None
        t0 = time.perf_counter()
        try:
            prof = grating_profile(knobs["profile"], knobs["period"])
            g = GratingProblem(prof, knobs["k"], knobs["theta"], knobs["b_depth"], knobs["jmax"])
            s = solve_grating(g, knobs["N"], knobs["M"], knobs["w_min"], knobs["epsilon"], knobs["refine"])
        except (ValueError, np.linalg.LinAlgError) as exc:
            raise _case_error(sec.name, exc) from exc
        dt = time.perf_counter() - t0
        rows.append([sec.name, knobs["profile"], knobs["theta"], s.r_min, s.solution.rank_used, s.converged,
                     "" if ref is None else ref, _ratio(s.r_min, ref)])
        for m in mode_table(g, sec.int("mode_report", 5, minimum=0)):
            mrows.append([sec.name, m.j, m.lambda_j, m.mu_j.real, m.mu_j.imag, m.propagating])
        rep.knobs[sec.name] = knobs
        rep.results[sec.name] = {"r_min": s.r_min, "rank": s.solution.rank_used, "reference": ref, "seconds": dt}
    w.csv("residuals.csv", ["case", "profile", "theta", "r_min", "rank", "converged", "reference", "ratio"], rows)
    w.csv("modes.csv", ["case", "j", "lambda", "mu_re", "mu_im", "propagating"], mrows)


def _sfm_ratio_table(cfg: ExperimentConfig, w: _Writer, rep: RunReport) -> None:
    rows = []
    for sec in cfg.cases():
        s = _scatterer(sec)
        k = sec.float("k", positive=True)
        nrows = sec.int("rows", 13, minimum=1)
        step = sec.float("step", "pi/24", positive=True)
        refs = sec.complexes("reference") if sec.has("reference") else []
        if refs and len(refs) != nrows:
            raise ConfigError(f"[{sec.name}] reference: expected {nrows} values, got {len(refs)}")
        l = np.array([1.0, 0.0])
        d = float(np.asarray(s.center) @ l - s.radius)
        worst = 0.0
        for i in range(nrows):
            beta = i * step
            al, ap = polar_directions(beta), polar_directions(math.pi - beta)
            ratio = approx_amplitude(d, 1.0 / s.radius, al, ap, k) / circle_amplitude(s, k, ap, al)
            ref = refs[i] if refs else None
            if ref is not None:
                worst = max(worst, abs(ratio.real - ref.real), abs(ratio.imag - ref.imag))
            rows.append([sec.name, k, beta, math.pi - beta, ratio.real, ratio.imag,
                         "" if ref is None else ref.real, "" if ref is None else ref.imag])
        rep.knobs[sec.name] = {"k": k, "rows": nrows, "step": step, "center": list(s.center), "radius": s.radius}
        rep.results[sec.name] = {"max_component_err": worst if refs else None}
    w.csv("ratio.csv", ["case", "k", "alpha_angle", "alpha_prime_angle", "ratio_re", "ratio_im",
                        "reference_re", "reference_im"], rows)


def _load_or_synthesize(sec: Section, b: Boundary, k: float, w: _Writer, name: str,
                        n_default: int = 120) -> FarField:
    if sec.has("farfield"):
        ff = read_far_field(sec.str("farfield"))
        if abs(ff.k - k) > 1e-12:
            raise ConfigError(f"[{sec.name}] farfield: file has k = {ff.k}, config has k = {k}")
        return ff
    engine = sec.str("engine", "analytic")
    h = sec.float("h") if sec.has("h") else None
    n_in = sec.int("n_in", n_default, minimum=1)
    n_out = sec.int("n_out", n_in, minimum=1)
    try:
        ff = synthesize_far_field(b, k, n_in, n_out, engine, h)
    except (ValueError, np.linalg.LinAlgError) as exc:
        raise _case_error(sec.name, exc) from exc
    w.far_field(name, ff)
    return ff


def _sfm_support(cfg: ExperimentConfig, w: _Writer, rep: RunReport) -> None:
    for sec in cfg.cases():
        b = _boundary(sec)
        k = sec.float("k", positive=True)
        tag = _slug(sec.name)
        ndir = sec.int("directions", 16, minimum=1)
        t0 = time.perf_counter()
        ff = _load_or_synthesize(sec, b, k, w, f"farfield_{tag}.csv")
        try:
            d = [recover_support_dirichlet(grid_pair_set(ff, 2 * math.pi * i / ndir)) for i in range(ndir)]
        except ValueError as exc:
            raise _case_error(sec.name, exc) from exc
        S = SupportSamples.uniform(d, k)
        exact = np.array([_support_exact(b, l) for l in S.directions])
        w.csv(f"support_{tag}.csv", ["t", "d", "d_exact"], zip(S.t, S.d, exact))
        res = {"max_support_err": float(np.max(np.abs(S.d - exact)))}
        if ndir >= 8:
            P = reconstruct_boundary(S)
            w.csv(f"boundary_{tag}.csv", ["x", "y"], P)
        if sec.has("grid"):
            x0, x1, y0, y1, hstep = sec.floats("grid", length=5)
            x = np.arange(x0, x1 + 0.5 * hstep, hstep)
            y = np.arange(y0, y1 + 0.5 * hstep, hstep)
            mask = localize_halfplanes(S, x, y)
            X, Y = np.meshgrid(x, y)
            w.csv(f"halfplanes_{tag}.csv", ["x", "y"], zip(X[mask], Y[mask]))
            c = b.ref_point()
            inside = bool(np.all(S.directions @ c >= S.d))
            far = float(np.max(np.hypot(X[mask] - c[0], Y[mask] - c[1]))) if mask.any() else None
            res.update(center_inside=inside, mask_max_radius=far)
        res["seconds"] = time.perf_counter() - t0
        rep.knobs[sec.name] = {"shape": sec.str("shape"), "k": k, "directions": ndir,
                               "engine": sec.str("engine", "analytic"), "n_in": ff.n_in, "n_out": ff.n_out}
        rep.results[sec.name] = res


def _sfm_robin_table(cfg: ExperimentConfig, w: _Writer, rep: RunReport) -> None:
    rows = []
    for sec in cfg.cases():
        s = _scatterer(sec)
        if s.h is None:
            raise ConfigError(f"[{sec.name}] h: a Robin parameter is required")
        k = sec.float("k", positive=True)
        pairs = sec.int("pairs", 32, minimum=5)
        l = np.asarray(sec.unit_vector("l", "1, 0"))
        ref = sec.float("reference") if sec.has("reference") else None
        try:
            ps = make_pair_set(l, lambda ap, al: circle_amplitude(s, k, ap, al), k, pairs, robin=True)
            d, h_est = recover_support_robin(ps)
        except (ValueError, ArithmeticError) as exc:
            raise _case_error(sec.name, exc) from exc
        d_exact = float(np.asarray(s.center) @ l - s.radius)
        rows.append([sec.name, s.h, d, h_est, d_exact, "" if ref is None else ref,
                     "" if ref is None else abs(d - ref)])
        rep.knobs[sec.name] = {"h": s.h, "k": k, "pairs": pairs, "l": list(l)}
        rep.results[sec.name] = {"d": d, "h_estimate": h_est, "reference": ref,
                                 "abs_err": None if ref is None else abs(d - ref)}
    w.csv("robin.csv", ["case", "h", "d", "h_estimate", "d_exact", "reference", "abs_err"], rows)


_SFM_TASKS = {"ratio-table": _sfm_ratio_table, "support": _sfm_support, "robin-table": _sfm_robin_table}


def _run_sfm(cfg: ExperimentConfig, w: _Writer, rep: RunReport) -> None:
    task = cfg.section("experiment").str("task", "support")
    if task not in _SFM_TASKS:
        raise ConfigError(f"[experiment] task: must be one of {', '.join(_SFM_TASKS)}, got {task!r}")
    _SFM_TASKS[task](cfg, w, rep)


def _run_lsm(cfg: ExperimentConfig, w: _Writer, rep: RunReport) -> None:
    for sec in cfg.cases():
        b = _boundary(sec)
        k = sec.float("k", positive=True)
        N = sec.int("N", 128, minimum=2)
        tag = _slug(sec.name)
        t0 = time.perf_counter()
        ff = _load_or_synthesize(sec, b, k, w, f"farfield_{tag}.csv", n_default=N)
        try:
            m = FarFieldMatrix(ff.matrix(), k)
        except ValueError as exc:
            raise _case_error(sec.name, exc) from exc
        center = sec.floats("grid_center", list(b.ref_point()), length=2)
        x, y = square_grid(center, sec.float("grid_side", 12.0, positive=True), sec.int("grid_n", 61, minimum=2))
        sc = scan(m, x, y, sec.float("cutoff", 1e-12, positive=True))
        w.csv(f"scan_{tag}.csv", ["x", "y", "log_ck", "log_k"], sc.rows())
        c = b.ref_point()
        res = {"retained": sc.retained, "seconds": None}
        for v in ("ck", "kirsch"):
            am = sc.argmin("ck" if v == "ck" else "k")
            res[f"argmin_{v}"] = [float(am[0]), float(am[1])]
            res[f"argmin_{v}_distance"] = float(np.hypot(*(am - c)))
        res["seconds"] = time.perf_counter() - t0
        rep.knobs[sec.name] = {"shape": sec.str("shape"), "k": k, "N": ff.n_in, "grid_center": center,
                               "grid_side": float(x[-1] - x[0]), "grid_n": int(x.size)}
        rep.results[sec.name] = res


def _run_illposed(cfg: ExperimentConfig, w: _Writer, rep: RunReport) -> None:
    sec = cfg.section("problem")
    s = _scatterer(sec)
    k = sec.float("k", positive=True)
    L = sec.int("L", 5, minimum=0)
    pole = sec.floats("pole", length=2)
    M = sec.int("M", 120, minimum=1)
    alpha = sec.unit_vector("alpha", "1, 0")
    nrows = sec.int("rows", 20, minimum=1)
    beta = math.atan2(alpha[1], alpha[0])
    th = uniform_angles(M)
    target = circle_far_field_matrix(s, k, th, np.array([beta]))[:, 0]
    try:
        e, r_min, sol = fit_far_field(target, polar_directions(th), pole, L, k, sec.float("w_min", 1e-8, nonneg=True))
    except (ValueError, np.linalg.LinAlgError) as exc:
        raise _case_error("problem", exc) from exc
    rt = uniform_angles(nrows)
    pts = np.asarray(s.center) + s.radius * polar_directions(rt)
    vc = np.asarray(e.near_field(pts))
    v = np.asarray(exact_boundary_scattered_field(s, k, alpha, rt))
    w.csv("table5.csv", ["theta", "vc_re", "vc_im", "v_re", "v_im"],
          zip(rt, vc.real, vc.imag, v.real, v.imag))
    w.json("fit.json", e.to_dict())
    rep.knobs["problem"] = {"k": k, "L": L, "pole": pole, "M": M, "alpha": list(alpha), "rows": nrows}
    rep.results["problem"] = {"r_min": r_min, "rank": sol.rank_used,
                              "max_trace_discrepancy": float(np.max(np.abs(vc - v)))}
    if sec.has("reference_vc"):
        ref = np.asarray(sec.complexes("reference_vc"))
        if ref.size != nrows:
            raise ConfigError(f"[problem] reference_vc: expected {nrows} values, got {ref.size}")
        err = np.maximum(np.abs(vc.real - ref.real), np.abs(vc.imag - ref.imag))
        rep.results["problem"]["reference_component_err"] = [float(e) for e in err]


def _run_synthesize(cfg: ExperimentConfig, w: _Writer, rep: RunReport) -> None:
    for sec in cfg.cases():
        b = _boundary(sec)
        k = sec.float("k", positive=True)
        ff = _load_or_synthesize(sec, b, k, w, f"farfield_{_slug(sec.name)}.csv")
        rep.knobs[sec.name] = {"shape": sec.str("shape"), "k": k, "engine": sec.str("engine", "analytic"),
                               "h": sec.float("h") if sec.has("h") else None, "n_in": ff.n_in, "n_out": ff.n_out}
        rep.results[sec.name] = {"max_abs": float(np.max(np.abs(ff.values)))}


_RUNNERS = {
    "direct-mrc": _run_direct_mrc,
    "direct-biem": _run_direct_biem,
    "grating-mrc": _run_grating,
    "inverse-sfm": _run_sfm,
    "inverse-lsm": _run_lsm,
    "illposed-demo": _run_illposed,
    "synthesize": _run_synthesize,
}


def _sha256(path: Path) -> str:
    return hashlib.sha256(path.read_bytes()).hexdigest()


def run(cfg: ExperimentConfig, out_dir) -> RunReport:
    """Run an experiment, writing data files and ``manifest.json`` to ``out_dir``.

    Raises
    ------
    ConfigError
        For invalid or missing fields (the message names the field).
    RunError
        When a solver fails; the message names the case.
    """
    out = Path(out_dir)
    rep = RunReport(cfg.kind, out)
    w = _Writer(out)
    started = _dt.datetime.now(_dt.timezone.utc).isoformat(timespec="seconds")
    t0 = time.perf_counter()
    _RUNNERS[cfg.kind](cfg, w, rep)
    rep.wall_time = time.perf_counter() - t0
    rep.files = list(w.files)
    manifest = {
        "schema": MANIFEST_SCHEMA,
        "kind": cfg.kind,
        "title": cfg.title,
        "version": __version__,
        "backend": backend(),
        "config": {"source": cfg.source, "sections": cfg.sections},
        "knobs": rep.knobs,
        "results": rep.results,
        "files": {name: _sha256(out / name) for name in rep.files},
        "started": started,
        "wall_time_s": rep.wall_time,
    }
    (out / "manifest.json").write_text(json.dumps(manifest, indent=2, sort_keys=True, default=_json_default) + "\n")
    return rep


def _json_default(o):
    if isinstance(o, np.generic):
        return o.item()
    if isinstance(o, np.ndarray):
        return o.tolist()
    raise TypeError(f"not JSON serialisable: {type(o).__name__}")


def _parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="helmscat", description="2-D Helmholtz scattering experiments.")
    p.add_argument("--list-bundled", action="store_true", help="list shipped experiment configs and exit")
    p.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = p.add_subparsers(dest="kind", metavar="<kind>")
    for kind in KINDS:
        sp = sub.add_parser(kind, help=f"run a {kind} experiment")
        sp.add_argument("--config", required=True, help="config file, or the name of a bundled config")
        sp.add_argument("--out", default=None, help="output directory (default: helmscat-out/<config>)")
    return p


def main(argv: list[str] | None = None) -> int:
    parser = _parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(name)s: %(message)s")
    if args.list_bundled:
        for name, desc in bundled_configs().items():
            print(f"{name:10s} {desc}")
        return 0
    if args.kind is None:
        parser.print_usage(sys.stderr)
        return 2
    try:
        cfg = load_config(args.config)
        if cfg.kind != args.kind:
            raise ConfigError(f"[experiment] kind: config is {cfg.kind!r} but subcommand is {args.kind!r}")
        stem = Path(args.config).name.removesuffix(".cfg")
        out = Path(args.out) if args.out else Path("helmscat-out") / stem
        rep = run(cfg, out)
    except ConfigError as exc:
        print(f"helmscat: config error: {exc}", file=sys.stderr)
        return 2
    except (RunError, OSError) as exc:
        print(f"helmscat: {exc}", file=sys.stderr)
        return 1
    print(f"wrote {len(rep.files) + 1} files to {rep.out_dir} in {rep.wall_time:.2f}s")
    return 0


if __name__ == "__main__":
    sys.exit(main())
