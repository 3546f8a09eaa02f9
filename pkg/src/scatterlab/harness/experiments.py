"""The experiment registry: grid cells, per-cell verdicts and summary fits."""
from __future__ import annotations

import math
from dataclasses import dataclass
from math import pi
from typing import Callable

import numpy as np

from .. import greens as gr
from .. import oldfun as of
from .. import semiclassics as sc
from ..geometry import SphereContext, basis_vector, geodesic_distance, random_point
from ..specfun import ratio_table
from ..zonal import (
    ZonalExpansion, build_interpolation_matrix, certify_invertible, dominance_threshold,
)
from .config import ExperimentConfig
from .rates import fit_plane, fit_rate
from .report import VerdictRow

TAIL_ELL_MAX = 100_000
ASYMPTOTIC_REGIME = 1 / 8


@dataclass(frozen=True)
class Experiment:
    kind: str
    anchor: str
    description: str
    cells: Callable
    run_cell: Callable
    summarize: Callable


def make_rng(seed: int) -> np.random.Generator:
    """Counter-based generator so that draws depend only on the recorded seed."""
    return np.random.Generator(np.random.Philox(key=int(seed)))


def level_for(ctx: SphereContext, h_inv: float, sigma: float, rho: int) -> gr.SemiclassicalPoint:
    """Level (ell_n, sigma) with ell_n of parity rho and h^{-1} within about one unit of ``h_inv``."""
    a = ctx.alpha
    x = -a + math.sqrt(a * a + h_inv**2)
    ell = max(0, int(round(x - sigma)))
    if (ell % 2 == 0) != (rho == 1):
        ell += 1
    return gr.SemiclassicalPoint(ctx.d, ell, float(sigma))


def _north(ctx: SphereContext) -> np.ndarray:
    return basis_vector(ctx.d, ctx.d)


def _beta(cfg: ExperimentConfig, default) -> np.ndarray:
    if cfg.beta is not None:
        return np.asarray(cfg.beta, dtype=complex)
    if cfg.m_plus is not None and 0 < cfg.sigma < 1:
        return gr.choose_beta_for_weights(cfg.sigma, cfg.rho, cfg.m_plus, cfg.m_minus)
    return np.asarray(default, dtype=complex)


def _row(cfg, cell=None, **kw) -> VerdictRow:
    cell = cell or {}
    params = dict(cfg.parameters())
    params.update(kw.pop("params", {}))
    return VerdictRow(
        experiment=cfg.name, d=cfg.d, h_inv=cell.get("h_inv"), upsilon=cell.get("upsilon"),
        sigma=kw.pop("sigma", cfg.sigma), rho=kw.pop("rho", cfg.rho), params=params, **kw,
    )


def _grid_product(cfg, *keys):
    grids = [cfg.grid(k) for k in keys]
    out = [{}]
    for key, vals in zip(keys, grids):
        out = [dict(c, **{key: (int(v) if key in ("upsilon", "ell") else float(v))}) for c in out for v in vals]
    return out


def seeded_scatterers(ctx: SphereContext, rng, n: int, min_sep: float = 0.3, avoid=None,
                      avoid_dist: float = 0.3, max_tries: int = 10_000) -> list:
    """n random points with pairwise distances in [min_sep, pi - min_sep].

    ``avoid`` optionally maps a point to its distance from an excluded set, which
    must exceed ``avoid_dist``.
    """
    pts = []
    for _ in range(max_tries):
        if len(pts) == n:
            return pts
        p = random_point(rng, ctx.d)
        if avoid is not None and avoid(p) <= avoid_dist:
            continue
        if all(min_sep <= geodesic_distance(p, q) <= pi - min_sep for q in pts):
            pts.append(p)
    raise RuntimeError(f"could not place {n} separated points")


def _scatterers(cfg, ctx, rng, **kw) -> list:
    if cfg.scatterers is not None:
        return [np.asarray(p, dtype=float) / np.linalg.norm(p) for p in cfg.scatterers]
    return seeded_scatterers(ctx, rng, cfg.n_random or 3, **kw)


# ---------------------------------------------------------------------------
# tail-bound


def _tail_cells(cfg):
    return _grid_product(cfg, "h_inv", "upsilon")


def _tail_run(cfg, cell):
    ctx = SphereContext(cfg.d)
    pt = level_for(ctx, cell["h_inv"], cfg.sigma, cfg.rho)
    spec = gr.GreensSpec(ctx, _north(ctx), _beta(cfg, [1, 0]), pt, max(gr.default_ell_max(pt), TAIL_ELL_MAX))
    field_ = gr.build_greens(spec)
    tail = gr.tail_norm(field_, cell["upsilon"])
    in_fit = cell["upsilon"] * pt.h <= ASYMPTOTIC_REGIME
    return [_row(cfg, cell, measured=tail, reference=math.nan, ref_provenance="observation", passed=True,
                 params={"h": pt.h, "remainder_bound": field_.tail_bound, "in_fit": in_fit, "ell_n": pt.ell_n})]


def _tail_summary(cfg, rows):
    fit_rows = [r for r in rows if r.params.get("in_fit")]
    tol = cfg.slope_tol or 0.15
    if len(fit_rows) < 4:
        return [_row(cfg, measured=math.nan, reference=-1.0, ref_provenance="rate law", passed=False,
                     params={"error": "fewer than 4 cells with upsilon*h <= 1/8"})]
    ups = [r.upsilon for r in fit_rows]
    hs = [r.params["h"] for r in fit_rows]
    a, b, _ = fit_plane(ups, hs, [r.measured for r in fit_rows])
    info = {"fit": "joint log-log, cells with upsilon*h <= 1/8", "cells": len(fit_rows)}
    return [
        _row(cfg, measured=a, reference=-1.0, ref_provenance="rate law in upsilon", slope=a,
             passed=abs(a + 1) <= tol, params=dict(info, variable="upsilon")),
        _row(cfg, measured=b, reference=float(3 - cfg.d), ref_provenance="rate law in h", slope=b,
             passed=abs(b - (3 - cfg.d)) <= tol, params=dict(info, variable="h")),
    ]


# ---------------------------------------------------------------------------
# window-norm


def _scenario_setup(cfg, ctx, h_inv):
    """(point, beta, classification) for a scenario 1 or 4 window experiment."""
    if cfg.scenario == 4:
        pt = level_for(ctx, h_inv, 0.0, cfg.rho)
        beta = _beta(cfg, [1 / math.sqrt(2), -cfg.rho / math.sqrt(2)])
        cls = gr.ScenarioClassification(4, 0.0, gr.normalize_beta(beta), cfg.rho)
    elif cfg.scenario == 1:
        pt = level_for(ctx, h_inv, cfg.sigma, cfg.rho)
        beta = _beta(cfg, [1, 0])
        cls = gr.ScenarioClassification(1, cfg.sigma, gr.normalize_beta(beta), cfg.rho)
    else:
        raise ValueError("window-norm supports scenarios 1 and 4")
    cls = gr.ScenarioClassification(cls.scenario, cls.sigma, cls.beta_limit, cls.rho, None, gr.series_constant(cls))
    return pt, beta, cls


def _window_run(cfg, cell):
    ctx = SphereContext(cfg.d)
    pt, beta, cls = _scenario_setup(cfg, ctx, cell["h_inv"])
    field_ = gr.build_greens(gr.GreensSpec(ctx, _north(ctx), gr.normalize_beta(beta), pt))
    measured = gr.normalized_window_norm(field_, cell["upsilon"], cls.scenario, cls.sigma)
    if cls.scenario == 1:
        ref, prov = gr.scenario1_closed_form_sq(cls.sigma, cls.beta_limit, cls.rho), "closed form"
    else:
        ref, prov = cls.constant**2, "lattice series"
    rel = abs(measured - ref) / ref
    return [_row(cfg, cell, measured=measured, reference=ref, ref_provenance=prov,
                 passed=rel <= (cfg.rel_tol or 0.05), params={"h": pt.h, "ell_n": pt.ell_n})]


# ---------------------------------------------------------------------------
# quasimode


def _quasimode_cells(cfg):
    if cfg.scenario == 2:
        return _grid_product(cfg, "h_inv", "sigma_n")
    return _grid_product(cfg, "h_inv", "upsilon")


def _scenario3_beta(rho: int, sigma_n: float) -> np.ndarray:
    """beta_n with beta_q + rho beta_-q = -sigma_n before normalization (so c_n -> 1)."""
    return gr.normalize_beta([1 / math.sqrt(2), -rho * (1 / math.sqrt(2) + sigma_n)])


def _quasimode_run(cfg, cell):
    ctx = SphereContext(cfg.d)
    q = _north(ctx)
    factor = 1.0
    if cfg.scenario == 2:
        pt = level_for(ctx, cell["h_inv"], cell["sigma_n"], cfg.rho)
        beta = _beta(cfg, [1, 0])
        cls = gr.ScenarioClassification(2, 0.0, gr.normalize_beta(beta), cfg.rho)
        ups, factor = 1, 2.0
    elif cfg.scenario == 3:
        pt0 = level_for(ctx, cell["h_inv"], 0.0, cfg.rho)
        pt = gr.SemiclassicalPoint(ctx.d, pt0.ell_n, pt0.h)
        beta = _scenario3_beta(cfg.rho, pt.sigma_n)
        limit = gr.normalize_beta([1, -cfg.rho])
        base = gr.ScenarioClassification(3, 0.0, limit, cfg.rho, 1.0 + 0j)
        cls = gr.ScenarioClassification(3, 0.0, limit, cfg.rho, 1.0 + 0j, gr.series_constant(base))
        ups = cell["upsilon"]
    else:
        pt, beta, cls = _scenario_setup(cfg, ctx, cell["h_inv"])
        ups = cell["upsilon"]
    spec = gr.GreensSpec(ctx, q, gr.normalize_beta(beta), pt)
    res = gr.quasimode_residual(spec, cls, ups)
    bound = factor * res.bound
    return [_row(cfg, cell, measured=res.residual, reference=bound, ref_provenance="error budget",
                 passed=res.residual <= bound, abs_err=bound - res.residual, rel_err=res.residual / bound,
                 params={"h": pt.h, "sigma_n": pt.sigma_n, "terms": res.bound_terms, "factor": factor})]


def _quasimode_summary(cfg, rows):
    if cfg.scenario == 2:
        return []
    h_inv = max(r.h_inv for r in rows)
    sel = sorted((r for r in rows if r.h_inv == h_inv and r.upsilon * r.params["h"] <= ASYMPTOTIC_REGIME),
                 key=lambda r: r.upsilon)
    if len(sel) < 3:
        return []
    fit = fit_rate([(r.upsilon, r.measured) for r in sel])
    tol = cfg.slope_tol or 0.1
    return [_row(cfg, {"h_inv": h_inv}, measured=fit.slope, reference=-0.5, ref_provenance="rate law in upsilon",
                 slope=fit.slope, passed=abs(fit.slope + 0.5) <= tol,
                 params={"fit": "residual vs upsilon at smallest h", "r_squared": fit.r_squared})]


# ---------------------------------------------------------------------------
# witness


def _witness_cells(cfg):
    return _grid_product(cfg, "h_inv")


def _witness_reference(cfg, ctx, beta):
    m_plus, m_minus = gr.flow_weights(cfg.sigma, beta, cfg.rho)
    mspec = sc.measure_for_pair(ctx, _north(ctx), m_plus, m_minus)
    return sc.measure_integral(mspec, sc.Monomial(_north(ctx), 0, 1)), (m_plus, m_minus)


def _witness_run(cfg, cell):
    ctx = SphereContext(cfg.d)
    beta = gr.normalize_beta(_beta(cfg, [1, 0]))
    pt = level_for(ctx, cell["h_inv"], cfg.sigma, cfg.rho)
    g = gr.build_greens(gr.GreensSpec(ctx, _north(ctx), beta, pt)).normalized()
    measured = sc.witness_value(g, pt.h)
    ref, weights = _witness_reference(cfg, ctx, beta)
    abs_tol = cfg.abs_tol or 0.02
    if abs(ref) > abs_tol:
        ok = abs(measured - ref) <= (cfg.rel_tol or 0.05) * abs(ref)
    else:
        ok = abs(measured - ref) <= abs_tol
    return [_row(cfg, cell, measured=measured, reference=ref, ref_provenance="flow-out measure integral",
                 passed=ok, params={"h": pt.h, "weights": list(weights)})]


# ---------------------------------------------------------------------------
# zonal-limit (same-center weak limit and cross-center decay)


def _zonal_cells(cfg):
    return _grid_product(cfg, "ell")


def _zonal_run(cfg, cell):
    ctx = SphereContext(cfg.d)
    q = _north(ctx)
    ell = cell["ell"]
    e = np.zeros(ell + 1)
    e[ell] = 1.0
    z = ZonalExpansion(ctx, q, e)
    h = 1 / math.sqrt(ctx.lambda_sq(ell))
    nu_q = sc.MeasureSpec(ctx, [q], [1.0])
    rows = []
    for name, (nk, nv), c in (("K^2", (2, 0), 3.0), ("V^2", (0, 2), 5.0)):
        val = sc.symmetrized_element(ctx, z, z, h, nk, nv).real
        ref = sc.measure_integral(nu_q, sc.Monomial(q, nk, nv))
        rows.append(_row(cfg, cell, measured=val, reference=ref, ref_provenance="flow-out measure integral",
                         passed=abs(val - ref) <= c / ell, sigma=None, rho=None,
                         params={"observable": name, "ell": ell, "bound": c / ell}))
    return rows


def cross_center_envelope(ctx: SphereContext, p, q, ells) -> np.ndarray:
    """max |<z_l^p, z_l^q>| over l in [ell, ell + one oscillation period)."""
    theta = geodesic_distance(p, q)
    width = int(math.ceil(2 * pi / min(theta, pi - theta)))
    table = np.abs(ratio_table(ctx.alpha, int(max(ells)) + width, float(np.dot(p, q))))
    return np.array([table[e:e + width].max() for e in ells])


def _zonal_summary(cfg, rows):
    ctx = SphereContext(cfg.d)
    out = []
    tol = cfg.slope_tol or 0.15
    for name in ("K^2", "V^2"):
        sel = [r for r in rows if r.params.get("observable") == name and r.abs_err > 1e-12]
        if len(sel) >= 3:
            fit = fit_rate([(r.params["ell"], r.abs_err) for r in sel])
            out.append(_row(cfg, measured=fit.slope, reference=-1.0, ref_provenance="at least first-order rate",
                            slope=fit.slope, passed=fit.slope <= -1 + tol, sigma=None, rho=None,
                            params={"observable": name, "r_squared": fit.r_squared}))
    rng = make_rng(cfg.seed)
    ells = sorted(set(int(r.params["ell"]) for r in rows if "ell" in r.params))
    if len(ells) >= 3:
        for i in range(cfg.n_random or 3):
            p, q = seeded_scatterers(ctx, rng, 2)
            env = cross_center_envelope(ctx, p, q, ells)
            fit = fit_rate(list(zip(ells, env)))
            ref = -(cfg.d - 1) / 2
            out.append(_row(cfg, measured=fit.slope, reference=ref, ref_provenance="cross-center decay law",
                            slope=fit.slope, passed=abs(fit.slope - ref) <= tol, sigma=None, rho=None,
                            params={"pair": i, "distance": geodesic_distance(p, q), "r_squared": fit.r_squared}))
    return out


# ---------------------------------------------------------------------------
# oldfun


def _frame(cfg, ctx):
    if cfg.geodesic is not None:
        return of.GeodesicFrame.from_plane(*cfg.geodesic)
    return of.GeodesicFrame.reference(ctx.d)


def _oldfun_scatterers(cfg, ctx, frame):
    rng = make_rng(cfg.seed)
    return _scatterers(cfg, ctx, rng, avoid=lambda p: float(of.distance_to_geodesic(frame, p)))


def _oldfun_run(cfg, cell):
    ctx = SphereContext(cfg.d)
    ell = cell["ell"]
    frame = _frame(cfg, ctx)
    pts = _oldfun_scatterers(cfg, ctx, frame)
    beam = of.BeamCombination([frame], [1.0], ell)
    base = {"ell": ell}
    rows = [_row(cfg, cell, measured=of.beam_norm_sq_quadrature(ctx.d, ell), reference=1.0,
                 ref_provenance="unit normalization", sigma=None, rho=None,
                 passed=abs(of.beam_norm_sq_quadrature(ctx.d, ell) - 1) <= 1e-8, params=dict(base, check="norm"))]
    try:
        corr = of.vanishing_correction(beam, pts)
    except of.NotCertifiedError as exc:
        rows.append(_row(cfg, cell, measured=math.nan, reference=0.0, ref_provenance="vanishing on Q",
                         passed=False, sigma=None, rho=None, params=dict(base, check="defect", error=str(exc))))
    else:
        rows.append(_row(cfg, cell, measured=corr.defect, reference=0.0, ref_provenance="vanishing on Q",
                         passed=corr.defect <= 1e-10 * max(corr.rhs_norm, np.finfo(float).tiny),
                         sigma=None, rho=None,
                         params=dict(base, check="defect", alpha_norm=float(np.linalg.norm(corr.alpha)),
                                     rhs_norm=corr.rhs_norm, min_distance=corr.min_distance)))
    obs = of.beam_observable_check(beam, [ell], pts[0], cfg.power)[0]
    rows.append(_row(cfg, cell, measured=obs.measured, reference=obs.limit, ref_provenance="geodesic average",
                     passed=obs.error <= 5 / ell, sigma=None, rho=None,
                     params=dict(base, check="observable", power=cfg.power)))
    return rows


def _oldfun_summary(cfg, rows):
    sel = [r for r in rows if r.params.get("check") == "defect" and r.params.get("alpha_norm", 0) > 0]
    if len(sel) < 3:
        return []
    ells = np.array([r.params["ell"] for r in sel], dtype=float)
    logs = np.log([r.params["alpha_norm"] for r in sel])
    slope = float(np.polyfit(ells, logs, 1)[0])
    return [_row(cfg, measured=slope, reference=-0.01, ref_provenance="exponential decay threshold",
                 slope=slope, passed=slope < -0.01, abs_err=math.nan, rel_err=math.nan, sigma=None, rho=None,
                 params={"fit": "log |alpha| vs ell"})]


# ---------------------------------------------------------------------------
# carleson


def _carleson_cls(cfg):
    if cfg.scenario == 3:
        limit = gr.normalize_beta([1, -cfg.rho])
        base = gr.ScenarioClassification(3, 0.0, limit, cfg.rho, 1.0 + 0j)
        return gr.ScenarioClassification(3, 0.0, limit, cfg.rho, 1.0 + 0j, gr.series_constant(base))
    beta = gr.normalize_beta(_beta(cfg, [1, 0]))
    base = gr.ScenarioClassification(1, cfg.sigma, beta, cfg.rho)
    return gr.ScenarioClassification(1, cfg.sigma, beta, cfg.rho, None, gr.series_constant(base))


def _carleson_cells(cfg):
    return [{"upsilons": sorted(int(u) for u in cfg.grid("upsilon"))}]


def _carleson_run(cfg, cell):
    cls = _carleson_cls(cfg)
    prof = sc.fourier_profile(cls)
    rows = [_row(cfg, measured=sc.profile_norm_sq(prof), reference=2 * pi, ref_provenance="L2 mass of profile",
                 passed=abs(sc.profile_norm_sq(prof) - 2 * pi) <= 1e-10, params={"check": "norm"})]
    if cls.scenario == 1:
        target = gr.flow_weights(cls.sigma, cls.beta_limit, cls.rho)
    else:
        b0 = cls.beta_limit[0]
        target = tuple(abs(cls.c_limit + s * 1j * pi * b0) ** 2 / cls.constant**2 for s in (1, -1))
    for t, m in ((pi / 2, target[0]), (3 * pi / 2, target[1])):
        val = float(abs(prof(t)) ** 2)
        rows.append(_row(cfg, measured=val, reference=m, ref_provenance="weight formula",
                         passed=abs(val - m) <= 1e-10, params={"check": "step", "t": t}))
    prev = math.inf
    for r in sc.carleson_check(cls, cell["upsilons"]):
        rows.append(_row(cfg, {"upsilon": r.upsilon}, measured=r.sup_error, reference=0.0,
                         ref_provenance="partial Fourier sums", passed=r.sup_error < prev,
                         params={"check": "carleson", "exclusion": sc.JUMP_EXCLUSION}))
        prev = r.sup_error
    return rows


# ---------------------------------------------------------------------------
# interp-matrix


def _interp_cells(cfg):
    return _grid_product(cfg, "ell")


def _interp_run(cfg, cell):
    ctx = SphereContext(cfg.d)
    pts = _scatterers(cfg, ctx, make_rng(cfg.seed))
    cert = certify_invertible(build_interpolation_matrix(ctx, pts, cell["ell"]))
    return [_row(cfg, cell, measured=cert.inverse_norm_bound, reference=math.nan,
                 ref_provenance="Gershgorin certificate", passed=cert.invertible, sigma=None, rho=None,
                 params={"ell": cell["ell"], "margin": cert.margin})]


def _interp_summary(cfg, rows):
    ctx = SphereContext(cfg.d)
    pts = _scatterers(cfg, ctx, make_rng(cfg.seed))
    ells = [r.params["ell"] for r in rows]
    thr = dominance_threshold(ctx, pts, max(ells))
    out = [_row(cfg, measured=math.nan if thr is None else float(thr), reference=150.0,
                ref_provenance="certification threshold cap", passed=thr is not None and thr <= 150,
                abs_err=math.nan, rel_err=math.nan, sigma=None, rho=None, params={"ell_max": max(ells)})]
    sel = [r for r in rows if r.passed]
    if len(sel) >= 3:
        fit = fit_rate([(r.params["ell"], r.measured) for r in sel])
        ref = -(cfg.d - 1) / 2
        out.append(_row(cfg, measured=fit.slope, reference=ref, ref_provenance="inverse-norm decay law",
                        slope=fit.slope, passed=abs(fit.slope - ref) <= (cfg.slope_tol or 0.2),
                        sigma=None, rho=None, params={"r_squared": fit.r_squared}))
    return out


def _none(cfg, rows):
    return []


REGISTRY = {
    e.kind: e
    for e in (
        Experiment("tail-bound", "Green's function mass outside a spectral window decays like 1/Upsilon times h^(3-d)",
                   "tail mass slopes in Upsilon and h", _tail_cells, _tail_run, _tail_summary),
        Experiment("window-norm", "normalized window norm converges to the lattice constant squared",
                   "window norm against closed-form constants", _tail_cells, _window_run, _none),
        Experiment("quasimode", "normalized Green's function is close to an explicit zonal quasimode",
                   "quasimode residuals against their error budget", _quasimode_cells, _quasimode_run,
                   _quasimode_summary),
        Experiment("witness", "momentum observable detects non-invariant half-flow weights",
                   "<g, V_h g> against (m+ - m-)/pi", _witness_cells, _witness_run, _none),
        Experiment("zonal-limit", "zonal harmonics converge to the flow-out measure; distinct centers decorrelate",
                   "same-center weak limit and cross-center decay", _zonal_cells, _zonal_run, _zonal_summary),
        Experiment("oldfun", "unit beams concentrate on geodesics and can be corrected to vanish on Q",
                   "beam norms, vanishing correction, observables", _zonal_cells, _oldfun_run, _oldfun_summary),
        Experiment("carleson", "Fourier profile is a two-step function of unit L2 mean",
                   "profile mass, step values, partial sums", _carleson_cells, _carleson_run, _none),
        Experiment("interp-matrix", "zonal interpolation matrix is diagonally dominant for large degree",
                   "Gershgorin certification and inverse-norm slope", _interp_cells, _interp_run, _interp_summary),
    )
}
