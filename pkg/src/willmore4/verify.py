"""Verification runs shared by the command line and the acceptance suite.

Each ``run_*`` function samples chart points (or builds a quadrature grid),
evaluates the relevant quantities and returns a :class:`Report` with one
record per check and per-point tables.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass
from typing import Iterator

import numpy as np

from . import geometry, invariants, noether, quadrature
from .catalog import Immersion, MobiusTransform, RoundSphere
from .errors import ConfigError
from .geometry import CurvaturePack, FramePack
from .report import ASSERT, EVIDENCE, INFORMATIONAL, Check, Report

EIGHT_PI_SQUARED = 8.0 * math.pi**2

MIN_DEGREE = {"willmore": 6, "w3": 4, "rivvy": 4, "appendix": 4, "conserve": 6, "energy": 3, "invariance": 3}


@dataclass(frozen=True)
class Tolerances:
    identity: float = 1e-8  # W, the two forms of W3, the appendix identity
    rivvy: float = 1e-7  # identity-tensor divergence (relative)
    conservation: float = 1e-7  # trace identity and current divergences
    quadrature: float = 1e-4  # relative error of global integrals
    evidence: float = 1e-3  # W3 must exceed this fraction of |h|^5
    floor: float = invariants.IDENTITY_FLOOR

    def __post_init__(self):
        for name in ("identity", "rivvy", "conservation", "quadrature", "evidence", "floor"):
            if not getattr(self, name) > 0:
                raise ConfigError(f"tolerance {name!r} must be positive")


@dataclass(frozen=True)
class Batch:
    chart: str
    points: np.ndarray  # (4, n)
    frame: FramePack
    curv: CurvaturePack


def sample_batches(
    spec: Immersion, n: int, seed: int, degree: int, chart: str | None = None
) -> Iterator[Batch]:
    """Random chart points; closed immersions are sampled across their whole atlas."""
    if n < 1:
        raise ConfigError("need at least one sample point")
    rng = np.random.default_rng(seed)
    charts = (chart,) if chart else (tuple(spec.atlas_charts()) or (spec.default_chart,))
    sizes = [n // len(charts) + (1 if i < n % len(charts) else 0) for i in range(len(charts))]
    for name, size in zip(charts, sizes):
        if size == 0:
            continue
        pts = spec.sample(size, rng, name)
        frame = geometry.build_frame(spec.evaluate_jet(pts, degree, name))
        yield Batch(name, pts, frame, geometry.curvature(frame))


def _rows(batch: Batch, **columns) -> list[dict]:
    rows = []
    for i in range(batch.points.shape[1]):
        row = {"chart": batch.chart}
        row.update({f"x{k + 1}": float(batch.points[k, i]) for k in range(4)})
        for key, col in columns.items():
            row[key] = float(np.asarray(col)[i])
        rows.append(row)
    return rows


def _max(values) -> float:
    return float(np.max(values)) if len(values) else 0.0


def _degree(command: str, degree: int | None) -> int:
    need = MIN_DEGREE[command]
    if degree is None:
        return need
    if not 2 <= degree <= 6:
        raise ConfigError("jet degree must lie in 2..6")
    if degree < need:
        raise ConfigError(f"{command} needs jet degree >= {need}, got {degree}")
    return degree


def _new_report(command: str, spec: Immersion, config: dict | None) -> Report:
    echo = {"spec": spec.to_dict()}
    echo.update(config or {})
    return Report(command, echo)


def _finish(report: Report, start: float) -> Report:
    report.wall_clock = time.perf_counter() - start
    return report


# -- pointwise residuals ------------------------------------------------------------

def run_willmore(spec, points=50, seed=0, degree=None, chart=None, tol=Tolerances(), informational=False, config=None):
    start = time.perf_counter()
    report = _new_report("residual willmore", spec, config)
    rows, excess, worst_w, worst_sum = [], [], [], []
    for b in sample_batches(spec, points, seed, _degree("willmore", degree), chart):
        W = invariants.willmore_operator(b.curv, b.frame)
        scale = invariants.willmore_scale(b.curv)
        bound = invariants.tolerance(scale, tol.identity, tol.floor)
        norm = W.norm
        parts = sum(W.terms[k] for k in invariants.W_TERMS)
        excess.append(norm / bound)
        worst_w.append(norm)
        worst_sum.append(np.abs(parts - W.scalar))
        rows += _rows(b, W=norm, scale=scale, tolerance=bound, H=b.curv.H.value,
                      norm_h=geometry.curvature_scale(b.curv))
    ratio = _max(np.concatenate(excess))
    mode = INFORMATIONAL if informational else ASSERT
    report.add(Check("max |W| / tolerance", "the Euler-Lagrange operator vanishes on this immersion",
                     ratio, 1.0, ratio <= 1.0, mode, f"max |W| = {_max(np.concatenate(worst_w)):.3e}"))
    report.tables["points"] = rows
    report.summary = {"max_W": _max(np.concatenate(worst_w)), "points": len(rows)}
    return _finish(report, start)


def run_w3(spec, points=20, seed=0, degree=None, chart=None, tol=Tolerances(), informational=False, config=None):
    """W3 in evidence mode: a nonzero value is the expected outcome, not a failure."""
    start = time.perf_counter()
    report = _new_report("residual w3", spec, config)
    rows, ratios, forms, hvals = [], [], [], []
    for b in sample_batches(spec, points, seed, _degree("w3", degree), chart):
        w3 = invariants.w3_operator(b.curv, b.frame)
        scale5 = geometry.curvature_scale(b.curv) ** 5
        ratio = w3.norm / np.maximum(scale5, tol.floor)
        gap = np.abs(w3.scalar - w3.hard_form) / np.maximum(np.abs(w3.scalar) + scale5, tol.floor)
        ratios.append(ratio)
        forms.append(gap)
        hvals.append(np.abs(b.curv.H.value))
        rows += _rows(b, W3=w3.norm, hard_form=w3.hard_form, norm_h5=scale5, ratio=ratio, form_gap=gap,
                      H=b.curv.H.value)
    ratio = np.concatenate(ratios)
    min_ratio = float(np.min(ratio))
    report.add(Check("min |W3| / |h|^5", "W3 does not vanish on this immersion", min_ratio, tol.evidence,
                     min_ratio > tol.evidence, EVIDENCE))
    if spec.minimal:
        gap = _max(np.concatenate(forms))
        report.add(Check("max relative gap between the general and H = 0 forms of W3",
                         "on minimal hypersurfaces W3 reduces to 4 Tr h^3 |h|^2 + 4 h^ij nabla_i nabla_j |h|^2",
                         gap, tol.identity, gap <= tol.identity, INFORMATIONAL if informational else ASSERT))
    report.tables["points"] = rows
    report.summary = {"max_W3": max(r["W3"] for r in rows), "min_W3": min(r["W3"] for r in rows),
                      "max_abs_H": _max(np.concatenate(hvals)), "points": len(rows)}
    return _finish(report, start)


def run_rivvy(spec, points=20, seed=0, degree=None, chart=None, tol=Tolerances(), informational=False, config=None):
    start = time.perf_counter()
    report = _new_report("residual rivvy", spec, config)
    rows, rel, gaps = [], [], []
    for b in sample_batches(spec, points, seed, _degree("rivvy", degree), chart):
        r = invariants.rivvy_residual(b.curv, b.frame)
        rel.append(r.relative)
        gaps.append(r.tensor_gap / np.maximum(r.scale, tol.floor))
        rows += _rows(b, residual=r.norm, scale=r.scale, relative=r.relative, tensor_gap=r.tensor_gap)
    worst = _max(np.concatenate(rel))
    gap = _max(np.concatenate(gaps))
    mode = INFORMATIONAL if informational else ASSERT
    report.add(Check("max relative |div A - (Lap H + H|h|^2 - 8H^3) n|",
                     "the divergence of the identity tensor A equals (Lap H + H|h|^2 - 8H^3) n on every immersion",
                     worst, tol.rivvy, worst <= tol.rivvy, mode))
    report.add(Check("max relative |A - T|", "the return-equation tensor T coincides with A for hypersurfaces",
                     gap, tol.rivvy, gap <= tol.rivvy, mode))
    report.tables["points"] = rows
    report.summary = {"max_relative": worst, "points": len(rows)}
    return _finish(report, start)


def run_appendix(spec, points=20, seed=0, degree=None, chart=None, tol=Tolerances(), informational=False, config=None):
    start = time.perf_counter()
    report = _new_report("residual appendix", spec, config)
    rows, res, plain, printed, syn = [], [], [], [], []
    rng = np.random.default_rng(seed + 1)
    for b in sample_batches(spec, points, seed, _degree("appendix", degree), chart):
        geo = noether.appendix_checks_for_frame(b.frame, b.curv)
        bound = tol.floor + tol.identity * geo.scale
        res.append(geo.residual / bound)
        plain.append(geo.hodge_free_residual / bound)
        printed.append(geo.printed_sign_residual / np.maximum(geo.scale, tol.floor))
        # the identity is algebraic in J0: any normal multiple must satisfy it
        j0 = b.frame.normal.value * rng.normal(size=b.points.shape[1])
        synth = noether.appendix_checks_for_frame(b.frame, j0=j0)
        syn.append(synth.residual / (tol.floor + tol.identity * synth.scale))
        rows += _rows(b, residual=geo.residual, hodge_free_residual=geo.hodge_free_residual,
                      printed_sign_residual=geo.printed_sign_residual, scale=geo.scale,
                      synthetic_residual=synth.residual)
    mode = INFORMATIONAL if informational else ASSERT
    for name, arr, claim in (
        ("max |*eta bullet *(J0 ^ *dPhi) - J0 ^ *dPhi| / tolerance", res,
         "contracting *eta against *(J0 ^ *dPhi) returns J0 ^ *dPhi"),
        ("max |*eta bullet (J0 ^ dPhi) + J0 ^ *dPhi| / tolerance", plain,
         "contracting *eta against J0 ^ dPhi returns -J0 ^ *dPhi"),
        ("max synthetic-J0 residual / tolerance", syn, "the identity holds for every normal J0"),
    ):
        v = _max(np.concatenate(arr))
        report.add(Check(name, claim, v, 1.0, v <= 1.0, mode))
    p = np.concatenate(printed)
    report.add(Check("min |*eta bullet *(J0 ^ *dPhi) + J0 ^ *dPhi| / |J0 ^ *dPhi|",
                     "with the opposite sign the residual is twice the right-hand side",
                     float(np.min(p)) if p.size else 0.0, None, True, INFORMATIONAL))
    report.tables["points"] = rows
    report.summary = {"points": len(rows)}
    return _finish(report, start)


def run_conserve(spec, points=20, seed=0, degree=None, chart=None, tol=Tolerances(), informational=False, config=None):
    start = time.perf_counter()
    report = _new_report("conserve", spec, config)
    rows = []
    acc = {k: [] for k in ("trace", "translation", "dilation", "rotation", "relation")}
    for b in sample_batches(spec, points, seed, _degree("conserve", degree), chart):
        V = noether.stress_tensor(b.curv, b.frame)
        cur = noether.currents(V, b.curv, b.frame)
        dc = noether.divergence_checks(V, cur, b.frame, b.curv)
        W = invariants.willmore_operator(b.curv, b.frame)
        rel = dc.relative()
        relation = np.sqrt(np.sum((dc.div_V + W.vector) ** 2, axis=0)) / np.maximum(dc.scale_translation, tol.floor)
        acc["trace"].append(V.trace_relative)
        acc["relation"].append(relation)
        for k in ("translation", "dilation", "rotation"):
            acc[k].append(rel[k])
        rows += _rows(b, trace_residual=V.trace_residual, div_V=dc.translation, div_D=dc.dilation,
                      div_R=dc.rotation, scale_V=dc.scale_translation, scale_DR=dc.scale_current,
                      W=W.norm, div_V_plus_W=relation * dc.scale_translation)
    worst = {k: _max(np.concatenate(v)) for k, v in acc.items()}
    report.add(Check("max relative |d_j Phi . V^j - Lap H^2|", "the tangential trace of V is Lap |H|^2",
                     worst["trace"], tol.conservation, worst["trace"] <= tol.conservation,
                     INFORMATIONAL if informational else ASSERT))
    report.add(Check("max relative |div V + W|", "the divergence of V is minus the Euler-Lagrange operator",
                     worst["relation"], tol.conservation, worst["relation"] <= tol.conservation,
                     INFORMATIONAL if informational else ASSERT))
    asserted = spec.critical and not informational
    for k, claim in (("translation", "div V = 0 at critical points"),
                     ("dilation", "div (Phi . V - grad |H|^2) = 0 at critical points"),
                     ("rotation", "div (Phi ^ V + M) = 0 at critical points")):
        report.add(Check(f"max relative {k} divergence", claim, worst[k], tol.conservation,
                         worst[k] <= tol.conservation, ASSERT if asserted else INFORMATIONAL))
    report.tables["points"] = rows
    report.summary = {"critical": bool(spec.critical), "points": len(rows),
                      **{f"max_relative_{k}": v for k, v in worst.items()}}
    return _finish(report, start)


# -- global integrals -----------------------------------------------------------------

def _integration_check(name: str, res: quadrature.IntegrationResult, tol: Tolerances) -> Check:
    scale = max(abs(res.value), 1.0)
    rel = res.error / scale
    ok = res.converged and rel <= tol.quadrature
    return Check(f"{name}: Richardson error estimate", "the quadrature has converged", rel, tol.quadrature, ok,
                 note=f"observed order {res.order:.3g}")


def run_energy(spec, grid=None, region=None, mu=0.0, tol=Tolerances(), local=False, config=None, degree=None):
    start = time.perf_counter()
    report = _new_report("energy", spec, config)
    deg = _degree("energy", degree)

    def density(curv, frame):
        if mu:
            return invariants.energy_density_mu(curv, mu, frame).density
        return invariants.energy_density(curv, frame).density

    res = quadrature.integrate(spec, density, grid or quadrature.DEFAULT_GRID, region, deg)
    report.add(_integration_check("energy", res, tol))
    report.add(Check("observed Richardson order", "refinement shows at least second-order convergence",
                     res.order, 2.0, res.order >= 2.0))
    if isinstance(spec, RoundSphere) and region in (None, "atlas"):
        rel = abs(res.value - EIGHT_PI_SQUARED) / EIGHT_PI_SQUARED
        report.add(Check("relative gap to 8 pi^2", "every round 4-sphere has energy 8 pi^2", rel, tol.quadrature,
                         rel <= tol.quadrature))
    report.summary = {"energy": res.value, "error": res.error, "order": res.order, "mu": mu}
    report.tables["convergence"] = res.table()
    if local:
        le = quadrature.local_energy(spec, region, grid or quadrature.DEFAULT_GRID)
        report.summary.update({"local_energy": le.value, "grad_H_L2": le.gradient_norm, "H_L4": le.mean_curvature_norm})
        report.add(_integration_check("local |grad H|^2", le.gradient, tol))
        report.add(_integration_check("local H^4", le.quartic, tol))
    return _finish(report, start)


def run_invariance(spec, transforms: dict[str, MobiusTransform], grid=None, tol=Tolerances(), config=None):
    start = time.perf_counter()
    report = _new_report("invariance", spec, config)
    grid = grid or quadrature.FINE_GRID
    before = quadrature.energy(spec, grid)
    report.add(_integration_check("energy before", before, tol))
    table = [{"transform": "identity", "energy": before.value, "error": before.error, "order": before.order,
              "gap": 0.0}]
    for name, transform in transforms.items():
        res = quadrature.mobius_invariance_experiment(spec, transform, grid, before=before)
        report.add(_integration_check(f"energy after {name}", res.after, tol))
        report.add(Check(f"relative energy gap under {name}", "the energy is invariant under Moebius transformations",
                         res.gap, tol.quadrature, res.gap <= tol.quadrature))
        table.append({"transform": name, "energy": res.after.value, "error": res.after.error,
                      "order": res.after.order, "gap": res.gap})
    report.tables["energies"] = table
    report.summary = {"energy_before": before.value, "max_gap": max(r["gap"] for r in table)}
    return _finish(report, start)


RESIDUALS = {"willmore": run_willmore, "w3": run_w3, "rivvy": run_rivvy, "appendix": run_appendix}

__all__ = [
    "Tolerances",
    "Batch",
    "sample_batches",
    "run_willmore",
    "run_w3",
    "run_rivvy",
    "run_appendix",
    "run_conserve",
    "run_energy",
    "run_invariance",
    "RESIDUALS",
    "MIN_DEGREE",
    "EIGHT_PI_SQUARED",
]
