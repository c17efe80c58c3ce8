"""Tensor-product quadrature on chart domains with Richardson refinement.

Bounded axes use Gauss-Legendre nodes, periodic axes the trapezoid rule.
Charts clipped to the unit ball are integrated in Hopf-type polar
coordinates ``y = rho (cos e cos a, cos e sin a, sin e cos b, sin e sin b)``
whose volume element is ``rho^3 sin e cos e``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from . import geometry
from .catalog import Chart, Immersion, MobiusImage, MobiusTransform, check_clearance
from .errors import DomainError
from .invariants import energy_density, energy_density_mu

CHUNK = 4096
ORDER_FLOOR = 1.0
ROUNDING = 1e-13


def gauss_legendre(n: int, lo: float, hi: float) -> tuple[np.ndarray, np.ndarray]:
    x, w = np.polynomial.legendre.leggauss(n)
    half = 0.5 * (hi - lo)
    return lo + half * (x + 1.0), w * half


def trapezoid_periodic(n: int, lo: float = 0.0, hi: float = 2.0 * math.pi) -> tuple[np.ndarray, np.ndarray]:
    h = (hi - lo) / n
    return lo + h * np.arange(n), np.full(n, h)


@dataclass(frozen=True)
class GridSpec:
    """Nodes per axis at refinement multiplier 1; level ``m`` uses ``round(base * m)`` nodes.

    The multipliers must form a geometric sequence; their ratio is the
    refinement ratio used for Richardson extrapolation.
    """

    base: tuple[float, float, float, float] = (1.0, 1.0, 1.0, 1.0)
    levels: tuple[float, ...] = (4.0, 6.0, 9.0)

    def counts(self, m: float) -> tuple[int, ...]:
        return tuple(max(1, int(math.floor(b * m + 0.5))) for b in self.base)

    def to_dict(self) -> dict:
        return {"base": list(self.base), "levels": list(self.levels)}


DEFAULT_GRID = GridSpec()
# finer preset for immersions whose energy density varies strongly over the atlas
FINE_GRID = GridSpec((1.5, 1.5, 1.5, 1.0), (4.0, 6.0, 9.0))


def chart_grid(chart: Chart, counts: Sequence[int]) -> tuple[np.ndarray, np.ndarray]:
    """Quadrature nodes ``(4, N)`` and weights ``(N,)`` for a chart domain."""
    if chart.ball:
        rho, wr = gauss_legendre(counts[0], 0.0, 1.0)
        ang, we = gauss_legendre(counts[1], 0.0, 0.5 * math.pi)
        a, wa = trapezoid_periodic(counts[2])
        b, wb = trapezoid_periodic(counts[3])
        R, E, A, B = np.meshgrid(rho, ang, a, b, indexing="ij")
        W = np.einsum("i,j,k,l->ijkl", wr * rho**3, we * np.sin(ang) * np.cos(ang), wa, wb)
        pts = np.stack([R * np.cos(E) * np.cos(A), R * np.cos(E) * np.sin(A), R * np.sin(E) * np.cos(B), R * np.sin(E) * np.sin(B)])
        return pts.reshape(4, -1), W.reshape(-1)
    axes = []
    for ax, n in zip(chart.axes, counts):
        axes.append(trapezoid_periodic(n, ax.lo, ax.hi) if ax.periodic else gauss_legendre(n, ax.lo, ax.hi))
    mesh = np.meshgrid(*[x for x, _ in axes], indexing="ij")
    W = np.einsum("i,j,k,l->ijkl", *[w for _, w in axes])
    return np.stack(mesh).reshape(4, -1), W.reshape(-1)


Density = Callable[[geometry.CurvaturePack, geometry.FramePack], np.ndarray]


@dataclass(frozen=True)
class LevelValue:
    multiplier: float
    nodes: int
    value: float


@dataclass(frozen=True)
class IntegrationResult:
    value: float  # Richardson-extrapolated value
    error: float  # |Q_finest - Q_previous|
    order: float  # observed convergence order (inf when converged to rounding)
    converged: bool
    levels: tuple[LevelValue, ...] = field(default_factory=tuple)

    @property
    def finest(self) -> float:
        return self.levels[-1].value

    def table(self) -> list[dict]:
        return [{"multiplier": lv.multiplier, "nodes": lv.nodes, "value": lv.value} for lv in self.levels]


def richardson(values: Sequence[float], ratio: float = 2.0) -> tuple[float, float, float, bool]:
    """Extrapolate the last of three refinement values; returns (value, error, order, converged)."""
    if len(values) < 3:
        raise ValueError("Richardson extrapolation needs three levels")
    q1, q2, q3 = values[-3:]
    d1, d2 = abs(q2 - q1), abs(q3 - q2)
    floor = ROUNDING * max(1.0, abs(q3))
    if d2 <= floor:
        return q3, d2, math.inf, True
    if d1 <= floor:
        # the sequence got worse after reaching rounding level: no observable order
        return q3, d2, 0.0, False
    order = math.log(d1 / d2) / math.log(ratio)
    if order < ORDER_FLOOR:
        return q3, d2, order, False
    value = q3 + (q3 - q2) / (ratio**order - 1.0)
    return value, d2, order, True


def energy_integrand(curv, frame) -> np.ndarray:
    return energy_density(curv, frame).density


def volume_integrand(curv, frame) -> np.ndarray:
    return np.ones(np.shape(curv.H.value))


def _chart_sums(spec: Immersion, chart: Chart, counts, densities, degree: int) -> tuple[list[float], int]:
    pts, wts = chart_grid(chart, counts)
    totals = [0.0] * len(densities)
    for start in range(0, pts.shape[1], CHUNK):
        p = pts[:, start : start + CHUNK]
        frame = geometry.build_frame(spec.evaluate_jet(p, degree, chart.name))
        curv = geometry.curvature(frame)
        w = frame.sqrt_det.value * wts[start : start + CHUNK]
        for i, density in enumerate(densities):
            totals[i] += float(np.dot(density(curv, frame), w))
    return totals, pts.shape[1]


def region_charts(spec: Immersion, region: str | None) -> tuple[str, ...]:
    """Charts to integrate over: the atlas of a closed immersion, else one chart."""
    if region in (None, "atlas"):
        charts = spec.atlas_charts()
        if charts:
            return tuple(charts)
        if region == "atlas":
            raise DomainError(f"{spec.kind} has no closed atlas; give a chart region")
        return (spec.default_chart,)
    if region == "unit-box":
        region = "box"
    spec.chart(region)
    return (region,)


def integrate_many(
    spec: Immersion,
    densities: dict[str, Density],
    grid: GridSpec | None = None,
    region: str | None = None,
    degree: int = 3,
) -> dict[str, IntegrationResult]:
    """Integrate several densities against ``dvol`` in one sweep over the grid."""
    grid = grid or DEFAULT_GRID
    if len(grid.levels) < 3:
        raise ValueError("need three refinement levels")
    ratios = [b / a for a, b in zip(grid.levels[-3:-1], grid.levels[-2:])]
    if abs(ratios[0] - ratios[1]) > 1e-12 or ratios[0] <= 1.0:
        raise ValueError("refinement multipliers must form an increasing geometric sequence")
    check_clearance(spec)
    charts = region_charts(spec, region)
    names = list(densities)
    funcs = [densities[k] for k in names]
    per_level = []
    for m in grid.levels:
        totals, nodes = [0.0] * len(funcs), 0
        for name in charts:
            values, count = _chart_sums(spec, spec.chart(name), grid.counts(m), funcs, degree)
            totals = [t + v for t, v in zip(totals, values)]
            nodes += count
        per_level.append((m, nodes, totals))
    out = {}
    for i, key in enumerate(names):
        levels = tuple(LevelValue(m, nodes, totals[i]) for m, nodes, totals in per_level)
        value, error, order, ok = richardson([lv.value for lv in levels], ratios[0])
        out[key] = IntegrationResult(value, error, order, ok, levels)
    return out


def integrate(
    spec: Immersion,
    density: Density = None,
    grid: GridSpec | None = None,
    region: str | None = None,
    degree: int = 3,
) -> IntegrationResult:
    """Integrate ``density dvol`` over the atlas (closed manifolds) or one chart region."""
    return integrate_many(spec, {"value": density or energy_integrand}, grid, region, degree)["value"]


def energy(spec: Immersion, grid: GridSpec | None = None, region: str | None = None, mu: float = 0.0) -> IntegrationResult:
    if mu:
        def density(curv, frame):
            return energy_density_mu(curv, mu, frame).density
    else:
        density = energy_integrand
    return integrate(spec, density, grid, region)


def volume(spec: Immersion, grid: GridSpec | None = None, region: str | None = None) -> IntegrationResult:
    return integrate(spec, volume_integrand, grid, region, degree=2)


@dataclass(frozen=True)
class LocalEnergy:
    value: float  # ||DH||_{L2} + ||H||_{L4}
    gradient_norm: float
    mean_curvature_norm: float
    gradient: IntegrationResult
    quartic: IntegrationResult


def local_energy(spec: Immersion, region: str | None = None, grid: GridSpec | None = None) -> LocalEnergy:
    """``||grad H||_{L^2} + ||H||_{L^4}`` over a chart region or the whole atlas."""

    def grad2(curv, frame):
        return np.einsum("i...,i...->...", curv.dH.value, curv.grad_H.value)

    def quartic(curv, frame):
        return curv.H.value**4

    res = integrate_many(spec, {"gradient": grad2, "quartic": quartic}, grid, region)
    g, q = res["gradient"], res["quartic"]
    gn = math.sqrt(max(g.value, 0.0))
    qn = max(q.value, 0.0) ** 0.25
    return LocalEnergy(gn + qn, gn, qn, g, q)


@dataclass(frozen=True)
class InvarianceResult:
    before: IntegrationResult
    after: IntegrationResult

    @property
    def gap(self) -> float:
        return abs(self.after.value - self.before.value) / abs(self.before.value)


def mobius_invariance_experiment(
    spec: Immersion,
    transform: MobiusTransform,
    grid: GridSpec | None = None,
    before: IntegrationResult | None = None,
) -> InvarianceResult:
    """Energy of an immersion and of its Möbius image at matched resolution.

    ``before`` may carry a previously computed energy of ``spec`` on the same
    grid, so that several transforms can share it.
    """
    image = MobiusImage(spec, transform)
    check_clearance(image)
    if before is None:
        before = energy(spec, grid)
    after = energy(image, grid)
    return InvarianceResult(before, after)
