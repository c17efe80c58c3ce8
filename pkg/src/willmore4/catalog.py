"""Analytic immersions of 4-charts into 5-space, with exact jets.

Each immersion exposes ``param(x, xp, chart)``: a map from four chart
coordinates to five ambient components written only with arithmetic and the
functions ``xp.sin``, ``xp.cos``, ``xp.exp``, ``xp.sqrt``.  Passing the
:mod:`willmore4.jets` module as ``xp`` yields exact Taylor jets; passing
numpy or mpmath yields plain evaluations, which the tests use as
finite-difference oracles.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from types import SimpleNamespace
from typing import Sequence

import numpy as np

from . import jets
from .errors import ConfigError, DomainError, SingularityError
from .jets import Jet

TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class Axis:
    lo: float
    hi: float
    periodic: bool = False


@dataclass(frozen=True)
class Chart:
    """Chart domain: a coordinate box, optionally clipped to the unit ball."""

    name: str
    axes: tuple[Axis, Axis, Axis, Axis]
    ball: bool = False

    def contains(self, points: np.ndarray) -> np.ndarray:
        ok = np.ones(points.shape[1:], dtype=bool)
        for i, ax in enumerate(self.axes):
            if not ax.periodic:
                ok &= (points[i] >= ax.lo - 1e-12) & (points[i] <= ax.hi + 1e-12)
        if self.ball:
            ok &= np.sum(points**2, axis=0) <= 1.0 + 1e-12
        return ok

    def sample(self, n: int, rng: np.random.Generator) -> np.ndarray:
        out = np.empty((4, 0))
        while out.shape[1] < n:
            pts = np.stack([rng.uniform(ax.lo, ax.hi, size=2 * n) for ax in self.axes])
            out = np.concatenate([out, pts[:, self.contains(pts)]], axis=1)
        return out[:, :n]


_ANGLE_MARGIN = 0.15
ANGLES = Chart(
    "angles",
    (Axis(_ANGLE_MARGIN, math.pi - _ANGLE_MARGIN), Axis(_ANGLE_MARGIN, math.pi - _ANGLE_MARGIN),
     Axis(_ANGLE_MARGIN, math.pi - _ANGLE_MARGIN), Axis(0.0, TWO_PI, True)),
)
_UNIT = (Axis(-1.0, 1.0),) * 4
NORTH = Chart("north", _UNIT, ball=True)
SOUTH = Chart("south", _UNIT, ball=True)
_ALIGNED = {f"{b}-e{a}": Chart(f"{b}-e{a}", _UNIT, ball=True) for a in range(1, 5) for b in ("north", "south")}
BOX = Chart("box", _UNIT)
CONE = Chart("cone", (Axis(1.0, 2.0), Axis(0.0, TWO_PI, True), Axis(0.3, math.pi - 0.3), Axis(0.0, TWO_PI, True)))


def _sum(items):
    total = items[0]
    for x in items[1:]:
        total = total + x
    return total


def _split_chart(chart: str) -> tuple[str, int]:
    # "south-e2" is the "south" chart with omega_2 and omega_5 exchanged
    base, _, axis = chart.partition("-e")
    return base, (int(axis) if axis else 5)


def sphere_point(x: Sequence, xp, chart: str) -> list:
    """Unit vector of S^4 in the given chart."""
    if chart == "angles":
        t1, t2, t3, ph = x
        s1, s2, s3 = xp.sin(t1), xp.sin(t2), xp.sin(t3)
        return [xp.cos(t1), s1 * xp.cos(t2), s1 * s2 * xp.cos(t3), s1 * s2 * s3 * xp.cos(ph), s1 * s2 * s3 * xp.sin(ph)]
    base, axis = _split_chart(chart)
    if base in ("north", "south") and 1 <= axis <= 5:
        # inverse stereographic projection of the unit ball onto the closed
        # hemisphere omega_5 <= 0 ("north") or omega_5 >= 0 ("south")
        r2 = _sum([c * c for c in x])
        inv = 1.0 / (1.0 + r2)
        last = (r2 - 1.0) * inv if base == "north" else (1.0 - r2) * inv
        out = [2.0 * c * inv for c in x] + [last]
        out[axis - 1], out[4] = out[4], out[axis - 1]
        return out
    raise DomainError(f"unknown sphere chart {chart!r}")


def sphere_atlas(axis: int = 5) -> tuple[str, str]:
    """Two-hemisphere atlas whose chart centers are the poles +-e_axis."""
    if axis == 5:
        return ("north", "south")
    return (f"north-e{axis}", f"south-e{axis}")


class Immersion:
    """Base class for catalog immersions."""

    kind = "immersion"
    charts: dict[str, Chart] = {}
    default_chart = ""
    critical = False
    minimal = False

    def param(self, x: Sequence, xp, chart: str | None = None) -> list:
        raise NotImplementedError

    def chart(self, name: str | None = None) -> Chart:
        name = name or self.default_chart
        if name not in self.charts:
            raise DomainError(f"{self.kind} has no chart {name!r}")
        return self.charts[name]

    def sample(self, n: int, rng: np.random.Generator, chart: str | None = None) -> np.ndarray:
        return self.chart(chart).sample(n, rng)

    def evaluate_jet(self, points, degree: int, chart: str | None = None) -> Jet:
        chart_obj = self.chart(chart)
        points = np.asarray(points, dtype=float)
        if points.ndim == 1:
            points = points[:, None]
        if not np.all(chart_obj.contains(points)):
            raise DomainError(f"point outside the declared domain of chart {chart_obj.name!r}")
        x = jets.variables(points, degree)
        comps = self.param([x[i] for i in range(4)], jets, chart_obj.name)
        return jets.stack(comps)

    def evaluate(self, points, chart: str | None = None) -> np.ndarray:
        points = np.asarray(points, dtype=float)
        comps = self.param([points[i] for i in range(4)], np, self.chart(chart).name)
        return np.stack([np.broadcast_to(c, points.shape[1:]) for c in comps])

    def atlas_charts(self) -> tuple[str, ...]:
        """Charts whose declared domains tile the closed manifold (if any)."""
        return ()

    def to_dict(self) -> dict:
        return {"kind": self.kind}


class Hyperplane(Immersion):
    kind = "hyperplane"
    charts = {"box": BOX}
    default_chart = "box"
    critical = True
    minimal = True

    def param(self, x, xp, chart=None):
        return [x[0], x[1], x[2], x[3], 0.0 * x[0]]


class _SphereLike(Immersion):
    charts = {"angles": ANGLES, "north": NORTH, "south": SOUTH, **_ALIGNED}
    # the conformal chart keeps the metric well conditioned; the angle chart
    # loses several digits in fourth derivatives near its coordinate poles
    default_chart = "north"

    def surface(self, omega: list, xp) -> list:
        raise NotImplementedError

    def param(self, x, xp, chart=None):
        return self.surface(sphere_point(x, xp, chart or self.default_chart), xp)

    def atlas_charts(self):
        return ("north", "south")


@dataclass
class RoundSphere(_SphereLike):
    radius: float = 1.0
    kind = "sphere"
    critical = True

    def __post_init__(self):
        if not self.radius > 0:
            raise ConfigError("sphere radius must be positive")

    def surface(self, omega, xp):
        return [self.radius * w for w in omega]

    def to_dict(self):
        return {"kind": self.kind, "r": self.radius}


def _harmonic(omega: list, mode: int):
    # Re((w1 + i w2)^mode), a degree-``mode`` spherical harmonic
    total = None
    for k in range(0, mode + 1, 2):
        term = math.comb(mode, k) * (-1) ** (k // 2) * omega[0] ** (mode - k) * omega[1] ** k if k else omega[0] ** mode
        total = term if total is None else total + term
    return total


@dataclass
class PerturbedSphere(_SphereLike):
    radius: float = 1.0
    eps: float = 0.1
    mode: int = 2
    kind = "perturbed-sphere"

    def __post_init__(self):
        if not self.radius > 0 or not 0 <= abs(self.eps) < 0.5 or self.mode < 1:
            raise ConfigError("perturbed sphere needs r > 0, |eps| < 0.5 and mode >= 1")

    def surface(self, omega, xp):
        rho = self.radius * (1.0 + self.eps * _harmonic(omega, self.mode))
        return [rho * w for w in omega]

    def to_dict(self):
        return {"kind": self.kind, "r": self.radius, "eps": self.eps, "mode": self.mode}


@dataclass
class Ellipsoid(_SphereLike):
    axes: tuple[float, ...] = (1.0, 1.0, 1.0, 1.0, 1.5)
    kind = "ellipsoid"

    def __post_init__(self):
        self.axes = tuple(float(a) for a in self.axes)
        if len(self.axes) != 5 or min(self.axes) <= 0:
            raise ConfigError("ellipsoid needs five positive semi-axes")

    def surface(self, omega, xp):
        return [a * w for a, w in zip(self.axes, omega)]

    def to_dict(self):
        return {"kind": self.kind, "axes": list(self.axes)}


class CliffordCone(Immersion):
    """Cone over S^1(sqrt(1/3)) x S^2(sqrt(2/3)); chart (t, alpha, theta, phi)."""

    kind = "clifford-cone"
    charts = {"cone": CONE}
    default_chart = "cone"
    critical = True
    minimal = True

    def param(self, x, xp, chart=None):
        t, al, th, ph = x
        a, b = math.sqrt(1.0 / 3.0), math.sqrt(2.0 / 3.0)
        st = xp.sin(th)
        return [t * a * xp.cos(al), t * a * xp.sin(al), t * b * st * xp.cos(ph), t * b * st * xp.sin(ph), t * b * xp.cos(th)]


_GRAPH_FUNCS = ("sin", "cos", "exp", "sqrt", "log")


@dataclass
class Graph(Immersion):
    """Graph ``(x, f(x))`` of an analytic height function of x1..x4."""

    expr: str = "0.3*sin(x1)*cos(x2) + 0.2*x3*x4"
    kind = "graph"
    charts = {"box": BOX}
    default_chart = "box"
    _fns: dict = field(default_factory=dict, init=False, repr=False)

    def __post_init__(self):
        import sympy

        syms = sympy.symbols("x1 x2 x3 x4")
        try:
            parsed = sympy.sympify(self.expr, locals={s.name: s for s in syms}, rational=False)
        except (sympy.SympifyError, SyntaxError, TypeError) as exc:
            raise ConfigError(f"cannot parse height function {self.expr!r}: {exc}") from exc
        unknown = parsed.free_symbols - set(syms)
        funcs = {f.func.__name__ for f in parsed.atoms(sympy.Function)}
        if unknown or not funcs <= set(_GRAPH_FUNCS):
            raise ConfigError(f"height function may use x1..x4 and {', '.join(_GRAPH_FUNCS)} only")
        self._fns = {
            "jets": sympy.lambdify(syms, parsed, modules=[{name: getattr(jets, name) for name in _GRAPH_FUNCS}]),
            "mpmath": sympy.lambdify(syms, parsed, modules="mpmath"),
            "numpy": sympy.lambdify(syms, parsed, modules="numpy"),
        }
        self._parsed = parsed

    def height(self, x, xp):
        if xp is jets:
            fn = self._fns["jets"]
        elif xp is np:
            fn = self._fns["numpy"]
        else:
            fn = self._fns["mpmath"]
        val = fn(*x)
        return val if not isinstance(val, (int, float)) else val + 0.0 * x[0]

    def param(self, x, xp, chart=None):
        return [x[0], x[1], x[2], x[3], self.height(x, xp)]

    def to_dict(self):
        return {"kind": self.kind, "f": self.expr}


@dataclass
class RandomImmersion(Immersion):
    """A generic analytic immersion ``Q x + sum_k c_k sin(w_k . x + s_k) + ...``.

    The linear part has orthonormal columns and the nonlinear part has small
    Lipschitz constant on the sampling box, so the differential stays
    injective there.
    """

    seed: int = 0
    terms: int = 4
    kind = "random"
    charts = {"box": Chart("box", (Axis(-0.5, 0.5),) * 4)}
    default_chart = "box"

    def __post_init__(self):
        rng = np.random.default_rng(self.seed)
        q, _ = np.linalg.qr(rng.normal(size=(5, 4)))
        self.linear = q
        self.offset = rng.normal(size=5)
        self.freq = rng.normal(size=(self.terms, 4))
        self.phase = rng.uniform(0, TWO_PI, size=self.terms)
        amp = rng.normal(size=(self.terms, 5))
        # keep sum |c_k| |w_k| well below 1
        lip = np.sum(np.linalg.norm(amp, axis=1) * np.linalg.norm(self.freq, axis=1))
        self.amp = amp * (0.35 / lip)
        self.quad = rng.normal(size=(5, 4, 4)) * 0.05
        self.quad = 0.5 * (self.quad + np.swapaxes(self.quad, 1, 2))

    def param(self, x, xp, chart=None):
        out = []
        waves = [xp.sin(_sum([self.freq[k, i] * x[i] for i in range(4)]) + self.phase[k]) for k in range(self.terms)]
        for a in range(5):
            comp = _sum([self.linear[a, i] * x[i] for i in range(4)]) + self.offset[a]
            for k in range(self.terms):
                comp = comp + self.amp[k, a] * waves[k]
            for i in range(4):
                for j in range(4):
                    if self.quad[a, i, j]:
                        comp = comp + self.quad[a, i, j] * x[i] * x[j]
            out.append(comp)
        return out

    def to_dict(self):
        return {"kind": self.kind, "seed": self.seed, "terms": self.terms}


# -- Moebius transformations ------------------------------------------------

@dataclass(frozen=True)
class Factor:
    kind: str  # translation | rotation | dilation | inversion
    vector: tuple[float, ...] = ()
    matrix: tuple[tuple[float, ...], ...] = ()
    scale: float = 1.0

    def apply(self, x: list, xp) -> list:
        if self.kind == "translation":
            return [c + v for c, v in zip(x, self.vector)]
        if self.kind == "dilation":
            return [self.scale * c for c in x]
        if self.kind == "rotation":
            return [_sum([self.matrix[a][b] * x[b] for b in range(5)]) for a in range(5)]
        if self.kind == "inversion":
            diff = [c - v for c, v in zip(x, self.vector)]
            r2 = _sum([d * d for d in diff])
            if isinstance(r2, Jet):
                inv = jets.recip(r2)
            else:
                if np.any(np.asarray(r2, dtype=float) == 0):
                    raise SingularityError("inversion center lies on the immersion")
                inv = 1.0 / r2
            return [v + self.scale**2 * d * inv for v, d in zip(self.vector, diff)]
        raise ConfigError(f"unknown Moebius factor {self.kind!r}")

    def inverse(self) -> "Factor":
        if self.kind == "translation":
            return Factor("translation", vector=tuple(-v for v in self.vector))
        if self.kind == "dilation":
            return Factor("dilation", scale=1.0 / self.scale)
        if self.kind == "rotation":
            return Factor("rotation", matrix=tuple(map(tuple, np.asarray(self.matrix).T)))
        return self

    def to_dict(self) -> dict:
        if self.kind == "translation":
            return {"kind": self.kind, "vector": list(self.vector)}
        if self.kind == "dilation":
            return {"kind": self.kind, "scale": self.scale}
        if self.kind == "rotation":
            return {"kind": self.kind, "matrix": [list(r) for r in self.matrix]}
        return {"kind": self.kind, "center": list(self.vector), "radius": self.scale}


def translation(v: Sequence[float]) -> Factor:
    v = tuple(float(a) for a in v)
    if len(v) != 5:
        raise ConfigError("translation needs a 5-vector")
    return Factor("translation", vector=v)


def dilation(scale: float) -> Factor:
    if not scale > 0:
        raise ConfigError("dilation factor must be positive")
    return Factor("dilation", scale=float(scale))


def rotation(matrix) -> Factor:
    m = np.asarray(matrix, dtype=float)
    if m.shape != (5, 5) or not np.allclose(m @ m.T, np.eye(5), atol=1e-12):
        raise ConfigError("rotation needs an orthogonal 5x5 matrix")
    return Factor("rotation", matrix=tuple(map(tuple, m)))


def plane_rotation(i: int, j: int, angle: float) -> Factor:
    m = np.eye(5)
    c, s = math.cos(angle), math.sin(angle)
    m[i, i] = m[j, j] = c
    m[i, j], m[j, i] = -s, s
    return rotation(m)


def random_rotation(seed: int) -> Factor:
    q, r = np.linalg.qr(np.random.default_rng(seed).normal(size=(5, 5)))
    q = q * np.sign(np.diag(r))
    if np.linalg.det(q) < 0:
        q[:, 0] = -q[:, 0]
    return rotation(q)


def inversion(center: Sequence[float], radius: float = 1.0) -> Factor:
    c = tuple(float(a) for a in center)
    if len(c) != 5 or not radius > 0:
        raise ConfigError("inversion needs a 5-vector center and positive radius")
    return Factor("inversion", vector=c, scale=float(radius))


@dataclass(frozen=True)
class MobiusTransform:
    factors: tuple[Factor, ...] = ()

    def apply(self, x: list, xp) -> list:
        for f in self.factors:
            x = f.apply(x, xp)
        return x

    def __call__(self, x: list) -> list:
        return self.apply(x, jets)

    def inverse(self) -> "MobiusTransform":
        return MobiusTransform(tuple(f.inverse() for f in reversed(self.factors)))

    def then(self, other: "MobiusTransform") -> "MobiusTransform":
        return MobiusTransform(self.factors + other.factors)

    def inversion_clearance(self, points: np.ndarray) -> float:
        """Smallest distance from an inversion center to the (partially mapped) points."""
        best = math.inf
        x = [points[a] for a in range(5)]
        for f in self.factors:
            if f.kind == "inversion":
                d = np.sqrt(sum((x[a] - f.vector[a]) ** 2 for a in range(5)))
                best = min(best, float(np.min(d)))
            x = f.apply(x, np)
        return best

    def to_dict(self) -> list:
        return [f.to_dict() for f in self.factors]


@dataclass
class MobiusImage(Immersion):
    inner: Immersion = field(default_factory=lambda: RoundSphere(1.0))
    transform: MobiusTransform = field(default_factory=MobiusTransform)
    kind = "mobius"

    def __post_init__(self):
        self.charts = self.inner.charts
        self.default_chart = self.inner.default_chart
        self.critical = self.inner.critical
        self.minimal = False

    def param(self, x, xp, chart=None):
        return self.transform.apply(self.inner.param(x, xp, chart), xp)

    def atlas_charts(self):
        charts = self.inner.atlas_charts()
        if tuple(charts) != sphere_atlas():
            return charts
        # centre the hemisphere charts on the first inversion center, where the
        # image is most strongly magnified, instead of leaving it on the seam
        prefix = []
        for f in self.transform.factors:
            if f.kind == "inversion":
                c = MobiusTransform(tuple(prefix)).inverse().apply([np.array(v) for v in f.vector], np)
                return sphere_atlas(int(np.argmax(np.abs(np.array(c, dtype=float)))) + 1)
            prefix.append(f)
        return charts

    def to_dict(self):
        return {"kind": self.kind, "inner": self.inner.to_dict(), "transform": self.transform.to_dict()}


MIN_CLEARANCE = 0.5


def check_clearance(spec: Immersion, rng: np.random.Generator | None = None, n: int = 2000) -> float:
    """Sample the inner immersion and verify inversion centers stay away from it."""
    if not isinstance(spec, MobiusImage):
        return math.inf
    rng = rng or np.random.default_rng(0)
    dist = math.inf
    charts = spec.atlas_charts() or (spec.default_chart,)
    for name in charts:
        pts = spec.inner.sample(n, rng, name)
        dist = min(dist, spec.transform.inversion_clearance(spec.inner.evaluate(pts, name)))
    if dist < MIN_CLEARANCE:
        raise SingularityError(f"inversion center within {dist:.3g} of the immersion (need >= {MIN_CLEARANCE})")
    return dist


def evaluate_jet(spec: Immersion, point, degree: int, chart: str | None = None) -> Jet:
    return spec.evaluate_jet(point, degree, chart)


# -- spec strings and dictionaries ------------------------------------------------

def _floats(text: str) -> list[float]:
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError as exc:
        raise ConfigError(f"expected comma-separated numbers, got {text!r}") from exc


def _parse_kv(body: str) -> dict[str, str]:
    out = {}
    for item in filter(None, (p.strip() for p in body.split(";"))):
        if "=" not in item:
            raise ConfigError(f"expected key=value, got {item!r}")
        k, v = item.split("=", 1)
        out[k.strip()] = v.strip()
    return out


def _take(kv: dict, allowed: dict) -> dict:
    unknown = set(kv) - set(allowed)
    if unknown:
        raise ConfigError(f"unknown parameter(s): {', '.join(sorted(unknown))}")
    return {k: allowed[k](v) for k, v in kv.items()}


_SPEC_KEYS = {
    "sphere": {"r": float},
    "perturbed-sphere": {"r": float, "eps": float, "mode": int},
    "ellipsoid": {"axes": _floats},
    "hyperplane": {},
    "clifford-cone": {},
    "graph": {"f": str},
    "random": {"seed": int, "terms": int},
}


def spec_from_dict(d: dict) -> Immersion:
    d = dict(d)
    kind = d.pop("kind", None)
    if kind == "mobius":
        unknown = set(d) - {"inner", "transform"}
        if unknown:
            raise ConfigError(f"unknown parameter(s): {', '.join(sorted(unknown))}")
        return MobiusImage(spec_from_dict(d.get("inner", {"kind": "sphere"})), transform_from_list(d.get("transform", [])))
    if kind not in _SPEC_KEYS:
        raise ConfigError(f"unknown immersion kind {kind!r}")
    unknown = set(d) - set(_SPEC_KEYS[kind])
    if unknown:
        raise ConfigError(f"unknown parameter(s) for {kind}: {', '.join(sorted(unknown))}")
    try:
        if kind == "sphere":
            return RoundSphere(float(d.get("r", 1.0)))
        if kind == "perturbed-sphere":
            return PerturbedSphere(float(d.get("r", 1.0)), float(d.get("eps", 0.1)), int(d.get("mode", 2)))
        if kind == "ellipsoid":
            axes = d.get("axes", (1, 1, 1, 1, 1.5))
            return Ellipsoid(tuple(_floats(axes) if isinstance(axes, str) else axes))
        if kind == "hyperplane":
            return Hyperplane()
        if kind == "clifford-cone":
            return CliffordCone()
        if kind == "graph":
            return Graph(str(d["f"])) if "f" in d else Graph()
        return RandomImmersion(int(d.get("seed", 0)), int(d.get("terms", 4)))
    except (TypeError, ValueError) as exc:
        raise ConfigError(str(exc)) from exc


def parse_spec(text: str) -> Immersion:
    """Parse strings such as ``sphere:r=1`` or ``ellipsoid:axes=1,1,1,1,1.5``."""
    name, _, body = text.strip().partition(":")
    if name not in _SPEC_KEYS:
        raise ConfigError(f"unknown immersion {name!r}; known: {', '.join(_SPEC_KEYS)}")
    params = _take(_parse_kv(body), _SPEC_KEYS[name])
    return spec_from_dict({"kind": name, **params})


def factor_from_dict(d: dict) -> Factor:
    d = dict(d)
    kind = d.pop("kind", None)
    keys = {"translation": {"vector"}, "dilation": {"scale"}, "rotation": {"matrix", "plane", "angle", "seed"},
            "inversion": {"center", "radius"}}
    if kind not in keys:
        raise ConfigError(f"unknown Moebius factor {kind!r}")
    unknown = set(d) - keys[kind]
    if unknown:
        raise ConfigError(f"unknown parameter(s) for {kind}: {', '.join(sorted(unknown))}")
    vec = lambda v: _floats(v) if isinstance(v, str) else [float(a) for a in v]
    if kind == "translation":
        return translation(vec(d["vector"]))
    if kind == "dilation":
        return dilation(float(d["scale"]))
    if kind == "inversion":
        return inversion(vec(d["center"]), float(d.get("radius", 1.0)))
    if "matrix" in d:
        return rotation(d["matrix"])
    if "seed" in d:
        return random_rotation(int(d["seed"]))
    plane = [int(v) for v in (vec(d.get("plane", "1,2")))]
    return plane_rotation(plane[0] - 1, plane[1] - 1, float(d.get("angle", 0.3)))


def transform_from_list(items) -> MobiusTransform:
    if isinstance(items, dict):
        items = [items]
    return MobiusTransform(tuple(factor_from_dict(f) for f in items))


def parse_transform(text: str) -> MobiusTransform:
    """``inversion:center=3,0,0,0,0;radius=1``; several factors joined by ``|``."""
    factors = []
    for chunk in filter(None, (c.strip() for c in text.split("|"))):
        name, _, body = chunk.partition(":")
        factors.append(factor_from_dict({"kind": name, **_parse_kv(body)}))
    return MobiusTransform(tuple(factors))


MPMATH_OPS = None


def mpmath_ops():
    """Namespace evaluating parametrizations in mpmath (used by oracles)."""
    global MPMATH_OPS
    if MPMATH_OPS is None:
        import mpmath

        MPMATH_OPS = SimpleNamespace(sin=mpmath.sin, cos=mpmath.cos, exp=mpmath.exp, sqrt=mpmath.sqrt, log=mpmath.log)
    return MPMATH_OPS
