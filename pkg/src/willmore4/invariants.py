"""Energy densities, the sixth-order Euler-Lagrange operator and related identities.

All operators are written for hypersurfaces: vector-valued quantities are
scalar multiples of the unit normal, so ``H`` below is the scalar mean
curvature ``H = g^{ij} h_ij / 4`` and the vector operator is ``W = w n``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import jets
from .errors import InsufficientOrderError
from .geometry import (
    CurvaturePack,
    FramePack,
    covariant_derivative,
    curvature_scale,
    curvature_unit,
    divergence,
    divergence_tensor,
    laplacian,
    raise_index,
)

IDENTITY_FLOOR = 1e-10


@dataclass(frozen=True)
class DensityValue:
    density: np.ndarray
    volume: np.ndarray  # sqrt(det g)
    terms: dict[str, np.ndarray]

    @property
    def total(self) -> np.ndarray:
        return self.density


def energy_density(curv: CurvaturePack, frame: FramePack | None = None) -> DensityValue:
    """``|grad H|^2 - H^2 |h|^2 + 7 H^4`` with its three terms."""
    if curv.dH is None:
        raise InsufficientOrderError("energy density needs grad H (jets of degree >= 3)")
    H = curv.H.value
    grad2 = np.einsum("i...,i...->...", curv.dH.value, curv.grad_H.value)
    terms = {"grad": grad2, "mixed": -(H**2) * curv.norm2.value, "quartic": 7.0 * H**4}
    vol = frame.sqrt_det.value if frame is not None else np.full(np.shape(H), np.nan)
    return DensityValue(terms["grad"] + terms["mixed"] + terms["quartic"], vol, terms)


def energy_density_mu(curv: CurvaturePack, mu: float, frame: FramePack | None = None) -> DensityValue:
    """Density plus ``mu |h0|^4``, cross-checked against the trace-free form."""
    base = energy_density(curv, frame)
    h0_4 = curv.norm2_0.value**2
    value = base.density + mu * h0_4
    H = curv.H.value
    alt = base.terms["grad"] + 3.0 * H**4 - H**2 * curv.norm2_0.value + mu * h0_4
    terms = dict(base.terms)
    terms["mu"] = mu * h0_4
    terms["alternative"] = alt
    terms["form_gap"] = np.abs(value - alt)
    return DensityValue(value, base.volume, terms)


def quadratic_form_min(mu: float) -> tuple[float, np.ndarray]:
    """Minimum of ``3x^2 - xy + mu y^2`` on the unit circle, with a minimizing direction."""
    m = np.array([[3.0, -0.5], [-0.5, float(mu)]])
    vals, vecs = np.linalg.eigh(m)
    w = vecs[:, 0]
    if w[0] < 0 or (w[0] == 0 and w[1] < 0):
        w = -w
    return float(vals[0]), w


def quadratic_form(x, y, mu: float):
    return 3.0 * x * x - x * y + mu * y * y


# -- the sixth-order operator ---------------------------------------------

W_TERMS = (
    "bilaplacian",  # -1/2 Lap^2 H
    "norm_laplacian",  # -1/2 |h|^2 Lap H
    "gradient_sq",  # -4 |grad H|^2 H
    "gradient_h",  # 2 grad_i H grad_j H h^ij
    "laplacian_Hh2",  # -1/2 Lap(H |h|^2)
    "double_divergence",  # -2 nabla_i nabla_k (H^2 h^ik)
    "trace_cubed",  # -2 H^2 Tr h^3
    "quintic",  # -28 H^5
    "norm4",  # -1/2 |h|^4 H
    "laplacian_H3",  # 7 Lap(H^3)
    "norm2_H3",  # 11 H^3 |h|^2
)


@dataclass(frozen=True)
class WillmoreResidual:
    vector: np.ndarray  # (5, ...)
    scalar: np.ndarray  # coefficient of n
    terms: dict[str, np.ndarray] = field(default_factory=dict)

    @property
    def norm(self) -> np.ndarray:
        return np.sqrt(np.sum(self.vector**2, axis=0))


def _need(curv: CurvaturePack, frame: FramePack, degree: int, what: str) -> None:
    if frame.degree < degree or curv.H.degree < degree - 2:
        raise InsufficientOrderError(f"{what} needs immersion jets of degree >= {degree}")


def double_divergence(t_up, frame: FramePack):
    """``nabla_i nabla_k T^{ik}`` for a symmetric (2,0) tensor jet."""
    inner = divergence_tensor(t_up.moveaxis(1, 0), frame, "uu")  # nabla_k T^{ik}, index i left
    return divergence(inner, frame)


def willmore_operator(curv: CurvaturePack, frame: FramePack) -> WillmoreResidual:
    _need(curv, frame, 6, "the Euler-Lagrange operator")
    H, n2 = curv.H, curv.norm2
    Hv, n2v = H.value, n2.value
    grad2 = np.einsum("i...,i...->...", curv.dH.value, curv.grad_H.value)
    terms = {
        "bilaplacian": -0.5 * curv.lap2_H.value,
        "norm_laplacian": -0.5 * n2v * curv.lap_H.value,
        "gradient_sq": -4.0 * grad2 * Hv,
        "gradient_h": 2.0 * np.einsum("i...,j...,ij...->...", curv.dH.value, curv.dH.value, curv.h_up.value),
        "laplacian_Hh2": -0.5 * laplacian(H * n2, frame).value,
        "double_divergence": -2.0 * double_divergence(curv.h_up * (H * H), frame).value,
        "trace_cubed": -2.0 * Hv**2 * curv.trace3.value,
        "quintic": -28.0 * Hv**5,
        "norm4": -0.5 * n2v**2 * Hv,
        "laplacian_H3": 7.0 * laplacian(H * H * H, frame).value,
        "norm2_H3": 11.0 * Hv**3 * n2v,
    }
    scalar = sum(terms[k] for k in W_TERMS)
    return WillmoreResidual(frame.normal.value * scalar, scalar, terms)


def willmore_scale(curv: CurvaturePack) -> np.ndarray:
    """Curvature-degree-5 scale for sizing tolerances on W (``1/r^5`` on a sphere)."""
    return curvature_unit(curv) ** 5


@dataclass(frozen=True)
class W3Value:
    vector: np.ndarray
    scalar: np.ndarray
    hard_form: np.ndarray | None  # the H = 0 form, evaluated regardless of H
    terms: dict[str, np.ndarray] = field(default_factory=dict)

    @property
    def norm(self) -> np.ndarray:
        return np.sqrt(np.sum(self.vector**2, axis=0))


def w3_operator(curv: CurvaturePack, frame: FramePack) -> W3Value:
    """Euler-Lagrange operator of the competing energy, plus its H = 0 form."""
    _need(curv, frame, 4, "W3")
    n2 = curv.norm2
    H = curv.H.value
    terms = {
        "cubic": 4.0 * curv.trace3.value * n2.value,
        "quintic": -4.0 * n2.value**2 * H,
        "double_divergence": 4.0 * double_divergence(curv.h_up * n2, frame).value,
    }
    scalar = terms["cubic"] + terms["quintic"] + terms["double_divergence"]
    # nabla_i nabla_j |h|^2 contracted with h^ij
    hess = covariant_derivative(n2.grad(), frame, "l")
    hard = terms["cubic"] + 4.0 * np.einsum("ij...,ij...->...", curv.h_up.value, hess.value)
    return W3Value(frame.normal.value * scalar, scalar, hard, terms)


@dataclass(frozen=True)
class RivvyResidual:
    residual: np.ndarray  # (5, ...)
    divergence: np.ndarray  # nabla_s A^s
    expected: np.ndarray  # (Lap H + H |h|^2 - 8 H^3) n
    scale: np.ndarray
    tensor_gap: np.ndarray  # |A^s - g^{sj} T_j|

    @property
    def norm(self) -> np.ndarray:
        return np.sqrt(np.sum(self.residual**2, axis=0))

    @property
    def relative(self) -> np.ndarray:
        return self.norm / np.maximum(self.scale, IDENTITY_FLOOR)


def identity_tensor(curv: CurvaturePack, frame: FramePack):
    """``A^s = nabla^s (H n) - 2 (H^2 g^{sk} - H h^{sk}) d_k Phi`` as a (4, 5, ...) jet."""
    H = curv.H
    hn = frame.normal * H
    grad_hn = raise_index(hn.grad(), frame)
    coeff = frame.ginv * (H * H) - curv.h_up * H
    return grad_hn - jets.einsum("sk...,ka...->sa...", coeff, frame.dphi) * 2.0


def return_tensor(curv: CurvaturePack, frame: FramePack):
    """``T_j = nabla_j (H n) + 2 H h_jk nabla^k Phi - 2 H^2 d_j Phi`` (lower index)."""
    H = curv.H
    hn = frame.normal * H
    dphi_up = frame.dphi_up
    return hn.grad() + jets.einsum("jk...,ka...->ja...", curv.h, dphi_up) * (H * 2.0) - frame.dphi * (H * H * 2.0)


def rivvy_residual(curv: CurvaturePack, frame: FramePack) -> RivvyResidual:
    _need(curv, frame, 4, "the identity-tensor check")
    A = identity_tensor(curv, frame)
    div = divergence(A, frame).value
    H, n2, lap = curv.H.value, curv.norm2.value, curv.lap_H.value
    expected = frame.normal.value * (lap + H * n2 - 8.0 * H**3)
    kappa = curvature_scale(curv)
    grad_h = np.sqrt(np.abs(np.einsum("kij...,kij...->...", curv.nabla_h.value, curv.nabla_h.value)))
    scale = np.abs(lap) + np.abs(H) * n2 + 8.0 * np.abs(H) ** 3 + kappa**3 + grad_h * kappa
    T = return_tensor(curv, frame)
    T_up = raise_index(T, frame).value
    gap = np.sqrt(np.sum((A.value - T_up) ** 2, axis=(0, 1)))
    return RivvyResidual(div - expected, div, expected, scale, gap)


def tolerance(scale, rel: float, floor: float = IDENTITY_FLOOR):
    return floor + rel * np.asarray(scale)
