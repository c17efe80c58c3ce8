"""Induced metric, unit normal, curvature and covariant calculus on a chart.

Everything is computed in jet arithmetic from the jets of the immersion, so
a frame built from degree-K jets carries exact derivatives of the metric up
to order K-1 and of the second fundamental form up to order K-2.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import jets
from .errors import DegenerateImmersionError, InsufficientOrderError
from .exterior_algebra import EPSILON
from .jets import Jet

DEGENERACY = 1e-10
_IDX = "abcdefgh"


def _inverse_series(g: Jet) -> tuple[Jet, Jet, Jet]:
    """Inverse, determinant and sqrt-determinant of a jet of SPD matrices."""
    k = g.degree
    g0 = g.value
    g0m = np.moveaxis(g0, (0, 1), (-2, -1))
    g0inv = np.moveaxis(np.linalg.inv(g0m), (-2, -1), (0, 1))
    det0 = np.linalg.det(g0m)
    delta = g - g0
    y = jets.einsum("ik...,kj...->ij...", g0inv, delta)
    # (I + Y)^-1 G0^-1 as a Neumann series; Y has no constant term
    term = Jet.constant(g0inv, k)
    inv = term
    for _ in range(k):
        term = -jets.einsum("ik...,kj...->ij...", y, term)
        inv = inv + term
    # log det(I + Y) = sum (-1)^{m+1} tr(Y^m) / m
    logdet = Jet.constant(np.zeros(det0.shape), k)
    power = None
    for m in range(1, k + 1):
        power = y if power is None else jets.einsum("ik...,kj...->ij...", power, y)
        logdet = logdet + jets.einsum("ii...->...", power) * ((-1.0) ** (m + 1) / m)
    det = jets.exp(logdet) * det0
    sqrt_det = jets.exp(logdet * 0.5) * np.sqrt(det0)
    return inv, det, sqrt_det


@dataclass(frozen=True)
class FramePack:
    """First-order data of an immersion on a chart, as jets."""

    phi: Jet  # (5, ...)
    dphi: Jet  # (4, 5, ...)   d_i Phi
    d2phi: Jet  # (4, 4, 5, ...) d_i d_j Phi
    g: Jet  # (4, 4, ...)
    ginv: Jet
    det: Jet
    sqrt_det: Jet
    christoffel: Jet  # (4, 4, 4, ...) Gamma^k_ij stored as [k, i, j]
    normal: Jet  # (5, ...)

    @property
    def degree(self) -> int:
        return self.phi.degree

    @property
    def dphi_up(self) -> Jet:
        """Raised tangent vectors ``g^{ij} d_j Phi``."""
        return jets.einsum("ij...,ja...->ia...", self.ginv, self.dphi)


def build_frame(phi: Jet) -> FramePack:
    if phi.degree < 2:
        raise InsufficientOrderError("a frame needs jets of degree >= 2")
    dphi = phi.grad()
    d2phi = dphi.grad().moveaxis(0, 1)  # [i, j] = d_i d_j, symmetric anyway
    g = jets.einsum("ia...,ja...->ij...", dphi, dphi)
    g0 = g.value
    scale = np.einsum("ii...->...", g0) / 4.0
    g0m = np.moveaxis(g0, (0, 1), (-2, -1))
    det0 = np.linalg.det(g0m)
    bad = det0 <= DEGENERACY * scale**4
    if np.any(bad):
        raise DegenerateImmersionError(
            f"degenerate metric at {int(np.count_nonzero(bad))} point(s): det g / scale^4 = "
            f"{float(np.min(det0 / scale**4)):.3e}"
        )
    ginv, det, sqrt_det = _inverse_series(g)
    gamma_low = jets.einsum("la...,ija...->lij...", dphi, d2phi)
    christoffel = jets.einsum("kl...,lij...->kij...", ginv, gamma_low)
    # N_a = eps_{abcde} T1_b T2_c T3_d T4_e, the dual of T1 ^ T2 ^ T3 ^ T4
    t = [dphi[i] for i in range(4)]
    x = jets.einsum("d...,e...->de...", t[2], t[3])
    y = jets.einsum("abcde,de...->abc...", EPSILON.eps5, x)
    z = jets.einsum("abc...,c...->ab...", y, t[1])
    big_n = jets.einsum("ab...,b...->a...", z, t[0])
    norm = jets.sqrt(jets.einsum("a...,a...->...", big_n, big_n))
    normal = big_n * jets.recip(norm)
    return FramePack(phi, dphi, d2phi, g, ginv, det, sqrt_det, christoffel, normal)


# -- covariant calculus -------------------------------------------------------

def covariant_derivative(t: Jet, frame: FramePack, kinds: str) -> Jet:
    """``nabla_k T`` with the new index first.

    ``kinds`` lists the variance of the leading chart axes of ``t`` ('u' for
    upper, 'l' for lower); any further axes (ambient components, batch) are
    treated as scalars.
    """
    n = len(kinds)
    if t.degree < 1:
        raise InsufficientOrderError("covariant derivative needs a jet of degree >= 1")
    out = t.grad()
    gamma = frame.christoffel
    idx = _IDX[:n]
    for p, kind in enumerate(kinds):
        src = idx[:p] + "m" + idx[p + 1 :]
        if kind == "u":
            term = jets.einsum(f"{idx[p]}km...,{src}...->k{idx}...", gamma, t)
            out = out + term
        elif kind == "l":
            term = jets.einsum(f"mk{idx[p]}...,{src}...->k{idx}...", gamma, t)
            out = out - term
        else:
            raise ValueError(f"unknown index kind {kind!r}")
    return out


def divergence(x: Jet, frame: FramePack) -> Jet:
    """``|g|^{-1/2} d_j (|g|^{1/2} X^j)`` for a vector field with leading index j.

    Further axes of ``x`` (e.g. ambient components) are handled componentwise.
    """
    weighted = x * frame.sqrt_det
    total = None
    for j in range(4):
        term = weighted[j].d(j)
        total = term if total is None else total + term
    return total * jets.recip(frame.sqrt_det)


def divergence_tensor(t: Jet, frame: FramePack, kinds: str) -> Jet:
    """``nabla_i T^{i...}``: covariant divergence on the first (upper) index."""
    if kinds[0] != "u":
        raise ValueError("divergence contracts an upper index")
    dt = covariant_derivative(t, frame, kinds)
    return jets.einsum("ii...->...", dt)


def raise_index(t: Jet, frame: FramePack) -> Jet:
    return jets.einsum("ij...,j...->i...", frame.ginv, t)


def laplace_beltrami(f: Jet, frame: FramePack) -> Jet:
    """``|g|^{-1/2} d_i (|g|^{1/2} g^{ij} d_j f)``; degree drops by two."""
    if f.degree < 2:
        raise InsufficientOrderError("Laplace-Beltrami needs a jet of degree >= 2")
    grad_up = raise_index(f.grad(), frame)
    return divergence(grad_up, frame)


def laplacian(f: Jet, frame: FramePack) -> Jet:
    """``g^{ij} (d_i d_j f - Gamma^k_ij d_k f)``; same operator via Christoffels."""
    if f.degree < 2:
        raise InsufficientOrderError("Laplacian needs a jet of degree >= 2")
    df = f.grad()
    hess = covariant_derivative(df, frame, "l")
    return jets.einsum("ij...,ij...->...", frame.ginv, hess)


# -- curvature ------------------------------------------------------------------

@dataclass(frozen=True)
class CurvaturePack:
    """Second-order data; entries that need more derivatives may be ``None``."""

    h: Jet  # h_ij
    h_mixed: Jet  # h^i_j = g^{ik} h_kj
    h_up: Jet  # h^{ij}
    H: Jet
    h0: Jet  # h_ij - H g_ij
    norm2: Jet  # |h|^2
    norm2_0: Jet  # |h0|^2
    trace3: Jet  # Tr h^3 = h^{ik} h_mk h_i^m
    dH: Jet | None  # d_i H
    grad_H: Jet | None  # nabla^i H
    lap_H: Jet | None
    lap2_H: Jet | None
    nabla_h: Jet | None  # nabla_k h_ij stored [k, i, j]

    def value(self, name: str) -> np.ndarray:
        item = getattr(self, name)
        if item is None:
            raise InsufficientOrderError(f"{name} not available at this jet degree")
        return item.value


def curvature(frame: FramePack, phi: Jet | None = None) -> CurvaturePack:
    phi = frame.phi if phi is None else phi
    k = phi.degree
    if k < 2:
        raise InsufficientOrderError("curvature needs jets of degree >= 2")
    d2phi = frame.d2phi if phi is frame.phi else phi.grad().grad()
    h = jets.einsum("ija...,a...->ij...", d2phi, frame.normal)
    h_mixed = jets.einsum("ik...,kj...->ij...", frame.ginv, h)
    h_up = jets.einsum("ij...,kj...->ik...", h_mixed, frame.ginv)
    H = jets.einsum("ii...->...", h_mixed) * 0.25
    h0 = h - frame.g * H
    norm2 = jets.einsum("ij...,ji...->...", h_mixed, h_mixed)
    norm2_0 = jets.einsum("ij...,ij...->...", h0, jets.einsum("ik...,kl...,lj...->ij...", frame.ginv, h0, frame.ginv))
    sq = jets.einsum("ij...,jk...->ik...", h_mixed, h_mixed)
    trace3 = jets.einsum("ij...,ji...->...", sq, h_mixed)
    dH = grad_H = lap_H = lap2_H = nabla_h = None
    if H.degree >= 1:
        dH = H.grad()
        grad_H = raise_index(dH, frame)
        nabla_h = covariant_derivative(h, frame, "ll")
    if H.degree >= 2:
        lap_H = laplacian(H, frame)
    if H.degree >= 4:
        lap2_H = laplacian(lap_H, frame)
    return CurvaturePack(h, h_mixed, h_up, H, h0, norm2, norm2_0, trace3, dH, grad_H, lap_H, lap2_H, nabla_h)


def curvature_scale(curv: CurvaturePack) -> np.ndarray:
    """Pointwise curvature scale ``|h|`` used to size identity tolerances."""
    return np.sqrt(np.abs(curv.norm2.value))


def curvature_unit(curv: CurvaturePack) -> np.ndarray:
    """Inverse length built from ``|h|/2``, ``|grad h|^(1/2)`` and ``|Lap H|^(1/3)``.

    ``|h|/2`` is the root-mean-square principal curvature, so on a sphere of
    radius r the unit is exactly 1/r.  A quantity of curvature degree k is
    compared against ``unit**k``.
    """
    unit = 0.5 * curvature_scale(curv)
    if curv.nabla_h is not None:
        grad_h = np.sqrt(np.einsum("kij...,kij...->...", curv.nabla_h.value, curv.nabla_h.value))
        unit = np.maximum(unit, np.sqrt(grad_h))
    if curv.lap_H is not None:
        unit = np.maximum(unit, np.cbrt(np.abs(curv.lap_H.value)))
    return unit
