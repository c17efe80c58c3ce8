"""Stress tensor, conserved currents, the 2-plane form eta and the operator P.

Vector- and multivector-valued chart tensors are stored chart-index first,
e.g. ``V`` has shape ``(4, 5, ...)`` with ``V[j]`` the ambient vector ``V^j``.
Divergences of such fields act on every ambient component separately.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import jets
from .errors import DegenerateImmersionError, InsufficientOrderError
from .exterior_algebra import BASIS, WEDGE, ChartForm, Multivector5, chart_hodge, chart_products
from .geometry import (
    DEGENERACY,
    CurvaturePack,
    FramePack,
    curvature_unit,
    divergence,
    divergence_tensor,
    laplacian,
    raise_index,
)
from .jets import Jet

V_TERMS = (
    "gradient_sq",  # |grad H|^2 nabla^j Phi
    "gradient_pair",  # -2 (nabla^j H nabla_i H) nabla^i Phi
    "laplacian_h",  # 1/2 Lap H h^{ji} d_i Phi
    "grad_laplacian",  # 1/2 nabla^j Lap H n
    "divergence_vector",  # -2 nabla_i (H^2 h^{ij} n)
    "divergence_scalar",  # 4 nabla_i (H^2 h^{ij}) n
    "gradient_vector_Hh2",  # -1/2 nabla^j (|h|^2 H n)
    "mixed",  # -H^2 |h|^2 nabla^j Phi
    "gradient_scalar_Hh2",  # nabla^j (|h|^2 H) n
    "quartic",  # 7 H^4 nabla^j Phi
    "gradient_vector_H3",  # 7 nabla^j (H^3 n)
    "gradient_scalar_H3",  # -14 nabla^j (H^3) n
)

_WEDGE11 = WEDGE[(1, 1)]


def _need6(curv: CurvaturePack, frame: FramePack, what: str) -> None:
    if frame.degree < 6 or curv.lap_H is None or curv.lap_H.degree < 1:
        raise InsufficientOrderError(f"{what} needs immersion jets of degree 6")


def _norm(x: np.ndarray, axes) -> np.ndarray:
    return np.sqrt(np.sum(np.asarray(x) ** 2, axis=axes))


@dataclass(frozen=True)
class StressTensor:
    V: Jet  # (4, 5, ...) degree-1 jets, V[j] = V^j
    terms: dict[str, Jet]
    trace: np.ndarray  # d_j Phi . V^j
    trace_expected: np.ndarray  # Lap(H^2)
    trace_scale: np.ndarray

    @property
    def trace_residual(self) -> np.ndarray:
        return np.abs(self.trace - self.trace_expected)

    @property
    def trace_relative(self) -> np.ndarray:
        return self.trace_residual / np.maximum(self.trace_scale, DEGENERACY)


def stress_tensor(curv: CurvaturePack, frame: FramePack) -> StressTensor:
    """The translation current ``V^j`` (all twelve printed terms) as degree-1 jets."""
    _need6(curv, frame, "the stress tensor")
    K = 1
    H = curv.H
    n = frame.normal
    dphi_up = frame.dphi_up
    lap = curv.lap_H
    n2 = curv.norm2
    grad2 = jets.einsum("i...,i...->...", curv.dH, curv.grad_H)

    def up_grad(f: Jet) -> Jet:
        return raise_index(f.grad(), frame)

    def times_n(s: Jet) -> Jet:  # (4, ...) scalar per j -> (4, 5, ...)
        return jets.einsum("j...,a...->ja...", s, n)

    H2 = H * H
    t_div = divergence_tensor(jets.einsum("ij...,a...->ija...", curv.h_up * H2, n), frame, "uu")
    s_div = divergence_tensor(curv.h_up * H2, frame, "uu")
    # nabla_i H nabla^i Phi and h^{ji} d_i Phi
    grad_h_tan = jets.einsum("i...,ia...->a...", curv.dH, dphi_up)
    shape_op = jets.einsum("jk...,ka...->ja...", curv.h_up, frame.dphi)
    terms = {
        "gradient_sq": dphi_up * grad2,
        "gradient_pair": jets.einsum("j...,a...->ja...", curv.grad_H, grad_h_tan) * -2.0,
        "laplacian_h": shape_op * lap * 0.5,
        "grad_laplacian": times_n(up_grad(lap)) * 0.5,
        "divergence_vector": t_div * -2.0,
        "divergence_scalar": times_n(s_div) * 4.0,
        "gradient_vector_Hh2": raise_index((n * (n2 * H)).grad(), frame) * -0.5,
        "mixed": dphi_up * (H2 * n2) * -1.0,
        "gradient_scalar_Hh2": times_n(up_grad(n2 * H)),
        "quartic": dphi_up * (H2 * H2) * 7.0,
        "gradient_vector_H3": raise_index((n * (H2 * H)).grad(), frame) * 7.0,
        "gradient_scalar_H3": times_n(up_grad(H2 * H)) * -14.0,
    }
    terms = {k: v.truncate(K) for k, v in terms.items()}
    V = terms[V_TERMS[0]]
    for name in V_TERMS[1:]:
        V = V + terms[name]
    trace = jets.einsum("ja...,ja...->...", frame.dphi.truncate(K), V).value
    expected = laplacian(H2, frame).value
    return StressTensor(V, terms, trace, expected, curvature_unit(curv) ** 4)


@dataclass(frozen=True)
class CurrentPack:
    D: Jet  # (4, ...) dilation current
    M: Jet  # (4, 10, ...) grade-2 coefficients
    R: Jet  # (4, 10, ...) rotation current Phi ^ V^j + M^j


def _wedge_vectors(a: Jet, b: Jet) -> Jet:
    """Grade-2 coefficients of ``a ^ b`` for stacks of ambient vectors ``(..., 5, batch)``."""
    return jets.einsum("xyr,jx...,jy...->jr...", _WEDGE11, a, b)


def currents(V: StressTensor, curv: CurvaturePack, frame: FramePack) -> CurrentPack:
    K = 1
    H = curv.H
    phi = frame.phi.truncate(K)
    n = frame.normal.truncate(K)
    D = jets.einsum("a...,ja...->j...", phi, V.V) - raise_index((H * H).grad(), frame).truncate(K)
    coeff = curv.lap_H * 0.5 + curv.norm2 * H * 0.5 - H * H * H * 7.0
    tangent = frame.dphi_up * coeff + jets.einsum("ij...,ia...->ja...", curv.h_up, frame.dphi) * (H * H * 2.0)
    tangent = tangent.truncate(K)
    n_stack = jets.einsum("a...,j...->ja...", n, Jet.constant(np.ones((4,) + n.shape[1:]), K))
    M = _wedge_vectors(n_stack, tangent)
    phi_stack = jets.einsum("a...,j...->ja...", phi, Jet.constant(np.ones((4,) + n.shape[1:]), K))
    R = _wedge_vectors(phi_stack, V.V) + M
    return CurrentPack(D, M, R)


@dataclass(frozen=True)
class DivergenceChecks:
    translation: np.ndarray  # |nabla_j V^j|
    dilation: np.ndarray  # |nabla_j D^j|
    rotation: np.ndarray  # |nabla_j R^j|
    scale_translation: np.ndarray
    scale_current: np.ndarray
    div_V: np.ndarray = field(repr=False, default=None)

    def relative(self) -> dict[str, np.ndarray]:
        return {
            "translation": self.translation / np.maximum(self.scale_translation, DEGENERACY),
            "dilation": self.dilation / np.maximum(self.scale_current, DEGENERACY),
            "rotation": self.rotation / np.maximum(self.scale_current, DEGENERACY),
        }


def divergence_checks(V: StressTensor, cur: CurrentPack, frame: FramePack, curv: CurvaturePack) -> DivergenceChecks:
    """Covariant divergences of the translation, dilation and rotation currents."""
    if V.V.degree < 1:
        raise InsufficientOrderError("divergence checks need degree-1 current jets")
    div_V = divergence(V.V, frame).value
    div_D = divergence(cur.D, frame).value
    div_R = divergence(cur.R, frame).value
    # div V has curvature degree 5; Phi . div V and Phi ^ div V add a length
    unit = curvature_unit(curv)
    radius = _norm(frame.phi.value, 0)
    return DivergenceChecks(
        _norm(div_V, 0), np.abs(div_D), _norm(div_R, 0), unit**5, unit**4 * (1.0 + radius * unit), div_V
    )


# -- eta and its codifferential -----------------------------------------------

@dataclass(frozen=True)
class EtaForm:
    eta: Jet  # (4, 4, 10, ...) eta_ij = d_i Phi ^ d_j Phi
    codifferential: np.ndarray  # (4, 10, ...) nabla^i eta_ij
    formula: np.ndarray  # 4 H n ^ d_j Phi + h_ij nabla^i Phi ^ n

    @property
    def gap(self) -> np.ndarray:
        return _norm(self.codifferential - self.formula, (0, 1))

    def chart_form(self) -> ChartForm:
        return ChartForm(2, Multivector5({2: np.moveaxis(self.eta.value, 2, 0)}))


def eta_and_codifferential(frame: FramePack, curv: CurvaturePack) -> EtaForm:
    if frame.degree < 3:
        raise InsufficientOrderError("the codifferential of eta needs immersion jets of degree >= 3")
    dphi = frame.dphi
    eta = jets.einsum("xyr,ix...,jy...->ijr...", _WEDGE11, dphi, dphi)
    eta_mixed = jets.einsum("ik...,kjr...->ijr...", frame.ginv, eta)
    codiff = divergence_tensor(eta_mixed, frame, "ul").value
    n = frame.normal.value
    H = curv.H.value
    dphi_v = dphi.value
    up = frame.dphi_up.value
    first = np.einsum("xyr,x...,jy...->jr...", _WEDGE11, n, dphi_v) * (4.0 * H)
    hup = np.einsum("ij...,ia...->ja...", curv.h.value, up)  # h_ij nabla^i Phi
    second = np.einsum("xyr,jx...,y...->jr...", _WEDGE11, hup, n)
    return EtaForm(eta, codiff, first + second)


# -- the operator P and its inverse -------------------------------------------

def _frame_values(frame: FramePack) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    g = frame.g.value
    det = np.linalg.det(np.moveaxis(g, (0, 1), (-2, -1)))
    scale = np.einsum("ii...->...", g) / 4.0
    if np.any(det <= DEGENERACY * scale**4):
        raise DegenerateImmersionError("P needs a nondegenerate frame")
    return frame.dphi.value, frame.dphi_up.value, frame.normal.value


def p_apply(ell: np.ndarray, frame: FramePack) -> np.ndarray:
    """``P(l)_pq = l_p ^ d_q Phi - l_q ^ d_p Phi`` for ``l`` of shape ``(4, 5, ...)``.

    Returns grade-2 coefficients of shape ``(4, 4, 10, ...)``.
    """
    dphi, _, _ = _frame_values(frame)
    a = np.einsum("xyr,px...,qy...->pqr...", _WEDGE11, np.asarray(ell, dtype=float), dphi)
    return a - np.swapaxes(a, 0, 1)


def p_invert(P: np.ndarray, frame: FramePack) -> np.ndarray:
    """Recover ``l`` from ``P(l)`` using tangent-plane and normal-plane contractions."""
    dphi, up, n = _frame_values(frame)
    P = np.asarray(P, dtype=float)
    planes = np.einsum("xyr,ix...,qy...->iqr...", _WEDGE11, up, up)  # nabla^i Phi ^ nabla^q Phi
    normal_planes = np.einsum("xyr,x...,qy...->qr...", _WEDGE11, n, up)  # n ^ nabla^q Phi
    c = 0.5 * np.einsum("pqr...,iqr...->pi...", P, planes)
    trace = np.einsum("sqr...,sqr...->...", P, planes)
    c = c - np.einsum("pi,...->pi...", np.eye(4), trace) / 12.0
    b = np.einsum("pqr...,qr...->p...", P, normal_planes) / 3.0
    return np.einsum("pi...,ia...->pa...", c, dphi) + np.einsum("p...,a...->pa...", b, n)


# -- appendix identity ----------------------------------------------------------

@dataclass(frozen=True)
class AppendixChecks:
    lhs: np.ndarray  # star eta bullet-wedge star(J0 ^ star dPhi), grade-2 3-form components
    target: np.ndarray  # J0 ^ star dPhi
    hodge_free_lhs: np.ndarray  # star eta bullet-wedge (J0 ^ dPhi)
    scale: np.ndarray  # |J0 ^ star dPhi|

    @property
    def residual(self) -> np.ndarray:
        """``|lhs - J0 ^ *dPhi|``: the identity with the sign that the algebra produces."""
        return _norm(self.lhs - self.target, (0, 1, 2, 3))

    @property
    def hodge_free_residual(self) -> np.ndarray:
        """``|star eta bullet-wedge (J0 ^ dPhi) + J0 ^ *dPhi|``."""
        return _norm(self.hodge_free_lhs + self.target, (0, 1, 2, 3))

    @property
    def printed_sign_residual(self) -> np.ndarray:
        """``|lhs + J0 ^ *dPhi|``, equal to ``2 |J0 ^ *dPhi|`` when the identity holds."""
        return _norm(self.lhs + self.target, (0, 1, 2, 3))


def geometric_j0(curv: CurvaturePack, frame: FramePack) -> np.ndarray:
    """``J0 = (Lap H / 2 + H |h|^2 / 2 - 7 H^3 + 8 H^3) n`` at the sample points."""
    if curv.lap_H is None:
        raise InsufficientOrderError("J0 needs Lap H (immersion jets of degree >= 4)")
    H = curv.H.value
    coeff = 0.5 * curv.lap_H.value + 0.5 * H * curv.norm2.value - 7.0 * H**3 + 8.0 * H**3
    return frame.normal.value * coeff


def appendix_identity_checks(
    metric: np.ndarray, dphi: np.ndarray, j0: np.ndarray
) -> AppendixChecks:
    """Evaluate both sides of the appendix identity for a normal vector ``j0``.

    ``metric`` is ``(4, 4, ...)``, ``dphi`` the tangent vectors ``(4, 5, ...)``
    and ``j0`` a vector ``(5, ...)``.  Form products use the componentwise
    (``average``) normalization in which ``eta_ij = d_i Phi ^ d_j Phi``.
    """
    metric = np.asarray(metric, dtype=float)
    d_phi = ChartForm.one_form(1, np.asarray(dphi, dtype=float))
    eta = chart_products(d_phi, d_phi, "wedge", weights="average")
    star_eta = chart_hodge(eta, metric)
    star_dphi = chart_hodge(d_phi, metric)
    j = ChartForm(0, Multivector5.vector(np.asarray(j0, dtype=float)))
    target = chart_products(j, star_dphi, "wedge")
    lhs = chart_products(star_eta, chart_hodge(target, metric), "bullet", weights="average")
    plain = chart_products(star_eta, chart_products(j, d_phi, "wedge"), "bullet", weights="average")
    t = target.value.part(2)
    scale = _norm(t, tuple(range(4)))
    return AppendixChecks(lhs.value.part(2), t, plain.value.part(2), scale)


def appendix_checks_for_frame(frame: FramePack, curv: CurvaturePack | None = None, j0=None) -> AppendixChecks:
    """Appendix identity on a catalog frame, with geometric ``J0`` unless one is given."""
    if j0 is None:
        if curv is None:
            raise ValueError("need curvature data or an explicit J0")
        j0 = geometric_j0(curv, frame)
    return appendix_identity_checks(frame.g.value, frame.dphi.value, j0)


GRADE2_SIZE = len(BASIS[2])
