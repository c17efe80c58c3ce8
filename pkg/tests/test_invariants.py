import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import load_data
from willmore4.catalog import (
    CliffordCone,
    Ellipsoid,
    Graph,
    Hyperplane,
    MobiusImage,
    MobiusTransform,
    PerturbedSphere,
    RandomImmersion,
    RoundSphere,
    rotation,
)
from willmore4.errors import InsufficientOrderError
from willmore4.geometry import build_frame, curvature
from willmore4.invariants import (
    W_TERMS,
    energy_density,
    energy_density_mu,
    quadratic_form,
    quadratic_form_min,
    rivvy_residual,
    w3_operator,
    willmore_operator,
    willmore_scale,
)


def geometry(spec, points, degree=6, chart=None):
    frame = build_frame(spec.evaluate_jet(points, degree, chart))
    return frame, curvature(frame)


# -- hypersurfaces of revolution against the reduced Euler-Lagrange equations ----------------

REVOLUTION = load_data("revolution.json")
DIRECTION = np.array([0.5, -0.5, 0.5, 0.5])


def revolution_case(name):
    data = REVOLUTION[name]
    rhos = np.array([row["rho"] for row in data["rows"]])
    if name == "ellipsoid":
        # lower half of the ellipsoid: sphere point (rho d, -sqrt(1 - rho^2)) in the north chart
        w5 = -np.sqrt(1.0 - rhos**2)
        pts = np.outer(DIRECTION, rhos / (1.0 - w5))
        spec, chart = Ellipsoid((1.0, 1.0, 1.0, 1.0, 1.5)), "north"
    else:
        r2 = "(x1**2+x2**2+x3**2+x4**2)"
        spec, chart = Graph(f"0.3*{r2}-0.2*{r2}**2"), "box"
        pts = np.outer(DIRECTION, rhos)
    frame, curv = geometry(spec, pts, 6, chart)
    return data["rows"], frame, curv


@pytest.fixture(scope="module", params=["ellipsoid", "quartic"])
def revolution(request):
    return revolution_case(request.param)


def test_revolution_point_placement(revolution):
    rows, frame, _ = revolution
    phi = frame.phi.value
    for p, row in enumerate(rows):
        assert np.linalg.norm(phi[:4, p]) == pytest.approx(row["rho"], abs=1e-14)
        assert phi[4, p] == pytest.approx(row["u"], abs=1e-14)


def test_revolution_curvature(revolution):
    rows, frame, curv = revolution
    sign = np.sign(frame.normal.value[4])
    density = energy_density(curv, frame).density
    for p, row in enumerate(rows):
        assert sign[p] * curv.H.value[p] == pytest.approx(row["H_up"], rel=1e-12)
        assert curv.norm2.value[p] == pytest.approx(row["norm2"], rel=1e-12)
        assert sign[p] * curv.lap_H.value[p] == pytest.approx(row["lap_H_up"], rel=1e-10, abs=1e-12)
        assert density[p] == pytest.approx(row["density"], rel=1e-12)


def test_willmore_operator_is_the_euler_lagrange_operator(revolution):
    rows, frame, curv = revolution
    n5 = frame.normal.value[4]
    W = willmore_operator(curv, frame)
    w3 = w3_operator(curv, frame)
    for p, row in enumerate(rows):
        sqrt_q = np.sqrt(1.0 + row["du"] ** 2)
        assert W.scalar[p] * n5[p] * sqrt_q == pytest.approx(row["w_n5_sqrtq"], rel=1e-9)
        assert w3.scalar[p] * n5[p] * sqrt_q == pytest.approx(row["w3_n5_sqrtq"], rel=1e-9)


# -- energy density ------------------------------------------------------------------------------

@pytest.mark.parametrize("r", [0.5, 1.0, 2.0])
def test_sphere_density(r, rng):
    spec = RoundSphere(r)
    frame, curv = geometry(spec, spec.sample(10, rng), degree=3)
    d = energy_density(curv, frame)
    assert np.allclose(d.density, 3.0 / r**4, rtol=1e-12)
    assert np.allclose(d.terms["grad"], 0.0, atol=1e-12 / r**4)
    assert np.allclose(d.terms["mixed"], -4.0 / r**4, rtol=1e-12)
    assert np.allclose(d.terms["quartic"], 7.0 / r**4, rtol=1e-12)
    mu = energy_density_mu(curv, 1.0 / 12.0, frame)
    assert np.allclose(mu.density, 3.0 / r**4, rtol=1e-12)


@pytest.mark.parametrize("spec", [Hyperplane(), CliffordCone()], ids=lambda s: s.kind)
def test_minimal_density_vanishes(spec, rng):
    _, curv = geometry(spec, spec.sample(20, rng), degree=3)
    assert np.max(np.abs(energy_density(curv).density)) <= 1e-12
    if isinstance(spec, Hyperplane):
        assert np.all(energy_density_mu(curv, 0.7).density == 0.0)


@pytest.mark.parametrize("seed", range(4))
def test_mu_forms_agree(seed):
    spec = RandomImmersion(seed=seed)
    _, curv = geometry(spec, spec.sample(20, np.random.default_rng(seed)), degree=3)
    for mu in (0.0, 1.0 / 12.0, 0.4):
        d = energy_density_mu(curv, mu)
        scale = np.abs(d.terms["grad"]) + curv.norm2.value**2
        assert np.all(d.terms["form_gap"] <= 1e-12 * scale)


# -- the quadratic form ---------------------------------------------------------------------

def test_quadratic_form_threshold():
    value, witness = quadratic_form_min(1.0 / 12.0)
    assert abs(value) <= 1e-12
    assert witness[1] / witness[0] == pytest.approx(6.0, rel=1e-12)
    assert quadratic_form(witness[0], witness[1], 1.0 / 12.0) == pytest.approx(0.0, abs=1e-12)
    assert quadratic_form_min(1.0 / 12.0 - 0.01)[0] < -1e-4
    assert quadratic_form_min(1.0)[0] > 0


@settings(max_examples=50, deadline=None)
@given(st.floats(-5.0, 5.0))
def test_quadratic_form_on_axis(mu):
    assert quadratic_form(1.0, 0.0, mu) == 3.0


@settings(max_examples=100, deadline=None)
@given(st.floats(-2.0, 2.0), st.floats(0.0, 2 * np.pi))
def test_quadratic_form_min_is_a_lower_bound(mu, angle):
    value, witness = quadratic_form_min(mu)
    assert np.linalg.norm(witness) == pytest.approx(1.0, abs=1e-14)
    assert quadratic_form(np.cos(angle), np.sin(angle), mu) >= value - 1e-12
    assert quadratic_form(witness[0], witness[1], mu) == pytest.approx(value, abs=1e-12)
    # nonnegative exactly when the discriminant 1 - 12 mu is <= 0
    if mu >= 1.0 / 12.0 + 1e-9:
        assert value >= 0
    if mu <= 1.0 / 12.0 - 1e-9:
        assert value < 0


# -- the sixth-order operator ----------------------------------------------------------------

@pytest.mark.parametrize("r", [0.5, 1.0, 2.0])
def test_sphere_is_critical_and_terms_cancel(r, rng):
    spec = RoundSphere(r)
    frame, curv = geometry(spec, spec.sample(10, rng))
    W = willmore_operator(curv, frame)
    assert np.max(W.norm) <= 1e-8 * r**-5
    sign = np.sign(curv.H.value)
    expected = {"trace_cubed": -8.0, "quintic": -28.0, "norm4": -8.0, "norm2_H3": 44.0}
    for name in W_TERMS:
        scaled = W.terms[name] * sign * r**5
        assert np.allclose(scaled, expected.get(name, 0.0), rtol=0, atol=1e-8), name


@pytest.mark.parametrize("spec", [Hyperplane(), CliffordCone()], ids=lambda s: s.kind)
def test_minimal_is_critical(spec, rng):
    frame, curv = geometry(spec, spec.sample(100, rng))
    W = willmore_operator(curv, frame)
    assert np.max(np.abs(curv.H.value)) <= 1e-9
    assert np.all(W.norm <= 1e-9 * willmore_scale(curv))


def test_term_breakdown_sums_to_total(rng):
    spec = RandomImmersion(seed=2)
    frame, curv = geometry(spec, spec.sample(10, rng))
    W = willmore_operator(curv, frame)
    total = sum(W.terms[k] for k in W_TERMS)
    magnitude = sum(np.abs(W.terms[k]) for k in W_TERMS)
    assert np.all(np.abs(total - W.scalar) <= 1e-12 * magnitude)
    assert np.allclose(W.vector, frame.normal.value * W.scalar, rtol=0, atol=1e-14 * magnitude.max())


def test_ellipsoid_is_not_critical(rng):
    spec = Ellipsoid()
    frame, curv = geometry(spec, spec.sample(10, rng))
    assert np.min(willmore_operator(curv, frame).norm) > 1e-3


def test_reflection_flips_orientation(rng):
    inner = PerturbedSphere(1.0, 0.1, 2)
    mirror = np.diag([1.0, 1.0, 1.0, 1.0, -1.0])
    image = MobiusImage(inner, MobiusTransform((rotation(mirror),)))
    pts = inner.sample(10, rng)
    f0, c0 = geometry(inner, pts)
    f1, c1 = geometry(image, pts)
    assert np.allclose(f1.normal.value, -mirror @ f0.normal.value, atol=1e-14)
    assert np.allclose(energy_density(c1).density, energy_density(c0).density, rtol=1e-12)
    w0, w1 = willmore_operator(c0, f0), willmore_operator(c1, f1)
    assert np.allclose(w1.scalar, -w0.scalar, rtol=1e-9, atol=1e-12)
    assert np.allclose(w1.vector, mirror @ w0.vector, rtol=1e-9, atol=1e-12)
    assert np.allclose(w1.norm, w0.norm, rtol=1e-9)


def test_operator_needs_degree_six(rng):
    spec = RoundSphere(1.0)
    frame, curv = geometry(spec, spec.sample(2, rng), degree=5)
    with pytest.raises(InsufficientOrderError):
        willmore_operator(curv, frame)
    frame, curv = geometry(spec, spec.sample(2, rng), degree=3)
    with pytest.raises(InsufficientOrderError):
        w3_operator(curv, frame)


# -- the competing operator ---------------------------------------------------------------------

def test_w3_vanishes_on_sphere(rng):
    # h_ij = s g_ij: 4 Tr h^3 |h|^2 = 64 s and 4 |h|^4 H = 64 s cancel, the divergence term is zero
    spec = RoundSphere(1.0)
    frame, curv = geometry(spec, spec.sample(10, rng), degree=4)
    w3 = w3_operator(curv, frame)
    assert np.allclose(w3.terms["cubic"] * np.sign(curv.H.value), 64.0, rtol=1e-12)
    assert np.max(w3.norm) <= 1e-10


def test_w3_on_flat_is_zero(rng):
    frame, curv = geometry(Hyperplane(), Hyperplane().sample(5, rng), degree=4)
    assert np.all(w3_operator(curv, frame).norm == 0.0)


def test_w3_nonzero_on_cone(rng):
    spec = CliffordCone()
    frame, curv = geometry(spec, spec.sample(20, rng), degree=4)
    w3 = w3_operator(curv, frame)
    h5 = curv.norm2.value ** 2.5
    assert np.min(w3.norm / h5) > 1e-3
    assert np.max(np.abs(w3.scalar - w3.hard_form) / np.abs(w3.scalar)) <= 1e-8


# -- the identity tensor ---------------------------------------------------------------------------

def test_rivvy_examples(rng):
    frame, curv = geometry(Hyperplane(), Hyperplane().sample(5, rng), degree=4)
    assert np.all(rivvy_residual(curv, frame).norm == 0.0)
    spec = RoundSphere(2.0)
    frame, curv = geometry(spec, spec.sample(10, rng), degree=4)
    assert np.max(rivvy_residual(curv, frame).norm) <= 1e-9


@pytest.mark.parametrize("seed", range(10))
def test_rivvy_on_random_immersions(seed):
    spec = RandomImmersion(seed=seed)
    frame, curv = geometry(spec, spec.sample(20, np.random.default_rng(seed)), degree=4)
    res = rivvy_residual(curv, frame)
    assert np.max(res.relative) <= 1e-7
    assert np.max(res.tensor_gap / res.scale) <= 1e-7


def test_rivvy_on_perturbed_sphere(rng):
    spec = PerturbedSphere(1.0, 0.1, 2)
    for chart in spec.atlas_charts():
        frame, curv = geometry(spec, spec.sample(20, rng, chart), degree=4, chart=chart)
        assert np.max(rivvy_residual(curv, frame).relative) <= 1e-7
