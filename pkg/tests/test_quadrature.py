import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from willmore4.catalog import (
    BOX,
    NORTH,
    Hyperplane,
    MobiusTransform,
    RoundSphere,
    dilation,
    inversion,
    random_rotation,
    translation,
)
from willmore4.errors import DomainError
from willmore4.quadrature import (
    GridSpec,
    chart_grid,
    energy,
    gauss_legendre,
    integrate,
    local_energy,
    mobius_invariance_experiment,
    region_charts,
    richardson,
    trapezoid_periodic,
    volume,
)

EIGHT_PI_SQUARED = 8.0 * math.pi**2


# -- one-dimensional rules ---------------------------------------------------------------

@pytest.mark.parametrize("n", [1, 3, 6])
def test_gauss_legendre_is_exact_on_polynomials(n):
    x, w = gauss_legendre(n, -0.5, 2.0)
    for k in range(2 * n):
        exact = (2.0 ** (k + 1) - (-0.5) ** (k + 1)) / (k + 1)
        assert np.dot(w, x**k) == pytest.approx(exact, rel=1e-13, abs=1e-13)


@pytest.mark.parametrize("n", [4, 7])
def test_periodic_trapezoid_is_exact_on_trig_polynomials(n):
    x, w = trapezoid_periodic(n)
    for k in range(n):
        assert np.dot(w, np.cos(k * x)) == pytest.approx(2 * math.pi if k == 0 else 0.0, abs=1e-13)
        assert np.dot(w, np.sin(k * x)) == pytest.approx(0.0, abs=1e-13)


def test_chart_grid_volumes():
    _, w = chart_grid(BOX, (3, 3, 3, 3))
    assert w.sum() == pytest.approx(16.0, rel=1e-14)
    pts, w = chart_grid(NORTH, (4, 12, 4, 4))
    assert w.sum() == pytest.approx(math.pi**2 / 2, rel=1e-13)  # unit 4-ball
    assert np.max(np.sum(pts**2, axis=0)) < 1.0
    # integral of |y|^2 over the unit ball is 2 pi^2 / 6
    assert np.dot(w, np.sum(pts**2, axis=0)) == pytest.approx(math.pi**2 / 3, rel=1e-13)
    # and of y1^2 y3^2, which needs the angular rule to resolve cos^2 sin^2
    assert np.dot(w, pts[0] ** 2 * pts[2] ** 2) == pytest.approx(math.pi**2 / 96, rel=1e-13)


def test_grid_counts():
    grid = GridSpec((1.5, 1.0, 2.0, 1.0), (4.0, 6.0, 9.0))
    assert grid.counts(4.0) == (6, 4, 8, 4)
    assert grid.counts(9.0) == (14, 9, 18, 9)


# -- Richardson extrapolation -----------------------------------------------------------------

@settings(max_examples=100, deadline=None)
@given(st.floats(-10, 10), st.floats(0.1, 5.0), st.floats(2.0, 6.0), st.sampled_from([1.5, 2.0]))
def test_richardson_recovers_algebraic_convergence(limit, c, p, ratio):
    h = [1.0, 1.0 / ratio, 1.0 / ratio**2]
    values = [limit + c * (x / 8.0) ** p for x in h]
    value, error, order, ok = richardson(values, ratio)
    if abs(values[2] - values[1]) <= 1e-13 * max(1.0, abs(values[2])):
        assert ok and order == math.inf
        return
    assert ok
    assert order == pytest.approx(p, rel=1e-6)
    assert value == pytest.approx(limit, abs=1e-9 * max(1.0, abs(limit)))
    assert error == pytest.approx(abs(values[2] - values[1]))


def test_richardson_edge_cases():
    assert richardson([1.0, 1.0, 1.0]) == (1.0, 0.0, math.inf, True)
    value, _, order, ok = richardson([1.0, 1.0, 1.1])
    assert not ok and order == 0.0 and value == 1.1
    _, _, order, ok = richardson([1.0, 1.1, 1.2])  # no convergence
    assert not ok and order == pytest.approx(0.0)
    with pytest.raises(ValueError):
        richardson([1.0, 2.0])


def test_grid_must_refine_geometrically():
    with pytest.raises(ValueError):
        volume(RoundSphere(1.0), GridSpec((1, 1, 1, 1), (2.0, 3.0, 5.0)))


# -- integrals on the catalog -------------------------------------------------------------------

def test_unit_sphere_volume():
    res = volume(RoundSphere(1.0))
    assert res.converged and res.order >= 2
    assert res.value == pytest.approx(8.0 * math.pi**2 / 3.0, rel=1e-4)


def test_sphere_volume_scales():
    res = volume(RoundSphere(2.0))
    assert res.value == pytest.approx(16.0 * 8.0 * math.pi**2 / 3.0, rel=1e-4)


def test_hyperplane_energy_vanishes():
    res = energy(Hyperplane(), region="unit-box")
    assert res.value == 0.0 and res.converged


def test_region_resolution():
    assert region_charts(RoundSphere(1.0), None) == ("north", "south")
    assert region_charts(RoundSphere(1.0), "angles") == ("angles",)
    assert region_charts(Hyperplane(), "unit-box") == ("box",)
    with pytest.raises(DomainError):
        region_charts(Hyperplane(), "atlas")
    with pytest.raises(DomainError):
        region_charts(Hyperplane(), "north")


def test_custom_density_and_chart_region():
    # H^2 = 1 on the unit sphere, so this is the area of the angle chart, whose
    # volume element is sin^3(t1) sin^2(t2) sin(t3)
    res = integrate(RoundSphere(1.0), lambda curv, frame: curv.H.value**2, region="angles", degree=2)
    assert res.converged
    a, b = 0.15, math.pi - 0.15
    primitives = {
        1: lambda x: -math.cos(x),
        2: lambda x: x / 2 - math.sin(2 * x) / 4,
        3: lambda x: -math.cos(x) + math.cos(x) ** 3 / 3,
    }
    expected = 2 * math.pi
    for k in (1, 2, 3):
        expected *= primitives[k](b) - primitives[k](a)
    assert res.value == pytest.approx(expected, rel=1e-6)


def test_unit_sphere_energy():
    res = energy(RoundSphere(1.0))
    assert res.converged and res.order >= 2
    assert res.value == pytest.approx(EIGHT_PI_SQUARED, rel=1e-4)


def test_local_energy_of_unit_sphere():
    le = local_energy(RoundSphere(1.0))
    assert le.gradient_norm <= 1e-6
    assert le.mean_curvature_norm == pytest.approx((8.0 * math.pi**2 / 3.0) ** 0.25, rel=1e-4)
    assert le.value == pytest.approx(le.gradient_norm + le.mean_curvature_norm)


def test_local_energy_of_flat_patch():
    assert local_energy(Hyperplane(), "unit-box").value == 0.0


# -- Moebius invariance on the round sphere ---------------------------------------------------

@pytest.fixture(scope="module")
def sphere_energy():
    return energy(RoundSphere(1.0))


GENERATORS = {
    "translation": MobiusTransform((translation([0.3, -0.2, 0.5, 0.1, 0.4]),)),
    "rotation": MobiusTransform((random_rotation(1),)),
    "dilation": MobiusTransform((dilation(2.0),)),
    "inversion": MobiusTransform((inversion((3.0, 0.0, 0.0, 0.0, 0.0)),)),
    "composition": MobiusTransform((random_rotation(5), inversion((0.0, 0.0, 3.5, 0.0, 0.0), 2.0),
                                    translation([0.2, 0.0, 0.0, -0.1, 0.3]))),
}


@pytest.mark.parametrize("name", list(GENERATORS))
def test_sphere_energy_is_moebius_invariant(name, sphere_energy):
    res = mobius_invariance_experiment(RoundSphere(1.0), GENERATORS[name], before=sphere_energy)
    assert res.after.converged
    assert res.gap <= 1e-4
    if name == "dilation":
        assert res.gap <= 1e-10


def test_identity_transform_has_zero_gap(sphere_energy):
    res = mobius_invariance_experiment(RoundSphere(1.0), MobiusTransform(()), before=sphere_energy)
    assert res.gap == 0.0
