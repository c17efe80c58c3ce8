import math

import mpmath
import numpy as np
import pytest

from willmore4 import jets
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
    check_clearance,
    dilation,
    evaluate_jet,
    inversion,
    mpmath_ops,
    parse_spec,
    parse_transform,
    plane_rotation,
    random_rotation,
    rotation,
    sphere_atlas,
    spec_from_dict,
    translation,
)
from willmore4.errors import ConfigError, DomainError, SingularityError
from willmore4.geometry import build_frame

CENTER = (3.0, 0.0, 0.0, 0.0, 0.0)


def test_equatorial_sphere_point():
    pt = np.array([math.pi / 2, math.pi / 2, math.pi / 2, 0.3])
    jet = evaluate_jet(RoundSphere(1.0), pt, 2, "angles")
    assert np.linalg.norm(jet.value[:, 0]) == pytest.approx(1.0, abs=1e-15)
    g = build_frame(jet).g.value[..., 0]
    assert np.allclose(g, np.diag(np.diag(g)), rtol=0, atol=1e-15)
    assert np.allclose(np.diag(g), 1.0, atol=1e-15)


def test_cone_ray():
    pt = np.array([1.0, 0.0, math.pi / 2, 0.0])
    jet = evaluate_jet(CliffordCone(), pt, 2)
    phi = jet.value[:, 0]
    assert np.linalg.norm(phi) == pytest.approx(1.0, abs=1e-15)
    # d/dt Phi = Phi / t: the radial direction is tangent
    assert np.allclose(jet.grad().value[0, :, 0], phi, atol=1e-15)


def test_cone_link_radii():
    pts = CliffordCone().sample(50, np.random.default_rng(1))
    phi = CliffordCone().evaluate(pts)
    t = pts[0]
    assert np.allclose(np.hypot(phi[0], phi[1]), t * math.sqrt(1 / 3), rtol=1e-14)
    assert np.allclose(np.linalg.norm(phi[2:], axis=0), t * math.sqrt(2 / 3), rtol=1e-14)


def test_inversion_image_point():
    image = MobiusImage(RoundSphere(1.0), MobiusTransform((inversion(CENTER, 1.0),)))
    pt = np.array([0.2, -0.1, 0.3, 0.05])
    x = RoundSphere(1.0).evaluate(pt[:, None])[:, 0]
    y = image.evaluate(pt[:, None])[:, 0]
    d = x - np.array(CENTER)
    assert np.allclose(y, np.array(CENTER) + d / (d @ d), rtol=0, atol=1e-15)
    assert np.linalg.norm(y - np.array(CENTER)) == pytest.approx(1.0 / np.linalg.norm(d), rel=1e-14)


@pytest.mark.parametrize("radius", [1.0, 1.7])
def test_double_inversion_is_identity_on_jets(radius, rng):
    spec = PerturbedSphere(1.0, 0.1, 2)
    pts = spec.sample(10, rng)
    inv = inversion(CENTER, radius)
    twice = MobiusImage(spec, MobiusTransform((inv, inv)))
    a = spec.evaluate_jet(pts, 6)
    b = twice.evaluate_jet(pts, 6)
    assert np.max(np.abs(a.coef - b.coef)) <= 1e-10


def test_transform_inverse_round_trip(rng):
    t = MobiusTransform((translation([0.1, 0.2, -0.3, 0.4, 0.0]), random_rotation(3), dilation(1.4),
                         inversion(CENTER, 0.8)))
    spec = RandomImmersion(seed=2)
    pts = spec.sample(5, rng)
    back = MobiusImage(MobiusImage(spec, t), t.inverse())
    assert np.allclose(back.evaluate_jet(pts, 4).coef, spec.evaluate_jet(pts, 4).coef, rtol=0, atol=1e-10)


def test_clearance():
    near = MobiusImage(RoundSphere(1.0), MobiusTransform((inversion((1.2, 0, 0, 0, 0)),)))
    with pytest.raises(SingularityError):
        check_clearance(near)
    far = MobiusImage(RoundSphere(1.0), MobiusTransform((inversion(CENTER),)))
    # sampled estimate of the true distance 2: never below it
    assert 2.0 <= check_clearance(far) <= 2.1
    assert check_clearance(RoundSphere(1.0)) == math.inf


def test_inversion_through_the_center_is_singular():
    factor = inversion((0.0,) * 5)
    with pytest.raises(SingularityError):
        factor.apply([np.zeros(1)] * 5, np)
    with pytest.raises(SingularityError):
        factor.apply([jets.Jet.constant(np.zeros(1), 2)] * 5, jets)


def test_pole_aligned_atlas():
    image = MobiusImage(RoundSphere(1.0), MobiusTransform((inversion(CENTER),)))
    assert image.atlas_charts() == sphere_atlas(1)
    shifted = MobiusImage(RoundSphere(1.0), MobiusTransform((translation([0, 0, 2, 0, 0]), inversion(CENTER))))
    # the center pulled back by the translation is (3, 0, -2, 0, 0): still closest to the e1 axis
    assert shifted.atlas_charts() == sphere_atlas(1)
    assert MobiusImage(RoundSphere(1.0), MobiusTransform((dilation(2.0),))).atlas_charts() == ("north", "south")


@pytest.mark.parametrize("chart", ["north", "south", "north-e2", "south-e3", "angles"])
def test_sphere_charts_land_on_the_sphere(chart, rng):
    pts = RoundSphere(1.0).sample(30, rng, chart)
    phi = RoundSphere(2.5).evaluate(pts, chart)
    assert np.allclose(np.linalg.norm(phi, axis=0), 2.5, rtol=1e-14)


def test_hemisphere_atlas_covers_sphere(rng):
    for axis in (5, 2):
        north, south = sphere_atlas(axis)
        a = RoundSphere(1.0).evaluate(RoundSphere(1.0).sample(200, rng, north), north)
        b = RoundSphere(1.0).evaluate(RoundSphere(1.0).sample(200, rng, south), south)
        assert np.all(a[axis - 1] <= 1e-14) and np.all(b[axis - 1] >= -1e-14)


def test_ellipsoid_and_perturbed_sphere_shapes(rng):
    pts = RoundSphere(1.0).sample(20, rng)
    omega = RoundSphere(1.0).evaluate(pts)
    e = Ellipsoid((1, 2, 1, 1, 1.5)).evaluate(pts)
    assert np.allclose(e, omega * np.array([1, 2, 1, 1, 1.5])[:, None], rtol=1e-15)
    p = PerturbedSphere(2.0, 0.1, 3).evaluate(pts)
    harmonic = omega[0] ** 3 - 3 * omega[0] * omega[1] ** 2  # Re (w1 + i w2)^3
    assert np.allclose(np.linalg.norm(p, axis=0), 2.0 * (1 + 0.1 * harmonic), rtol=1e-14)


@pytest.mark.parametrize(
    "spec",
    [RoundSphere(1.3), PerturbedSphere(1.0, 0.2, 3), Ellipsoid(), CliffordCone(), Graph("exp(x1)*sqrt(2+x2)"),
     RandomImmersion(seed=7), MobiusImage(PerturbedSphere(), MobiusTransform((inversion(CENTER), plane_rotation(0, 3, 0.4))))],
    ids=lambda s: s.kind,
)
def test_jet_value_matches_high_precision_evaluation(spec, rng):
    pts = spec.sample(3, rng)
    values = spec.evaluate_jet(pts, 2).value
    ops = mpmath_ops()
    with mpmath.workdps(30):
        for p in range(pts.shape[1]):
            ref = spec.param([mpmath.mpf(float(c)) for c in pts[:, p]], ops, spec.default_chart)
            assert np.allclose(values[:, p], [float(v) for v in ref], rtol=1e-14, atol=1e-15)


def test_jets_match_finite_differences(rng):
    spec = PerturbedSphere(1.0, 0.1, 2)
    pt = spec.sample(1, rng)[:, 0]
    jet = spec.evaluate_jet(pt, 2)
    ops = mpmath_ops()
    with mpmath.workdps(40):
        x = [mpmath.mpf(float(c)) for c in pt]
        for a in range(5):
            for i in range(4):
                alpha = tuple(1 if k == i else 0 for k in range(4))
                ref = mpmath.diff(lambda *v: spec.param(list(v), ops, "north")[a], x, alpha)
                assert float(jet.grad().value[i, a, 0]) == pytest.approx(float(ref), rel=1e-12, abs=1e-14)


# -- parsing --------------------------------------------------------------------------------

@pytest.mark.parametrize(
    "text, kind",
    [("sphere:r=2", "sphere"), ("perturbed-sphere:r=1;eps=0.1;mode=2", "perturbed-sphere"),
     ("ellipsoid:axes=1,1,1,1,1.5", "ellipsoid"), ("hyperplane", "hyperplane"), ("clifford-cone", "clifford-cone"),
     ("graph:f=x1*x2", "graph"), ("random:seed=4", "random")],
)
def test_parse_and_round_trip(text, kind):
    spec = parse_spec(text)
    assert spec.kind == kind
    again = spec_from_dict(spec.to_dict())
    assert again.to_dict() == spec.to_dict()


def test_mobius_round_trip():
    spec = spec_from_dict({"kind": "mobius", "inner": {"kind": "sphere", "r": 1.0},
                           "transform": [{"kind": "inversion", "center": [3, 0, 0, 0, 0]},
                                         {"kind": "rotation", "plane": [1, 5], "angle": 0.2}]})
    assert spec_from_dict(spec.to_dict()).to_dict() == spec.to_dict()
    t = parse_transform("inversion:center=3,0,0,0,0;radius=2|dilation:scale=1.5|translation:vector=1,0,0,0,0")
    assert [f.kind for f in t.factors] == ["inversion", "dilation", "translation"]
    assert t.factors[0].scale == 2.0


@pytest.mark.parametrize(
    "text",
    ["torus:r=1", "sphere:r=-1", "sphere:radius=1", "sphere:r", "ellipsoid:axes=1,2", "ellipsoid:axes=a,b",
     "perturbed-sphere:eps=0.7", "graph:f=tan(x1)", "graph:f=x1*y", "graph:f=x1+"],
)
def test_bad_specs(text):
    with pytest.raises(ConfigError):
        parse_spec(text)


@pytest.mark.parametrize(
    "text",
    ["shear:amount=1", "dilation:scale=-1", "inversion:center=1,2", "translation:vector=1,2,3", "dilation:factor=2"],
)
def test_bad_transforms(text):
    with pytest.raises(ConfigError):
        parse_transform(text)


def test_rotation_must_be_orthogonal():
    with pytest.raises(ConfigError):
        rotation(np.ones((5, 5)))


def test_chart_domain_errors():
    with pytest.raises(DomainError):
        RoundSphere(1.0).evaluate_jet(np.array([0.9, 0.9, 0.0, 0.0]), 2, "north")
    with pytest.raises(DomainError):
        Hyperplane().chart("angles")
