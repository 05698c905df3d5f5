import numpy as np
import pytest

from annulus_kit import spatial
from annulus_kit.alexinv import alexander
from annulus_kit.diagram import linking_number
from annulus_kit.polycore import LaurentPoly


def circle(center, radius, n=200, plane="xy"):
    t = np.linspace(0, 2 * np.pi, n, endpoint=False)
    a, b = radius * np.cos(t), radius * np.sin(t)
    z = np.zeros_like(t)
    pts = np.stack([a, b, z], 1) if plane == "xy" else np.stack([a, z, b], 1)
    return pts + np.asarray(center)


def test_round_circle_projects_without_crossings():
    d = spatial.project([spatial.SpaceCurve(circle((0, 0, 0), 1), "Knot")])
    assert len(d.crossings) == 0 and len(d.components) == 1


def test_linked_circles_project_to_hopf_link():
    a = spatial.SpaceCurve(circle((0, 0, 0), 1), "Knot", None, "a")
    b = spatial.SpaceCurve(circle((1, 0, 0), 1, plane="xz"), "SurgeryCurve", -1, "b")
    d = spatial.project([a, b])
    assert len(d.crossings) == 2
    assert abs(linking_number(d, 0, 1)) == 1
    assert d.components[1].framing == -1 and d.components[1].name == "b"


def test_unlinked_circles_have_zero_linking():
    a = spatial.SpaceCurve(circle((0, 0, 0), 1), "Knot")
    b = spatial.SpaceCurve(circle((5, 0, 0), 1, plane="xz"), "Knot")
    assert linking_number(spatial.project([a, b]), 0, 1) == 0


def test_twisted_band_knot_is_unknotted_before_blow_down():
    core = ((3, np.pi, 0), (3, np.pi, 0.5), (1, np.pi, 0.5), (1, np.pi, 0))
    for twists in (2, -1):
        pts = spatial.resample(spatial.band_knot(core, twists=twists))
        d = spatial.project([spatial.SpaceCurve(pts, "Knot")])
        assert alexander(d) == LaurentPoly.const(1)


def test_resample_spacing_is_about_step():
    pts = spatial.resample(circle((0, 0, 0), 1, n=12), step=0.05)
    gaps = np.linalg.norm(np.diff(np.vstack([pts, pts[:1]]), axis=0), axis=1)
    assert gaps.max() <= 0.05 * 1.01


def test_shear_fixes_points_outside_slab():
    pts = circle((0, 0, 0.5), 2.0)
    out = spatial.annulus_shear(pts, 0.1)
    assert np.allclose(np.abs(out[:, 2]), 0.5)
    assert np.allclose(np.hypot(out[:, 0], out[:, 1]), 2.0, atol=1e-3)


def axis_loop():
    # up through the slab at r = 2, back down at r = 5 outside the annulus
    return np.array([[2.0, 0, -0.3], [2.0, 0, 0.3], [5.0, 0, 0.3], [5.0, 0, -0.3]])


def test_shear_preserves_radius_and_height():
    pts = spatial.resample(axis_loop(), 0.01)
    out = spatial.annulus_shear(pts, 0.1)
    assert np.hypot(out[:, 0], out[:, 1]).min() == pytest.approx(2.0, abs=1e-3)
    assert out[:, 2].min() == pytest.approx(-0.3) and out[:, 2].max() == pytest.approx(0.3)


@pytest.mark.parametrize("turns", [1, 2, -1])
def test_shear_changes_winding_about_the_axis_by_turns(turns):
    out = spatial.annulus_shear(spatial.resample(axis_loop(), 0.01), 0.1, turns=turns)
    th = np.arctan2(out[:, 1], out[:, 0])
    steps = np.diff(np.concatenate([th, th[:1]]))
    steps = (steps + np.pi) % (2 * np.pi) - np.pi
    assert steps.sum() == pytest.approx(2 * np.pi * turns, abs=1e-6)


def test_meridional_twist_rotates_about_the_core_only_in_its_wedge():
    pts = spatial.resample(circle((0, 0, 0), 3.5), 0.01)
    out = spatial.meridional_twist(pts, -1, 0.12, 0.05, 1.6)
    r = np.hypot(out[:, 0], out[:, 1])
    th = np.arctan2(out[:, 1], out[:, 0])
    assert np.allclose(np.hypot(r - 3.0, out[:, 2]), 0.5, atol=1e-3)
    far = np.abs(th - 0.12) > 0.06
    assert np.allclose(out[far, 2], 0.0, atol=1e-9)
    assert out[:, 2].min() < -0.49 and out[:, 2].max() > 0.49


def test_meridian_circle_has_requested_radius():
    m = spatial.meridian_circle(0.3, 1.6)
    r = np.hypot(m[:, 0], m[:, 1])
    assert np.allclose(np.hypot(r - 3.0, m[:, 2]), 1.6)
    assert np.allclose(np.arctan2(m[:, 1], m[:, 0]), 0.3)


def test_sweep_clear_detects_obstruction():
    assert not spatial.sweep_is_clear(circle((0, 0, 0), 4.0), 0.0, 0.2, 1.0)
    assert spatial.sweep_is_clear(circle((0, 0, 0), 3.0), 0.0, 0.2, 1.0)
    assert spatial.sweep_is_clear(circle((0, 0, 10), 1.0), 0.0, 0.2, 1.0)
