import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from leodist.errors import GeometryError
from leodist.geometry import (
    CapSpec,
    EarthGeometry,
    ShellGeometry,
    cap_height_cross,
    cap_height_earth_obs,
    cap_height_same,
    chord_from_colatitude,
    colatitude_from_chord,
    d_max,
    max_los_distance,
    min_norm_on_segment,
    segment_clears_earth,
)

R_E = 6371.0
# 40-digit mpmath evaluations of the closed forms
H_EARTH_550_1000 = 54.74022916339664102966567257887301836446
H_CROSS_1000_1325_500 = 9.793447293447293447293447293447293447294
H_SAME_7371_1000 = 67.83340116673450006783340116673450006783
DMAX_EARTH_550 = 2703.812123650606016714111724362476529875
DMAX_SAME_1000 = 7414.040733635066831281508830618267362371
CHORD_HALF_PI = 9406.906080109442657472988308219892961683


def test_shell_radius_is_derived():
    s = ShellGeometry(550.0)
    assert s.r == 6921.0
    assert s.earth == EarthGeometry(R_E)


@pytest.mark.parametrize("a", [0.0, -10.0, math.nan, math.inf])
def test_shell_rejects_bad_altitude(a):
    with pytest.raises(GeometryError):
        ShellGeometry(a)


def test_earth_rejects_nonpositive():
    with pytest.raises(GeometryError):
        EarthGeometry(0.0)


def test_cap_spec_invariants():
    cap = CapSpec(h=100.0, r=7000.0)
    assert cap.z == 6900.0
    with pytest.raises(GeometryError):
        CapSpec(h=-1.0, r=7000.0)
    with pytest.raises(GeometryError):
        CapSpec(h=14000.1, r=7000.0)


class TestCapHeights:
    def test_earth_obs_onset_is_empty_cap(self):
        s = ShellGeometry(550.0)
        assert cap_height_earth_obs(550.0, s) == 0.0

    def test_earth_obs_at_horizon_reaches_earth_radius(self):
        s = ShellGeometry(550.0)
        h = cap_height_earth_obs(d_max(s), s)
        assert h == pytest.approx(550.0, rel=1e-12)
        assert s.r - h == pytest.approx(R_E, rel=1e-12)

    def test_earth_obs_value(self):
        s = ShellGeometry(550.0)
        assert cap_height_earth_obs(1000.0, s, EarthGeometry(R_E)) == pytest.approx(
            H_EARTH_550_1000, rel=1e-13)

    def test_earth_obs_rejects_below_onset(self):
        with pytest.raises(GeometryError):
            cap_height_earth_obs(549.0, ShellGeometry(550.0))

    def test_earth_mismatch_rejected(self):
        with pytest.raises(GeometryError):
            cap_height_earth_obs(600.0, ShellGeometry(550.0), EarthGeometry(6378.0))

    def test_cross_onset(self):
        assert cap_height_cross(325.0, ShellGeometry(1000.0), ShellGeometry(1325.0)) == 0.0
        assert cap_height_cross(325.0, ShellGeometry(1325.0), ShellGeometry(1000.0)) == 0.0

    def test_cross_equal_altitude_matches_same_shell(self):
        s = ShellGeometry(1000.0)
        assert cap_height_cross(800.0, s, ShellGeometry(1000.0)) == cap_height_same(800.0, s)

    def test_cross_value(self):
        h = cap_height_cross(500.0, ShellGeometry(1000.0), ShellGeometry(1325.0))
        assert h == pytest.approx(H_CROSS_1000_1325_500, rel=1e-13)

    def test_cross_rejects_below_gap(self):
        with pytest.raises(GeometryError):
            cap_height_cross(300.0, ShellGeometry(1000.0), ShellGeometry(1325.0))

    def test_same(self):
        s = ShellGeometry(1000.0)
        assert cap_height_same(0.0, s) == 0.0
        assert cap_height_same(2 * s.r, s) == 2 * s.r
        assert cap_height_same(1000.0, s) == pytest.approx(H_SAME_7371_1000, rel=1e-13)
        with pytest.raises(GeometryError):
            cap_height_same(-1.0, s)


class TestDMax:
    def test_earth_observer(self):
        assert d_max(ShellGeometry(550.0)) == pytest.approx(DMAX_EARTH_550, rel=1e-13)
        assert d_max(ShellGeometry(550.0)) == pytest.approx(math.sqrt(2 * R_E * 550 + 550**2), rel=1e-14)

    def test_same_shell(self):
        s = ShellGeometry(1000.0)
        assert d_max(s, s) == pytest.approx(DMAX_SAME_1000, rel=1e-13)

    def test_ground_observer_as_shell_degenerates(self):
        for a in (200.0, 550.0, 1325.0, 2000.0):
            t = ShellGeometry(a)
            assert max_los_distance(R_E, t.r, R_E) == d_max(t)

    def test_cross_symmetric(self):
        a, b = ShellGeometry(1000.0), ShellGeometry(1625.0)
        assert d_max(a, b) == d_max(b, a)

    def test_below_earth_rejected(self):
        with pytest.raises(GeometryError):
            max_los_distance(6000.0, 7000.0, R_E)


class TestChord:
    def test_endpoints(self):
        assert chord_from_colatitude(0.0, R_E, 6921.0) == pytest.approx(550.0, rel=1e-14)
        assert chord_from_colatitude(math.pi, R_E, 6921.0) == pytest.approx(R_E + 6921.0, rel=1e-14)

    def test_quarter_turn(self):
        assert chord_from_colatitude(math.pi / 2, R_E, 6921.0) == pytest.approx(CHORD_HALF_PI, rel=1e-13)

    def test_strictly_increasing(self):
        phi = np.linspace(0.0, math.pi, 10001)
        d = chord_from_colatitude(phi, 7000.0, 7300.0)
        assert np.all(np.diff(d) > 0)

    @given(st.floats(0.0, math.pi), st.floats(6400.0, 9000.0), st.floats(6400.0, 9000.0))
    def test_round_trip(self, phi, r_o, r_t):
        back = colatitude_from_chord(chord_from_colatitude(phi, r_o, r_t), r_o, r_t)
        # arccos loses accuracy near 0 and pi; compare through the chord there
        if 1e-4 < phi < math.pi - 1e-4:
            assert back == pytest.approx(phi, abs=1e-12 / min(math.sin(phi), 1.0) + 1e-12)
        else:
            assert chord_from_colatitude(back, r_o, r_t) == pytest.approx(
                chord_from_colatitude(phi, r_o, r_t), rel=1e-9)

    @settings(max_examples=300)
    @given(st.floats(1.0, 2500.0), st.floats(1.0, 2500.0), st.floats(0.0, 1.0))
    def test_h_z_d_consistency(self, a_o, a_t, frac):
        obs, tgt = ShellGeometry(a_o), ShellGeometry(a_t)
        r_o, r_t = obs.r, tgt.r
        d = abs(r_t - r_o) + frac * (d_max(tgt, obs) - abs(r_t - r_o))
        z = r_t - cap_height_cross(d, obs, tgt)
        # cancellation floor: terms are of order r^2
        floor = 1e-12 * (r_o**2 + r_t**2)
        assert d * d == pytest.approx(r_o**2 + r_t**2 - 2 * r_o * z, rel=1e-9, abs=floor)
        if d >= a_t:
            z0 = r_t - cap_height_earth_obs(d, tgt)
            assert d * d == pytest.approx(R_E**2 + r_t**2 - 2 * R_E * z0, rel=1e-9, abs=floor)


class TestSegment:
    def test_radial_outward_clear(self):
        assert segment_clears_earth((0, 0, R_E), (0, 0, 6921.0), EarthGeometry())

    def test_through_centre_blocked(self):
        assert not segment_clears_earth((0, 0, 7371.0), (0, 0, -7696.0), R_E)

    @pytest.mark.parametrize("a_i,a_k", [(1000.0, 1325.0), (550.0, 2000.0), (1000.0, 1000.0), (1e-9, 550.0)])
    def test_tangent_configuration(self, a_i, a_k):
        r_i, r_k = R_E + a_i, R_E + a_k
        dm = max_los_distance(r_i, r_k, R_E)
        phi = colatitude_from_chord(dm, r_i, r_k)
        p = np.array([0.0, 0.0, r_i])
        q = r_k * np.array([math.sin(phi), 0.0, math.cos(phi)])
        assert min_norm_on_segment(p, q) == pytest.approx(R_E, abs=1e-9)
        assert segment_clears_earth(p, q, R_E)

    def test_clear_iff_within_dmax(self):
        rng = np.random.default_rng(12345)
        agree = 0
        for _ in range(10_000):
            r_o = R_E + rng.uniform(0.0, 2500.0)
            r_t = R_E + rng.uniform(1.0, 2500.0)
            phi = math.acos(rng.uniform(-1, 1))
            theta = rng.uniform(0, 2 * math.pi)
            p = np.array([0.0, 0.0, r_o])
            q = r_t * np.array([math.sin(phi) * math.cos(theta), math.sin(phi) * math.sin(theta), math.cos(phi)])
            chord = float(np.linalg.norm(q - p))
            agree += segment_clears_earth(p, q, R_E) == (chord <= max_los_distance(r_o, r_t, R_E))
        assert agree == 10_000
