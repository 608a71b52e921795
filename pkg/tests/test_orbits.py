import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from wallwave.catalog import GROUP_NAMES, get_group
from wallwave.orbits import (
    Boundary,
    CanonicalForm,
    Zero,
    _level,
    build_cross_section,
    canonicalize,
    irreducible,
    orbit_points,
    same_orbit,
    stabilizer,
)

from strategies import group_names


def test_stabilizer_examples():
    p4 = get_group("p4")
    assert stabilizer(p4, (0, 0)) == list(p4.point_group)
    assert [L.name for L in stabilizer(p4, (2, 1))] == ["id"]
    pm = get_group("pm")
    assert {L.name for L in stabilizer(pm, (0, 1))} == {"id", "s"}
    assert not irreducible(pm, (0, 1))


@pytest.mark.parametrize("name, lo, hi", [
    ("p4", 0, 90), ("p1", 0, 360), ("p4m", 0, 45), ("p2", 0, 180), ("p6m", 0, 30),
    ("p3", 0, 120), ("pm", 90, 270), ("p3m1", 30, 90), ("p31m", 0, 60), ("cmm", 0, 90),
])
def test_sector_table(name, lo, hi):
    cs = build_cross_section(get_group(name))
    assert math.degrees(cs.theta1) == pytest.approx(lo)
    assert math.degrees(cs.theta2) == pytest.approx(hi)
    assert (cs.r_min, cs.r_max) == (1.0, 3.0)


def test_canonicalize_examples():
    cs = build_cross_section(get_group("p4"))
    cf = canonicalize(cs, (-1, 2))
    assert isinstance(cf, CanonicalForm)
    assert np.allclose(cf.omega_prime, (2, 1), atol=1e-15) and cf.L.name == "r90" and cf.ell == 0
    cf = canonicalize(cs, (6, 3))
    assert np.allclose(cf.omega_prime, (2, 1)) and cf.L.name == "id" and cf.ell == 1
    assert isinstance(canonicalize(cs, (0, -5)), Boundary)
    assert isinstance(canonicalize(cs, (0, 0)), Zero)
    assert canonicalize(cs, (0, -5)).to_json() == {"boundary": True}


def test_same_orbit_examples():
    p4 = get_group("p4")
    cs = build_cross_section(p4)
    w = np.array([2.0, 1.0])
    for L in p4.point_group:
        assert same_orbit(cs, w, 3 * (np.array(L.cart) @ w))
    assert not same_orbit(cs, (2, 1), (2.0001, 1))
    assert same_orbit(cs, (0, 1), (3, 0))
    assert not same_orbit(cs, (0, 1), (2, 0))


def test_level_near_powers_of_three():
    cs = build_cross_section(get_group("p1"))
    for k in range(-12, 13):
        for r in (3.0**k, math.nextafter(3.0**k, 0), math.nextafter(3.0**k, math.inf)):
            ell = _level(r)
            assert 1.0 - 1e-15 <= r * 3.0 ** (-ell) < 3.0
            w = (r * math.cos(1.0), r * math.sin(1.0))
            cf = canonicalize(cs, w)
            assert cs.contains(cf.omega_prime)
            assert abs(math.hypot(*cf.omega_prime) * 3.0**cf.ell - r) <= 4e-16 * r


def test_orbit_points_count():
    p4 = get_group("p4")
    assert len(orbit_points(p4, (2, 1))) == 12


@given(group_names, st.floats(1.0 + 1e-9, 3.0 - 1e-9), st.floats(1e-6, 1 - 1e-6),
       st.integers(-5, 5), st.data())
def test_round_trip(name, r, frac, ell, data):
    gd = get_group(name)
    cs = build_cross_section(gd)
    th = cs.theta1 + frac * cs.width
    wp = np.array([r * math.cos(th), r * math.sin(th)])
    assert cs.contains(wp) and irreducible(gd, wp)
    L = data.draw(st.sampled_from(gd.point_group))
    cf = canonicalize(cs, (3.0**ell) * (np.array(L.cart) @ wp))
    assert isinstance(cf, CanonicalForm)
    assert (cf.L, cf.ell) == (L, ell)
    assert np.abs(cf.omega_prime - wp).max() <= 1e-10


@given(group_names, st.floats(-50, 50), st.floats(-50, 50))
def test_canonical_form_lands_in_X(name, a, b):
    cs = build_cross_section(get_group(name))
    cf = canonicalize(cs, (a, b))
    if isinstance(cf, CanonicalForm):
        assert cs.contains(cf.omega_prime)
        back = (3.0**cf.ell) * (np.array(cf.L.cart) @ cf.omega_prime)
        assert np.abs(back - (a, b)).max() <= 1e-12 * max(1.0, abs(a), abs(b))


@pytest.mark.parametrize("name", GROUP_NAMES)
def test_copies_are_disjoint(name):
    gd = get_group(name)
    cs = build_cross_section(gd)
    rng = np.random.default_rng(7)
    for _ in range(300):
        r = rng.uniform(1, 3)
        th = rng.uniform(cs.theta1, cs.theta2)
        w = np.array([r * math.cos(th), r * math.sin(th)])
        for L in gd.point_group:
            for ell in range(-3, 4):
                if (L.is_identity and ell == 0) or not cs.contains(w):
                    continue
                assert not cs.contains((3.0**ell) * (np.array(L.cart) @ w))


@pytest.mark.parametrize("name", GROUP_NAMES)
def test_copies_cover_generic_points(name):
    cs = build_cross_section(get_group(name))
    rng = np.random.default_rng(11)
    pts = rng.normal(size=(500, 2)) * 10
    assert not any(isinstance(canonicalize(cs, p), Boundary) for p in pts)
