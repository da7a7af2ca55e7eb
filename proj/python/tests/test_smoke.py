import cmath
import math

import pytest

import calib


def test_suite_names():
    assert calib.suite_names() == ["orbifold", "calibration", "metrics", "volume", "mirror", "realalg"]


def test_orbifold_suite_report():
    report = calib.run_suite("orbifold", seed=3)
    assert report["suite"] == "orbifold"
    assert report["summary"]["pass"]
    ids = {case["id"]: case for case in report["cases"]}
    assert ids["alpha-fixed-locus-count"]["measured"]["components"] == 16


def test_unknown_suite():
    with pytest.raises(ValueError):
        calib.run_suite("nope")


def test_fixed_loci():
    assert calib.fixed_locus_dimensions("cy3_alpha") == [2] * 16
    assert calib.fixed_locus_dimensions("g2_gamma") == [3] * 16
    assert calib.is_free("cy3_alpha", "cy3_beta")


def test_quartic_torus():
    assert calib.quartic_torus_eval(1.5, 0, 0) == 0.0
    assert calib.quartic_torus_eval(0, 0, 0) == 9 / 16
    assert abs(calib.quartic_torus_eval(0.3, -1.1, 0.4) - calib.quartic_torus_factored(0.3, -1.1, 0.4)) < 1e-12


def test_component_count():
    sphere = "vars 3\n-1 0 0 0\n1 2 0 0\n1 0 2 0\n1 0 0 2\n"
    assert calib.component_count(sphere, 2.0, 16) == 1
    with pytest.raises(ValueError):
        calib.component_count("vars 3\n1 0 0\n", 2.0, 16)
    assert calib.four_circle_count() == 4


def test_weierstrass():
    z = 0.3 + 0.2j
    assert abs(calib.weierstrass_p(z) - calib.weierstrass_p(-z)) < 1e-10
    assert abs(calib.weierstrass_p(z + 1j) - calib.weierstrass_p(z)) < 1e-10
    r = calib.loop_integrals(0, [0.25, 0.4, 0.6])
    assert r["max_deviation"] < 1e-8
    assert all(cmath.isclose(i, -math.pi, abs_tol=1e-8) for i in r["integrals"])
