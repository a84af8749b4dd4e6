import math

import numpy as np
import pytest

from kernelgauge import (
    Character,
    HarmonicFunctionRep,
    PoleTooCloseToBoundary,
    TruncationInsufficient,
    annulus,
    boundary_quadrature,
    character_distance,
    character_exponent,
    dirichlet_solve,
    disc,
    green,
    green_boundary_normal_derivative,
    harmonic_analytic_derivative,
    log_capacity,
    pole_part_derivative,
)
from kernelgauge.selftest import green_image_series, robin_image_series

TWO_PI = 2.0 * math.pi


# ---------------------------------------------------------------- green


def test_disc_green_radial():
    g = green(disc(), 0.0)
    assert g.value(0.5) == pytest.approx(math.log(0.5), abs=1e-14)


def test_disc_green_moebius():
    g = green(disc(), 0.2)
    assert g.value(0.5) == pytest.approx(math.log(0.3 / 0.9), abs=1e-13)
    zs = np.array([0.3 + 0.4j, -0.6, 0.1 - 0.7j])
    exact = np.log(np.abs((zs - 0.2) / (1 - 0.2 * zs)))
    assert np.max(np.abs(g.value(zs) - exact)) < 1e-12


def test_annulus_green_image_series_oracle():
    g = green(annulus(0.25), 0.5)
    for z in (-0.5, 0.3 + 0.2j, 0.9, -0.1 - 0.4j):
        assert g.value(z) == pytest.approx(green_image_series(0.25, z, 0.5), abs=1e-8)


def test_green_boundary_trace_and_sign():
    for domain, w in ((disc(), 0.3 + 0.1j), (annulus(0.25), 0.5), (annulus(0.5), -0.6 + 0.3j)):
        g = green(domain, w)
        for radius in domain.component_radii:
            theta = TWO_PI * np.arange(64) / 64
            trace = g.value(radius * np.exp(1j * theta))
            assert np.max(np.abs(trace)) < 1e-8
        aq_r = np.linspace(domain.inner_radius + 0.05, 0.95, 7)
        pts = aq_r[:, None] * np.exp(1j * TWO_PI * np.arange(9) / 9)[None, :]
        interior = g.value(pts.ravel())
        assert np.all(interior < 0.0)


def test_green_symmetry():
    for domain in (disc(), annulus(0.25)):
        pairs = [(0.5, -0.3 + 0.2j), (0.3 + 0.3j, 0.6 - 0.1j)]
        for w, z in pairs:
            if not domain.contains(z) or not domain.contains(w):
                continue
            assert green(domain, w).value(z) == pytest.approx(
                green(domain, z).value(w), abs=1e-8
            )


def test_pole_too_close_raises():
    with pytest.raises(PoleTooCloseToBoundary):
        green(disc(), 0.9995)
    with pytest.raises(PoleTooCloseToBoundary):
        green(annulus(0.25), 0.2504)


# --------------------------------------------- normal derivative and flux


def test_normal_derivative_radial_pole():
    g = green(disc(), 0.0)
    bq = boundary_quadrature(disc(), 16)
    vals = green_boundary_normal_derivative(g, bq.nodes, bq.normal_signs)
    assert np.allclose(vals, 1.0, atol=1e-14)


def test_normal_derivative_poisson():
    g = green(disc(), 0.5)
    val = green_boundary_normal_derivative(g, np.array([1.0 + 0j]), np.array([1.0]))[0]
    assert val == pytest.approx((1 - 0.25) / abs(1 - 0.5) ** 2, abs=1e-12)


def test_flux_normalization():
    for domain, w in ((disc(), 0.4 - 0.2j), (annulus(0.25), 0.5), (annulus(0.5), 0.7j)):
        g = green(domain, w)
        bq = boundary_quadrature(domain, 256)
        flux = np.sum(bq.weights * green_boundary_normal_derivative(g, bq.nodes, bq.normal_signs))
        assert flux == pytest.approx(TWO_PI, abs=1e-8)
        vals = green_boundary_normal_derivative(g, bq.nodes, bq.normal_signs)
        assert np.all(vals > 0.0)


# ------------------------------------------------------------- capacity


def test_capacity_disc():
    assert log_capacity(disc(), 0.0) == pytest.approx(1.0, abs=1e-14)
    assert log_capacity(disc(), 0.5) == pytest.approx(1.0 / (1.0 - 0.25), abs=1e-13)


def test_capacity_annulus_oracle():
    got = log_capacity(annulus(0.25), 0.5)
    assert got == pytest.approx(math.exp(robin_image_series(0.25, 0.5)), abs=1e-8)


def test_capacity_rotation_invariance():
    base = log_capacity(annulus(0.25), 0.5)
    for theta in (0.7, 2.1, -1.3):
        rotated = log_capacity(annulus(0.25), 0.5 * np.exp(1j * theta))
        assert rotated == pytest.approx(base, abs=1e-10)


# ------------------------------------------------------------ dirichlet


def _samples(fn, radius, n):
    theta = TWO_PI * np.arange(n) / n
    return fn(radius * np.exp(1j * theta))


def test_dirichlet_disc_fourier_mode():
    u = dirichlet_solve(disc(), [_samples(np.real, 1.0, 64)])
    zs = np.array([0.3 + 0.4j, -0.2, 0.6j])
    assert np.max(np.abs(u.value(zs) - np.real(zs))) < 1e-12


def test_dirichlet_annulus_log_mode():
    n = 64
    u = dirichlet_solve(annulus(0.5), [np.zeros(n), np.full(n, math.log(0.5))])
    assert u.value(0.7) == pytest.approx(math.log(0.7), abs=1e-12)
    assert u.alpha_log == pytest.approx(1.0, abs=1e-12)


def test_dirichlet_annulus_analytic_data():
    n = 128
    data = [
        _samples(lambda z: -0.5 * np.log(np.abs(1 + z / 2) ** 2), r, n) for r in (1.0, 0.25)
    ]
    u = dirichlet_solve(annulus(0.25), data)
    for radius, d in zip((1.0, 0.25), data):
        resid = np.max(np.abs(u.value(radius * np.exp(1j * TWO_PI * np.arange(n) / n)) - d))
        assert resid < 1e-8


def test_dirichlet_truncation_insufficient():
    # Non-smooth data cannot be matched by a short expansion.
    n = 64
    theta = TWO_PI * np.arange(n) / n
    jagged = np.abs(theta - math.pi)
    with pytest.raises(TruncationInsufficient):
        dirichlet_solve(disc(), [jagged], m_max=4)


# ------------------------------------------------------------ characters


def test_character_green_harmonic_measure():
    alpha = character_exponent(annulus(0.25), green(annulus(0.25), 0.5))
    assert alpha.exponent == pytest.approx(0.5, abs=1e-10)
    # q = 0.2: the exponent agrees with the harmonic-measure weight
    # log 0.5 / log 0.2 up to the generator orientation.
    alpha2 = character_exponent(annulus(0.2), green(annulus(0.2), 0.5))
    omega = math.log(0.5) / math.log(0.2)
    assert min(
        character_distance(alpha2.exponent, omega),
        character_distance(-alpha2.exponent, omega),
    ) < 1e-10


def test_character_log_mode():
    alpha = character_exponent(annulus(0.25), HarmonicFunctionRep.log_mode(0.3))
    assert alpha.exponent == pytest.approx(0.3, abs=1e-12)


def test_character_disc_trivial():
    assert character_exponent(disc(), HarmonicFunctionRep.zero()).exponent == 0.0


def test_character_additivity():
    dom = annulus(0.25)
    h1 = HarmonicFunctionRep.log_mode(0.3)
    h2 = HarmonicFunctionRep.from_coefficients(0.45, {1: 0.2, -2: 0.1j})
    a1 = character_exponent(dom, h1).exponent
    a2 = character_exponent(dom, h2).exponent
    combo = h1.scaled(2.0) + h2.scaled(3.0)
    a_combo = character_exponent(dom, combo).exponent
    assert character_distance(a_combo, 2 * a1 + 3 * a2) < 1e-10


def test_character_distance_range():
    assert Character(0.1).distance(Character(0.9)) == pytest.approx(0.2, abs=1e-14)
    assert Character(0.25).distance(Character(0.75)) == pytest.approx(0.5, abs=1e-14)


# --------------------------------------------------- analytic derivatives


def test_pole_derivative_disc_center():
    h = pole_part_derivative(green(disc(), 0.0))
    zs = np.array([0.5, 0.2 + 0.3j])
    assert np.max(np.abs(h(zs) - 1.0 / zs)) < 1e-14


def test_pole_derivative_disc_moebius():
    h = pole_part_derivative(green(disc(), 0.2))
    zs = np.array([0.5, -0.3 + 0.4j])
    exact = 1.0 / (zs - 0.2) + 0.2 / (1.0 - 0.2 * zs)
    assert np.max(np.abs(h(zs) - exact)) < 1e-12


def test_pole_derivative_residue():
    h = pole_part_derivative(green(annulus(0.25), 0.5))
    theta = TWO_PI * np.arange(512) / 512
    circle = 0.5 + 0.1 * np.exp(1j * theta)
    integral = np.sum(h(circle) * 0.1j * np.exp(1j * theta)) * (TWO_PI / 512) / (2j * math.pi)
    assert abs(integral - 1.0) < 1e-8


def test_harmonic_derivative_formulas():
    u = HarmonicFunctionRep.from_coefficients(0.0, {1: 1.0})  # Re z
    w = harmonic_analytic_derivative(u)
    zs = np.array([0.5 + 0.1j, -0.2])
    assert np.max(np.abs(w(zs) - 1.0)) < 1e-14

    u2 = HarmonicFunctionRep.log_mode(0.4)
    w2 = harmonic_analytic_derivative(u2)
    assert np.max(np.abs(w2(zs) - 0.4 / zs)) < 1e-14
    assert w2.character.exponent == pytest.approx(0.4)

    u3 = HarmonicFunctionRep.from_coefficients(0.3, {2: 1.0})  # Re z^2 + 0.3 log|z|
    w3 = harmonic_analytic_derivative(u3)
    exact = 2.0 * zs + 0.3 / zs
    assert np.max(np.abs(w3(zs) - exact)) < 1e-14
    # Cross-check along a ray with finite differences of the harmonic part.
    z = 0.5 + 0.1j
    h = 1e-6
    fd = (u3.value(z * (1 + h)) - u3.value(z * (1 - h))) / (2 * h)
    assert abs(np.real(z * w3(np.array([z]))[0]) - fd) < 1e-6
