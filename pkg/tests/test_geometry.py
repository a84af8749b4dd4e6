import numpy as np
import pytest

from kernelgauge import (
    PatchTooLarge,
    annulus,
    area_quadrature,
    boundary_quadrature,
    disc,
    mask_quadrature,
)

TWO_PI = 2.0 * np.pi


def test_boundary_weights_sum_to_circumference():
    bq = boundary_quadrature(disc(), 16)
    assert bq.weights.sum() == pytest.approx(TWO_PI, abs=1e-12)
    assert np.allclose(bq.weights, TWO_PI / 16)

    bq = boundary_quadrature(annulus(0.25), 8)
    inner = bq.component_slices[1]
    assert bq.weights[inner].sum() == pytest.approx(TWO_PI * 0.25, abs=1e-12)


def test_boundary_node_count_minimum():
    with pytest.raises(ValueError):
        boundary_quadrature(disc(), 4)


def test_boundary_constant_integrand():
    bq = boundary_quadrature(disc(), 64)
    val = np.sum(bq.weights * np.abs(bq.nodes) ** 2)
    assert val == pytest.approx(TWO_PI, abs=1e-14)


def test_boundary_trig_exactness():
    # z^n integrates to zero on |z| = R for n != 0 once N > |n| + 2.
    for domain, radius in ((disc(), 1.0), (annulus(0.5), 0.5)):
        bq = boundary_quadrature(domain, 32)
        for n in (1, -3, 7, 20):
            vals = bq.nodes**n
            integral = np.sum(bq.weights * vals)
            assert abs(integral) < 1e-13 * max(radius ** n, 1.0)


def test_area_weights_sum_exactly():
    for domain, z0 in ((disc(), 0.0), (disc(), 0.5), (annulus(0.25), 0.5), (annulus(0.5), -0.7j)):
        aq = area_quadrature(domain, z0, 96, 96)
        assert aq.weights.sum() == pytest.approx(domain.area, abs=1e-12)
        radii = np.abs(aq.nodes)
        assert np.all(radii < 1.0)
        assert np.all(radii > domain.inner_radius)


def test_area_inverse_radius():
    aq = area_quadrature(disc(), 0.0, 256, 64)
    val = aq.integrate(1.0 / np.abs(aq.nodes))
    assert val == pytest.approx(TWO_PI, abs=1e-6)


def test_area_singular_radial_profiles():
    # |z|^(2 beta) against the closed form 2 pi / (2 beta + 2).  The
    # default grading handles every profile the weight families generate
    # (beta >= -0.6) at 1e-6.
    aq = area_quadrature(disc(), 0.0, 512, 48)
    for beta in (-0.3, -0.5, -0.6):
        val = aq.integrate(np.abs(aq.nodes) ** (2 * beta))
        exact = TWO_PI / (2 * beta + 2)
        assert abs(val / exact - 1.0) < 1e-6, f"beta={beta}"
    # Near the integrability edge the ring depth and panel count must
    # grow like 1/(beta+1); demonstrate convergence there explicitly.
    deep = area_quadrature(disc(), 0.0, 512, 16, patch_levels=260, patch_panels=96)
    val = deep.integrate(np.abs(deep.nodes) ** (2 * -0.9))
    exact = TWO_PI / (2 * -0.9 + 2)
    assert abs(val / exact - 1.0) < 1e-6


def test_area_offcenter_singularity_converges():
    # Integrable singularity at an interior off-axis point: the graded
    # ring resolves the radial direction, the angular error falls at
    # second order with the global grid.
    z0 = 0.4 + 0.2j

    def value(res):
        aq = area_quadrature(disc(), z0, res, res)
        return aq.integrate(np.abs(aq.nodes - z0) ** -1.0)

    v1, v2, v3 = value(128), value(256), value(512)
    assert abs(v3 - v2) < 0.4 * abs(v2 - v1)


def test_area_angular_orthogonality():
    aq = area_quadrature(annulus(0.25), 0.5, 128, 128)
    for m, n in ((1, 0), (2, -1), (3, 1)):
        val = np.sum(aq.weights * aq.nodes**m * np.conj(aq.nodes) ** n)
        assert abs(val) < 1e-10


def test_area_doubling_converges():
    z0 = 0.5

    def integral(res):
        aq = area_quadrature(annulus(0.25), z0, res, res)
        return aq.integrate(np.exp(-np.abs(aq.nodes - z0) ** 2) / np.abs(aq.nodes))

    v1, v2, v3 = integral(64), integral(128), integral(256)
    assert abs(v3 - v2) < abs(v2 - v1)


def test_patch_too_large():
    with pytest.raises(PatchTooLarge):
        area_quadrature(disc(), 0.9, 64, 64, patch_radius=0.2)
    with pytest.raises(PatchTooLarge):
        area_quadrature(annulus(0.25), 0.5, 64, 64, patch_radius=0.3)


def test_mask_disc_sublevel_exact():
    aq = area_quadrature(disc(), 0.0, 128, 128)

    def field(z):
        return 2.0 * np.log(np.abs(z))

    below = mask_quadrature(aq, field, -1.0, keep="below")
    assert below.total_weight == pytest.approx(np.pi * np.exp(-1.0), abs=1e-12)
    above = mask_quadrature(aq, field, np.log(0.81), keep="above")
    assert above.total_weight == pytest.approx(np.pi * (1.0 - 0.81), abs=1e-12)
    # The two masks partition the quadrature.
    mid = mask_quadrature(aq, field, -0.5, keep="below")
    rest = mask_quadrature(aq, field, -0.5, keep="above")
    assert mid.total_weight + rest.total_weight == pytest.approx(np.pi, abs=1e-12)


def test_mask_annulus_band():
    aq = area_quadrature(annulus(0.25), 0.5, 160, 128)

    def field(z):
        return np.abs(z)

    below = mask_quadrature(aq, field, 0.7, keep="below")
    assert below.total_weight == pytest.approx(np.pi * (0.49 - 0.0625), abs=1e-10)


def test_mask_nonradial_field():
    aq = area_quadrature(disc(), 0.0, 192, 192)

    def field(z):
        return np.real(z)

    below = mask_quadrature(aq, field, 0.0, keep="below")
    assert below.total_weight == pytest.approx(np.pi / 2.0, rel=1e-4)
