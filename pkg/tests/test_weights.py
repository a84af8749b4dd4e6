import math

import numpy as np
import pytest
from scipy.integrate import quad

from kernelgauge import (
    CProfile,
    EvaluationAtPole,
    InvalidProfile,
    PhiSpec,
    PsiSpec,
    WeightConfig,
    annulus,
    boundary_quadrature,
    c_integrals,
    disc,
    rho_lambda_eval,
    validate_config,
)
from kernelgauge.potential import HarmonicFunctionRep


def _cfg(domain, z0, k=0, p0=1.0, eps=0.0, a_g=0.0, u=None, c=None):
    return WeightConfig(
        domain,
        z0,
        k,
        PsiSpec(p0, eps),
        PhiSpec(a_g, u if u is not None else HarmonicFunctionRep.zero()),
        c if c is not None else CProfile.constant_one(),
    )


# ---------------------------------------------------------------- profiles


def test_c_integrals_constant():
    vals = c_integrals(CProfile.constant_one(), 0.0)
    assert (vals.c, vals.h, vals.total) == (1.0, 1.0, 1.0)


def test_c_integrals_exp_delta():
    assert c_integrals(CProfile.exp_delta(0.5), 0.0).total == pytest.approx(2.0, abs=1e-14)
    vals = c_integrals(CProfile.exp_delta(0.3), 1.0)
    assert vals.h == pytest.approx(math.exp(-0.7) / 0.7, abs=1e-14)


def test_c_integrals_poly_numeric():
    profile = CProfile.poly(2.0)
    vals = c_integrals(profile, 0.5)
    reference = quad(lambda s: (1 + s) ** -2.0 * math.exp(-s), 0.5, np.inf, epsabs=1e-13)[0]
    assert vals.h == pytest.approx(reference, abs=1e-10)
    assert vals.c == pytest.approx(1.5**-2.0, abs=1e-14)


def test_invalid_profiles():
    with pytest.raises(InvalidProfile):
        CProfile.exp_delta(1.2)
    with pytest.raises(InvalidProfile):
        CProfile.poly(-1.0)


def test_profile_monotonicity_grid():
    for profile in (CProfile.constant_one(), CProfile.exp_delta(0.7), CProfile.exp_delta(-1.0), CProfile.poly(1.5)):
        assert profile.grid_monotone_defect() <= 1e-12
        assert float(profile.c(0.0)) == 1.0
        assert math.isfinite(profile.total)


# ---------------------------------------------------------------- densities


def test_lambda_disc_center():
    cfg = _cfg(disc(), 0.0)
    assert rho_lambda_eval(cfg, 1.0 + 0j) == pytest.approx(1.0, abs=1e-12)


def test_lambda_scaling_with_psi():
    cfg = _cfg(disc(), 0.0, p0=2.0)
    assert rho_lambda_eval(cfg, 1j) == pytest.approx(0.5, abs=1e-12)


def test_rho_radial_profile():
    cfg = _cfg(disc(), 0.0, c=CProfile.exp_delta(0.4))
    z = 0.3 - 0.2j
    assert rho_lambda_eval(cfg, z) == pytest.approx(abs(z) ** (-0.8), abs=1e-12)


def test_lambda_flux_identity():
    # lambda * dpsi/dnu = exp(-phi) at boundary nodes.
    u = HarmonicFunctionRep.from_coefficients(0.0, {1: 0.2 + 0.1j})
    cfg = _cfg(annulus(0.25), 0.5, a_g=0.5, u=u)
    bq = boundary_quadrature(cfg.domain, 64)
    lam = cfg.boundary_lambda(bq.nodes, bq.normal_signs)
    flux = cfg.dpsi_dnu(bq.nodes, bq.normal_signs)
    assert np.max(np.abs(lam * flux - np.exp(-cfg.phi_value(bq.nodes)))) < 1e-12


def test_rho_rotation_covariance():
    # Rotating z, z0 and the harmonic data together leaves rho unchanged.
    theta = 0.9
    w = np.exp(1j * theta)
    u = HarmonicFunctionRep.from_coefficients(0.3, {1: 0.2, -1: 0.1j})
    u_rot = HarmonicFunctionRep.from_coefficients(0.3, {1: 0.2 * np.conj(w), -1: 0.1j * w})
    base = _cfg(annulus(0.25), 0.5, a_g=0.4, u=u, c=CProfile.exp_delta(0.2))
    rot = _cfg(annulus(0.25), 0.5 * w, a_g=0.4, u=u_rot, c=CProfile.exp_delta(0.2))
    zs = np.array([0.3 + 0.2j, -0.6, 0.4j])
    assert np.max(np.abs(base.rho(zs) - rot.rho(zs * w))) < 1e-10


def test_evaluation_at_pole():
    cfg = _cfg(disc(), 0.25, a_g=1.0)
    with pytest.raises(EvaluationAtPole):
        rho_lambda_eval(cfg, 0.25 + 0j)
    # Bounded density at z0 evaluates fine.
    smooth = _cfg(disc(), 0.25)
    assert rho_lambda_eval(smooth, 0.25 + 0j) == pytest.approx(1.0)


# ---------------------------------------------------------------- validation


def _passed(checks, name):
    return next(c for c in checks if c.name == name).passed


def test_validate_baseline_passes():
    checks = validate_config(_cfg(disc(), 0.0))
    assert all(c.passed for c in checks)


def test_validate_mass_arithmetic():
    checks = validate_config(_cfg(disc(), 0.0, k=1))
    assert not _passed(checks, "mass_at_z0")
    checks = validate_config(_cfg(annulus(0.25), 0.5, k=1, p0=2.0))
    assert _passed(checks, "mass_at_z0")


def test_validate_perturbed_psi():
    cfg = _cfg(disc(), 0.0, eps=0.1)
    checks = validate_config(cfg)
    assert _passed(checks, "psi_boundary_trace")
    assert _passed(checks, "psi_normal_derivative_positive")
    # The bump keeps psi strictly negative inside.
    zs = np.array([0.5, 0.2 + 0.6j, -0.9])
    assert np.all(cfg.psi_value(zs) < 0.0)


# ---------------------------------------------------------------- reduction


def test_reduced_config_density():
    u = HarmonicFunctionRep.log_mode(0.3)
    cfg = _cfg(annulus(0.25), 0.5, k=1, p0=2.0, u=u)
    red = cfg.reduced()
    assert red.k == 0
    zs = np.array([0.3 + 0.2j, -0.7, 0.45j])
    expected = np.abs(zs - 0.5) ** 2 * cfg.rho(zs)
    assert np.max(np.abs(red.rho(zs) - expected)) < 1e-10
    # psi and its boundary data are untouched.
    bq = boundary_quadrature(cfg.domain, 32)
    assert np.allclose(
        red.dpsi_dnu(bq.nodes, bq.normal_signs), cfg.dpsi_dnu(bq.nodes, bq.normal_signs)
    )


def test_character_mismatch_arithmetic():
    u = HarmonicFunctionRep.log_mode(-0.5)
    assert _cfg(annulus(0.25), 0.5, u=u).character_mismatch() < 1e-10
    assert _cfg(annulus(0.25), 0.5).character_mismatch() == pytest.approx(0.5, abs=1e-10)
    # k = 1 with trivial u: 2 * 0.5 + 0 is an integer.
    assert _cfg(annulus(0.25), 0.5, k=1, p0=2.0).character_mismatch() < 1e-10
