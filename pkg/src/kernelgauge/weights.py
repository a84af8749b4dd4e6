"""Weight configurations: exhaustion psi, twist phi, radial profile c.

A configuration fixes

    psi = p0 * G(., z0) + eps * s,      s <= 0 smooth subharmonic, s = 0 on
                                        the boundary (strictness experiments),
    phi = a_g * G(., z0) + 2 * u,       u a finite harmonic representation,
    rho = exp(-phi) * c(-2 psi),        interior density,
    lam = exp(-phi) * c(0) / (dpsi/dnu) boundary density.

Restricting to this family keeps all mass-at-z0 bookkeeping arithmetic:
the curvature mass of phi + 2 psi at z0 is a_g + 2 p0.  a_g may be
negative; that arises when a higher-derivative problem is reduced to an
order-zero one by moving 2k log|z - z0| out of phi.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Literal

import numpy as np
from scipy.integrate import quad as _quad

from .errors import EvaluationAtPole, InvalidProfile
from .geometry import DomainSpec, area_quadrature, boundary_quadrature
from .potential import (
    Character,
    GreenFunctionRep,
    HarmonicFunctionRep,
    character_distance,
    character_exponent,
    green,
)

_PROFILE_GRID = np.concatenate([[0.0], np.logspace(-6, np.log10(50.0), 999)])


@dataclass(frozen=True)
class CIntegrals:
    c: float
    h: float
    total: float


@dataclass(frozen=True)
class CProfile:
    """Radial reweighting profile c(t) with c(0) = 1 and c(t)e^-t decreasing.

    Three closed families: constant one, exp_delta with c(t) = e^(delta t)
    (delta < 1), and poly with c(t) = (1 + t)^-m (m > 0).  The first two
    have closed-form tails; poly tails are integrated numerically.
    """

    kind: Literal["constant_one", "exp_delta", "poly"]
    delta: float = 0.0
    m: float = 0.0

    def __post_init__(self):
        if self.kind == "exp_delta" and self.delta >= 1.0:
            raise InvalidProfile(f"c-profile not integrable: delta={self.delta} >= 1")
        if self.kind == "poly" and self.m <= 0.0:
            raise InvalidProfile(f"poly profile needs m > 0, got {self.m}")
        if self.kind not in ("constant_one", "exp_delta", "poly"):
            raise InvalidProfile(f"unknown profile kind {self.kind!r}")

    @staticmethod
    def constant_one() -> "CProfile":
        return CProfile("constant_one")

    @staticmethod
    def exp_delta(delta: float) -> "CProfile":
        return CProfile("exp_delta", delta=delta)

    @staticmethod
    def poly(m: float) -> "CProfile":
        return CProfile("poly", m=m)

    def c(self, t):
        t = np.asarray(t, dtype=float)
        if self.kind == "constant_one":
            return np.ones_like(t)
        if self.kind == "exp_delta":
            return np.exp(self.delta * t)
        return (1.0 + t) ** (-self.m)

    def h(self, t):
        """Tail integral of c(s) e^-s over [t, infinity)."""
        if self.kind == "constant_one":
            return np.exp(-np.asarray(t, dtype=float))
        if self.kind == "exp_delta":
            return np.exp((self.delta - 1.0) * np.asarray(t, dtype=float)) / (1.0 - self.delta)
        scalar = np.isscalar(t)
        ts = np.atleast_1d(np.asarray(t, dtype=float))
        out = np.array(
            [
                _quad(lambda s: (1.0 + s) ** (-self.m) * math.exp(-s), ti, np.inf,
                      epsabs=1e-12, epsrel=1e-12, limit=200)[0]
                for ti in ts
            ]
        )
        return float(out[0]) if scalar else out

    @property
    def total(self) -> float:
        """Full integral of c(t) e^-t over [0, infinity)."""
        return float(self.h(0.0))

    def grid_monotone_defect(self) -> float:
        """Largest increase of c(t)e^-t along a log-spaced sample grid."""
        vals = self.c(_PROFILE_GRID) * np.exp(-_PROFILE_GRID)
        return float(np.max(np.diff(vals), initial=0.0))


def c_integrals(profile: CProfile, t: float) -> CIntegrals:
    """Profile value, tail integral and total mass at a single point."""
    return CIntegrals(float(profile.c(t)), float(profile.h(t)), profile.total)


@dataclass(frozen=True)
class PsiSpec:
    """psi = p0 * G(., z0) + eps * s with the fixed boundary-flat bump s."""

    p0: float
    eps: float = 0.0

    def __post_init__(self):
        if self.p0 <= 0.0:
            raise ValueError("p0 must be positive")
        if self.eps < 0.0:
            raise ValueError("eps must be nonnegative")


@dataclass(frozen=True)
class PhiSpec:
    """phi = a_g * G(., z0) + 2u; u defaults to zero."""

    a_g: float = 0.0
    u: HarmonicFunctionRep = field(default_factory=HarmonicFunctionRep.zero)


def _bump_log_coefficient(domain: DomainSpec) -> float:
    if domain.kind == "disc":
        return 0.0
    return (domain.q**2 - 1.0) / math.log(domain.q)


class WeightConfig:
    """Immutable bundle of domain, base point, order and weight data."""

    def __init__(
        self,
        domain: DomainSpec,
        z0: complex,
        k: int,
        psi: PsiSpec,
        phi: PhiSpec,
        c: CProfile,
    ):
        if k < 0:
            raise ValueError("derivative order k must be nonnegative")
        if not domain.contains(z0, margin=1e-9):
            raise ValueError(f"base point {z0} not interior")
        self.domain = domain
        self.z0 = complex(z0)
        self.k = int(k)
        self.psi = psi
        self.phi = phi
        self.c = c
        self._green: GreenFunctionRep | None = None
        self._bump_b = _bump_log_coefficient(domain)

    # -- potential-theoretic data ------------------------------------

    @property
    def green_rep(self) -> GreenFunctionRep:
        if self._green is None:
            self._green = green(self.domain, self.z0)
        return self._green

    def bump(self, z):
        """The fixed perturbation s(z) <= 0, vanishing on the boundary."""
        z = np.asarray(z, dtype=complex)
        r2 = np.abs(z) ** 2
        if self.domain.kind == "disc":
            return r2 - 1.0
        return r2 - 1.0 - self._bump_b * np.log(np.abs(z))

    def bump_radial_derivative(self, z):
        z = np.asarray(z, dtype=complex)
        r = np.abs(z)
        return 2.0 * r - self._bump_b / r

    def psi_value(self, z):
        val = self.psi.p0 * self.green_rep.value(z)
        if self.psi.eps:
            val = val + self.psi.eps * self.bump(z)
        return val

    def two_psi(self, z):
        return 2.0 * self.psi_value(z)

    def dpsi_dnu(self, zeta, signs):
        """Outward normal derivative of psi at boundary nodes."""
        val = self.psi.p0 * self.green_rep.normal_derivative(zeta, signs)
        if self.psi.eps:
            val = val + self.psi.eps * np.asarray(signs, dtype=float) * self.bump_radial_derivative(zeta)
        return val

    def phi_value(self, z):
        val = np.zeros(np.shape(np.asarray(z)), dtype=float)
        if self.phi.a_g != 0.0:
            val = val + self.phi.a_g * self.green_rep.value(z)
        val = val + 2.0 * self.phi.u.value(z)
        return val

    # -- densities -----------------------------------------------------

    def rho(self, z):
        """Interior density exp(-phi) c(-2 psi)."""
        return np.exp(-self.phi_value(z)) * self.c.c(-self.two_psi(z))

    def boundary_lambda(self, zeta, signs):
        """Boundary density exp(-phi) c(0) / (dpsi/dnu)."""
        return np.exp(-self.phi_value(zeta)) / self.dpsi_dnu(zeta, signs)

    def density_unbounded_at_z0(self) -> bool:
        if self.phi.a_g > 0.0:
            return True
        return self.c.kind == "exp_delta" and self.c.delta > 0.0

    # -- characters ------------------------------------------------------

    @property
    def alpha_z0(self) -> Character:
        return character_exponent(self.domain, self.green_rep)

    @property
    def alpha_u(self) -> Character:
        return character_exponent(self.domain, self.phi.u)

    def character_mismatch(self) -> float:
        """Distance of (k+1) alpha_z0 + alpha_u from 0 mod 1."""
        total = (self.k + 1) * self.alpha_z0.exponent + self.alpha_u.exponent
        return character_distance(total)

    # -- shape predicates and reduction -----------------------------------

    def green_mass(self) -> float:
        """Curvature mass of phi + 2 psi at z0: a_g + 2 p0."""
        return self.phi.a_g + 2.0 * self.psi.p0

    def has_equality_shape(self) -> bool:
        return (
            abs(self.green_mass() - 2.0 * (self.k + 1)) < 1e-12
            and self.psi.eps == 0.0
        )

    def reduced(self) -> "WeightConfig":
        """Order-zero configuration with |z - z0|^(2k) moved into the density.

        Subtracting 2k log|z - z0| = 2k (G - H) from phi lowers the Green
        multiple by 2k and adds k copies of the harmonic correction H to u.
        """
        if self.k == 0:
            return self
        h_corr = self.green_rep.correction
        return WeightConfig(
            self.domain,
            self.z0,
            0,
            self.psi,
            PhiSpec(self.phi.a_g - 2.0 * self.k, self.phi.u + h_corr.scaled(float(self.k))),
            self.c,
        )

    def with_updates(self, **kwargs) -> "WeightConfig":
        data = dict(
            domain=self.domain, z0=self.z0, k=self.k, psi=self.psi, phi=self.phi, c=self.c
        )
        data.update(kwargs)
        return WeightConfig(**data)


def rho_lambda_eval(config: WeightConfig, z: complex) -> float:
    """Density at a single point: rho inside, lambda on the boundary.

    Boundary membership is detected by |z| matching a component radius to
    1e-12.  Asking for rho exactly at z0 raises when the density is
    unbounded there; quadrature nodes never coincide with z0.
    """
    r = abs(z)
    for comp_index, radius in enumerate(config.domain.component_radii):
        if abs(r - radius) < 1e-12:
            sign = 1.0 if comp_index == 0 else -1.0
            return float(config.boundary_lambda(np.array([z]), np.array([sign]))[0])
    if z == config.z0 and config.density_unbounded_at_z0():
        raise EvaluationAtPole(f"density unbounded at z0={config.z0}")
    return float(config.rho(np.array([z]))[0])


@dataclass(frozen=True)
class ConfigCheck:
    name: str
    passed: bool
    measured: float
    detail: str


def validate_config(config: WeightConfig) -> list[ConfigCheck]:
    """Admissibility checks; returns per-check results, raises nothing."""
    checks: list[ConfigCheck] = []

    defect = config.c.grid_monotone_defect()
    c0 = float(config.c.c(0.0))
    total = config.c.total
    ok = defect <= 1e-12 and abs(c0 - 1.0) <= 1e-12 and math.isfinite(total)
    checks.append(
        ConfigCheck(
            "c_profile_admissible",
            ok,
            defect,
            f"c(0)={c0:.6g}, total={total:.6g}, monotone defect={defect:.3e}",
        )
    )

    mass = config.green_mass()
    need = 2.0 * (config.k + 1)
    checks.append(
        ConfigCheck(
            "mass_at_z0",
            mass >= need - 1e-12,
            mass,
            f"a_g + 2 p0 = {mass:.6g}, needs >= {need:.6g} for k={config.k}",
        )
    )

    bq = boundary_quadrature(config.domain, 128)
    trace = float(np.max(np.abs(config.psi_value(bq.nodes))))
    flux = config.dpsi_dnu(bq.nodes, bq.normal_signs)
    min_flux = float(np.min(flux))
    checks.append(
        ConfigCheck(
            "psi_boundary_trace",
            trace <= 1e-8,
            trace,
            f"max |psi| on boundary nodes = {trace:.3e}",
        )
    )
    checks.append(
        ConfigCheck(
            "psi_normal_derivative_positive",
            min_flux > 0.0,
            min_flux,
            f"min dpsi/dnu on boundary nodes = {min_flux:.6g}",
        )
    )

    aq = area_quadrature(config.domain, config.z0, 96, 96, patch_levels=12)
    rho_vals = config.rho(aq.nodes)
    min_rho = float(np.min(rho_vals))
    finite = bool(np.all(np.isfinite(rho_vals)))
    checks.append(
        ConfigCheck(
            "rho_positive",
            min_rho > 0.0 and finite,
            min_rho,
            f"min rho on area nodes = {min_rho:.6g}, finite={finite}",
        )
    )
    return checks
