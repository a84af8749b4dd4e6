"""Green functions, capacities, Dirichlet solves and characters.

Harmonic functions on the disc/annulus are stored as a log mode plus a
finite Laurent expansion of their analytic completion:

    u(z) = alpha_log * log|z| + Re sum_m C_m z^m,   |m| <= M.

The annulus Green function with pole w is log|z - w| plus such a
correction, obtained by matching the Fourier data of -log|zeta - w| on
both boundary circles; the matching coefficients are explicit geometric
series, scaled so no intermediate quantity overflows.  The disc Green
function uses the same representation with coefficients conj(w)^n / n,
which sums to the familiar Moebius closed form.

Characters of the annulus fundamental group are measured, never derived
symbolically: the exponent is the conjugate-period flux (1/2pi) * contour
integral of dh/dr along a mid-circle traversed counterclockwise, reduced
mod 1.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import PoleTooCloseToBoundary, TruncationInsufficient
from .geometry import DomainSpec

_TWO_PI = 2.0 * np.pi
# Target for truncation tails when auto-sizing expansions.
_TAIL_TOL = 1e-13
_FLUX_NODES = 512


@dataclass(frozen=True)
class LaurentSeries:
    """Finite Laurent polynomial sum_{m=m_min}^{m_max} c[m] z^m."""

    m_min: int
    coeffs: np.ndarray  # index k holds the coefficient of z^(m_min + k)

    def __post_init__(self):
        c = np.array(self.coeffs, dtype=complex)
        c.flags.writeable = False
        object.__setattr__(self, "coeffs", c)

    @property
    def m_max(self) -> int:
        return self.m_min + len(self.coeffs) - 1

    def __call__(self, z):
        z = np.asarray(z, dtype=complex)
        out = np.zeros_like(z)
        lo, hi = self.m_min, self.m_max
        if hi >= 0:
            start = max(lo, 0)
            pos = self.coeffs[start - lo :]
            acc = np.zeros_like(z)
            for c in pos[::-1]:
                acc = acc * z + c
            out = out + (acc * z**start if start > 0 else acc)
        if lo < 0:
            stop = min(hi, -1)
            neg = self.coeffs[: stop - lo + 1]
            w = 1.0 / z
            acc = np.zeros_like(z)
            for c in neg:
                acc = acc * w + c
            out = out + acc * w ** (-lo - (len(neg) - 1))
        return out


@dataclass(frozen=True)
class Character:
    """Unimodular character exp(2pi i alpha) of the annulus loop group."""

    exponent: float

    def __post_init__(self):
        object.__setattr__(self, "exponent", float(self.exponent) % 1.0)

    def distance(self, other: "Character") -> float:
        return character_distance(self.exponent, other.exponent)


def character_distance(a: float, b: float = 0.0) -> float:
    """Distance of a - b to the nearest integer, in [0, 1/2]."""
    d = (a - b) % 1.0
    return min(d, 1.0 - d)


@dataclass(frozen=True)
class HarmonicFunctionRep:
    """Harmonic function alpha_log*log|z| + Re(series(z))."""

    alpha_log: float
    series: LaurentSeries

    @staticmethod
    def zero() -> "HarmonicFunctionRep":
        return HarmonicFunctionRep(0.0, LaurentSeries(0, np.zeros(1)))

    @staticmethod
    def log_mode(alpha: float) -> "HarmonicFunctionRep":
        return HarmonicFunctionRep(alpha, LaurentSeries(0, np.zeros(1)))

    @staticmethod
    def from_coefficients(alpha_log: float, coeffs: dict[int, complex]) -> "HarmonicFunctionRep":
        if coeffs:
            lo = min(min(coeffs), 0)
            hi = max(max(coeffs), 0)
        else:
            lo = hi = 0
        arr = np.zeros(hi - lo + 1, dtype=complex)
        for m, c in coeffs.items():
            arr[m - lo] = c
        return HarmonicFunctionRep(alpha_log, LaurentSeries(lo, arr))

    @property
    def truncation(self) -> int:
        return max(self.series.m_max, -self.series.m_min)

    def value(self, z):
        z = np.asarray(z, dtype=complex)
        out = np.real(self.series(z))
        if self.alpha_log != 0.0:
            out = out + self.alpha_log * np.log(np.abs(z))
        return out

    def radial_derivative(self, z):
        """d/dr along rays through the origin; equals Re[(z/|z|) w'(z)]."""
        z = np.asarray(z, dtype=complex)
        w = self.analytic_derivative()
        return np.real(z / np.abs(z) * w.series(z))

    def analytic_derivative(self) -> "AnalyticDerivative":
        """Single-valued derivative w'(z) = 2 du/dz of the completion u + i*conj."""
        s = self.series
        terms: dict[int, complex] = {}
        for m, c in zip(range(s.m_min, s.m_max + 1), s.coeffs):
            if m != 0 and c != 0.0:
                terms[m - 1] = terms.get(m - 1, 0.0) + m * c
        if self.alpha_log != 0.0:
            terms[-1] = terms.get(-1, 0.0) + self.alpha_log
        lo = min(terms) if terms else 0
        hi = max(terms) if terms else 0
        arr = np.zeros(hi - lo + 1, dtype=complex)
        for m, c in terms.items():
            arr[m - lo] = c
        return AnalyticDerivative(LaurentSeries(lo, arr), Character(self.alpha_log))

    def __add__(self, other: "HarmonicFunctionRep") -> "HarmonicFunctionRep":
        lo = min(self.series.m_min, other.series.m_min)
        hi = max(self.series.m_max, other.series.m_max)
        arr = np.zeros(hi - lo + 1, dtype=complex)
        arr[self.series.m_min - lo : self.series.m_max - lo + 1] += self.series.coeffs
        arr[other.series.m_min - lo : other.series.m_max - lo + 1] += other.series.coeffs
        return HarmonicFunctionRep(self.alpha_log + other.alpha_log, LaurentSeries(lo, arr))

    def scaled(self, factor: float) -> "HarmonicFunctionRep":
        return HarmonicFunctionRep(
            factor * self.alpha_log, LaurentSeries(self.series.m_min, factor * self.series.coeffs)
        )


@dataclass(frozen=True)
class AnalyticDerivative:
    """Analytic evaluator with its loop period recorded as a Character."""

    series: LaurentSeries
    character: Character

    def __call__(self, z):
        return self.series(z)


@dataclass(frozen=True)
class PoleDerivative:
    """Evaluator 1/(z - pole) + regular(z), the derivative 2 dG/dz."""

    pole: complex
    regular: LaurentSeries

    def __call__(self, z):
        z = np.asarray(z, dtype=complex)
        return 1.0 / (z - self.pole) + self.regular(z)

    def pole_factor(self, z):
        """(z - pole) * h'(z), analytic and equal to 1 at the pole."""
        z = np.asarray(z, dtype=complex)
        return 1.0 + (z - self.pole) * self.regular(z)


@dataclass(frozen=True)
class GreenFunctionRep:
    """Green function log|z - w| + correction, vanishing on the boundary."""

    domain: DomainSpec
    pole: complex
    correction: HarmonicFunctionRep

    def value(self, z):
        z = np.asarray(z, dtype=complex)
        # -inf at the pole itself is the correct value.
        with np.errstate(divide="ignore"):
            return np.log(np.abs(z - self.pole)) + self.correction.value(z)

    @property
    def robin_constant(self) -> float:
        """Finite part of G at the pole, lim (G - log|z - w|)."""
        return float(self.correction.value(self.pole))

    def derivative(self) -> PoleDerivative:
        reg = self.correction.analytic_derivative().series
        return PoleDerivative(self.pole, reg)

    def normal_derivative(self, zeta, signs):
        """dG/dnu at boundary points; signs +1 outer circle, -1 inner."""
        zeta = np.asarray(zeta, dtype=complex)
        h = self.derivative()
        return np.asarray(signs, dtype=float) * np.real(zeta / np.abs(zeta) * h(zeta))


def _auto_truncation(ratio: float, minimum: int = 48, maximum: int = 6000) -> int:
    if ratio <= 0.0:
        return minimum
    need = int(np.ceil(np.log(_TAIL_TOL) / np.log(ratio))) + 8
    return int(min(max(need, minimum), maximum))


def green(domain: DomainSpec, w: complex) -> GreenFunctionRep:
    """Green function of the domain with pole at the interior point w."""
    w = complex(w)
    if not domain.contains(w):
        raise ValueError(f"pole {w} is not interior")
    if domain.boundary_clearance(w) < 1e-3:
        raise PoleTooCloseToBoundary(
            f"pole {w} within 1e-3 of the boundary; expansion ill-conditioned"
        )
    if domain.kind == "disc":
        if abs(w) == 0.0:
            return GreenFunctionRep(domain, w, HarmonicFunctionRep.zero())
        m = _auto_truncation(abs(w))
        n = np.arange(1, m + 1)
        coeffs = np.conj(w) ** n / n
        arr = np.zeros(m + 1, dtype=complex)
        arr[1:] = coeffs
        return GreenFunctionRep(domain, w, HarmonicFunctionRep(0.0, LaurentSeries(0, arr)))
    q = domain.q
    ratio = max(abs(w), q / abs(w))
    m = _auto_truncation(ratio)
    n = np.arange(1, m + 1)
    a_data = np.conj(w) ** n / n                      # outer-circle data coefficient
    b_data = (q / w) ** n / n                         # inner-circle data coefficient
    qn = q**n
    b = (b_data * qn - a_data * qn**2) / (1.0 - qn**2)
    a = a_data - b
    alpha = -np.log(abs(w)) / np.log(q)
    arr = np.zeros(2 * m + 1, dtype=complex)
    arr[m + 1 :] = a
    arr[:m] = np.conj(b[::-1])
    return GreenFunctionRep(domain, w, HarmonicFunctionRep(alpha, LaurentSeries(-m, arr)))


def green_boundary_normal_derivative(g: GreenFunctionRep, zeta, signs=None):
    """Outward normal derivative of a Green function at boundary nodes."""
    zeta = np.asarray(zeta, dtype=complex)
    if signs is None:
        signs = np.where(np.abs(zeta) > 0.5 * (1.0 + g.domain.inner_radius), 1.0, -1.0)
    return g.normal_derivative(zeta, signs)


def log_capacity(domain: DomainSpec, z0: complex) -> float:
    """exp of the Robin constant of the Green function at z0."""
    return float(np.exp(green(domain, z0).robin_constant))


def dirichlet_solve(domain: DomainSpec, boundary_data, m_max: int | None = None) -> HarmonicFunctionRep:
    """Harmonic extension of per-component samples at equispaced angles.

    boundary_data[i][j] is the datum at angle 2*pi*j/N on component i
    (component 0 the outer circle).  Data must be analytic in the angle;
    the residual at the sample nodes is checked after matching.
    """
    data = [np.asarray(d, dtype=float) for d in boundary_data]
    if len(data) != len(domain.component_radii):
        raise ValueError("one data array per boundary component required")
    n_nodes = len(data[0])
    if any(len(d) != n_nodes for d in data):
        raise ValueError("all components must use the same node count")
    if m_max is None:
        m_max = n_nodes // 2 - 1
    if m_max > n_nodes // 2 - 1:
        raise ValueError("truncation exceeds what the samples determine")
    hat = [np.fft.fft(d) / n_nodes for d in data]
    if domain.kind == "disc":
        c0 = float(np.real(hat[0][0]))
        coeffs = {0: c0}
        for n in range(1, m_max + 1):
            coeffs[n] = 2.0 * hat[0][n]
        rep = HarmonicFunctionRep.from_coefficients(0.0, coeffs)
    else:
        q = domain.q
        outer0 = float(np.real(hat[0][0]))
        inner0 = float(np.real(hat[1][0]))
        alpha = (inner0 - outer0) / np.log(q)
        coeffs = {0: outer0}
        for n in range(1, m_max + 1):
            go = 2.0 * hat[0][n]
            gi = 2.0 * hat[1][n]
            qn = q**n
            # Matching at both radii: C_n + conj(C_-n) = go and
            # C_n q^n + conj(C_-n) q^-n = gi.
            y = (gi - go * qn) * qn / (1.0 - qn**2)
            coeffs[n] = go - y
            coeffs[-n] = complex(np.conj(y))
        rep = HarmonicFunctionRep.from_coefficients(alpha, coeffs)
    # Residual check at the sample nodes.
    worst = 0.0
    for radius, d in zip(domain.component_radii, data):
        theta = _TWO_PI * np.arange(n_nodes) / n_nodes
        zeta = radius * np.exp(1j * theta)
        worst = max(worst, float(np.max(np.abs(rep.value(zeta) - d))))
    if worst > 1e-6:
        raise TruncationInsufficient(
            f"boundary trace residual {worst:.3e} exceeds 1e-6; raise node count"
        )
    return rep


def _flux_circle_radius(domain: DomainSpec, avoid_radius: float | None) -> float:
    s = np.sqrt(domain.q)
    if avoid_radius is not None and abs(s - avoid_radius) < 0.05 * (1.0 - domain.q):
        s = float(np.exp(0.5 * (np.log(domain.q) + np.log(avoid_radius))))
    return float(s)


def character_exponent(domain: DomainSpec, h) -> Character:
    """Conjugate-period exponent of h around the hole, measured by flux.

    h may be a HarmonicFunctionRep or a GreenFunctionRep.  The flux
    (1/2pi) * integral of dh/dr over a mid-circle is radius independent
    mod 1, so the circle is only adjusted to keep clear of a Green pole.
    On the disc the character group is trivial.
    """
    if domain.kind == "disc":
        return Character(0.0)
    if isinstance(h, GreenFunctionRep):
        s = _flux_circle_radius(domain, abs(h.pole))
        deriv = h.derivative()
    else:
        s = _flux_circle_radius(domain, None)
        deriv = h.analytic_derivative()
    theta = _TWO_PI * np.arange(_FLUX_NODES) / _FLUX_NODES
    zeta = s * np.exp(1j * theta)
    d_dr = np.real(zeta / s * deriv(zeta))
    flux = float(np.sum(d_dr) * s * (_TWO_PI / _FLUX_NODES) / _TWO_PI)
    return Character(flux)


def pole_part_derivative(g: GreenFunctionRep) -> PoleDerivative:
    """Analytic derivative 2 dG/dz with a simple pole of residue 1."""
    return g.derivative()


def harmonic_analytic_derivative(u: HarmonicFunctionRep) -> AnalyticDerivative:
    """Analytic derivative 2 du/dz with the loop period recorded."""
    return u.analytic_derivative()
