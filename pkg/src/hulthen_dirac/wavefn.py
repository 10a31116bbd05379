"""Spinor-component wave functions on the algebraic variable s.

Bound solutions take the form

    phi(s) = N s^(a'/2) (1-s)^(b'/2) P_n^(a',b')(1-2s),

with a' = sqrt(A)/beta and b' = sqrt(m0^2-E^2)/beta fixed by the level.  The
normalization constant is computed two independent ways: Gauss-Jacobi
quadrature of the defining integral (authoritative) and a closed form built
from terminating 3F2 sums (cross-check, evaluated in extended precision
because the alternating sums cancel heavily at large exponents).

PT-symmetric levels reuse the same shape with negated exponents and are left
unnormalized.
"""
from __future__ import annotations

import csv
import io
from dataclasses import dataclass

import mpmath as mp
import numpy as np

from . import specfun
from .model import (ModelParams, WrongFamily, canonical_equation, coefficients,
                    exponential_coefficients, map_from_s,
                    map_from_s_exponential)
from .nu import derive_params, wave_descriptor
from .spectrum import EnergyLevel


class InvalidLevel(ValueError):
    """Level is unusable here (unconverged, wrong family, or complex where
    a real bound state is required)."""


class ConditionViolated(ValueError):
    """Exponent conditions for the normalization integral fail."""


def _jacobi_complex(n: int, a, b, z):
    """Jacobi recurrence with possibly complex parameters, real argument."""
    z = np.asarray(z, dtype=float)
    a, b = complex(a), complex(b)
    p_prev = np.ones_like(z, dtype=complex)
    if n == 0:
        return p_prev
    p = (0.5 * (2 * (a + 1) + (a + b + 2) * (z - 1))).astype(complex)
    for k in range(2, n + 1):
        c1 = 2 * k * (k + a + b) * (2 * k + a + b - 2)
        c2 = (2 * k + a + b - 1) * (a * a - b * b)
        c3 = (2 * k + a + b - 2) * (2 * k + a + b - 1) * (2 * k + a + b)
        c4 = 2 * (k + a - 1) * (k + b - 1) * (2 * k + a + b)
        p, p_prev = ((c2 + c3 * z) * p - c4 * p_prev) / c1, p
    return p


@dataclass
class WaveSpec:
    """Assembled wave-function descriptor for one level."""
    params: ModelParams
    level: EnergyLevel
    alpha_prime: complex
    beta_prime: complex
    n: int
    family: str = "jacobi"
    pt_flag: bool = False
    norm_numeric: float | None = None
    norm_analytic: float | None = None

    def envelope_exponents(self) -> tuple[complex, complex]:
        """(s-exponent, (1-s)-exponent) of the sampled shape."""
        sign = -1.0 if self.pt_flag else 1.0
        return sign * self.alpha_prime / 2.0, sign * self.beta_prime / 2.0

    def sample(self, s) -> np.ndarray:
        """phi(s); normalized when norm_numeric is available, else raw shape."""
        s = np.asarray(s, dtype=float)
        ea, eb = self.envelope_exponents()
        if self.pt_flag:
            env = s ** complex(ea) * (1.0 - s) ** complex(eb)
            pol = _jacobi_complex(self.n, complex(2 * ea), complex(2 * eb),
                                  1.0 - 2.0 * s)
            return env * pol
        env = s ** float(np.real(ea)) * (1.0 - s) ** float(np.real(eb))
        pol = specfun.jacobi_poly(self.n, float(np.real(self.alpha_prime)),
                                  float(np.real(self.beta_prime)), 1.0 - 2.0 * s)
        norm = self.norm_numeric if self.norm_numeric is not None else 1.0
        return norm * env * np.asarray(pol)


def wave_from_energy(p: ModelParams, E, n: int, pt_flag: bool = False,
                     branch: str = "generic") -> WaveSpec:
    """Build the wave shape directly from an energy value.

    Does not check any quantization condition; use :func:`assemble` when the
    level came from a solver and should be validated.
    """
    if p.q == 0:
        raise WrongFamily("use exponential_wave for q = 0")
    is_real_E = not isinstance(E, complex) or E.imag == 0.0
    if is_real_E and not pt_flag:
        eq = canonical_equation(p, float(np.real(E)))
        xi1, xi2, xi3 = eq.xi1, eq.xi2, eq.xi3
        if xi3 < 0 or xi1 - xi2 + xi3 < 0:
            raise InvalidLevel(
                f"negative envelope radicand (xi3={xi3}, "
                f"xi1-xi2+xi3={xi1 - xi2 + xi3}) at E={E}")
        ap = 2.0 * np.sqrt(xi3)
        bp = 2.0 * np.sqrt(xi1 - xi2 + xi3)
    else:
        c = coefficients(p, complex(E))
        four_b2 = 4.0 * p.beta ** 2
        ap = 2.0 * np.sqrt(complex(c.A) / four_b2)
        bp = 2.0 * np.sqrt(complex(c.A + 2 * c.B + c.C) / four_b2)
    lv = EnergyLevel(n=n, E=E, branch=branch, residual=0.0,
                     component=p.component)
    return WaveSpec(params=p, level=lv, alpha_prime=ap, beta_prime=bp, n=n,
                    pt_flag=pt_flag)


def assemble(p: ModelParams, level: EnergyLevel,
             residual_tol: float = 1e-6) -> WaveSpec:
    """WaveSpec for a solved level; normalizes real bound states."""
    if level.residual > residual_tol:
        raise InvalidLevel(
            f"level residual {level.residual} exceeds {residual_tol}")
    pt = level.branch.startswith("pt")
    pc = p if p.component == level.component else p.with_component(level.component)
    spec = wave_from_energy(pc, level.E, level.n, pt_flag=pt,
                            branch=level.branch)
    spec.level = level
    if not pt and np.real(spec.alpha_prime) > 0 and np.real(spec.beta_prime) > 0:
        spec.norm_numeric = normalization_numeric(spec)
    return spec


def normalization_numeric(spec: WaveSpec) -> float:
    """N making the configuration-space norm equal one, by Gauss-Jacobi
    quadrature with exponents (a'-1, b'-1) and 64+2n points."""
    ap, bp = float(np.real(spec.alpha_prime)), float(np.real(spec.beta_prime))
    if spec.pt_flag:
        raise ConditionViolated("PT states are produced unnormalized")
    if ap <= 0 or bp <= 0:
        raise ConditionViolated(
            f"normalization needs a' > 0 and b' > 0, got ({ap}, {bp})")
    rule = specfun.gauss_jacobi_rule(64 + 2 * spec.n, ap - 1.0, bp - 1.0)
    P = specfun.jacobi_poly(spec.n, ap, bp, rule.nodes)
    integral = float(np.sum(rule.weights * np.asarray(P) ** 2))
    beta = spec.params.beta
    return float(np.sqrt(beta * np.exp((ap + bp) * np.log(2.0)) / integral))


def normalization_analytic(spec: WaveSpec) -> float:
    """Closed-form N from the terminating-3F2 reduction of the norm integral.

    N^2 = 2 beta (n!)^2 G(a'+1)^2 / [G(b') G(n+a'+1)^2 D],
    D = sum_l (-n)_l (n+a'+b'+1)_l / ((a'+1)_l l!) * G(a'+l)/G(a'+b'+l)
            * 3F2(-n, n+a'+b'+1, a'+l; a'+1, a'+b'+l; 1).

    Evaluated at 50 significant digits: the sum alternates and cancels
    heavily once the exponents are large.
    """
    ap, bp = float(np.real(spec.alpha_prime)), float(np.real(spec.beta_prime))
    if spec.pt_flag:
        raise ConditionViolated("PT states are produced unnormalized")
    if ap <= 0 or bp <= 0:
        raise ConditionViolated(
            f"normalization needs a' > 0 and b' > 0, got ({ap}, {bp})")
    n = spec.n
    with mp.workdps(50):
        a, b = mp.mpf(ap), mp.mpf(bp)
        D = mp.mpf(0)
        for ell in range(n + 1):
            t = (mp.rf(-n, ell) * mp.rf(n + a + b + 1, ell)
                 / (mp.rf(a + 1, ell) * mp.factorial(ell))
                 * mp.gamma(a + ell) / mp.gamma(a + b + ell))
            F = mp.mpf(0)
            term = mp.mpf(1)
            for k in range(n + 1):
                if k > 0:
                    term *= (mp.mpf(-n) + k - 1) * (n + a + b + k) * (a + ell + k - 1)
                    term /= (a + k) * (a + b + ell + k - 1) * k
                F += term
            D += t * F
        n2 = (2 * spec.params.beta * mp.factorial(n) ** 2 * mp.gamma(a + 1) ** 2
              / (mp.gamma(b) * mp.gamma(n + a + 1) ** 2 * D))
        if n2 <= 0:
            raise ConditionViolated(f"closed-form N^2 = {float(n2)} not positive")
        return float(mp.sqrt(n2))


def ode_residual(spec: WaveSpec, p: ModelParams | None = None,
                 grid_points: int = 256) -> float:
    """Max interior residual of the s-space equation, relative to max |phi|.

    phi'' + (1-2s)/(s(1-s)) phi' - (xi1 s^2 - xi2 s + xi3)/(s(1-s))^2 phi
    evaluated on s in [0.05, 0.95] with analytic Jacobi derivatives.
    """
    if spec.pt_flag:
        raise InvalidLevel("ODE residual is defined for real bound levels")
    p = p if p is not None else spec.params
    if p.component != spec.level.component:
        p = p.with_component(spec.level.component)
    E = float(np.real(spec.level.E))
    eq = canonical_equation(p, E)
    s = np.linspace(0.05, 0.95, grid_points)
    ap, bp = float(np.real(spec.alpha_prime)), float(np.real(spec.beta_prime))
    a2, b2 = ap / 2.0, bp / 2.0
    z = 1.0 - 2.0 * s
    P = np.asarray(specfun.jacobi_poly(spec.n, ap, bp, z))
    Pz = np.asarray(specfun.jacobi_deriv(spec.n, ap, bp, z, 1))
    Pzz = np.asarray(specfun.jacobi_deriv(spec.n, ap, bp, z, 2))
    env = s ** a2 * (1.0 - s) ** b2
    g = a2 / s - b2 / (1.0 - s)
    phi = env * P
    dphi = env * (g * P - 2.0 * Pz)
    d2phi = env * ((g * g - a2 / s ** 2 - b2 / (1.0 - s) ** 2) * P
                   - 4.0 * g * Pz + 4.0 * Pzz)
    quad = eq.xi1 * s ** 2 - eq.xi2 * s + eq.xi3
    resid = d2phi + (1.0 - 2.0 * s) / (s * (1.0 - s)) * dphi \
        - quad / (s * (1.0 - s)) ** 2 * phi
    scale = np.max(np.abs(phi))
    if scale == 0:
        raise InvalidLevel("wave function vanishes on the test grid")
    return float(np.max(np.abs(resid)) / scale)


# ---------------------------------------------------------------------------
# q = 0 exponential family


@dataclass
class ExponentialWave:
    """Laguerre-family shape for the q = 0 potential, on s = e^(-2 beta x)."""
    params: ModelParams
    E: float
    n: int
    s_exponent: float
    exp_coeff: float       # negative: decay toward s -> infinity
    lag_order: float
    arg_scale: float

    def sample(self, s) -> np.ndarray:
        s = np.asarray(s, dtype=float)
        L = np.asarray(specfun.laguerre_poly(self.n, self.lag_order,
                                             self.arg_scale * s))
        return s ** self.s_exponent * np.exp(self.exp_coeff * s) * L


def exponential_wave(p: ModelParams, E: float, n: int) -> ExponentialWave:
    """Assemble the q = 0 wave shape; the energy must be supplied externally
    (no closed-form quantization exists for this family)."""
    if p.q != 0:
        raise WrongFamily("exponential_wave requires q = 0")
    eq = exponential_coefficients(p, E)
    ps = derive_params(eq)
    d = wave_descriptor(ps, n, branch="limit")
    return ExponentialWave(params=p, E=E, n=n, s_exponent=d.s_exponent,
                           exp_coeff=d.exp_coeff, lag_order=d.lag_a,
                           arg_scale=d.arg_scale)


def exponential_ode_residual(w: ExponentialWave, s_max: float = 8.0,
                             grid_points: int = 256) -> float:
    """Max residual of phi'' + phi'/s - (xi1 s^2 - xi2 s + xi3)/s^2 phi,
    relative to max |phi|, over s in (0, s_max]."""
    p = w.params
    eq = exponential_coefficients(p, w.E)
    span = s_max / max(1.0, np.sqrt(eq.xi1)) if eq.xi1 > 0 else s_max
    s = np.linspace(0.05 * span, span, grid_points)
    c, k, g = w.s_exponent, w.exp_coeff, w.arg_scale
    L = np.asarray(specfun.laguerre_poly(w.n, w.lag_order, g * s))
    if w.n >= 1:
        L1 = -np.asarray(specfun.laguerre_poly(w.n - 1, w.lag_order + 1, g * s))
    else:
        L1 = np.zeros_like(s)
    if w.n >= 2:
        L2 = np.asarray(specfun.laguerre_poly(w.n - 2, w.lag_order + 2, g * s))
    else:
        L2 = np.zeros_like(s)
    env = s ** c * np.exp(k * s)
    up = c / s + k
    phi = env * L
    dphi = env * (up * L + g * L1)
    d2phi = env * ((up * up - c / s ** 2) * L + 2 * up * g * L1 + g * g * L2)
    quad = eq.xi1 * s ** 2 - eq.xi2 * s + eq.xi3
    resid = d2phi + dphi / s - quad / s ** 2 * phi
    scale = np.max(np.abs(phi))
    if scale == 0:
        raise InvalidLevel("wave function vanishes on the test grid")
    return float(np.max(np.abs(resid)) / scale)


def export_csv(spec, s_values) -> str:
    """Sampled wave function as CSV: s, x (where the inverse map is regular),
    re(phi), im(phi)."""
    s_values = np.asarray(s_values, dtype=float)
    phi = spec.sample(s_values)
    p = spec.params
    if p.q == 0:
        x = map_from_s_exponential(s_values, p)
    else:
        x = map_from_s(s_values, p)
    x = np.atleast_1d(np.asarray(x, dtype=float))
    buf = io.StringIO()
    w = csv.writer(buf)
    w.writerow(["s", "x", "re_phi", "im_phi"])
    for sv, xv, ph in zip(s_values, x, np.atleast_1d(phi)):
        w.writerow([repr(float(sv)),
                    "" if np.isnan(xv) else repr(float(xv)),
                    repr(float(np.real(ph))), repr(float(np.imag(ph)))])
    return buf.getvalue()
