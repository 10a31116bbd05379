"""Physical model layer.

Generalized Hulthen potentials with deformation q (q=1 standard Hulthen,
q=-1 Woods-Saxon, q=0 pure exponential), the position-dependent mass tied to
them, the map to the algebraic variable s, and the coefficient assembly that
feeds the NU engine.

Component convention: component 1 is the upper spinor entry, component 2 the
lower.  The two second-order equations differ only in the sign of the
pseudoscalar-derivative term; that sign (sigma = +1 upper, -1 lower) is
propagated into every beta-linear pseudoscalar cross term.  With it the
closed-form coefficient combination A + 2B + C collapses to m0^2 - E^2
exactly, which the tests enforce.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, asdict

import numpy as np

from .nu import CanonicalEquation


class PoleAt(ValueError):
    """Evaluation point hits the potential's pole (q > 0 only)."""

    def __init__(self, x: float):
        self.x = x
        super().__init__(f"potential pole at x = {x}")


class WrongFamily(ValueError):
    """Operation called for the wrong deformation family (q = 0 vs q != 0)."""


_JSON_KEYS = {"beta", "q", "m0", "V0", "S0", "V1", "V2", "component"}


@dataclass(frozen=True)
class ModelParams:
    """Physical inputs.

    beta: screening parameter (> 0); q: deformation; m0: constant mass part;
    V0/S0: vector/scalar strengths; V1/V2: pseudoscalar strengths for the
    upper/lower component; component: which spinor entry (1 or 2).
    """
    beta: float
    q: float
    m0: float
    V0: float
    S0: float
    V1: float
    V2: float
    component: int = 1

    def __post_init__(self):
        if self.beta <= 0:
            raise ValueError(f"beta must be positive, got {self.beta}")
        if self.component not in (1, 2):
            raise ValueError(f"component must be 1 or 2, got {self.component}")

    @property
    def Q(self) -> float:
        """Inverse deformation 1/q (derived, never stored)."""
        if self.q == 0:
            raise WrongFamily("Q = 1/q undefined for the exponential family q = 0")
        return 1.0 / self.q

    @property
    def m_i(self) -> float:
        """Mass-function amplitude: V0+S0 (upper) or V0-S0 (lower)."""
        return self.V0 + self.S0 if self.component == 1 else self.V0 - self.S0

    @property
    def V_i(self) -> float:
        """Pseudoscalar strength of the active component."""
        return self.V1 if self.component == 1 else self.V2

    @property
    def sigma_i(self) -> int:
        """Sign of the pseudoscalar-derivative term: +1 upper, -1 lower."""
        return 1 if self.component == 1 else -1

    def with_component(self, component: int) -> "ModelParams":
        return ModelParams(self.beta, self.q, self.m0, self.V0, self.S0,
                           self.V1, self.V2, component)

    def to_json(self) -> str:
        return json.dumps(asdict(self))

    @staticmethod
    def from_json(text: str) -> "ModelParams":
        data = json.loads(text)
        if not isinstance(data, dict):
            raise ValueError("parameter JSON must be an object")
        unknown = set(data) - _JSON_KEYS
        if unknown:
            raise ValueError(f"unknown parameter keys: {sorted(unknown)}")
        missing = _JSON_KEYS - set(data)
        if missing:
            raise ValueError(f"missing parameter keys: {sorted(missing)}")
        comp = data["component"]
        if not isinstance(comp, int) or isinstance(comp, bool):
            raise ValueError("component must be an integer")
        return ModelParams(
            beta=float(data["beta"]), q=float(data["q"]), m0=float(data["m0"]),
            V0=float(data["V0"]), S0=float(data["S0"]),
            V1=float(data["V1"]), V2=float(data["V2"]), component=comp)


def _shape(x, p: ModelParams):
    """The common radial shape e^(-2 beta x) / (q e^(-2 beta x) - 1)."""
    x = np.asarray(x, dtype=float)
    u = np.exp(-2.0 * p.beta * x)
    den = p.q * u - 1.0
    if np.any(den == 0.0):
        bad = np.atleast_1d(x)[np.atleast_1d(den) == 0.0][0]
        raise PoleAt(float(bad))
    out = u / den
    return out if out.ndim else float(out)


def pole_location(p: ModelParams):
    """x-position of the potential pole, or None when the shape is regular."""
    if p.q > 0:
        return math.log(p.q) / (2.0 * p.beta)
    return None


def hulthen_potential(x, strength: float, p: ModelParams):
    """strength * e^(-2 beta x) / (q e^(-2 beta x) - 1)."""
    return strength * _shape(x, p)


def sigma_delta(x, p: ModelParams):
    """(Sigma, Delta): sum/difference combinations of vector and scalar parts."""
    f = _shape(x, p)
    return (p.V0 - p.S0) * f, (p.V0 + p.S0) * f


def mass_function(x, p: ModelParams):
    """Position-dependent mass m0 + m_i * shape(x) for the active component."""
    return p.m0 + p.m_i * _shape(x, p)


def map_to_s(x, p: ModelParams):
    """Variable map s = 1/(1 - q e^(-2 beta x)); bijection onto (0,1) for q < 0."""
    if p.q == 0:
        raise WrongFamily("use map_to_s_exponential for q = 0")
    x = np.asarray(x, dtype=float)
    den = 1.0 - p.q * np.exp(-2.0 * p.beta * x)
    if np.any(den == 0.0):
        bad = np.atleast_1d(x)[np.atleast_1d(den) == 0.0][0]
        raise PoleAt(float(bad))
    out = 1.0 / den
    return out if out.ndim else float(out)


def map_from_s(s, p: ModelParams):
    """Inverse of map_to_s: x = -ln((s-1)/(q s))/(2 beta) where that is real."""
    if p.q == 0:
        raise WrongFamily("use map_from_s_exponential for q = 0")
    s = np.asarray(s, dtype=float)
    with np.errstate(divide="ignore", invalid="ignore"):
        arg = (s - 1.0) / (p.q * s)
        out = np.where(arg > 0, -np.log(np.where(arg > 0, arg, 1.0)) / (2 * p.beta),
                       np.nan)
    return out if out.ndim else float(out)


def map_to_s_exponential(x, p: ModelParams):
    """Exponential-family map s = e^(-2 beta x) used when q = 0."""
    if p.q != 0:
        raise WrongFamily("map_to_s_exponential requires q = 0")
    x = np.asarray(x, dtype=float)
    out = np.exp(-2.0 * p.beta * x)
    return out if out.ndim else float(out)


def map_from_s_exponential(s, p: ModelParams):
    if p.q != 0:
        raise WrongFamily("map_from_s_exponential requires q = 0")
    s = np.asarray(s, dtype=float)
    out = -np.log(s) / (2.0 * p.beta)
    return out if out.ndim else float(out)


@dataclass(frozen=True)
class CoefficientSet:
    """The s-space quadratic coefficients A + 2Bs + Cs^2 and the a_i, b_i blocks."""
    A: complex
    B: complex
    C: complex
    a_i: complex
    b_i: complex
    sign: int

    def as_real(self) -> "CoefficientSet":
        return CoefficientSet(self.A.real, self.B.real, self.C.real,
                              self.a_i.real, self.b_i.real, self.sign)


def coefficients(p: ModelParams, E) -> CoefficientSet:
    """A, B, C and a_i, b_i for the generic q != 0 family at energy E.

    Accepts complex E (the PT solvers evaluate off the real axis).  The
    beta-linear pseudoscalar cross terms carry sigma_i.
    """
    if p.q == 0:
        raise WrongFamily("coefficients requires q != 0")
    Q, mi, Vi, sig = p.Q, p.m_i, p.V_i, p.sigma_i
    m0, V0, S0, beta = p.m0, p.V0, p.S0, p.beta
    W = (mi - S0) ** 2 - V0 ** 2
    a_i = 2 * Q * m0 * mi + Q ** 2 * Vi ** 2 + Q ** 2 * W - 2 * Q * m0 * (V0 + S0)
    b_i = (Q * Vi * (sig * beta + Q * Vi) + Q ** 2 * W
           - Q * m0 * (S0 + V0) + Q * m0 * mi)
    A = m0 ** 2 - E * E + 2 * Q * V0 * (E + m0) + a_i
    B = -Q * V0 * (E + m0) - b_i
    C = sig * 2 * beta * Q * Vi + Q ** 2 * Vi ** 2 + Q ** 2 * W
    return CoefficientSet(A, B, C, a_i, b_i, sig)


def canonical_equation(p: ModelParams, E) -> CanonicalEquation:
    """Canonical NU coefficients for the generic family:

    (alpha1, alpha2, alpha3) = (1, 2, 1),
    xi1 = C/(4 beta^2), xi2 = -2B/(4 beta^2), xi3 = A/(4 beta^2).
    """
    c = coefficients(p, E)
    four_b2 = 4.0 * p.beta ** 2
    return CanonicalEquation(1.0, 2.0, 1.0,
                             xi1=float(np.real(c.C)) / four_b2,
                             xi2=float(np.real(-2 * c.B)) / four_b2,
                             xi3=float(np.real(c.A)) / four_b2)


def exponential_abc(p: ModelParams, E):
    """(A', B', C') of the q = 0 exponential family."""
    if p.q != 0:
        raise WrongFamily("exponential coefficients require q = 0")
    mi, Vi = p.m_i, p.V_i
    Ap = p.m0 ** 2 - E * E
    Bp = p.m0 * mi - p.m0 * p.S0 + E * p.V0 + p.beta * Vi
    Cp = Vi ** 2 + (mi - p.S0) ** 2 - p.V0 ** 2
    return Ap, Bp, Cp


def exponential_coefficients(p: ModelParams, E) -> CanonicalEquation:
    """Canonical NU coefficients for q = 0:

    (alpha1, alpha2, alpha3) = (1, 0, 0),
    xi1 = C'/(4 beta^2), xi2 = 2B'/(4 beta^2), xi3 = A'/(4 beta^2).
    """
    Ap, Bp, Cp = exponential_abc(p, E)
    four_b2 = 4.0 * p.beta ** 2
    return CanonicalEquation(1.0, 0.0, 0.0,
                             xi1=float(np.real(Cp)) / four_b2,
                             xi2=float(np.real(2 * Bp)) / four_b2,
                             xi3=float(np.real(Ap)) / four_b2)
