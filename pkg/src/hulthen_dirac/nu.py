"""Parametric Nikiforov-Uvarov engine.

Maps a second-order equation of the canonical form

    F'' + (alpha1 - alpha2*s)/(s(1 - alpha3*s)) F'
        - (xi1*s^2 - xi2*s + xi3)/[s(1 - alpha3*s)]^2 F = 0

to its derived parameter set, the two quantization conditions, the
alpha3 = 0 limiting condition, and polynomial wave-function descriptors.

Square roots here use the principal real branch; negative radicands raise
instead of continuing into the complex plane (complex continuation belongs
to the PT solvers in :mod:`hulthen_dirac.spectrum`).
"""
from __future__ import annotations

import math
from dataclasses import dataclass


class NegativeDiscriminant(ValueError):
    """alpha8 or alpha9 is negative: no real NU solution at these coefficients."""

    def __init__(self, which: str, value: float):
        self.which = which
        self.value = value
        super().__init__(f"{which} = {value} < 0: no real square root")


class WrongBranch(ValueError):
    """The requested quantization branch does not apply to this parameter set."""


@dataclass(frozen=True)
class CanonicalEquation:
    alpha1: float
    alpha2: float
    alpha3: float
    xi1: float
    xi2: float
    xi3: float

    def __post_init__(self):
        for name in ("alpha1", "alpha2", "alpha3", "xi1", "xi2", "xi3"):
            if not math.isfinite(getattr(self, name)):
                raise ValueError(f"{name} must be finite")


@dataclass(frozen=True)
class NUParameterSet:
    """Derived parameters alpha4..alpha13 plus the starred second-branch set."""
    alpha4: float
    alpha5: float
    alpha6: float
    alpha7: float
    alpha8: float
    alpha9: float
    alpha10: float
    alpha11: float
    alpha12: float
    alpha13: float
    alpha10s: float
    alpha11s: float
    alpha12s: float
    alpha13s: float
    source: CanonicalEquation


def derive_params(eq: CanonicalEquation) -> NUParameterSet:
    """Derive the full parameter set from the canonical coefficients."""
    a1, a2, a3 = eq.alpha1, eq.alpha2, eq.alpha3
    a4 = 0.5 * (1.0 - a1)
    a5 = 0.5 * (a2 - 2.0 * a3)
    a6 = a5 * a5 + eq.xi1
    a7 = 2.0 * a4 * a5 - eq.xi2
    a8 = a4 * a4 + eq.xi3
    a9 = a3 * (a7 + a3 * a8) + a6
    if a8 < 0:
        raise NegativeDiscriminant("alpha8", a8)
    if a9 < 0:
        raise NegativeDiscriminant("alpha9", a9)
    r8, r9 = math.sqrt(a8), math.sqrt(a9)
    a10 = a1 + 2.0 * a4 + 2.0 * r8
    a11 = a2 - 2.0 * a5 + 2.0 * (r9 + a3 * r8)
    a12 = a4 + r8
    a13 = a5 - (r9 + a3 * r8)
    a10s = a1 + 2.0 * a4 - 2.0 * r8
    a11s = a2 - 2.0 * a5 - 2.0 * (r9 - a3 * r8)
    a12s = a4 - r8
    a13s = a5 - (r9 - a3 * r8)
    return NUParameterSet(a4, a5, a6, a7, a8, a9, a10, a11, a12, a13,
                          a10s, a11s, a12s, a13s, eq)


def quantization_residual(p: NUParameterSet, n: int) -> float:
    """First-branch quantization condition; a zero marks an eigenvalue.

    alpha2*n - (2n+1)*alpha5 + (2n+1)(sqrt(a9) + a3*sqrt(a8))
      + n(n-1)*a3 + a7 + 2*a3*a8 + 2*sqrt(a8*a9)
    """
    eq = p.source
    r8, r9 = math.sqrt(p.alpha8), math.sqrt(p.alpha9)
    return (eq.alpha2 * n - (2 * n + 1) * p.alpha5
            + (2 * n + 1) * (r9 + eq.alpha3 * r8)
            + n * (n - 1) * eq.alpha3 + p.alpha7
            + 2 * eq.alpha3 * p.alpha8 + 2 * r8 * r9)


def quantization_residual_second(p: NUParameterSet, n: int) -> float:
    """Second independent quantization branch (sign-flipped root couplings)."""
    eq = p.source
    r8, r9 = math.sqrt(p.alpha8), math.sqrt(p.alpha9)
    return (eq.alpha2 * n + (1 - 2 * n) * p.alpha5
            + (2 * n + 1) * (r9 - eq.alpha3 * r8)
            + n * (n - 1) * eq.alpha3 + p.alpha7
            + 2 * eq.alpha3 * p.alpha8 - 2 * r8 * r9)


def quantization_residual_limit(p: NUParameterSet, n: int) -> float:
    """Quantization condition in the alpha3 = 0 limit (Laguerre family)."""
    eq = p.source
    if eq.alpha3 != 0.0:
        raise WrongBranch(f"limit branch requires alpha3 = 0, got {eq.alpha3}")
    r8, r9 = math.sqrt(p.alpha8), math.sqrt(p.alpha9)
    # the alpha3-multiplied terms are kept verbatim; they vanish at alpha3 = 0
    return ((eq.alpha2 - 2 * p.alpha5) * n
            + (2 * n + 1) * (r9 - eq.alpha3 * r8)
            + n * (n - 1) * eq.alpha3 + p.alpha7
            + 2 * eq.alpha3 * p.alpha8 - 2 * r8 * r9 + p.alpha5)


@dataclass(frozen=True)
class NUWaveDescriptor:
    """Shape of a polynomial NU solution.

    Jacobi branches:  F(s) = N s^s_exponent (1 - alpha3*s)^t_exponent
                             * P_n^(jac_a, jac_b)(1 - 2*alpha3*s)
    Laguerre branch:  F(s) = N s^s_exponent exp(exp_coeff*s)
                             * L_n^(lag_a)(arg_scale*s)
    """
    family: str                 # "jacobi" | "laguerre"
    n: int
    branch: str                 # "first" | "second" | "limit"
    s_exponent: float
    t_exponent: float = 0.0     # exponent of (1 - alpha3*s); jacobi only
    jac_a: float = 0.0
    jac_b: float = 0.0
    lag_a: float = 0.0
    exp_coeff: float = 0.0      # laguerre only
    arg_scale: float = 0.0      # laguerre only


def wave_descriptor(p: NUParameterSet, n: int, branch: str = "first") -> NUWaveDescriptor:
    """Wave-function descriptor for the requested quantization branch."""
    eq = p.source
    a3 = eq.alpha3
    if branch == "limit":
        if a3 != 0.0:
            raise WrongBranch("limit descriptor requires alpha3 = 0")
        return NUWaveDescriptor(
            family="laguerre", n=n, branch=branch,
            s_exponent=p.alpha12, lag_a=p.alpha10 - 1.0,
            exp_coeff=p.alpha13, arg_scale=p.alpha11)
    if a3 == 0.0:
        raise WrongBranch("alpha3 = 0 requires the limit branch")
    if branch == "first":
        a10, a11, a12, a13 = p.alpha10, p.alpha11, p.alpha12, p.alpha13
    elif branch == "second":
        a10, a11, a12, a13 = p.alpha10s, p.alpha11s, p.alpha12s, p.alpha13s
    else:
        raise ValueError(f"unknown branch {branch!r}")
    return NUWaveDescriptor(
        family="jacobi", n=n, branch=branch,
        s_exponent=a12, t_exponent=-a12 - a13 / a3,
        jac_a=a10 - 1.0, jac_b=a11 / a3 - a10 - 1.0)
