"""Special functions shared by the whole package.

Jacobi and generalized Laguerre polynomials, Pochhammer symbols, terminating
generalized hypergeometric 3F2 at unit argument, and Gauss-Jacobi quadrature
rules for integrals against the weight (1-z)^a (1+z)^b on (-1, 1).

The Jacobi production path is the three-term recurrence; ``jacobi_series``
evaluates the finite hypergeometric sum and exists as an independent check
(the sum loses accuracy for large degree, the recurrence does not).
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass
from math import lgamma

import numpy as np
from scipy.linalg import eigh_tridiagonal
from scipy.special import betaln


class PoleInDenominator(ValueError):
    """A denominator Pochhammer symbol vanishes before the series terminates."""


class InvalidExponent(ValueError):
    """Quadrature weight exponent outside the integrable range (> -1)."""


def pochhammer(x: float, k: int) -> float:
    """Rising factorial x(x+1)...(x+k-1); equals 1 for k = 0.

    Uses the log-gamma form when |x| is large enough that the direct product
    risks overflow; otherwise multiplies iteratively.
    """
    if k < 0:
        raise ValueError("k must be a nonnegative integer")
    if k == 0:
        return 1.0
    if x > 30.0:
        return float(np.exp(lgamma(x + k) - lgamma(x)))
    if x < -30.0 and x + k - 1 < 0:
        # all factors negative: sign is (-1)^k, magnitudes via lgamma
        mag = lgamma(-x + 1) - lgamma(-(x + k) + 1)
        return float((-1) ** k * np.exp(mag))
    out = 1.0
    for j in range(k):
        out *= x + j
    return out


def jacobi_poly(n: int, a: float, b: float, z):
    """Jacobi polynomial P_n^(a,b)(z) by the three-term recurrence.

    Parameters outside the classical range a, b > -1 are permitted (the
    PT-symmetric branch produces them); evaluation proceeds formally with a
    warning.  ``z`` may be a scalar or an ndarray.
    """
    if n < 0:
        raise ValueError("degree must be nonnegative")
    if a <= -1 or b <= -1:
        warnings.warn(
            f"Jacobi parameters (a={a}, b={b}) outside classical range; "
            "evaluating formally", stacklevel=2)
    z = np.asarray(z, dtype=float)
    p_prev = np.ones_like(z)
    if n == 0:
        return p_prev if p_prev.ndim else float(p_prev)
    p = 0.5 * (2 * (a + 1) + (a + b + 2) * (z - 1))
    for k in range(2, n + 1):
        c1 = 2 * k * (k + a + b) * (2 * k + a + b - 2)
        c2 = (2 * k + a + b - 1) * (a * a - b * b)
        c3 = (2 * k + a + b - 2) * (2 * k + a + b - 1) * (2 * k + a + b)
        c4 = 2 * (k + a - 1) * (k + b - 1) * (2 * k + a + b)
        p, p_prev = ((c2 + c3 * z) * p - c4 * p_prev) / c1, p
    return p if p.ndim else float(p)


def jacobi_series(n: int, a: float, b: float, z):
    """P_n^(a,b)(z) by the terminating hypergeometric sum.

    P_n = ((a+1)_n / n!) * sum_l (-n)_l (n+a+b+1)_l / ((a+1)_l l!) ((1-z)/2)^l.
    Independent of the recurrence path; used as a cross-check oracle.
    """
    z = np.asarray(z, dtype=float)
    x = 0.5 * (1.0 - z)
    acc = np.zeros_like(z)
    term = np.ones_like(z)
    for ell in range(n + 1):
        if ell > 0:
            term = term * ((-n + ell - 1) * (n + a + b + ell) * x
                           / ((a + ell) * ell))
        acc = acc + term
    pref = 1.0
    for j in range(n):
        pref *= (a + 1 + j) / (j + 1)
    out = pref * acc
    return out if out.ndim else float(out)


def jacobi_deriv(n: int, a: float, b: float, z, order: int = 1):
    """k-th derivative of P_n^(a,b) at z via d/dz P_n = ((n+a+b+1)/2) P_{n-1}^(a+1,b+1)."""
    if order < 0:
        raise ValueError("order must be nonnegative")
    if order == 0:
        return jacobi_poly(n, a, b, z)
    if n < order:
        z = np.asarray(z, dtype=float)
        out = np.zeros_like(z)
        return out if out.ndim else 0.0
    pref = 1.0
    for j in range(order):
        pref *= 0.5 * (n + a + b + 1 + j)
    return pref * jacobi_poly(n - order, a + order, b + order, z)


def laguerre_poly(n: int, a: float, z):
    """Generalized Laguerre polynomial L_n^a(z) by recurrence."""
    if n < 0:
        raise ValueError("degree must be nonnegative")
    z = np.asarray(z, dtype=float)
    p_prev = np.ones_like(z)
    if n == 0:
        return p_prev if p_prev.ndim else 1.0
    p = 1.0 + a - z
    for k in range(2, n + 1):
        p, p_prev = ((2 * k - 1 + a - z) * p - (k - 1 + a) * p_prev) / k, p
    return p if p.ndim else float(p)


def hyp3f2_terminating(n: int, a: float, b: float, c: float, d: float) -> float:
    """Terminating 3F2(-n, a, b; c, d; 1) summed directly over k = 0..n."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    acc = 1.0
    term = 1.0
    for k in range(1, n + 1):
        den = (c + k - 1) * (d + k - 1)
        if den == 0.0:
            raise PoleInDenominator(
                f"denominator Pochhammer vanishes at k={k} for (c, d)=({c}, {d})")
        term *= (-n + k - 1) * (a + k - 1) * (b + k - 1) / (den * k)
        acc += term
    return acc


@dataclass(frozen=True)
class QuadratureRule:
    """Gauss-Jacobi rule: exact for polynomials of degree <= 2*len(nodes)-1
    against the weight (1-z)^a (1+z)^b on (-1, 1)."""
    nodes: np.ndarray
    weights: np.ndarray
    exponents: tuple[float, float]

    def integrate(self, f) -> float:
        """Integrate f(z)*(1-z)^a*(1+z)^b over (-1, 1)."""
        return float(np.sum(self.weights * f(self.nodes)))


def _jacobi_recurrence(npoints: int, a: float, b: float):
    """Diagonal/off-diagonal of the symmetric Jacobi matrix plus mu0."""
    i = np.arange(npoints, dtype=float)
    ab = a + b
    denom = (2 * i + ab) * (2 * i + ab + 2)
    diag = np.empty(npoints)
    if ab + 2 != 0:
        diag[0] = (b - a) / (ab + 2)
    else:
        diag[0] = 0.0
    diag[1:] = (b * b - a * a) / denom[1:]
    j = np.arange(1, npoints, dtype=float)
    s = 2 * j + ab
    off = np.sqrt(4 * j * (j + a) * (j + b) * (j + ab) / (s * s * (s * s - 1)))
    mu0 = float(np.exp((ab + 1) * np.log(2.0) + betaln(a + 1, b + 1)))
    return diag, off, mu0


def _orthonormal_values(x: np.ndarray, nmax: int, diag, off, mu0, derivs: bool = False):
    """Values (and optionally derivatives) p_0..p_nmax of the orthonormal
    Jacobi family at points x, from the symmetric three-term recurrence."""
    vals = np.empty((nmax + 1, x.size))
    vals[0] = 1.0 / np.sqrt(mu0)
    if nmax >= 1:
        vals[1] = (x - diag[0]) * vals[0] / off[0]
    for k in range(2, nmax + 1):
        vals[k] = ((x - diag[k - 1]) * vals[k - 1] - off[k - 2] * vals[k - 2]) / off[k - 1]
    if not derivs:
        return vals
    dvals = np.zeros_like(vals)
    if nmax >= 1:
        dvals[1] = vals[0] / off[0]
    for k in range(2, nmax + 1):
        dvals[k] = ((x - diag[k - 1]) * dvals[k - 1] + vals[k - 1]
                    - off[k - 2] * dvals[k - 2]) / off[k - 1]
    return vals, dvals


def gauss_jacobi_rule(npoints: int, a: float, b: float) -> QuadratureRule:
    """Gauss-Jacobi nodes and weights.

    Golub-Welsch eigenvalues seed one Newton step on the orthonormal-recurrence
    polynomial (node residual tolerance 1e-14); weights come from the
    Christoffel sum 1/sum_j p_j(x_k)^2, which stays consistent with the
    polished nodes.
    """
    if npoints < 1:
        raise ValueError("npoints must be >= 1")
    if a <= -1 or b <= -1:
        raise InvalidExponent(f"weight exponents must exceed -1, got ({a}, {b})")
    diag, off, mu0 = _jacobi_recurrence(npoints, a, b)
    if npoints == 1:
        nodes = np.array([diag[0]])
        weights = np.array([mu0])
        return QuadratureRule(nodes, weights, (a, b))
    nodes = eigh_tridiagonal(diag, off, select="a")[0]

    # extend the recurrence one level so p_n (whose roots are the nodes) exists
    diag_ext, off_ext, _ = _jacobi_recurrence(npoints + 1, a, b)

    # Newton polish on p_n with the analytic recurrence derivative
    for _ in range(3):
        vals, dvals = _orthonormal_values(nodes, npoints, diag_ext, off_ext, mu0,
                                          derivs=True)
        dp = dvals[npoints]
        step = np.where(dp != 0, vals[npoints] / np.where(dp == 0, 1.0, dp), 0.0)
        nodes = nodes - step
        if np.max(np.abs(step)) < 1e-14:
            break
    nodes = np.sort(nodes)
    vals = _orthonormal_values(nodes, npoints - 1, diag_ext, off_ext, mu0)
    weights = 1.0 / np.sum(vals * vals, axis=0)
    return QuadratureRule(nodes, weights, (a, b))
