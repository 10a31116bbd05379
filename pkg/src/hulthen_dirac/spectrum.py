"""Eigenvalue solvers.

Real bound states come from bracketed root-finding on the transcendental
condition

    [ sqrt(m0^2 - E^2 + 2 Q V0 (E + m0) + a_i) + sqrt(m0^2 - E^2)
      + beta (2n+1) ]^2  =  (sigma_i beta + Q V_i)^2 + Q^2 W_i

with W_i = (m_i - S0)^2 - V0^2.  The squared form admits a spurious negative
branch; accepted roots must satisfy the unsquared equation with the positive
bracket root (both square roots and beta(2n+1) are nonnegative).

Complex PT spectra (imaginary screening, or all parameters imaginary) are
found by a complex-grid scan seeding damped Newton iterations with deflation.
"""
from __future__ import annotations

import cmath
import csv
import io
import json
import math
from dataclasses import dataclass, field, replace

import numpy as np
from scipy.optimize import brentq

from .model import ModelParams, WrongFamily, coefficients, exponential_abc


class OutOfDomain(ValueError):
    """Energy outside the region where both square roots are real."""

    def __init__(self, which: str, value: float):
        self.which = which
        super().__init__(f"radicand {which} = {value} < 0")


class SymmetryViolation(ValueError):
    """Caller's parameters contradict the requested symmetry constraint."""


@dataclass(frozen=True)
class EnergyLevel:
    n: int
    E: complex
    branch: str
    residual: float
    component: int
    lam: int | None = None
    sheet: int | None = None
    is_real: bool | None = None
    paired: bool | None = None

    def as_dict(self) -> dict:
        e = self.E
        if isinstance(e, complex):
            e_json = {"re": e.real, "im": e.imag}
        else:
            e_json = float(e)
        return {"n": self.n, "E": e_json, "branch": self.branch,
                "residual": self.residual, "component": self.component,
                "lambda": self.lam, "sheet": self.sheet,
                "is_real": self.is_real, "paired": self.paired}

    @staticmethod
    def from_dict(d: dict) -> "EnergyLevel":
        e = d["E"]
        E = complex(e["re"], e["im"]) if isinstance(e, dict) else float(e)
        return EnergyLevel(n=d["n"], E=E, branch=d["branch"],
                           residual=d["residual"], component=d["component"],
                           lam=d.get("lambda"), sheet=d.get("sheet"),
                           is_real=d.get("is_real"), paired=d.get("paired"))


@dataclass
class SpectrumReport:
    params: ModelParams
    levels: list[EnergyLevel]
    diagnostics: dict = field(default_factory=dict)
    warnings: list[str] = field(default_factory=list)

    def to_json(self) -> str:
        return json.dumps({
            "params": json.loads(self.params.to_json()),
            "levels": [lv.as_dict() for lv in self.levels],
            "diagnostics": self.diagnostics,
            "warnings": self.warnings,
        }, indent=2)

    @staticmethod
    def from_json(text: str) -> "SpectrumReport":
        d = json.loads(text)
        return SpectrumReport(
            params=ModelParams.from_json(json.dumps(d["params"])),
            levels=[EnergyLevel.from_dict(x) for x in d["levels"]],
            diagnostics=d.get("diagnostics", {}),
            warnings=d.get("warnings", []))

    def to_csv(self) -> str:
        """Real levels only: n, E, branch, residual."""
        buf = io.StringIO()
        w = csv.writer(buf)
        w.writerow(["n", "E", "branch", "residual"])
        for lv in self.levels:
            e = lv.E
            if isinstance(e, complex):
                if abs(e.imag) > 1e-12 * max(1.0, abs(e.real)):
                    continue
                e = e.real
            w.writerow([lv.n, repr(float(e)), lv.branch, repr(lv.residual)])
        return buf.getvalue()


# ---------------------------------------------------------------------------
# real-branch machinery


def bracket_value(p: ModelParams) -> float:
    """(sigma_i beta + Q V_i)^2 + Q^2 W_i, the right side of the squared condition."""
    Q = p.Q
    W = (p.m_i - p.S0) ** 2 - p.V0 ** 2
    return (p.sigma_i * p.beta + Q * p.V_i) ** 2 + Q * Q * W


def _radicands(p: ModelParams, E):
    c = coefficients(p, E)
    return c.A, p.m0 ** 2 - E * E


def energy_domain(p: ModelParams) -> tuple[float, float] | None:
    """Open E-interval where both radicands are positive, or None if empty.

    The augmented radicand is -(E - Q V0)^2 + (Q V0 + m0)^2 + a_i, a downward
    parabola in E.
    """
    Q = p.Q
    a_i = coefficients(p, 0.0).a_i.real
    disc = (Q * p.V0 + p.m0) ** 2 + a_i
    if disc <= 0:
        return None
    lo = Q * p.V0 - math.sqrt(disc)
    hi = Q * p.V0 + math.sqrt(disc)
    lo, hi = max(lo, -p.m0), min(hi, p.m0)
    if lo >= hi:
        return None
    return lo, hi


def energy_residual(p: ModelParams, E: float, n: int) -> float:
    """Squared-form residual; zero (with the positive-branch condition) at an
    eigenvalue."""
    A, R = _radicands(p, E)
    A, R = float(np.real(A)), float(np.real(R))
    if R < 0:
        raise OutOfDomain("m0^2 - E^2", R)
    if A < 0:
        raise OutOfDomain("augmented", A)
    X = math.sqrt(A) + math.sqrt(R) + p.beta * (2 * n + 1)
    return X * X - bracket_value(p)


def energy_residual_explicit(p: ModelParams, E: float, n: int) -> float:
    """Component-specific transcription of the same condition.

    Upper: a_1 = Q^2 V1^2, bracket (beta + Q V1)^2.
    Lower: a_2 = -4 Q m0 S0 + Q^2 V2^2 - 4 Q^2 S0 (V0 - S0),
           bracket (-beta + Q V2)^2 - 4 Q^2 S0 (V0 - S0).
    Exists as an independent dual path for cross-checking the generic assembly.
    """
    Q, m0, beta = p.Q, p.m0, p.beta
    if p.component == 1:
        a = Q ** 2 * p.V1 ** 2
        bracket = (beta + Q * p.V1) ** 2
    else:
        a = (-4 * Q * m0 * p.S0 + Q ** 2 * p.V2 ** 2
             - 4 * Q ** 2 * p.S0 * (p.V0 - p.S0))
        bracket = (-beta + Q * p.V2) ** 2 - 4 * Q ** 2 * p.S0 * (p.V0 - p.S0)
    A = m0 ** 2 - E ** 2 + 2 * Q * p.V0 * (E + m0) + a
    R = m0 ** 2 - E ** 2
    if R < 0:
        raise OutOfDomain("m0^2 - E^2", R)
    if A < 0:
        raise OutOfDomain("augmented", A)
    X = math.sqrt(A) + math.sqrt(R) + beta * (2 * n + 1)
    return X * X - bracket


def _unsquared(p: ModelParams, E: float, n: int, K: float) -> float:
    A, R = _radicands(p, E)
    A, R = max(float(np.real(A)), 0.0), max(float(np.real(R)), 0.0)
    return math.sqrt(A) + math.sqrt(R) + p.beta * (2 * n + 1) - K


def _polish_root(p: ModelParams, E: float, n: int, lo: float, hi: float) -> float:
    """A few Newton steps on the squared form, with the analytic derivative."""
    Q = p.Q
    for _ in range(4):
        A, R = _radicands(p, E)
        A, R = float(np.real(A)), float(np.real(R))
        if A <= 0 or R <= 0:
            break
        sA, sR = math.sqrt(A), math.sqrt(R)
        X = sA + sR + p.beta * (2 * n + 1)
        h = X * X - bracket_value(p)
        dX = (-E + Q * p.V0) / sA + (-E) / sR
        dh = 2 * X * dX
        if dh == 0:
            break
        E_new = E - h / dh
        if not (lo < E_new < hi):
            break
        if abs(E_new - E) < 1e-16 * max(1.0, abs(E)):
            E = E_new
            break
        E = E_new
    return E


def solve_levels(p: ModelParams, n_max: int, panels: int = 4096,
                 branch_label: str = "generic") -> SpectrumReport:
    """All real bound levels with n <= n_max.

    Sign-change scan of the unsquared condition over the admissible E-window,
    Brent bracketing, then Newton polish on the squared form.  An empty level
    list is a valid outcome.
    """
    if n_max < 0:
        raise ValueError("n_max must be nonnegative")
    report = SpectrumReport(params=p, levels=[],
                            diagnostics={"panels": panels, "brackets": 0,
                                         "newton_polishes": 0})
    B = bracket_value(p)
    if B < 0:
        report.warnings.append(
            f"bracket value {B} < 0: no real positive-branch roots")
        return report
    K = math.sqrt(B)
    dom = energy_domain(p)
    if dom is None:
        report.warnings.append("no E-window with both radicands positive")
        return report
    eps = 1e-9 * max(1.0, p.m0)
    lo, hi = dom[0] + eps, dom[1] - eps
    if lo >= hi:
        report.warnings.append("admissible E-window is empty after edge trim")
        return report
    grid = np.linspace(lo, hi, panels + 1)
    A_g = np.real(p.m0 ** 2 - grid ** 2 + 2 * p.Q * p.V0 * (grid + p.m0)
                  + coefficients(p, 0.0).a_i)
    R_g = p.m0 ** 2 - grid ** 2
    valid = (A_g >= 0) & (R_g >= 0)
    levels: list[EnergyLevel] = []
    for n in range(n_max + 1):
        g_vals = np.where(valid,
                          np.sqrt(np.where(valid, A_g, 0.0))
                          + np.sqrt(np.where(valid, R_g, 0.0))
                          + p.beta * (2 * n + 1) - K,
                          np.nan)
        ok = ~np.isnan(g_vals)
        sign_change = ok[:-1] & ok[1:] & (g_vals[:-1] * g_vals[1:] < 0)
        idx = np.nonzero(sign_change)[0]
        report.diagnostics["brackets"] += int(idx.size)
        for j in idx:
            root = brentq(lambda E: _unsquared(p, E, n, K),
                          grid[j], grid[j + 1], xtol=1e-13, rtol=8.9e-16)
            root = _polish_root(p, root, n, lo, hi)
            report.diagnostics["newton_polishes"] += 1
            if p.m0 - abs(root) < 1e-9 * max(1.0, p.m0):
                continue
            res = abs(energy_residual(p, root, n))
            if abs(_unsquared(p, root, n, K)) > 1e-8 * max(1.0, K):
                continue
            levels.append(EnergyLevel(n=n, E=root, branch=branch_label,
                                      residual=res, component=p.component))
    levels.sort(key=lambda lv: (lv.n, np.real(lv.E)))
    deduped: list[EnergyLevel] = []
    for lv in levels:
        if any(lv.n == o.n and abs(np.real(lv.E) - np.real(o.E)) < 1e-8
               for o in deduped):
            continue
        deduped.append(lv)
    report.levels = deduped
    return report


def solve_constant_mass(p: ModelParams, symmetry: str, n_max: int) -> SpectrumReport:
    """Constant-mass limits.

    spin:        requires V0 = -S0 (upper-component amplitude vanishes);
                 keeps positive-energy roots only.
    pseudospin:  requires V0 = +S0 (lower-component amplitude vanishes);
                 keeps negative-energy roots only.
    """
    tol = 1e-12 * max(1.0, abs(p.V0), abs(p.S0))
    if symmetry == "spin":
        if abs(p.V0 + p.S0) > tol:
            raise SymmetryViolation(
                f"spin limit requires V0 = -S0, got V0={p.V0}, S0={p.S0}")
        q = replace(p, component=1)
        keep = lambda E: E > 0
    elif symmetry == "pseudospin":
        if abs(p.V0 - p.S0) > tol:
            raise SymmetryViolation(
                f"pseudospin limit requires V0 = +S0, got V0={p.V0}, S0={p.S0}")
        q = replace(p, component=2)
        keep = lambda E: E < 0
    else:
        raise ValueError(f"unknown symmetry {symmetry!r}")
    rep = solve_levels(q, n_max, branch_label=symmetry)
    rep.levels = [lv for lv in rep.levels if keep(np.real(lv.E))]
    return rep


def solve_nonrelativistic(p: ModelParams, n_max: int) -> SpectrumReport:
    """Weak-binding limit: m0^2 - E^2 -> -2 m0 E and E + m0 -> 2 m0.

    The rationalized condition has two algebraic branches; only candidates
    that satisfy the unsquared equation with nonnegative radicands and E < 0
    are returned.
    """
    report = SpectrumReport(params=p, levels=[], diagnostics={"candidates": 0})
    B = bracket_value(p)
    if B < 0:
        report.warnings.append(f"bracket value {B} < 0: no real roots")
        return report
    Q, m0 = p.Q, p.m0
    a_i = coefficients(p, 0.0).a_i.real
    c1 = 4 * Q * m0 * p.V0 + a_i
    for n in range(n_max + 1):
        bn = p.beta * (2 * n + 1)
        for T in (math.sqrt(B) - bn, -math.sqrt(B) - bn):
            report.diagnostics["candidates"] += 1
            if T <= 0:
                continue
            sy = (T * T - c1) / (2 * T)
            if sy < 0:
                continue
            y = sy * sy
            E = -y / (2 * m0)
            if E >= 0 or y + c1 < 0:
                continue
            resid = math.sqrt(y + c1) + math.sqrt(y) + bn - math.sqrt(B)
            if abs(resid) > 1e-8 * max(1.0, math.sqrt(B)):
                continue
            report.levels.append(EnergyLevel(
                n=n, E=E, branch="nonrel", residual=abs(resid),
                component=p.component))
    report.levels.sort(key=lambda lv: (lv.n, np.real(lv.E)))
    return report


# ---------------------------------------------------------------------------
# PT-symmetric (complex) machinery


def _pt_gamma_a(p: ModelParams, variant: str):
    """(Gamma_i, a_i) for the requested complex variant."""
    Q, mi, Vi, sig = p.Q, p.m_i, p.V_i, p.sigma_i
    m0, V0, S0, beta = p.m0, p.V0, p.S0, p.beta
    if variant == "imag_beta":
        W = (mi - S0) ** 2 - V0 ** 2
        gamma = (1j * sig * beta + Q * Vi) ** 2 + Q * Q * W
        a_i = coefficients(p, 0.0).a_i
    elif variant == "all_imag":
        block = (mi - 1j * S0) ** 2 + V0 ** 2
        gamma = -((sig * beta - Q * Vi) ** 2) + Q * Q * block
        a_i = (-2 * m0 * Q * (V0 + S0) - 2j * Q * m0 * mi
               - Q * Q * block - Q * Q * Vi ** 2)
    else:
        raise ValueError(f"unknown PT variant {variant!r}")
    return complex(gamma), complex(a_i)


def _pt_branch_residual(p: ModelParams, E: complex, n: int, lam: int,
                        sheet: int, variant: str) -> complex:
    gamma, a_i = _pt_gamma_a(p, variant)
    Q, m0 = p.Q, p.m0
    P = m0 ** 2 - E * E + 2 * Q * p.V0 * (E + m0) + a_i
    R = m0 ** 2 - E * E
    return (cmath.sqrt(P) + cmath.sqrt(R)
            + sheet * 1j * p.beta * (2 * n + 1) + lam * cmath.sqrt(gamma))


def pt_residual(p: ModelParams, E: complex, n: int, lam: int,
                variant: str = "imag_beta") -> complex:
    """Complex residual of the PT quantization condition (principal roots)."""
    if lam not in (1, -1):
        raise ValueError("lam must be +1 or -1")
    return _pt_branch_residual(p, complex(E), n, lam, +1, variant)


def _newton_complex(f, E0: complex, tol: float, max_iter: int = 80) -> complex | None:
    E = E0
    fE = f(E)
    for _ in range(max_iter):
        if abs(fE) < tol:
            return E
        h = 1e-7 * (1.0 + abs(E))
        d = (f(E + h) - f(E - h)) / (2 * h)
        if d == 0 or not cmath.isfinite(d):
            return None
        step = fE / d
        # damping: halve until the residual does not grow
        for _ in range(12):
            E_new = E - step
            f_new = f(E_new)
            if cmath.isfinite(f_new) and abs(f_new) <= abs(fE):
                break
            step /= 2
        else:
            return None
        if abs(E_new - E) < 1e-14 * (1.0 + abs(E)):
            E, fE = E_new, f_new
            break
        E, fE = E_new, f_new
    return E if abs(fE) < tol else None


def solve_pt(p: ModelParams, n_max: int, variant: str = "imag_beta",
             grid_points: int = 64, tol: float = 1e-10,
             max_seeds: int = 48) -> SpectrumReport:
    """Complex levels of the PT quantization condition.

    For each n the four sign combinations (lambda, sheet of the imaginary
    level-number term) are scanned over the rectangle |Re E| <= 2 m0,
    |Im E| <= 2 m0, seeding damped Newton with deflation.  Levels with
    |Im E| <= 1e-8 max(1, |Re E|) are flagged real.  For the imaginary-
    screening variant with real inputs the physical spectrum is closed under
    conjugation, so accepted non-real levels must appear in conjugate pairs;
    stragglers (branch artifacts at the n_max boundary) are dropped and
    reported in the warnings.
    """
    branch_name = "pt_imag_beta" if variant == "imag_beta" else "pt_all_imag"
    report = SpectrumReport(params=p, levels=[],
                            diagnostics={"grid": grid_points, "seeds_tried": 0,
                                         "dropped_unpaired": 0})
    m0 = p.m0
    re = np.linspace(-2 * m0, 2 * m0, grid_points)
    im = np.linspace(-2 * m0, 2 * m0, grid_points)
    RE, IM = np.meshgrid(re, im, indexing="ij")
    EE = RE + 1j * IM
    found: list[EnergyLevel] = []
    for n in range(n_max + 1):
        for lam in (+1, -1):
            for sheet in (+1, -1):
                f = lambda E: _pt_branch_residual(p, E, n, lam, sheet, variant)
                gamma, a_i = _pt_gamma_a(p, variant)
                Q = p.Q
                P = m0 ** 2 - EE * EE + 2 * Q * p.V0 * (EE + m0) + a_i
                R = m0 ** 2 - EE * EE
                vals = np.abs(np.sqrt(P) + np.sqrt(R)
                              + sheet * 1j * p.beta * (2 * n + 1)
                              + lam * np.sqrt(complex(gamma)))
                order = np.argsort(vals, axis=None)
                seeds = [complex(EE.flat[k]) for k in order[:max_seeds]]
                roots_here: list[complex] = []
                for E0 in seeds:
                    report.diagnostics["seeds_tried"] += 1
                    if roots_here:
                        defl = lambda E: f(E) / np.prod(
                            [E - r for r in roots_here])
                        root = _newton_complex(defl, E0, tol)
                        if root is not None:
                            root = _newton_complex(f, root, tol)
                    else:
                        root = _newton_complex(f, E0, tol)
                    if root is None:
                        continue
                    if abs(root.real) > 2 * m0 + 1e-6 or abs(root.imag) > 2 * m0 + 1e-6:
                        continue
                    if m0 - abs(root) < 1e-9 * max(1.0, m0) and abs(root.imag) < 1e-9:
                        continue
                    if any(abs(root - r) < 1e-7 * (1 + abs(root)) for r in roots_here):
                        continue
                    roots_here.append(root)
                for r in roots_here:
                    if any(lv.n == n and abs(lv.E - r) < 1e-7 * (1 + abs(r))
                           for lv in found):
                        continue
                    is_real = abs(r.imag) <= 1e-8 * max(1.0, abs(r.real))
                    found.append(EnergyLevel(
                        n=n, E=r, branch=branch_name,
                        residual=abs(f(r)), component=p.component,
                        lam=lam, sheet=sheet, is_real=is_real))
    if variant == "imag_beta":
        kept: list[EnergyLevel] = []
        for lv in found:
            if lv.is_real:
                kept.append(replace(lv, paired=False))
                continue
            partner = any(abs(np.conj(lv.E) - o.E) < 1e-7 * (1 + abs(lv.E))
                          for o in found if o is not lv)
            if partner:
                kept.append(replace(lv, paired=True))
            else:
                report.diagnostics["dropped_unpaired"] += 1
                report.warnings.append(
                    f"dropped unpaired non-real root {lv.E} at n={lv.n} "
                    f"(lambda={lv.lam}, sheet={lv.sheet}): conjugate partner "
                    "lies outside the enumerated branches")
        found = kept
    report.levels = sorted(found, key=lambda lv: (lv.n, np.real(lv.E),
                                                  np.imag(lv.E)))
    return report


# ---------------------------------------------------------------------------
# q = 0 exponential family (derived extension)


def exponential_extension_levels(p: ModelParams, n_max: int) -> SpectrumReport:
    """Roots of the Laguerre-family quantization condition for q = 0.

    The exponential potential has no closed-form bound-state condition of its
    own; these roots extend the alpha3 = 0 quantization rule and are intended
    for cross-validation against the x-space oracle, not as a primary claim.
    """
    if p.q != 0:
        raise WrongFamily("exponential extension requires q = 0")
    report = SpectrumReport(params=p, levels=[],
                            diagnostics={"family": "exponential"})
    _, _, Cp = exponential_abc(p, 0.0)
    if Cp <= 0:
        report.warnings.append(f"C' = {Cp} <= 0: no normalizable Laguerre states")
        return report
    sC = math.sqrt(Cp)
    m0 = p.m0

    def g(E, n):
        Ap, Bp, _ = exponential_abc(p, E)
        return Bp - p.beta * (2 * n + 1) * sC + math.sqrt(Ap * Cp)

    eps = 1e-9 * max(1.0, m0)
    grid = np.linspace(-m0 + eps, m0 - eps, 4097)
    for n in range(n_max + 1):
        vals = np.array([g(E, n) for E in grid])
        idx = np.nonzero(vals[:-1] * vals[1:] < 0)[0]
        for j in idx:
            root = brentq(lambda E: g(E, n), grid[j], grid[j + 1], xtol=1e-13)
            if m0 - abs(root) < 1e-9 * max(1.0, m0):
                continue
            report.levels.append(EnergyLevel(
                n=n, E=root, branch="exponential", residual=abs(g(root, n)),
                component=p.component))
    report.levels.sort(key=lambda lv: (lv.n, np.real(lv.E)))
    return report
