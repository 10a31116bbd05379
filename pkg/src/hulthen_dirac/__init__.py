"""Bound states of a (1+1)-dimensional Dirac Hamiltonian with scalar, vector
and pseudoscalar screened-exponential (generalized Hulthen) couplings and the
position-dependent mass tied to them.

Closed-form spectra come from a parametric quantization engine; everything is
cross-validated against an independent finite-difference oracle in x-space.
"""
from .model import (CoefficientSet, ModelParams, PoleAt, WrongFamily,
                    canonical_equation, coefficients, exponential_coefficients,
                    hulthen_potential, map_from_s, map_to_s, mass_function,
                    sigma_delta)
from .nu import (CanonicalEquation, NegativeDiscriminant, NUParameterSet,
                 WrongBranch, derive_params, quantization_residual,
                 quantization_residual_limit, quantization_residual_second,
                 wave_descriptor)
from .specfun import (InvalidExponent, PoleInDenominator, QuadratureRule,
                      gauss_jacobi_rule, hyp3f2_terminating, jacobi_poly,
                      jacobi_series, laguerre_poly, pochhammer)
from .spectrum import (EnergyLevel, OutOfDomain, SpectrumReport,
                       SymmetryViolation, energy_residual,
                       energy_residual_explicit, pt_residual, solve_levels,
                       solve_constant_mass, solve_nonrelativistic, solve_pt)
from .verify import (NoConvergence, SingularPotential, UnknownSuite,
                     VerificationReport, oracle_eigenvalues, oracle_states,
                     run_suite)
from .wavefn import (ConditionViolated, InvalidLevel, WaveSpec, assemble,
                     exponential_wave, normalization_analytic,
                     normalization_numeric, ode_residual, wave_from_energy)

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
