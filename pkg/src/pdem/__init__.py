"""Numerical laboratory for non-hermitian Hamiltonians with position-dependent mass.

Builds 1D Hamiltonians from first-order generators, transforms them between
the variable-mass coordinate and the constant-mass frame, computes complex
spectra with independent cross-checks, and verifies the operator identities
the construction rests on.
"""

from .errors import (BasinError, BracketError, ConfigError, ConvergenceError,
                     DimensionError, DomainError, MonotonicityError, PdemError)
from .numerics import ComplexField, Grid, central_derivative, cumulative_integral, make_uniform_grid
from .massmap import (Chart, MassProfile, chart_from_mass, cosech_of_chart,
                      coth_of_chart, frame_equivalence_data, pullback_potential)
from .models import (AnalyticSpectrum, ConstraintResiduals, Generator,
                     PotentialFunction, PotentialModel, analytic_spectrum_eckart,
                     analytic_spectrum_ptpt, constraint_residuals, evaluate_model,
                     level_crossing_report, v_from_generator)
from .operators import (DiscreteOperator, discretize_dirac_reduced, discretize_eta,
                        discretize_pdem_x, discretize_schrodinger_q,
                        intertwining_residual, pt_residual, weighted_adjoint)
from .spectra import (CompareReport, Spectrum, classify_spectrum, eig_dense,
                      miss_scan, refine_shoot, spectrum_compare)
from .dirac import (DiracModel, DiracSolution, Spinor, dirac_residual,
                    solve_dirac_energy, theta_from_phi)

__version__ = "0.1.0"
