"""Coupled first-order spinor system and its self-consistent energy search.

The two-component system (units hbar = c = 1, time-split off with e^{-i eps t})

    -i theta' + (eps - v) theta - M phi = 0
     i phi'   + (eps - v) phi   - M theta = 0

reduces, after eliminating theta, to a second-order equation for phi whose
effective potential itself contains eps; see
``operators.discretize_dirac_reduced``.  The energy is therefore found by an
outer root search on

    g(eps) = lambda_k(A(eps)) - eps^2

where lambda_k is the k-th lowest-real-part eigenvalue of the reduced
operator A(eps).  The returned triple (phi, theta, eps) is checked against
both first-order equations, closing the loop on the reduction.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import scipy.linalg as sla

from .errors import BracketError, ConvergenceError, DimensionError
from .massmap import MassProfile
from .numerics import ComplexField, Grid, central_derivative, make_uniform_grid
from .operators import discretize_dirac_reduced
from .spectra import _banded_from_dense, _inverse_iteration


@dataclass(frozen=True)
class DiracModel:
    """Time-component potential v(x) and a positive mass profile."""

    v: ComplexField
    M: MassProfile

    @property
    def grid(self) -> Grid:
        return self.v.grid


@dataclass(frozen=True)
class Spinor:
    """Two-component solution (phi upper, theta lower) at energy eps."""

    phi: ComplexField
    theta: ComplexField
    eps: float

    def __post_init__(self):
        if self.phi.grid != self.theta.grid:
            raise DimensionError("spinor components live on different grids")


def theta_from_phi(phi: ComplexField, model: DiracModel, eps: float) -> ComplexField:
    """Lower component from the upper one: theta = [i phi' + (eps - v) phi] / M."""
    if phi.grid != model.grid:
        raise DimensionError("phi grid does not match the model grid")
    dphi = central_derivative(phi).values
    mass = model.M.mass_values(model.grid)
    vals = (1j * dphi + (eps - model.v.values) * phi.values) / mass
    return ComplexField(model.grid, vals)


def dirac_residual(spinor: Spinor, model: DiracModel, trim: int = 2) -> float:
    """Residual of the remaining first-order equation.

    max interior |-i theta' + (eps - v) theta - M phi| normalized by
    max(||phi||_inf, ||theta||_inf); interior means `trim` points clipped at
    each end where the derivative stencil is one-sided.
    """
    if spinor.phi.grid != model.grid:
        raise DimensionError("spinor grid does not match the model grid")
    dtheta = central_derivative(spinor.theta).values
    mass = model.M.mass_values(model.grid)
    r = (-1j * dtheta + (spinor.eps - model.v.values) * spinor.theta.values
         - mass * spinor.phi.values)
    nrm = max(np.abs(spinor.phi.values).max(), np.abs(spinor.theta.values).max())
    return float(np.abs(r[trim:-trim]).max() / nrm)


def reverse_residual(spinor: Spinor, model: DiracModel, trim: int = 2) -> float:
    """Residual of the equation theta was built from (zero by construction)."""
    dphi = central_derivative(spinor.phi).values
    mass = model.M.mass_values(model.grid)
    r = (1j * dphi + (spinor.eps - model.v.values) * spinor.phi.values
         - mass * spinor.theta.values)
    nrm = max(np.abs(spinor.phi.values).max(), np.abs(spinor.theta.values).max())
    return float(np.abs(r[trim:-trim]).max() / nrm)


@dataclass(frozen=True)
class DiracSolution:
    eps: float
    spinor: Spinor
    residual_coupled: float      # first-order equation not used to build theta
    residual_construction: float  # the defining equation, zero by construction
    g_value: float
    iterations: int
    level_index: int


def _reduced_interior(model: DiracModel, eps: float) -> np.ndarray:
    return discretize_dirac_reduced(model.M, model.v, eps).interior()


def _resample(model: DiracModel, n: int) -> DiracModel:
    g = model.grid
    gc = make_uniform_grid(g.a, g.b, n)
    vr = np.interp(gc.points, g.points, model.v.values.real)
    vi = np.interp(gc.points, g.points, model.v.values.imag)
    return DiracModel(v=ComplexField(gc, vr + 1j * vi), M=model.M)


class _LevelTracker:
    """k-th lowest-real-part eigenvalue of A(eps), cheap along an eps path.

    A dense solve on a coarse resampling locates the level; on the working
    grid the eigenpair is then followed by banded inverse iteration, with
    the previous eigenvalue as the shift.
    """

    def __init__(self, model: DiracModel, level_index: int, coarse_n: int = 401):
        self.model = model
        self.k = level_index
        self.coarse = _resample(model, coarse_n) if model.grid.n > coarse_n else model
        self.shift = None

    def _coarse_level(self, eps: float) -> complex:
        a = _reduced_interior(self.coarse, eps)
        lams = sla.eigvals(a)
        order = np.argsort(lams.real)
        return complex(lams[order[self.k]])

    def eigenpair(self, eps: float):
        if self.shift is None:
            self.shift = self._coarse_level(eps)
        a = _reduced_interior(self.model, eps)
        ab = _banded_from_dense(a, bw=1)
        lam = self.shift
        v = None
        for _ in range(6):
            v = _inverse_iteration(a, lam, ab=ab, bw=1, sweeps=2)
            av = a @ v
            lam_new = np.vdot(v, av) / np.vdot(v, v)
            if abs(lam_new - lam) < 1e-12 * max(1.0, abs(lam_new)):
                lam = lam_new
                break
            lam = lam_new
        self.shift = lam
        return complex(lam), v


def solve_dirac_energy(model: DiracModel, level_index: int, eps_bracket,
                       tol_scale: float = 1e-8, max_iter: int = 60) -> DiracSolution:
    """Self-consistent energy for one level of the reduced spinor problem.

    Secant iteration (with bisection safeguard) on
    g(eps) = Re lambda_k(A(eps)) - eps^2 over real eps.  The bracket must
    produce a sign change of g, otherwise BracketError.  On success returns
    the energy, the spinor (phi by inverse iteration, normalized to unit
    max-norm; theta from the first-order relation), and both first-order
    residuals.
    """
    lo, hi = float(eps_bracket[0]), float(eps_bracket[1])
    if not lo < hi:
        raise BracketError(f"empty bracket ({lo}, {hi})")
    tracker = _LevelTracker(model, level_index)

    def g(eps):
        lam, vec = tracker.eigenpair(eps)
        return lam.real - eps * eps, vec

    g_lo, _ = g(lo)
    g_hi, _ = g(hi)
    if np.sign(g_lo) == np.sign(g_hi):
        raise BracketError(
            f"g(eps) has no sign change on [{lo}, {hi}]: g={g_lo:.3e}, {g_hi:.3e}"
        )
    e0, f0 = lo, g_lo
    e1, f1 = hi, g_hi
    eps, g_val, vec = e1, f1, None
    for it in range(1, max_iter + 1):
        # secant step, bisected back into the bracket when it escapes
        denom = f1 - f0
        e2 = e1 - f1 * (e1 - e0) / denom if denom != 0 else 0.5 * (lo + hi)
        if not (lo < e2 < hi):
            e2 = 0.5 * (lo + hi)
        f2, vec = g(e2)
        if np.sign(f2) == np.sign(g_lo):
            lo = e2
        else:
            hi = e2
        e0, f0 = e1, f1
        e1, f1 = e2, f2
        eps, g_val = e2, f2
        if abs(g_val) < tol_scale * max(1.0, eps * eps):
            break
    else:
        raise ConvergenceError(
            f"energy iteration did not converge in {max_iter} steps (|g|={abs(g_val):.3e})"
        )
    phi_vals = np.zeros(model.grid.n, dtype=complex)
    phi_vals[1:-1] = vec
    phi_vals /= np.abs(phi_vals).max()
    phi = ComplexField(model.grid, phi_vals)
    theta = theta_from_phi(phi, model, eps)
    spinor = Spinor(phi=phi, theta=theta, eps=float(eps))
    return DiracSolution(
        eps=float(eps),
        spinor=spinor,
        residual_coupled=dirac_residual(spinor, model),
        residual_construction=reverse_residual(spinor, model),
        g_value=float(g_val),
        iterations=it,
        level_index=level_index,
    )
