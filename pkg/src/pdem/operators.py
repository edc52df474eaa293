"""Discrete differential operators, weighted adjoints, and residual diagnostics.

All operators are banded complex matrices (bandwidth <= 2) over a uniform
grid.  Second-derivative operators carry Dirichlet boundary data as identity
first/last rows, which the eigensolver strips before computing spectra.
First-order operators are represented with the same one-sided endpoint
stencils as the field-level derivative, so applying the matrix to sampled
values reproduces the field calculus.

The adjoint is taken in a weighted inner product
<phi, psi> = sum_i w_i conj(phi_i) psi_i h.  For variable mass the weight
w = M(x) (the measure that makes the change of variables to the
constant-mass frame an isometry); for constant mass it reduces to the plain
conjugate transpose.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from .errors import DimensionError, DomainError
from .massmap import MassProfile
from .numerics import ComplexField, Grid, central_derivative


@dataclass(frozen=True)
class DiscreteOperator:
    """Banded complex matrix with grid, inner-product weight, and bc tag."""

    matrix: sp.csr_matrix = field(repr=False)
    grid: Grid
    weight: np.ndarray = field(repr=False)
    bc: str = "dirichlet"

    def __post_init__(self):
        if self.matrix.shape != (self.grid.n, self.grid.n):
            raise DimensionError("matrix dimension does not match grid")
        w = np.asarray(self.weight, dtype=float)
        if w.shape != (self.grid.n,) or np.any(w <= 0):
            raise DimensionError("weight must be a positive sequence of length grid.n")
        object.__setattr__(self, "weight", w)

    def interior(self) -> np.ndarray:
        """Dense interior block with Dirichlet identity rows stripped."""
        if self.bc == "dirichlet":
            return self.matrix[1:-1, 1:-1].toarray()
        return self.matrix.toarray()

    def dense(self) -> np.ndarray:
        return self.matrix.toarray()


def _d1_matrix(grid: Grid) -> sp.csr_matrix:
    """Matrix form of the second-order first derivative (one-sided ends)."""
    n, h = grid.n, grid.h
    m = sp.lil_matrix((n, n))
    i = np.arange(1, n - 1)
    m[i, i - 1] = -1.0 / (2 * h)
    m[i, i + 1] = 1.0 / (2 * h)
    m[0, 0:3] = np.array([-3.0, 4.0, -1.0]) / (2 * h)
    m[n - 1, n - 3:n] = np.array([1.0, -4.0, 3.0]) / (2 * h)
    return m.tocsr().astype(complex)


def _second_order_rows(grid: Grid, mu2: np.ndarray, mumup: np.ndarray,
                       diag: np.ndarray) -> sp.csr_matrix:
    """Rows applying -mu2*D2 + mumup*D1 + diag, identity at the endpoints."""
    n, h = grid.n, grid.h
    main = np.ones(n, dtype=complex)
    lower = np.zeros(n - 1, dtype=complex)
    upper = np.zeros(n - 1, dtype=complex)
    i = np.arange(1, n - 1)
    main[i] = 2.0 * mu2[i] / h ** 2 + diag[i]
    lower[i - 1] = -mu2[i] / h ** 2 - mumup[i] / (2 * h)
    upper[i] = -mu2[i] / h ** 2 + mumup[i] / (2 * h)
    return sp.diags([lower, main, upper], [-1, 0, 1]).tocsr()


def discretize_schrodinger_q(V: ComplexField, bc: str = "dirichlet") -> DiscreteOperator:
    """Constant-mass operator -d^2/dq^2 + V(q) on the field's uniform grid.

    Tridiagonal with diagonal 2/h^2 + V_i and off-diagonals -1/h^2;
    unit weight.
    """
    g = V.grid
    ones = np.ones(g.n)
    mat = _second_order_rows(g, ones, np.zeros(g.n), V.values)
    return DiscreteOperator(matrix=mat, grid=g, weight=ones, bc=bc)


def discretize_pdem_x(M: MassProfile, V: ComplexField, bc: str = "dirichlet") -> DiscreteOperator:
    """Variable-mass operator -mu^2 d^2/dx^2 - mu mu' d/dx + V(x).

    mu = 1/M sampled on the grid, mu' by the second-order difference.  The
    inner-product weight is M(x), the measure under which this operator is
    the pullback of the constant-mass form.
    """
    g = V.grid
    mass = M.mass_values(g)
    mu = 1.0 / mass
    mup = central_derivative(ComplexField(g, mu.astype(complex))).values.real
    mat = _second_order_rows(g, mu * mu, -mu * mup, V.values)
    return DiscreteOperator(matrix=mat, grid=g, weight=mass, bc=bc)


def discretize_dirac_reduced(M: MassProfile, v: ComplexField, eps: float,
                             bc: str = "dirichlet") -> DiscreteOperator:
    """Second-order reduction of the coupled first-order spinor system.

    Applies  -d^2/dx^2 + (M'/M) d/dx
             + [2 eps v - v^2 - i v' - i (M'/M)(eps - v) + M^2]
    with the squared energy eps^2 as the eigenvalue target.  v' and M' use
    the second-order difference.
    """
    g = v.grid
    mass = M.mass_values(g)
    mp = central_derivative(ComplexField(g, mass.astype(complex))).values.real
    ratio = mp / mass
    vp = central_derivative(v).values
    vv = v.values
    diag = 2.0 * eps * vv - vv * vv - 1j * vp - 1j * ratio * (eps - vv) + mass * mass
    ones = np.ones(g.n)
    mat = _second_order_rows(g, ones, ratio.astype(complex), diag)
    return DiscreteOperator(matrix=mat, grid=g, weight=ones, bc=bc)


def discretize_eta(F: ComplexField, M: MassProfile, which: int = 2) -> DiscreteOperator:
    """First-order intertwiners.

    which=2:  eta2 = mu(x) d/dx + i F(x)
    which=1:  eta1 = -i * eta2 (exact entrywise proportionality)

    Weight is M(x), matching the adjoint convention of the second-order
    operators they intertwine.
    """
    if which not in (1, 2):
        raise DomainError("which must be 1 or 2")
    g = F.grid
    mass = M.mass_values(g)
    mu = 1.0 / mass
    mat = sp.diags(mu.astype(complex)) @ _d1_matrix(g) + 1j * sp.diags(F.values)
    mat = mat.tocsr()
    if which == 1:
        mat = (-1j * mat).tocsr()
    return DiscreteOperator(matrix=mat, grid=g, weight=mass, bc="dirichlet")


def weighted_adjoint(op: DiscreteOperator) -> DiscreteOperator:
    """W^{-1} A^* W with A^* the conjugate transpose and W = diag(weight).

    Reduces to the plain conjugate transpose for unit weight.  An involution:
    applying it twice returns the original operator (to rounding).
    """
    w = op.weight
    adj = sp.diags(1.0 / w) @ op.matrix.conj().T @ sp.diags(w)
    return DiscreteOperator(matrix=adj.tocsr(), grid=op.grid, weight=w, bc=op.bc)


def intertwining_residual(H: DiscreteOperator, eta: DiscreteOperator,
                          trim: int = 2, norm: str = "fro") -> float:
    """Relative residual of the operator identity eta H = adjoint(H) eta.

    Forms eta @ H - adjoint(H) @ eta, trims `trim` rows and columns at each
    end (one-sided endpoint stencils break the interior algebra), and
    returns ||residual|| / ||eta @ H|| over that interior block.

    norm: "fro" (default, the calibrated diagnostic), "max" (largest entry),
    or "inf" (induced infinity norm).
    """
    if H.grid != eta.grid:
        raise DimensionError("operator and intertwiner live on different grids")
    if not np.allclose(H.weight, eta.weight):
        raise DimensionError("operator and intertwiner carry different weights")
    if trim < 2:
        raise DomainError("trim must be at least 2")
    P = (eta.matrix @ H.matrix).tocsr()
    R = (P - weighted_adjoint(H).matrix @ eta.matrix).tocsr()
    n = H.grid.n
    sl = slice(trim, n - trim)
    Rb = R[sl, sl]
    Pb = P[sl, sl]
    if norm == "fro":
        num = spla.norm(Rb)
        den = spla.norm(Pb)
    elif norm == "max":
        num = np.abs(Rb.toarray()).max()
        den = np.abs(Pb.toarray()).max()
    elif norm == "inf":
        num = np.abs(Rb).sum(axis=1).max()
        den = np.abs(Pb).sum(axis=1).max()
    else:
        raise DomainError(f"unknown norm {norm!r}")
    if den == 0.0:
        return 0.0 if num == 0.0 else np.inf
    return float(num / den)


def pt_residual(V: ComplexField) -> float:
    """Deviation from the parity-conjugation symmetry V(x) = conj(V(-x)).

    Uses the grid's own mirrored samples, max_i |V_i - conj(V_{n-1-i})|.
    Requires a symmetric grid (a = -b).
    """
    if not V.grid.symmetric:
        raise DomainError("parity check needs a symmetric grid (a = -b)")
    v = V.values
    return float(np.abs(v - np.conj(v[::-1])).max())
