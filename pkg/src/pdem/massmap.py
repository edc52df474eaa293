"""Mass profiles M(x), the coordinate map q(x) with dq/dx = M, and pullbacks.

A strictly positive mass profile defines a monotone change of variable
q(x) = integral of M from the anchor x0, the auxiliary map f = exp(q), and
with it the pullback of any constant-mass potential V_eff(q) to the original
coordinate.  Useful hyperbolic substitutions under f = exp(q):

    cosech(q) = 2f / (f^2 - 1)        coth(q) = (f^2 + 1) / (f^2 - 1)

so pullbacks of cosech/coth potentials become rational functions of f.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .errors import DomainError, MonotonicityError
from .numerics import ComplexField, Grid, cumulative_integral, make_uniform_grid


@dataclass(frozen=True)
class MassProfile:
    """Positive mass function M(x) = m0 * m(x) on an open interval.

    kinds:
      constant      M(x) = m0
      rational_x2m1 M(x) = 2x / (x^2 - 1), positive on x > 1
                    (the mirror branch x < -1 is not modelled; see README)
      custom        arbitrary positive samples or callable
    """

    kind: str
    m0: float = 1.0
    domain: tuple = (-np.inf, np.inf)
    fn: Optional[Callable] = field(default=None, repr=False)

    @classmethod
    def constant(cls, m0: float = 1.0) -> "MassProfile":
        if m0 <= 0:
            raise DomainError(f"mass scale must be positive, got m0={m0}")
        return cls(kind="constant", m0=m0)

    @classmethod
    def rational_x2m1(cls) -> "MassProfile":
        return cls(kind="rational_x2m1", m0=1.0, domain=(1.0, np.inf))

    @classmethod
    def custom(cls, fn: Callable, domain=(-np.inf, np.inf), m0: float = 1.0) -> "MassProfile":
        return cls(kind="custom", m0=m0, domain=domain, fn=fn)

    def _check_grid(self, grid: Grid):
        lo, hi = self.domain
        if grid.a <= lo or grid.b >= hi:
            raise DomainError(
                f"grid [{grid.a}, {grid.b}] not inside open mass domain ({lo}, {hi})"
            )

    def mass_values(self, grid: Grid) -> np.ndarray:
        """Samples of M on the grid; raises DomainError if M <= 0 anywhere."""
        self._check_grid(grid)
        x = grid.points
        if self.kind == "constant":
            m = np.full(grid.n, self.m0)
        elif self.kind == "rational_x2m1":
            m = self.m0 * 2.0 * x / (x * x - 1.0)
        elif self.kind == "custom":
            m = self.m0 * np.asarray(self.fn(x), dtype=float)
        else:
            raise DomainError(f"unknown mass kind {self.kind!r}")
        if not np.all(np.isfinite(m)) or np.any(m <= 0.0):
            raise DomainError("mass profile must be finite and strictly positive on the grid")
        return m

    def mu_values(self, grid: Grid) -> np.ndarray:
        """mu = 1/M on the grid."""
        return 1.0 / self.mass_values(grid)

    def antiderivative(self, x):
        """Closed-form antiderivative of M where one exists, else None.

        Lets charts anchor at a point left of the grid (the numeric
        antiderivative only covers the grid itself).
        """
        if self.kind == "constant":
            return self.m0 * np.asarray(x, dtype=float)
        if self.kind == "rational_x2m1":
            x = np.asarray(x, dtype=float)
            return self.m0 * np.log(x * x - 1.0)
        return None


@dataclass(frozen=True)
class Chart:
    """Monotone coordinate map q(x) = int_{x0}^{x} M dz and f = exp(q)."""

    grid_x: Grid
    x0: float
    q_values: np.ndarray = field(repr=False)
    f_values: np.ndarray = field(repr=False)

    def q_window(self) -> tuple:
        return float(self.q_values[0]), float(self.q_values[-1])

    def invert(self, q: np.ndarray) -> np.ndarray:
        """x(q) by monotone linear interpolation."""
        return np.interp(q, self.q_values, self.grid_x.points)


def chart_from_mass(M: MassProfile, grid_x: Grid, x0: float) -> Chart:
    """Build the chart q, f from a mass profile, anchored at q(x0) = 0.

    The anchor may lie outside the grid when the mass has a closed-form
    antiderivative (the exact offset is added to the trapezoid integral);
    otherwise it must lie inside [a, b].
    """
    m = M.mass_values(grid_x)
    if grid_x.a <= x0 <= grid_x.b:
        q = cumulative_integral(ComplexField(grid_x, m.astype(complex)), x0).values.real
    else:
        Q = M.antiderivative(np.array([grid_x.a, x0]))
        if Q is None:
            raise DomainError(
                f"anchor x0={x0} outside grid and mass kind {M.kind!r} has no closed form"
            )
        lo, hi = M.domain
        if not (lo < x0 < hi):
            raise DomainError(f"anchor x0={x0} outside mass domain ({lo}, {hi})")
        base = cumulative_integral(ComplexField(grid_x, m.astype(complex)), grid_x.a)
        q = base.values.real + (Q[0] - Q[1])
    if np.any(np.diff(q) <= 0.0):
        raise MonotonicityError("q(x) is not strictly increasing on the grid")
    q = q.copy()
    f = np.exp(q)
    q.flags.writeable = False
    f.flags.writeable = False
    return Chart(grid_x=grid_x, x0=float(x0), q_values=q, f_values=f)


def pullback_potential(V_eff_q, chart: Chart) -> ComplexField:
    """Compose a q-frame potential with the chart: result[i] = V_eff(q(x_i)).

    V_eff_q is a callable of q (closed form, complex ok) or a ComplexField on
    a q-grid covering the chart's q-window (sampled case, interpolated
    linearly).  Raises DomainError if the composition hits a singularity.
    """
    q = chart.q_values
    if isinstance(V_eff_q, ComplexField):
        qa, qb = V_eff_q.grid.a, V_eff_q.grid.b
        if q[0] < qa or q[-1] > qb:
            raise DomainError(
                f"chart window [{q[0]:.6g}, {q[-1]:.6g}] outside sampled potential domain"
            )
        src = V_eff_q.grid.points
        vals = np.interp(q, src, V_eff_q.values.real) + 1j * np.interp(
            q, src, V_eff_q.values.imag
        )
    else:
        vals = np.asarray(V_eff_q(q), dtype=complex)
    if not np.all(np.isfinite(vals)):
        raise DomainError("pullback hit a singularity of the q-frame potential")
    return ComplexField(chart.grid_x, vals)


def cosech_of_chart(chart: Chart) -> np.ndarray:
    """cosech(q(x)) written through f: 2f/(f^2 - 1)."""
    f = chart.f_values
    return 2.0 * f / (f * f - 1.0)


def coth_of_chart(chart: Chart) -> np.ndarray:
    """coth(q(x)) written through f: (f^2 + 1)/(f^2 - 1)."""
    f = chart.f_values
    return (f * f + 1.0) / (f * f - 1.0)


def frame_equivalence_data(M: MassProfile, grid_x: Grid, x0: float, V_eff_q):
    """Uniform q-grid spanning [q(a), q(b)] with grid_x.n points, plus samples.

    Supports side-by-side spectral comparison of the variable-mass operator
    on grid_x against the constant-mass operator on the matched q-window.
    Returns (chart, q_grid, V_field_on_q_grid).
    """
    chart = chart_from_mass(M, grid_x, x0)
    qa, qb = chart.q_window()
    q_grid = make_uniform_grid(qa, qb, grid_x.n)
    if isinstance(V_eff_q, ComplexField):
        src = V_eff_q.grid.points
        vals = np.interp(q_grid.points, src, V_eff_q.values.real) + 1j * np.interp(
            q_grid.points, src, V_eff_q.values.imag
        )
    else:
        vals = np.asarray(V_eff_q(q_grid.points), dtype=complex)
    return chart, q_grid, ComplexField(q_grid, vals)
