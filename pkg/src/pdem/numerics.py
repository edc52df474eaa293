"""Uniform grids, sampled complex fields, and second-order finite-difference calculus.

Everything downstream (operators, charts, spectra) works on a uniform grid
with second-order stencils: central differences inside, one-sided
second-order stencils at the two endpoints, and the trapezoid rule for
antiderivatives.  Fourth-order schemes are deliberately out of scope so that
all discrete operators stay tridiagonal.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError


@dataclass(frozen=True)
class Grid:
    """Uniform 1D grid on [a, b] with n points and spacing h = (b-a)/(n-1)."""

    a: float
    b: float
    n: int
    h: float
    points: np.ndarray = field(repr=False)

    @property
    def symmetric(self) -> bool:
        """True when the grid is centered on the origin (a == -b)."""
        return self.a == -self.b

    def __eq__(self, other) -> bool:
        if not isinstance(other, Grid):
            return NotImplemented
        return self.a == other.a and self.b == other.b and self.n == other.n


def make_uniform_grid(a: float, b: float, n: int) -> Grid:
    """Evenly spaced grid with points[0] = a and points[n-1] = b.

    Raises DomainError unless a < b and n >= 3.
    """
    a, b, n = float(a), float(b), int(n)
    if not a < b:
        raise DomainError(f"degenerate interval: a={a} must be < b={b}")
    if n < 3:
        raise DomainError(f"need at least 3 points, got n={n}")
    pts = np.linspace(a, b, n)
    pts.flags.writeable = False
    return Grid(a=a, b=b, n=n, h=(b - a) / (n - 1), points=pts)


@dataclass(frozen=True)
class ComplexField:
    """Complex-valued samples, one per grid point."""

    grid: Grid
    values: np.ndarray = field(repr=False)

    def __post_init__(self):
        v = np.array(self.values, dtype=complex)
        if v.shape != (self.grid.n,):
            raise DomainError(
                f"field has {v.shape} values for a grid of {self.grid.n} points"
            )
        if not np.all(np.isfinite(v)):
            raise DomainError("field contains non-finite samples (singular point on grid?)")
        v.flags.writeable = False
        object.__setattr__(self, "values", v)

    @classmethod
    def from_callable(cls, grid: Grid, fn) -> "ComplexField":
        return cls(grid, np.asarray(fn(grid.points), dtype=complex))

    def __add__(self, other):
        if isinstance(other, ComplexField):
            _require_same_grid(self, other)
            return ComplexField(self.grid, self.values + other.values)
        return ComplexField(self.grid, self.values + other)

    __radd__ = __add__

    def __mul__(self, scalar):
        return ComplexField(self.grid, self.values * scalar)

    __rmul__ = __mul__


def _require_same_grid(f: ComplexField, g: ComplexField):
    if f.grid != g.grid:
        raise DomainError("fields live on different grids")


def central_derivative(f: ComplexField) -> ComplexField:
    """d/dx by second-order differences.

    Central stencil (f[i+1] - f[i-1]) / 2h at interior points; one-sided
    second-order stencils at the two endpoints.  Exact for polynomials up to
    degree two.
    """
    v = f.values
    h = f.grid.h
    d = np.empty_like(v)
    d[1:-1] = (v[2:] - v[:-2]) / (2.0 * h)
    d[0] = (-3.0 * v[0] + 4.0 * v[1] - v[2]) / (2.0 * h)
    d[-1] = (3.0 * v[-1] - 4.0 * v[-2] + v[-3]) / (2.0 * h)
    return ComplexField(f.grid, d)


def cumulative_integral(f: ComplexField, x0: float) -> ComplexField:
    """Trapezoid-rule antiderivative F of f with F(x0) = 0.

    x0 must lie inside [a, b]; when it falls between nodes the anchor value
    is obtained by linear interpolation, so F(x0) = 0 holds exactly in that
    interpolated sense.  Exact for affine integrands.
    """
    g = f.grid
    if not (g.a <= x0 <= g.b):
        raise DomainError(f"anchor x0={x0} outside grid [{g.a}, {g.b}]")
    v = f.values
    cum = np.empty(g.n, dtype=complex)
    cum[0] = 0.0
    np.cumsum(0.5 * g.h * (v[1:] + v[:-1]), out=cum[1:])
    # anchor by linear interpolation between the bracketing nodes
    at_x0 = np.interp(x0, g.points, cum.real) + 1j * np.interp(x0, g.points, cum.imag)
    return ComplexField(g, cum - at_x0)
