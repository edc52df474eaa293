"""Generator families, generator-to-potential maps, named potentials, analytic spectra.

Two conventions turn a first-order generator F into a potential:

    pseudo      V(q) = -F(q)^2 - i F'(q) + alpha0
    hermitian   V(q) = F(q)^2 - F'(q) + alpha0      (superpotential form)

The pseudo convention pairs with the first-order intertwiners in
``operators``; the hermitian convention reproduces the shape-invariant
Eckart potential from F = -A coth(q) + B/A.

Named potentials are evaluated on real grids; the hyperbolic families avoid
their real-axis pole through the complex shift T = x - c - i*gamma with
gamma in (0, pi), which keeps |cosech(T)| <= 1/sin(gamma).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .errors import DomainError
from .massmap import MassProfile
from .numerics import ComplexField, Grid, central_derivative


def _cosech(z):
    return 1.0 / np.sinh(z)


def _coth(z):
    return np.cosh(z) / np.sinh(z)


@dataclass(frozen=True)
class Generator:
    """First-order generator F(q) with an additive constant alpha0.

    kinds:
      cosech      F(q) = V2 cosech(q), V2 != 0
      coth_shift  F(q) = -A coth(q) + B/A, with A > 0 and B > A^2
      custom      user-supplied (F, F') callables
    """

    kind: str
    alpha0: float = 0.0
    V2: float = 0.0
    A: float = 0.0
    B: float = 0.0
    fn: Optional[Callable] = field(default=None, repr=False)
    dfn: Optional[Callable] = field(default=None, repr=False)

    @classmethod
    def cosech(cls, V2: float, alpha0: float = 0.0) -> "Generator":
        if V2 == 0:
            raise DomainError("cosech generator needs V2 != 0")
        return cls(kind="cosech", V2=float(V2), alpha0=float(alpha0))

    @classmethod
    def coth_shift(cls, A: float, B: float, alpha0: float = 0.0) -> "Generator":
        if A <= 0:
            raise DomainError(f"coth_shift generator needs A > 0, got A={A}")
        if B <= A * A:
            raise DomainError(f"coth_shift generator needs B > A^2, got A={A}, B={B}")
        return cls(kind="coth_shift", A=float(A), B=float(B), alpha0=float(alpha0))

    @classmethod
    def custom(cls, fn: Callable, dfn: Callable, alpha0: float = 0.0) -> "Generator":
        return cls(kind="custom", fn=fn, dfn=dfn, alpha0=float(alpha0))

    @classmethod
    def null(cls, alpha0: float = 0.0) -> "Generator":
        return cls.custom(lambda q: np.zeros_like(np.asarray(q, dtype=complex)),
                          lambda q: np.zeros_like(np.asarray(q, dtype=complex)),
                          alpha0=alpha0)

    def F(self, q):
        q = np.asarray(q, dtype=complex)
        if self.kind == "cosech":
            return self.V2 * _cosech(q)
        if self.kind == "coth_shift":
            return -self.A * _coth(q) + self.B / self.A
        return np.asarray(self.fn(q), dtype=complex)

    def dF(self, q):
        """dF/dq in closed form (cosech' = -cosech coth, coth' = -cosech^2)."""
        q = np.asarray(q, dtype=complex)
        if self.kind == "cosech":
            return -self.V2 * _cosech(q) * _coth(q)
        if self.kind == "coth_shift":
            return self.A * _cosech(q) ** 2
        return np.asarray(self.dfn(q), dtype=complex)


class PotentialFunction:
    """Closed-form potential in q; the constant alpha0 is added last.

    Adding alpha0 as the final operation makes the shift law
    V(alpha0=a) = V(alpha0=0) + a hold bitwise, which the operator tests
    rely on.
    """

    def __init__(self, base: Callable, alpha0: float = 0.0, label: str = ""):
        self._base = base
        self.alpha0 = float(alpha0)
        self.label = label

    def __call__(self, q):
        return self._base(q) + self.alpha0

    def with_alpha0(self, alpha0: float) -> "PotentialFunction":
        return PotentialFunction(self._base, alpha0=alpha0, label=self.label)


def v_from_generator(gen: Generator, convention: str) -> PotentialFunction:
    """Potential generated by F under the chosen convention (see module doc)."""
    if convention == "pseudo":
        def base(q):
            Fq = gen.F(q)
            return -Fq * Fq - 1j * gen.dF(q)
    elif convention == "hermitian":
        def base(q):
            Fq = gen.F(q)
            return Fq * Fq - gen.dF(q)
    else:
        raise DomainError(f"unknown convention {convention!r} (pseudo|hermitian)")
    return PotentialFunction(base, alpha0=gen.alpha0, label=f"{gen.kind}:{convention}")


@dataclass(frozen=True)
class ConstraintResiduals:
    """Max-norm residuals of the generator constraint identities.

    algebraic: |2i W mu + 2i mu^2 F'| with W := -mu F'; zero by construction,
        reported as a sanity check on the assembly.
    chain_rule: finite-difference consistency of
        -i mu^2 F'' - i mu mu' F' = i mu W', measured on the interior
        (two-point margins trimmed); O(h^2) for smooth data.
    """

    algebraic: float
    chain_rule: float


def constraint_residuals(gen: Generator, M: MassProfile, grid: Grid) -> ConstraintResiduals:
    mu = M.mu_values(grid)
    F = ComplexField(grid, gen.F(grid.points.astype(complex)))
    dF = central_derivative(F).values
    W = -mu * dF
    algebraic = float(np.abs(2j * mu * (W + mu * dF)).max())
    mup = central_derivative(ComplexField(grid, mu.astype(complex))).values
    d2F = central_derivative(ComplexField(grid, dF)).values
    dW = central_derivative(ComplexField(grid, W)).values
    lhs = -1j * mu * mu * d2F - 1j * mu * mup * dF
    rhs = 1j * mu * dW
    chain = float(np.abs(lhs[2:-2] - rhs[2:-2]).max())
    return ConstraintResiduals(algebraic=algebraic, chain_rule=chain)


@dataclass(frozen=True)
class PotentialModel:
    """Named potential with parameters, evaluable on a real grid.

    kinds:
      pt_poschl_teller  V1 cosech^2(aT) - V2 cosech(aT) coth(aT), T = x-c-i*gamma
                        (V1 > -1/4, V2 != 0, gamma in (0, pi))
      pseudo_pt         -V2^2 cosech^2(T) + i V2 cosech(T) coth(T), T = x-i*gamma;
                        the generator-built family with V1 = -V2^2
      eckart_hermitian  A^2 + B^2/A^2 + A(A-1) cosech^2(q) - 2B coth(q), q > 0
      eckart_complex    same with the complex coefficient A(A-i) on cosech^2
    """

    kind: str
    V1: float = 0.0
    V2: float = 0.0
    alpha: float = 1.0
    c: float = 0.0
    gamma: float = 0.4
    A: float = 0.0
    B: float = 0.0
    alpha0: float = 0.0

    @classmethod
    def pt_poschl_teller(cls, V1, V2, alpha=1.0, c=0.0, gamma=0.4) -> "PotentialModel":
        if V1 <= -0.25:
            raise DomainError(f"pt_poschl_teller needs V1 > -1/4, got {V1}")
        if V2 == 0:
            raise DomainError("pt_poschl_teller needs V2 != 0")
        _check_gamma(gamma)
        return cls(kind="pt_poschl_teller", V1=float(V1), V2=float(V2),
                   alpha=float(alpha), c=float(c), gamma=float(gamma))

    @classmethod
    def pseudo_pt(cls, V2, gamma=0.4, alpha0=0.0) -> "PotentialModel":
        if V2 == 0:
            raise DomainError("pseudo_pt needs V2 != 0")
        _check_gamma(gamma)
        return cls(kind="pseudo_pt", V2=float(V2), gamma=float(gamma), alpha0=float(alpha0))

    @classmethod
    def eckart_hermitian(cls, A, B) -> "PotentialModel":
        if A <= 0 or B <= A * A:
            raise DomainError(f"eckart needs A > 0 and B > A^2, got A={A}, B={B}")
        return cls(kind="eckart_hermitian", A=float(A), B=float(B))

    @classmethod
    def eckart_complex(cls, A, B) -> "PotentialModel":
        if A <= 0 or B <= A * A:
            raise DomainError(f"eckart needs A > 0 and B > A^2, got A={A}, B={B}")
        return cls(kind="eckart_complex", A=float(A), B=float(B))

    def potential(self) -> PotentialFunction:
        """Closed-form potential as a callable of the real grid coordinate."""
        if self.kind == "pt_poschl_teller":
            V1, V2, a, c, g = self.V1, self.V2, self.alpha, self.c, self.gamma

            def base(x):
                T = a * (np.asarray(x, dtype=complex) - c - 1j * g)
                cs = _cosech(T)
                return V1 * cs * cs - V2 * cs * _coth(T)
        elif self.kind == "pseudo_pt":
            V2, g = self.V2, self.gamma

            def base(x):
                T = np.asarray(x, dtype=complex) - 1j * g
                cs = _cosech(T)
                return -V2 * V2 * cs * cs + 1j * V2 * cs * _coth(T)
        elif self.kind == "eckart_hermitian":
            A, B = self.A, self.B

            def base(q):
                q = np.asarray(q, dtype=complex)
                cs = _cosech(q)
                return A * A + B * B / (A * A) + A * (A - 1.0) * cs * cs - 2.0 * B * _coth(q)
        elif self.kind == "eckart_complex":
            A, B = self.A, self.B

            def base(q):
                q = np.asarray(q, dtype=complex)
                cs = _cosech(q)
                return A * A + B * B / (A * A) + A * (A - 1j) * cs * cs - 2.0 * B * _coth(q)
        else:
            raise DomainError(f"unknown model kind {self.kind!r}")
        return PotentialFunction(base, alpha0=self.alpha0, label=self.kind)

    def natural_domain(self) -> tuple:
        """Open interval on which the potential is regular (real coordinate)."""
        if self.kind in ("eckart_hermitian", "eckart_complex"):
            return (0.0, np.inf)
        return (-np.inf, np.inf)

    def threshold(self) -> float:
        """Continuum edge: limiting potential value far from the well."""
        if self.kind in ("eckart_hermitian", "eckart_complex"):
            return self.A ** 2 + self.B ** 2 / self.A ** 2 - 2.0 * self.B
        return 0.0


def _check_gamma(gamma):
    if not (0.0 < gamma < np.pi):
        raise DomainError(f"contour shift gamma must lie in (0, pi), got {gamma}")


def evaluate_model(model: PotentialModel, grid: Grid) -> ComplexField:
    """Sample a named potential on a grid, rejecting singular grids."""
    lo, hi = model.natural_domain()
    if grid.a <= lo or grid.b >= hi:
        raise DomainError(
            f"grid [{grid.a}, {grid.b}] outside the model's regular domain ({lo}, {hi})"
        )
    vals = model.potential()(grid.points)
    if not np.all(np.isfinite(vals)):
        raise DomainError("potential is singular on the grid")
    return ComplexField(grid, vals)


@dataclass(frozen=True)
class AnalyticSpectrum:
    """Closed-form bound levels, sorted ascending, with the continuum edge."""

    levels: tuple          # of (n, quasi_parity or None, E)
    threshold: float
    n_max: Optional[int] = None

    @property
    def energies(self) -> np.ndarray:
        return np.array([e for (_, _, e) in self.levels], dtype=float)


def analytic_spectrum_ptpt(V2: float) -> AnalyticSpectrum:
    """Single-tower levels E_n = -(|V2| - n - 1/2)^2 for 0 <= n < |V2| - 1/2.

    Empty when |V2| <= 1/2; threshold 0.  The overall sign is the
    numerically confirmed one: levels lie below the continuum edge.
    """
    if V2 == 0:
        raise DomainError("V2 must be nonzero")
    a = abs(V2)
    levels = []
    n = 0
    while n < a - 0.5:
        levels.append((n, +1, -((a - n - 0.5) ** 2)))
        n += 1
    levels.sort(key=lambda t: t[2])
    return AnalyticSpectrum(levels=tuple(levels), threshold=0.0,
                            n_max=len(levels) - 1 if levels else None)


def analytic_spectrum_eckart(A: float, B: float, variant: str = "standard") -> AnalyticSpectrum:
    """Eckart bound levels for A > 0, B > A^2.

    standard:   E_n = A^2 - (A+n)^2 + B^2/A^2 - B^2/(A+n)^2, for A + n < sqrt(B);
                ground level exactly 0, threshold A^2 + B^2/A^2 - 2B.
    as_printed: a transcription variant kept for discrepancy reporting only,
                E_n = (A+n)^2 - A^2 + B^2/A^2 - B^2 (A-n)^2 over the same n
                range; it disagrees with the eigensolver and is never used
                for comparisons that gate results.
    """
    if A <= 0 or B <= A * A:
        raise DomainError(f"need A > 0 and B > A^2, got A={A}, B={B}")
    levels = []
    n = 0
    while A + n < np.sqrt(B):
        if variant == "standard":
            E = A * A - (A + n) ** 2 + B * B / (A * A) - B * B / (A + n) ** 2
        elif variant == "as_printed":
            E = (A + n) ** 2 - A * A + B * B / (A * A) - B * B * (A - n) ** 2
        else:
            raise DomainError(f"unknown variant {variant!r} (standard|as_printed)")
        levels.append((n, None, float(E)))
        n += 1
    levels.sort(key=lambda t: t[2])
    threshold = A * A + B * B / (A * A) - 2.0 * B
    return AnalyticSpectrum(levels=tuple(levels), threshold=float(threshold),
                            n_max=len(levels) - 1 if levels else None)


def level_crossing_report(V2_values) -> list:
    """Bound-level count per V2: number of integers n with n < |V2| - 1/2.

    Counts step up exactly at half-integer offsets |V2| in {1/2, 3/2, ...}.
    Returns a list of (V2, count, energies tuple).
    """
    rows = []
    for v2 in V2_values:
        if v2 <= 0:
            raise DomainError(f"V2 values must be positive, got {v2}")
        spec = analytic_spectrum_ptpt(v2)
        rows.append((float(v2), len(spec.levels), tuple(spec.energies)))
    return rows
