"""Complex eigensolution, shooting refinement, classification, and comparison.

Two independent routes to eigenvalues:

  * eig_dense: full spectrum of the (interior) matrix through the standard
    dense path (balancing, unitary Hessenberg reduction, implicitly shifted
    QR with deflation), with a backward-error estimate per eigenvalue from
    banded inverse iteration.
  * refine_shoot: per-level refinement of a closed-form potential by
    two-sided integration of the ODE with matching inside the potential
    well, Newton (with a bracketing fallback on the real axis) in the
    complex energy.

The two agree on genuine bound states and disagree loudly on grid or
truncation artifacts, which is exactly what the verification reports exploit.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Optional, Sequence

import numpy as np
import scipy.linalg as sla

from .errors import BasinError, BracketError, ConvergenceError, DomainError
from .models import AnalyticSpectrum
from .operators import DiscreteOperator

DEFAULT_DIM_CAP = 2000


@dataclass(frozen=True)
class Spectrum:
    """Eigenvalues with residuals and (after classification) a partition."""

    eigenvalues: np.ndarray = field(repr=False)
    residual_norms: np.ndarray = field(repr=False)
    threshold: float = np.inf
    im_tol: float = 0.0
    real_levels: tuple = ()
    complex_pairs: tuple = ()

    @property
    def n(self) -> int:
        return len(self.eigenvalues)


def _interior_dense(op) -> np.ndarray:
    if isinstance(op, DiscreteOperator):
        return op.interior()
    return np.asarray(op, dtype=complex)


def _banded_from_dense(a: np.ndarray, bw: int = 2):
    """(2bw+1, n) banded storage for scipy.linalg.solve_banded."""
    n = a.shape[0]
    ab = np.zeros((2 * bw + 1, n), dtype=complex)
    for k in range(-bw, bw + 1):
        d = np.diagonal(a, k)
        if k >= 0:
            ab[bw - k, k:k + len(d)] = d
        else:
            ab[bw - k, :len(d)] = d
    return ab


def _inverse_iteration(a: np.ndarray, lam: complex, ab=None, bw: int = 2, sweeps: int = 3):
    """Eigenvector estimate for the eigenvalue nearest lam; deterministic start."""
    n = a.shape[0]
    if ab is None:
        ab = _banded_from_dense(a, bw)
    shift = lam + (abs(lam) + 1.0) * 1e-13
    abs_ = ab.copy()
    abs_[bw, :] -= shift
    rng = np.random.default_rng(12345)
    v = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    v /= np.linalg.norm(v)
    for _ in range(sweeps):
        try:
            v = sla.solve_banded((bw, bw), abs_, v)
        except np.linalg.LinAlgError:
            abs_[bw, :] -= (abs(lam) + 1.0) * 1e-11
            v = sla.solve_banded((bw, bw), abs_, v)
        nv = np.linalg.norm(v)
        if not np.isfinite(nv) or nv == 0.0:
            v = rng.standard_normal(n) + 1j * rng.standard_normal(n)
            nv = np.linalg.norm(v)
        v /= nv
    return v


def eig_dense(op, dim_cap: int = DEFAULT_DIM_CAP) -> Spectrum:
    """All eigenvalues of the interior block, with backward-error estimates.

    Eigenvalues come from the dense QR path; for each one an eigenvector is
    recovered by banded inverse iteration and the residual
    ||A psi - lambda psi|| / ||psi|| recorded.  Boundary identity rows are
    excluded before solving, so Dirichlet assembly never contributes
    spurious unit eigenvalues.
    """
    a = _interior_dense(op)
    n = a.shape[0]
    if n > dim_cap:
        raise DomainError(f"interior dimension {n} exceeds the configured cap {dim_cap}")
    try:
        lams = sla.eigvals(a)
    except np.linalg.LinAlgError as exc:  # QR sweep budget exhausted
        raise ConvergenceError(f"dense eigensolution did not converge: {exc}") from exc
    order = np.lexsort((lams.imag, lams.real))
    lams = lams[order]
    res = np.empty(n)
    if n <= 3:
        w, vecs = np.linalg.eig(a)
        for i, lam in enumerate(lams):
            j = int(np.argmin(np.abs(w - lam)))
            v = vecs[:, j]
            res[i] = np.linalg.norm(a @ v - lam * v) / np.linalg.norm(v)
    else:
        ab = _banded_from_dense(a)
        for i, lam in enumerate(lams):
            v = _inverse_iteration(a, lam, ab=ab)
            res[i] = np.linalg.norm(a @ v - lam * v) / np.linalg.norm(v)
    return Spectrum(eigenvalues=lams, residual_norms=res)


def classify_spectrum(raw: Spectrum, threshold: float, im_tol: Optional[float] = None) -> Spectrum:
    """Partition eigenvalues into real bound levels and complex pairs.

    real_levels: |Im| <= im_tol and Re < threshold, sorted ascending.
    complex_pairs: remaining eigenvalues below threshold, grouped into
    conjugate pairs when a partner exists within pairing tolerance,
    singletons otherwise.  im_tol defaults to 1e-6 * max(1, |threshold|).
    """
    if im_tol is None:
        im_tol = 1e-6 * max(1.0, abs(threshold) if np.isfinite(threshold) else 1.0)
    lam = raw.eigenvalues
    is_real = np.abs(lam.imag) <= im_tol
    below = lam.real < threshold
    real_levels = tuple(sorted(lam.real[is_real & below]))
    rest = lam[(~is_real) & below]
    used = np.zeros(len(rest), dtype=bool)
    pairs = []
    pair_tol = max(1e-8 * max(1.0, np.abs(rest).max() if len(rest) else 1.0),
                   10.0 * (raw.residual_norms.max() if raw.n else 0.0))
    for i, z in enumerate(rest):
        if used[i]:
            continue
        used[i] = True
        partner = None
        for j in range(i + 1, len(rest)):
            if not used[j] and abs(rest[j] - np.conj(z)) <= pair_tol:
                partner = j
                break
        if partner is not None:
            used[partner] = True
            pairs.append((complex(z), complex(rest[partner])))
        else:
            pairs.append((complex(z),))
    return replace(raw, threshold=float(threshold), im_tol=float(im_tol),
                   real_levels=real_levels, complex_pairs=tuple(pairs))


# ---------------------------------------------------------------------------
# shooting refinement


def _series_start(alpha, beta, sigma, E, gamma0, d0):
    """Three-term regular-branch start psi = d^sigma (1 + c1 d + c2 d^2)."""
    c1 = beta / (2.0 * sigma)
    c2 = (beta * c1 + gamma0 - E) / (4.0 * sigma + 2.0)
    val = d0 ** sigma * (1.0 + c1 * d0 + c2 * d0 * d0)
    der = (sigma * d0 ** (sigma - 1.0) * (1.0 + c1 * d0 + c2 * d0 * d0)
           + d0 ** sigma * (c1 + 2.0 * c2 * d0))
    return val, der


def _probe_singular(V, a, b, left: bool):
    """Laurent data (alpha, beta, gamma0) of V at a singular endpoint, or None.

    Detects a 1/d^2 core by sampling at two small offsets; alpha is the
    coefficient of 1/d^2, beta of 1/d, gamma0 the regular part.
    """
    span = b - a
    d1, d2, d3 = 1e-6 * span, 2e-6 * span, 4e-6 * span
    x0 = a if left else b
    sgn = 1.0 if left else -1.0
    try:
        v1 = complex(V(x0 + sgn * d1))
        v2 = complex(V(x0 + sgn * d2))
        v3 = complex(V(x0 + sgn * d3))
    except (ZeroDivisionError, FloatingPointError):
        return None
    if not (np.isfinite(v1) and np.isfinite(v2) and np.isfinite(v3)):
        return None
    # fit v = alpha/d^2 + beta/d + gamma0 through the three samples
    M = np.array([[1.0 / d1 ** 2, 1.0 / d1, 1.0],
                  [1.0 / d2 ** 2, 1.0 / d2, 1.0],
                  [1.0 / d3 ** 2, 1.0 / d3, 1.0]])
    alpha, beta, gamma0 = np.linalg.solve(M, np.array([v1, v2, v3]))
    if abs(alpha) < 0.05:
        return None
    # coefficients are in the distance coordinate d = |x - endpoint|
    return alpha, beta, gamma0


def _graded_mesh(x_from, x_to, h0, h_base, ratio=1.06):
    """Mesh from x_from to x_to with geometric ramp-up of the step."""
    xs = [x_from]
    h = h0
    direction = 1.0 if x_to > x_from else -1.0
    while (x_to - xs[-1]) * direction > 0:
        nxt = xs[-1] + direction * h
        if (x_to - nxt) * direction <= 0:
            xs.append(x_to)
            break
        xs.append(nxt)
        h = min(h * ratio, h_base)
    return np.array(xs)


def _rk4_march(xs, Vn, Vh, E, y0, y1):
    """Fixed-mesh RK4 for psi'' = (V - E) psi with magnitude renormalization."""
    for i in range(len(xs) - 1):
        h = xs[i + 1] - xs[i]
        v0 = Vn[i] - E
        vh = Vh[i] - E
        v1 = Vn[i + 1] - E
        k1y = y1
        k1p = v0 * y0
        k2y = y1 + 0.5 * h * k1p
        k2p = vh * (y0 + 0.5 * h * k1y)
        k3y = y1 + 0.5 * h * k2p
        k3p = vh * (y0 + 0.5 * h * k2y)
        k4y = y1 + h * k3p
        k4p = v1 * (y0 + h * k3y)
        y0 = y0 + h / 6.0 * (k1y + 2.0 * k2y + 2.0 * k3y + k4y)
        y1 = y1 + h / 6.0 * (k1p + 2.0 * k2p + 2.0 * k3p + k4p)
        m = abs(y0) + abs(y1)
        if m > 1e120:
            y0 /= m
            y1 /= m
    return y0, y1


class _ShootingProblem:
    """Precomputed two-sided integration meshes for one potential and domain."""

    def __init__(self, V, a: float, b: float, nstep: int = 4000,
                 match: Optional[float] = None):
        if not a < b:
            raise DomainError(f"invalid shooting domain ({a}, {b})")
        self.V = V
        self.a, self.b = float(a), float(b)
        self.sing_left = _probe_singular(V, a, b, left=True)
        self.sing_right = _probe_singular(V, a, b, left=False)
        span = b - a
        probe = np.linspace(a + 0.02 * span, b - 0.02 * span, 101)
        vals = np.asarray(V(probe), dtype=complex)
        if match is None:
            # match inside the well: long forbidden stretches between the
            # matching point and an endpoint would erase the boundary data
            k = int(np.argmin(vals.real))
            match = float(probe[k])
        self.xm = match
        h_base = span / nstep
        if self.sing_left:
            d0 = max(1e-4 * span / 10.0, 1e-8)
            self.d0L = d0
            xl = _graded_mesh(a + d0, self.xm, h0=d0 / 4.0, h_base=h_base)
        else:
            self.d0L = 0.0
            nL = max(64, int(round((self.xm - a) / h_base)))
            xl = np.linspace(a, self.xm, nL + 1)
        if self.sing_right:
            d0 = max(1e-4 * span / 10.0, 1e-8)
            self.d0R = d0
            xr = _graded_mesh(b - d0, self.xm, h0=d0 / 4.0, h_base=h_base)
        else:
            self.d0R = 0.0
            nR = max(64, int(round((self.b - self.xm) / h_base)))
            xr = np.linspace(b, self.xm, nR + 1)
        # plain lists of python scalars keep the marching loop fast
        self.VnL = np.asarray(V(xl), dtype=complex).tolist()
        self.VhL = np.asarray(V(0.5 * (xl[:-1] + xl[1:])), dtype=complex).tolist()
        self.VnR = np.asarray(V(xr), dtype=complex).tolist()
        self.VhR = np.asarray(V(0.5 * (xr[:-1] + xr[1:])), dtype=complex).tolist()
        self.xl = xl.tolist()
        self.xr = xr.tolist()

    def _start(self, E, left: bool):
        sing = self.sing_left if left else self.sing_right
        if sing:
            alpha, beta, gamma0 = sing
            sigma = 0.5 * (1.0 + np.sqrt(1.0 + 4.0 * alpha))
            d0 = self.d0L if left else self.d0R
            val, der = _series_start(alpha, beta, sigma, E, gamma0, d0)
            return (val, der) if left else (val, -der)
        v_end = self.VnL[0] if left else self.VnR[0]
        kappa = np.sqrt(complex(v_end - E))
        if kappa.real > 0.05:
            return (1.0, kappa) if left else (1.0, -kappa)
        return (0.0, 1.0)  # hard-wall data at a classically allowed endpoint

    def miss(self, E: complex) -> complex:
        """Normalized matching Wronskian phiL phiR' - phiL' phiR at xm."""
        y0, y1 = self._start(E, left=True)
        yL0, yL1 = _rk4_march(self.xl, self.VnL, self.VhL, E, complex(y0), complex(y1))
        z0, z1 = self._start(E, left=False)
        yR0, yR1 = _rk4_march(self.xr, self.VnR, self.VhR, E, complex(z0), complex(z1))
        w = yL0 * yR1 - yL1 * yR0
        scale = abs(yL0 * yR1) + abs(yL1 * yR0) + 1e-300
        return w / scale


def refine_shoot(V, E0: complex, domain, bc: str = "dirichlet",
                 nstep: int = 4000, match: Optional[float] = None,
                 tol: float = 1e-10, max_newton: int = 50) -> complex:
    """Refine an eigenvalue estimate of -psi'' + V psi = E psi by shooting.

    Integrates from both ends of `domain` toward a matching point inside the
    potential well, with decaying initial data at endpoints where V - E is
    positive, hard-wall data where it is not, and a regular-branch series
    start at 1/d^2-singular endpoints.  Newton-iterates the normalized
    matching Wronskian m(E) in complex E until |m| < tol; for estimates that
    land outside the (narrow) Newton basin of a real level, a sign-change
    scan of Re m along the real axis brackets the nearest level first.

    Raises ConvergenceError after `max_newton` Newton steps and BasinError
    when the iteration diverges or no bracket exists near E0.
    """
    a, b = domain
    prob = _ShootingProblem(V, a, b, nstep=nstep, match=match)
    scale = max(1.0, abs(E0))

    def newton(E, budget):
        E = complex(E)
        best = np.inf
        for it in range(budget):
            m0 = prob.miss(E)
            am = abs(m0)
            if am < tol:
                return E, True
            best = min(best, am)
            if it >= 8 and best > 0.5:
                return E, False  # saturated plateau, let the bracket scan take over
            dE = 1e-7 * max(1.0, abs(E))
            m1 = prob.miss(E + dE)
            der = (m1 - m0) / dE
            if der == 0 or not np.isfinite(abs(der)):
                return E, False
            step = -m0 / der
            if abs(step) > 2.0 * scale:
                step *= 2.0 * scale / abs(step)
            E = E + step
            if abs(E - E0) > 100.0 * scale:
                raise BasinError(f"refinement diverged from E0={E0}")
        return E, False

    E, ok = newton(E0, max_newton)
    if ok:
        return complex(E)
    # bracket the nearest sign change of Re m along the real axis and bisect
    if abs(complex(E0).imag) < 1e-8 * scale:
        bracket = _nearest_bracket(prob, float(np.real(E0)), scale)
        if bracket is not None:
            lo, hi = bracket
            mlo = prob.miss(lo).real
            for _ in range(80):
                mid = 0.5 * (lo + hi)
                mm = prob.miss(mid).real
                if mm == 0.0:
                    lo = hi = mid
                    break
                if np.sign(mm) == np.sign(mlo):
                    lo, mlo = mid, mm
                else:
                    hi = mid
            E, ok = newton(0.5 * (lo + hi), max_newton)
            if ok:
                return complex(E)
            if abs(prob.miss(0.5 * (lo + hi))) < np.sqrt(tol):
                return complex(0.5 * (lo + hi))
    raise ConvergenceError(
        f"shooting refinement did not reach |m| < {tol} from E0={E0} (last E={E})"
    )


def _nearest_bracket(prob, E0: float, scale: float, max_expand: int = 60):
    """Scan outward from E0 for a sign change of Re m; return the bracket."""
    delta = 2e-3 * scale
    samples = [(E0, prob.miss(E0).real)]
    for j in range(1, max_expand + 1):
        for sgn in (+1.0, -1.0):
            E = E0 + sgn * delta * (1.35 ** j)
            samples.append((E, prob.miss(E).real))
    samples.sort(key=lambda t: t[0])
    best = None
    for (e1, m1), (e2, m2) in zip(samples[:-1], samples[1:]):
        if np.isfinite(m1) and np.isfinite(m2) and np.sign(m1) != np.sign(m2):
            mid = 0.5 * (e1 + e2)
            d = abs(mid - E0)
            if best is None or d < best[0]:
                best = (d, (e1, e2))
    return None if best is None else best[1]


def miss_scan(V, domain, energies, nstep: int = 4000, match: Optional[float] = None) -> np.ndarray:
    """Matching-function values m(E) over an energy set (oracle sweeps)."""
    a, b = domain
    prob = _ShootingProblem(V, a, b, nstep=nstep, match=match)
    return np.array([prob.miss(complex(E)) for E in energies])


# ---------------------------------------------------------------------------
# comparison


@dataclass(frozen=True)
class CompareReport:
    """Greedy nearest matching of numeric real levels against analytic ones."""

    matches: tuple        # of (E_numeric, E_analytic, abs_err, rel_err)
    unmatched_numeric: tuple
    unmatched_analytic: tuple
    rtol: float
    atol: float
    passed: bool


def spectrum_compare(numeric: Spectrum, analytic: AnalyticSpectrum,
                     rtol: float = 0.01, atol: float = 1e-8) -> CompareReport:
    """Match numeric real levels to analytic levels, nearest first.

    Passes when every analytic level is matched by a distinct numeric level
    within max(rtol*|E|, atol) and no numeric level is left over.
    """
    num = list(numeric.real_levels)
    ana = list(analytic.energies)
    pairs = []
    used_num = [False] * len(num)
    for Ea in ana:
        best, bestd = None, np.inf
        for i, En in enumerate(num):
            if not used_num[i] and abs(En - Ea) < bestd:
                best, bestd = i, abs(En - Ea)
        if best is None:
            pairs.append((None, Ea))
            continue
        used_num[best] = True
        pairs.append((num[best], Ea))
    matches = []
    unmatched_analytic = []
    ok = True
    for En, Ea in pairs:
        if En is None:
            unmatched_analytic.append(Ea)
            ok = False
            continue
        abs_err = abs(En - Ea)
        rel_err = abs_err / abs(Ea) if Ea != 0 else np.inf
        within = abs_err <= max(rtol * abs(Ea), atol)
        matches.append((float(En), float(Ea), float(abs_err), float(rel_err)))
        ok = ok and within
    unmatched_numeric = [float(e) for i, e in enumerate(num) if not used_num[i]]
    ok = ok and not unmatched_numeric
    return CompareReport(matches=tuple(matches),
                         unmatched_numeric=tuple(unmatched_numeric),
                         unmatched_analytic=tuple(unmatched_analytic),
                         rtol=float(rtol), atol=float(atol), passed=bool(ok))
