"""Numeric route to the radial eigenproblem: the true continuous spectrum.

Solves

    F''(r) + F'(r)/r - (l^2/r^2) F - r^2 F - nu r F = -W F

as a self-adjoint eigenproblem under the planar radial measure
int |F|^2 r dr. The substitution u = sqrt(r) F removes the first-derivative
term (Liouville normal form) and makes a symmetric tridiagonal
discretization natural. The grid is cell-centered, r_i = (i - 1/2) h, with
a zero-flux face at r = 0: the node-centered stencil stalls at l = 0,
where u ~ sqrt(r) puts the effective potential -1/(4 r^2) exactly on the
limit-circle borderline, while the flux form never references r = 0 and
stays cleanly second order for every l. Eigenvalues are Richardson
extrapolated over doubled grids and the extrapolation is itself checked by
one more doubling.

For every coupling nu there is a full ladder of eigenvalues W_{j,l}(nu),
each strictly increasing in nu (the derivative equals <r> > 0). The
isolated truncation energies of :mod:`radspec.frobenius` are single points
on these curves, not a discrete spectrum of their own.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Sequence

import numpy as np
from scipy.linalg import eigh_tridiagonal

from .frobenius import ReducedProblem

__all__ = [
    "SolverConfig",
    "EigenState",
    "SpectralCurve",
    "HftCheck",
    "SolverError",
    "NotConverged",
    "DomainTooSmall",
    "MonotonicityViolation",
    "solve_spectrum",
    "expectation_r",
    "hft_check",
    "curve_scan",
]

TAIL_RATIO = 1e-12    # required |F(r_max)| / max|F| for the ground state


class SolverError(RuntimeError):
    """Base class for spectral solver failures."""


class NotConverged(SolverError):
    """Grid doubling still moves the extrapolated eigenvalue beyond tolerance."""


class DomainTooSmall(SolverError):
    """Ground eigenfunction has not decayed to the tail threshold at r_max."""


class MonotonicityViolation(SolverError):
    """A branch decreased along increasing nu; signals a solver fault."""


@dataclass(frozen=True)
class SolverConfig:
    """Eigensolver settings.

    ``r_max=None`` chooses the domain from the coupling at solve time:
    max(12, |nu|/2 + 12), which keeps the Gaussian-times-shifted tail of
    every computed state far below the cutoff. ``grid_points`` is the base
    resolution; it is doubled once for Richardson extrapolation and once
    more to check convergence.
    """

    r_max: float | None = None
    grid_points: int = 5000
    levels: int = 3
    convergence_tol: float = 1e-8

    def __post_init__(self):
        if self.r_max is not None and self.r_max <= 0:
            raise ValueError(f"r_max={self.r_max} must be positive")
        if self.grid_points < 100:
            raise ValueError(f"grid_points={self.grid_points} must be >= 100")
        if self.levels < 1:
            raise ValueError(f"levels={self.levels} must be >= 1")
        if self.convergence_tol <= 0:
            raise ValueError(f"convergence_tol={self.convergence_tol} must be positive")

    def domain(self, nu: float) -> float:
        if self.r_max is not None:
            return self.r_max
        return max(12.0, abs(nu) / 2 + 12.0)


@dataclass(frozen=True, eq=False)
class EigenState:
    """One normalized eigenstate on the solver grid.

    ``W`` is the Richardson-extrapolated eigenvalue; ``F`` is sampled on
    the cell-centered grid ``r`` and normalized so that the midpoint sum
    for int |F|^2 r dr equals 1 exactly.
    """

    l: int
    nu: float
    j: int
    W: float
    r: np.ndarray
    F: np.ndarray

    @property
    def step(self) -> float:
        return float(self.r[1] - self.r[0])


@dataclass(frozen=True, eq=False)
class SpectralCurve:
    """One eigenvalue branch W_{j,l} sampled over a strictly increasing nu grid."""

    l: int
    j: int
    nu: tuple[float, ...]
    W: tuple[float, ...]
    states: tuple[EigenState, ...] | None = None

    @property
    def samples(self) -> list[tuple[float, float]]:
        return list(zip(self.nu, self.W))


@dataclass(frozen=True)
class HftCheck:
    """Finite-difference slope of W against the position expectation value."""

    dW_dnu: float
    r_expectation: float
    discrepancy: float


def _tridiagonal(l: int, nu: float, r_max: float, n_cells: int):
    # flux-form discretization of -(1/r)(r F')' + V on r_i = (i - 1/2) h,
    # symmetrized by u = sqrt(r) F; the r=0 face carries zero flux
    h = r_max / n_cells
    r = (np.arange(1, n_cells + 1) - 0.5) * h
    V = r * r + nu * r + (l * l) / (r * r)
    faces = np.arange(1, n_cells) * h
    diag = np.concatenate(([faces[0]], faces[:-1] + faces[1:], [faces[-1] + r_max]))
    diag = diag / (h * h * r) + V
    off = -faces / (h * h * np.sqrt(r[:-1] * r[1:]))
    return diag, off, r, h

def _grid_eigvals(l, nu, r_max, n_cells, k):
    diag, off, _, _ = _tridiagonal(l, nu, r_max, n_cells)
    return eigh_tridiagonal(diag, off, select="i", select_range=(0, k - 1),
                            eigvals_only=True)


def solve_spectrum(problem: ReducedProblem, config: SolverConfig | None = None
                   ) -> list[EigenState]:
    """Lowest ``config.levels`` eigenstates at the given (l, nu).

    Eigenvalues are Richardson extrapolated from grids of N and 2N cells
    and accepted only if one further doubling moves the extrapolation by
    less than ``convergence_tol`` (else :class:`NotConverged`).
    Eigenfunctions come from the finest grid. The ground-state tail at
    r_max must be below 1e-12 of its peak (else :class:`DomainTooSmall`).
    """
    config = config or SolverConfig()
    l, nu = problem.l, problem.nu
    r_max = config.domain(nu)
    n = config.grid_points
    k = config.levels

    w1 = _grid_eigvals(l, nu, r_max, n, k)
    w2 = _grid_eigvals(l, nu, r_max, 2 * n, k)
    diag, off, r, h = _tridiagonal(l, nu, r_max, 4 * n)
    w4, vec = eigh_tridiagonal(diag, off, select="i", select_range=(0, k - 1))

    F_ground = np.abs(vec[:, 0]) / np.sqrt(r)
    tail = F_ground[-1] / F_ground.max()
    if tail >= TAIL_RATIO:
        raise DomainTooSmall(
            f"ground-state tail at r_max={r_max:g} is {tail:.2e} of peak "
            f"(require < {TAIL_RATIO:g}); increase r_max")

    rich_a = (4 * w2 - w1) / 3
    rich_b = (4 * w4 - w2) / 3
    shift = np.max(np.abs(rich_b - rich_a))
    if shift >= config.convergence_tol:
        raise NotConverged(
            f"doubling {2 * n} -> {4 * n} cells still moves W by {shift:.2e} "
            f"(tol {config.convergence_tol:g}); raise grid_points")

    states = []
    for j in range(k):
        u = vec[:, j]
        u = u / np.sqrt(np.sum(u * u) * h)
        if u[np.argmax(np.abs(u))] < 0:
            u = -u
        states.append(EigenState(l=l, nu=nu, j=j, W=float(rich_b[j]),
                                 r=r, F=u / np.sqrt(r)))
    if any(b.W <= a.W for a, b in zip(states, states[1:])):
        raise SolverError(f"eigenvalues not strictly ordered at l={l}, nu={nu}")
    return states


def expectation_r(state: EigenState) -> float:
    """<r> = int r |F|^2 r dr by the midpoint rule on the solver grid."""
    val = float(np.sum(state.r ** 2 * state.F ** 2) * state.step)
    if val <= 0:
        raise SolverError("nonpositive <r>; eigenfunction is invalid")
    return val


def hft_check(problem: ReducedProblem, j: int, delta: float = 1e-4,
              config: SolverConfig | None = None) -> HftCheck:
    """Check dW_j/dnu = <r> at the given problem point.

    The slope is the central difference over nu +- delta; the expectation
    value comes from the eigenstate at nu itself. For a correct solver the
    discrepancy stays below max(1e-4, 10 * convergence_tol / delta).
    """
    if delta <= 0:
        raise ValueError(f"delta={delta} must be positive")
    config = config or SolverConfig()
    if config.levels < j + 1:
        config = replace(config, levels=j + 1)
    # one domain for all three solves; the slope must not see r_max jumps
    if config.r_max is None:
        config = replace(config, r_max=SolverConfig().domain(abs(problem.nu) + delta))
    lo = solve_spectrum(ReducedProblem(problem.l, problem.nu - delta), config)
    hi = solve_spectrum(ReducedProblem(problem.l, problem.nu + delta), config)
    mid = solve_spectrum(problem, config)
    slope = (hi[j].W - lo[j].W) / (2 * delta)
    rexp = expectation_r(mid[j])
    return HftCheck(dW_dnu=slope, r_expectation=rexp,
                    discrepancy=abs(slope - rexp))


def curve_scan(l: int, branches: int, nu_grid: Sequence[float],
               config: SolverConfig | None = None,
               keep_eigenfunctions: bool = False) -> list[SpectralCurve]:
    """Sample branches j < branches over a strictly increasing nu grid.

    Eigenvalues at each nu are recomputed from scratch and indexed by
    sorted order; branches of a fixed l never cross. Raises
    :class:`MonotonicityViolation` if any branch fails to increase.
    """
    nu_grid = [float(v) for v in nu_grid]
    if any(b <= a for a, b in zip(nu_grid, nu_grid[1:])):
        raise ValueError("nu_grid must be strictly increasing")
    if branches < 1:
        raise ValueError(f"branches={branches} must be >= 1")
    config = config or SolverConfig()
    if config.levels < branches:
        config = replace(config, levels=branches)

    per_nu = [solve_spectrum(ReducedProblem(l, nu), config) for nu in nu_grid]
    curves = []
    for j in range(branches):
        W = [states[j].W for states in per_nu]
        for (na, wa), (nb, wb) in zip(zip(nu_grid, W), zip(nu_grid[1:], W[1:])):
            if wb <= wa:
                raise MonotonicityViolation(
                    f"branch j={j}, l={l} fell from W={wa!r} at nu={na!r} "
                    f"to W={wb!r} at nu={nb!r}")
        curves.append(SpectralCurve(
            l=l, j=j, nu=tuple(nu_grid), W=tuple(W),
            states=tuple(states[j] for states in per_nu) if keep_eigenfunctions else None))
    return curves
