"""Active-set solver for the maximally polarized distribution.

The most polarized pure state with mean photon number nbar has the number
distribution solving

    minimize   (1/2) p^T H p,     H = 2 diag[1, 1/2, ..., 1/(D+1)],
    subject to sum p_N = 1,  sum N p_N = nbar,  p >= 0,

a strictly convex quadratic program with a unique optimum.  The diagonal
Hessian makes the equality-constrained subproblem solvable in closed form:
on any working set of free indices the stationarity conditions force
p_N = (lam0 + lam1 N)(N+1)/2, with the two multipliers fixed by a 2x2
system.  A primal active-set iteration around that solve pins negative
components to zero and releases indices whose bound multipliers turn
negative, until the Karush-Kuhn-Tucker conditions hold.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .distributions import PhotonDistribution

__all__ = [
    "QpProblem",
    "QpSolution",
    "KktResiduals",
    "KktReport",
    "InfeasibleProblemError",
    "DegenerateFreeSetError",
    "ConvergenceError",
    "build_problem",
    "kkt_equality_solve",
    "solve",
    "verify_kkt",
    "support_size",
]

DEFAULT_TOL = 1e-10


class InfeasibleProblemError(ValueError):
    """No distribution on the truncated index range has the requested mean."""


class DegenerateFreeSetError(ValueError):
    """The free set cannot support the two equality constraints."""


class ConvergenceError(RuntimeError):
    """The active-set iteration exceeded its iteration budget."""


@dataclass(frozen=True)
class QpProblem:
    """Data of the polarization QP on photon numbers 0..dim."""

    nbar: float
    dim: int
    hessian_diag: np.ndarray
    constraint_matrix: np.ndarray
    rhs: tuple[float, float]

    def __post_init__(self):
        h = np.asarray(self.hessian_diag, dtype=float)
        a = np.asarray(self.constraint_matrix, dtype=float)
        h.setflags(write=False)
        a.setflags(write=False)
        object.__setattr__(self, "hessian_diag", h)
        object.__setattr__(self, "constraint_matrix", a)


@dataclass(frozen=True)
class KktResiduals:
    """First-order optimality residuals; a solution passes at tolerance tol
    when every entry is at most tol."""

    primal_eq: float
    stationarity: float
    dual_feasibility: float
    complementarity: float

    def max_residual(self) -> float:
        return max(
            self.primal_eq, self.stationarity, self.dual_feasibility, self.complementarity
        )

    def within(self, tol: float) -> bool:
        return self.max_residual() <= tol


@dataclass(frozen=True)
class KktReport:
    residuals: KktResiduals
    tol: float
    passed: bool


@dataclass(frozen=True)
class QpSolution:
    """Solver output: the optimal distribution plus optimality evidence."""

    dist: PhotonDistribution
    multipliers: tuple[float, float]
    active_set: tuple[int, ...]
    objective: float
    kkt_residuals: KktResiduals
    iterations: int


def build_problem(nbar: float, dim: int) -> QpProblem:
    """Assemble the QP data for mean ``nbar`` on photon numbers 0..dim.

    Raises :class:`InfeasibleProblemError` when no distribution supported on
    0..dim can reach the mean (nbar > dim).  A dim of at least
    ceil(2*nbar) + 1 leaves the optimal support untouched by truncation.
    """
    if not (math.isfinite(nbar) and nbar >= 0):
        raise ValueError("nbar must be a non-negative real")
    if dim < 0 or dim != int(dim):
        raise ValueError("dim must be a non-negative integer")
    dim = int(dim)
    if nbar > dim:
        raise InfeasibleProblemError(
            f"mean {nbar} is unreachable on photon numbers 0..{dim}; "
            f"the largest feasible mean is {dim}"
        )
    n = np.arange(dim + 1, dtype=float)
    hessian = 2.0 / (n + 1.0)
    constraints = np.vstack([np.ones(dim + 1), n])
    return QpProblem(float(nbar), dim, hessian, constraints, (1.0, float(nbar)))


def kkt_equality_solve(
    problem: QpProblem, free_set: Sequence[int]
) -> tuple[np.ndarray, tuple[float, float]]:
    """Equality-constrained solve restricted to ``free_set``.

    Returns the stationary point p_N = (lam0 + lam1 N)(N+1)/2 over the free
    indices together with the multipliers (lam0, lam1) of the normalization
    and mean constraints.  The restricted 2x2 system is solved in closed
    form around the weighted centroid of the free indices, which keeps it
    well conditioned at any truncation.  Entries of the returned vector may
    be negative; the active-set loop deals with those.
    """
    idx = np.asarray(list(free_set), dtype=int)
    if idx.size < 2:
        raise DegenerateFreeSetError(
            "two equality constraints need at least two free indices"
        )
    if np.unique(idx).size != idx.size:
        raise DegenerateFreeSetError("free set contains repeated indices")
    if idx.min() < 0 or idx.max() > problem.dim:
        raise ValueError("free set indices outside 0..dim")
    n = idx.astype(float)
    w = 0.5 * (n + 1.0)  # inverse Hessian diagonal on the free set
    b0, b1 = problem.rhs
    s0 = float(w.sum())
    center = float((n * w).sum()) / s0
    spread = float(((n - center) ** 2 * w).sum())
    if spread <= 0.0:
        raise DegenerateFreeSetError("free set indices are collinear")
    alpha = b0 / s0
    beta = (b1 - center * b0) / spread
    p_free = w * (alpha + beta * (n - center))
    lam0 = alpha - beta * center
    return p_free, (lam0, beta)


def solve(
    problem: QpProblem, tol: float = DEFAULT_TOL, max_iter: Optional[int] = None
) -> QpSolution:
    """Solve the polarization QP with a primal active-set iteration.

    Starts from the free window 0..min(dim, ceil(2 nbar)+1), which contains
    the optimal support; repeatedly pins the most negative free component
    (ties to the smallest index) and, once primal feasible, releases the
    most negative bound multiplier, until both checks clear at ``tol``.
    Components within ``tol`` of zero are clamped to exactly zero on output.

    The vertex cases nbar = 0 and nbar = dim, where only one feasible point
    exists and the restricted system degenerates, are returned directly.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    dim = problem.dim
    if max_iter is None:
        max_iter = 10 * (dim + 1)
    nbar = problem.nbar
    if nbar == 0.0 or nbar == float(dim):
        return _vertex_solution(problem, 0 if nbar == 0.0 else dim)

    free = np.zeros(dim + 1, dtype=bool)
    window_top = min(dim, int(math.ceil(2.0 * nbar)) + 1)
    free[: window_top + 1] = True
    if nbar > window_top:  # unreachable for a feasible problem; be safe
        free[:] = True

    iterations = 0
    while True:
        if iterations >= max_iter:
            raise ConvergenceError(
                f"active-set iteration did not settle in {max_iter} steps"
            )
        iterations += 1
        idx = np.flatnonzero(free)
        p_free, lam = kkt_equality_solve(problem, idx)
        worst = int(np.argmin(p_free))  # first minimum = smallest index on ties
        if p_free[worst] < -tol:
            free[idx[worst]] = False
            continue
        bound = np.flatnonzero(~free)
        if bound.size:
            mu = -(lam[0] + lam[1] * bound)
            lowest = int(np.argmin(mu))
            if mu[lowest] < -tol:
                free[bound[lowest]] = True
                continue
        break

    probs = np.zeros(dim + 1)
    probs[idx] = p_free
    probs[np.abs(probs) <= tol] = 0.0
    return _package(problem, probs, lam, iterations)


def verify_kkt(problem: QpProblem, solution: QpSolution, tol: float = DEFAULT_TOL) -> KktReport:
    """Recompute all four KKT residuals of ``solution`` from scratch.

    Bound multipliers are taken as mu_N = (H p - A^T lam)_N on the claimed
    active set and zero elsewhere, so stationarity is judged on the free
    set, dual feasibility is the worst negative mu on the active set, and
    complementarity the largest |p_N mu_N|.
    """
    residuals = _residuals(
        problem,
        solution.dist.probs,
        solution.multipliers,
        np.asarray(solution.active_set, dtype=int),
    )
    return KktReport(residuals, tol, residuals.within(tol))


def support_size(solution: QpSolution, tol: float = DEFAULT_TOL) -> int:
    """Number of components of the solution above ``tol``."""
    return int(np.count_nonzero(solution.dist.probs > tol))


# ---------------------------------------------------------------------------


def _vertex_solution(problem: QpProblem, vertex: int) -> QpSolution:
    dim = problem.dim
    probs = np.zeros(dim + 1)
    probs[vertex] = 1.0
    h = float(problem.hessian_diag[vertex])
    if vertex == 0:
        # mu_N = -(lam0 + lam1 N) = h (N - 1) >= 0 on the active indices
        lam = (h, -h if dim >= 1 else 0.0)
    else:
        lam = (-h * (vertex - 1.0), h)
    return _package(problem, probs, lam, iterations=0)


def _package(
    problem: QpProblem, probs: np.ndarray, lam: tuple[float, float], iterations: int
) -> QpSolution:
    active = np.flatnonzero(probs == 0.0)
    residuals = _residuals(problem, probs, lam, active)
    objective = 0.5 * float(probs @ (problem.hessian_diag * probs))
    dist = PhotonDistribution(
        probs, problem.nbar, tail_bound=max(0.0, 1.0 - float(probs.sum()))
    )
    return QpSolution(
        dist=dist,
        multipliers=(float(lam[0]), float(lam[1])),
        active_set=tuple(int(i) for i in active),
        objective=objective,
        kkt_residuals=residuals,
        iterations=iterations,
    )


def _residuals(
    problem: QpProblem,
    probs: np.ndarray,
    lam: tuple[float, float],
    active: np.ndarray,
) -> KktResiduals:
    n = np.arange(problem.dim + 1, dtype=float)
    active_mask = np.zeros(problem.dim + 1, dtype=bool)
    active_mask[active] = True
    grad = problem.hessian_diag * probs - (lam[0] + lam[1] * n)
    mu = np.where(active_mask, grad, 0.0)
    primal = max(
        abs(float(probs.sum()) - problem.rhs[0]),
        abs(float(n @ probs) - problem.rhs[1]),
    )
    free_grad = grad[~active_mask]
    stationarity = float(np.abs(free_grad).max()) if free_grad.size else 0.0
    dual = float(max(0.0, -mu.min())) if active_mask.any() else 0.0
    complementarity = float(np.abs(probs * mu).max()) if active_mask.any() else 0.0
    return KktResiduals(primal, stationarity, dual, complementarity)
