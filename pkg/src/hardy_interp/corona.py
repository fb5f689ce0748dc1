"""Toeplitz-corona checks and constructive solutions.

Checks the corona hypothesis as a family of Pick-type positivity
conditions over finite point sets, and produces G with F*G = 1 by reducing
to a tangential interpolation problem with directions conj(F(x_j)) and
targets delta.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import (
    DegreeTooSmall,
    HypothesisInsufficientAtScale,
    InfeasibleConstraints,
    NoSolutionExists,
)
from .numerics import DiskGrid, hermitian_min_eig
from .pick import FullHinf, TangentialProblem
from .rkhs import ModelVector, check_in_disk, sample_model_sphere, tm_basis
from .solve import VectorAnalyticFunction, tangential_solve

__all__ = [
    "CoronaProblem",
    "CoronaReport",
    "grid_min_norm",
    "corona_check",
    "corona_solve",
]


@dataclass
class CoronaProblem:
    """Row data F with lower bound delta: the hypothesis to check is that
    [(<F(y)*, F(x)*> - delta^2) K(x, y)] is PSD over finite sets and the
    algebra's kernel family."""

    function: VectorAnalyticFunction
    delta: float

    def __post_init__(self):
        if not (self.delta > 0.0):
            raise ValueError("delta must be positive")

    @property
    def algebra(self):
        return self.function.algebra


@dataclass
class CoronaReport:
    """Outcome of a corona check or solve."""

    passed: bool
    min_eig: float
    worst_point_set: Optional[np.ndarray] = None
    worst_parameter: Optional[ModelVector] = None
    sets_tested: int = 0
    kernels_tested: int = 0
    node_residual: Optional[float] = None
    grid_residual: Optional[float] = None
    solution_norm: Optional[float] = None
    norm_slack: Optional[float] = None


def grid_min_norm(function: VectorAnalyticFunction, grid: DiskGrid) -> float:
    """Grid minimum of ||F(z)||, the explicit oracle for choosing delta."""
    vals = function.values(grid.points)
    return float(np.sqrt(np.sum(np.abs(vals) ** 2, axis=1)).min())


def _corona_matrix(fvals: np.ndarray, delta: float, kgram: np.ndarray) -> np.ndarray:
    # entry (i, j) = (sum_k F_k(x_i) conj(F_k(x_j)) - delta^2) K(x_i, x_j)
    inner = fvals @ fvals.conj().T
    q = (inner - delta ** 2) * kgram
    return 0.5 * (q + q.conj().T)


def corona_check(problem: CoronaProblem, point_sets, samples: int = 200,
                 tol: float = 1e-8, seed: int = 0, workers: int = 1) -> CoronaReport:
    """Test the corona positivity condition on each point set.

    For H-infinity the family is the Szego kernel alone; for
    C + B*H-infinity the cyclic kernels of a deterministic sweep of
    ``samples`` unit model vectors are tested.  Fails fast with the witness
    point set and kernel parameter.
    """
    algebra = problem.algebra
    szego_only = isinstance(algebra, FullHinf)
    vectors = None
    if not szego_only:
        vectors = sample_model_sphere(algebra.product, samples, seed)

    worst_eig = np.inf
    sets_tested = 0
    kernels_tested = 0
    for pts in point_sets:
        pts = check_in_disk(pts, "corona point")
        sets_tested += 1
        fvals = problem.function.values(pts)
        szego = 1.0 / (1.0 - pts[:, None] * np.conj(pts)[None, :])
        if szego_only:
            grams = [("szego", None, 0.5 * (szego + szego.conj().T))]
        else:
            product = algebra.product
            bvals = product(pts)
            inner = (bvals[:, None] * np.conj(bvals)[None, :]) * szego
            emat = tm_basis(product).eval_matrix(pts)

            def gram_of(vec):
                a = emat @ vec.coefficients
                g = np.outer(a, np.conj(a)) + inner
                return 0.5 * (g + g.conj().T)

            grams = [(v, v, gram_of(v)) for v in vectors]

        def eig_of(entry):
            _, _, g = entry
            return hermitian_min_eig(_corona_matrix(fvals, problem.delta, g))

        if workers > 1:
            from concurrent.futures import ThreadPoolExecutor

            with ThreadPoolExecutor(max_workers=workers) as pool:
                eigs = list(pool.map(eig_of, grams))
        else:
            eigs = [eig_of(g) for g in grams]
        kernels_tested += len(grams)
        idx = int(np.argmin(eigs))
        lam = float(eigs[idx])
        if lam < worst_eig:
            worst_eig = lam
        if lam < -tol:
            vec = grams[idx][1]
            return CoronaReport(
                passed=False,
                min_eig=lam,
                worst_point_set=pts,
                worst_parameter=vec if isinstance(vec, ModelVector) else None,
                sets_tested=sets_tested,
                kernels_tested=kernels_tested,
            )
    return CoronaReport(
        passed=True,
        min_eig=float(worst_eig),
        sets_tested=sets_tested,
        kernels_tested=kernels_tested,
    )


def corona_solve(problem: CoronaProblem, node_set, degree: int, grid: DiskGrid,
                 tol: float = 1e-6, norm_slack: float = 1e-3,
                 check_samples: int = 200, seed: int = 0):
    """Produce G with F(z) . G(z) = 1 at the nodes and norm near 1/delta.

    Builds the tangential problem with directions conj(F(x_j)), targets
    delta, bound 1 over the same algebra, solves it by constrained minimax,
    and returns G = (1/delta) * G_Y.  The node residual is certified; the
    residual over the verification grid is reported, not guaranteed (the
    exact statement takes a limit over all finite node sets).

    Raises HypothesisInsufficientAtScale when the check fails on the node
    set or the tangential solution misses contractivity by more than
    ``norm_slack``.
    """
    nodes = check_in_disk(node_set, "corona node")
    precheck = corona_check(problem, [nodes], samples=check_samples,
                            tol=1e-8, seed=seed)
    if not precheck.passed:
        raise HypothesisInsufficientAtScale(
            f"corona hypothesis fails on the node set: min eig {precheck.min_eig:.3e}",
            report=precheck,
        )
    fvals = problem.function.values(nodes)
    tangential = TangentialProblem(
        points=nodes,
        directions=np.conj(fvals),
        targets=np.full(nodes.size, problem.delta, dtype=complex),
        bound=1.0,
        algebra=problem.algebra,
    )
    try:
        result = tangential_solve(tangential, degree, grid, level=1.0, tol=tol)
    except (NoSolutionExists, DegreeTooSmall, InfeasibleConstraints) as exc:
        raise HypothesisInsufficientAtScale(
            f"tangential step failed: {exc}", report=precheck
        ) from exc
    if result.grid_norm > 1.0 + norm_slack:
        raise HypothesisInsufficientAtScale(
            f"tangential solution norm {result.grid_norm:.6f} exceeds 1 + "
            f"{norm_slack}; raise the degree or refine the grid",
            report=precheck,
        )
    solution = result.function.scaled(1.0 / problem.delta)
    node_res = _identity_residual(problem.function, solution, nodes)
    grid_res = _identity_residual(problem.function, solution, grid.points)
    norm = solution.grid_norm(grid.points)
    report = CoronaReport(
        passed=True,
        min_eig=precheck.min_eig,
        sets_tested=1,
        kernels_tested=precheck.kernels_tested,
        node_residual=node_res,
        grid_residual=grid_res,
        solution_norm=norm,
        norm_slack=max(result.grid_norm - 1.0, 0.0),
    )
    return solution, report


def _identity_residual(f: VectorAnalyticFunction, g: VectorAnalyticFunction,
                       points) -> float:
    fv = f.values(points)
    gv = g.values(points)
    prod = np.sum(fv * gv, axis=1)
    return float(np.abs(prod - 1.0).max())
