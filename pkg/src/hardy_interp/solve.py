"""Interpolant construction and verification.

Exact Schur-recursion solutions for scalar problems over H-infinity, the
point-separation witness construction (interpolation without norm control),
norm-near-optimal tangential solutions by constrained minimax on a disk
grid, and an end-to-end verifier.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import (
    DegenerateBoundaryData,
    DegreeTooSmall,
    DuplicateNodes,
    InfeasibleProblem,
    NoSolutionExists,
)
from .numerics import DiskGrid, MinimaxSolution, is_psd, minimax_affine
from .pick import (
    CplusB,
    FullHinf,
    TangentialProblem,
    build_pick_matrix,
    default_kernel,
)
from .rkhs import SzegoKernel, check_in_disk

__all__ = [
    "AnalyticBasis",
    "VectorAnalyticFunction",
    "SchurInterpolant",
    "schur_interpolate",
    "SeparationPartition",
    "separation_classes",
    "separating_idempotents",
    "WitnessConstruction",
    "witness_interpolant",
    "TangentialSolveResult",
    "tangential_solve",
    "SolutionReport",
    "verify_solution",
]


class AnalyticBasis:
    """Finite algebra-respecting basis.

    H-infinity at degree d uses the monomials z^0..z^d (size d+1); the
    subalgebra C + B*H-infinity uses {1} followed by B*z^0..B*z^d (size
    d+2), so every span element lies in the algebra by construction.
    """

    def __init__(self, algebra, degree: int):
        if degree < 0:
            raise ValueError("degree must be nonnegative")
        self.algebra = algebra
        self.degree = int(degree)

    @property
    def size(self) -> int:
        if isinstance(self.algebra, FullHinf):
            return self.degree + 1
        return self.degree + 2

    def eval_matrix(self, points) -> np.ndarray:
        z = np.atleast_1d(np.asarray(points, dtype=complex))
        powers = z[:, None] ** np.arange(self.degree + 1)[None, :]
        if isinstance(self.algebra, FullHinf):
            return powers
        bvals = self.algebra.product(z)
        out = np.empty((z.size, self.degree + 2), dtype=complex)
        out[:, 0] = 1.0
        out[:, 1:] = bvals[:, None] * powers
        return out


@dataclass
class VectorAnalyticFunction:
    """Vector-valued function given by coefficients over an AnalyticBasis.

    Component k at z is ``sum_b coefficients[k, b] * basis_b(z)``; every
    component lies in the declared algebra by construction of the basis.
    """

    basis: AnalyticBasis
    coefficients: np.ndarray

    def __post_init__(self):
        self.coefficients = np.atleast_2d(np.asarray(self.coefficients, dtype=complex))
        if self.coefficients.shape[1] != self.basis.size:
            raise ValueError(
                f"expected {self.basis.size} coefficients per component, "
                f"got {self.coefficients.shape[1]}"
            )

    @property
    def components(self) -> int:
        return self.coefficients.shape[0]

    @property
    def algebra(self):
        return self.basis.algebra

    def values(self, points) -> np.ndarray:
        """Values at points, shape (len(points), components)."""
        z = np.atleast_1d(np.asarray(points, dtype=complex))
        return self.basis.eval_matrix(z) @ self.coefficients.T

    def __call__(self, z):
        zz = np.asarray(z, dtype=complex)
        vals = self.values(zz.reshape(-1))
        if zz.shape:
            return vals.reshape(zz.shape + (self.components,))
        return vals[0]

    def grid_norm(self, points) -> float:
        vals = self.values(points)
        return float(np.sqrt(np.sum(np.abs(vals) ** 2, axis=1)).max())

    def scaled(self, factor: complex) -> "VectorAnalyticFunction":
        return VectorAnalyticFunction(self.basis, self.coefficients * factor)


class SchurInterpolant:
    """Scalar rational interpolant produced by the Schur recursion.

    Stored as numerator/denominator polynomial coefficients (ascending);
    the degree is at most the number of nodes.  Exposes the same
    evaluation surface as a one-component VectorAnalyticFunction.
    """

    components = 1

    def __init__(self, numerator: np.ndarray, denominator: np.ndarray):
        self.numerator = np.asarray(numerator, dtype=complex)
        self.denominator = np.asarray(denominator, dtype=complex)
        self.algebra = FullHinf()

    @property
    def degree(self) -> int:
        return max(self.numerator.size, self.denominator.size) - 1

    def values(self, points) -> np.ndarray:
        z = np.atleast_1d(np.asarray(points, dtype=complex))
        num = np.polynomial.polynomial.polyval(z, self.numerator)
        den = np.polynomial.polynomial.polyval(z, self.denominator)
        return (num / den)[:, None]

    def __call__(self, z):
        zz = np.asarray(z, dtype=complex)
        vals = self.values(zz.reshape(-1))[:, 0]
        return vals.reshape(zz.shape) if zz.shape else complex(vals[0])

    def grid_norm(self, points) -> float:
        return float(np.abs(self.values(points)[:, 0]).max())


def _mobius_compose(u1: complex, x1: complex, num: np.ndarray, den: np.ndarray):
    """One inverse Schur step: f = (u1 + b*f1) / (1 + conj(u1)*b*f1) with
    b(z) = (z - x1)/(1 - conj(x1) z), on polynomial num/den pairs."""
    poly = np.polynomial.polynomial
    nb = np.array([-x1, 1.0], dtype=complex)          # z - x1
    db = np.array([1.0, -np.conj(x1)], dtype=complex)  # 1 - conj(x1) z
    d_term = poly.polymul(db, den)
    n_term = poly.polymul(nb, num)
    top = poly.polyadd(d_term * u1, n_term)
    bot = poly.polyadd(d_term, n_term * np.conj(u1))
    return top, bot


def _schur_recursion(points: np.ndarray, values: np.ndarray):
    u1 = values[0]
    if points.size == 1:
        return np.array([u1], dtype=complex), np.array([1.0], dtype=complex)
    if abs(u1) >= 1.0 - 1e-12:
        if np.all(np.abs(values - u1) <= 1e-10):
            return np.array([u1], dtype=complex), np.array([1.0], dtype=complex)
        raise DegenerateBoundaryData(
            "target on the norm boundary with non-constant remaining data"
        )
    x1 = points[0]
    rest_x = points[1:]
    mob = (values[1:] - u1) / (1.0 - np.conj(u1) * values[1:])
    bl = (rest_x - x1) / (1.0 - np.conj(x1) * rest_x)
    reduced = mob / bl
    num1, den1 = _schur_recursion(rest_x, reduced)
    return _mobius_compose(u1, x1, num1, den1)


def schur_interpolate(points, values, bound: float) -> SchurInterpolant:
    """Classical scalar Nevanlinna-Pick solution at norm bound alpha.

    Requires distinct nodes and a Pick matrix (Szego kernel) that is PSD at
    tolerance 1e-10; returns a rational function of degree at most n that
    meets the data and has supremum norm at most alpha up to rounding.
    """
    pts = check_in_disk(points, "interpolation node")
    vals = np.atleast_1d(np.asarray(values, dtype=complex))
    if pts.size != vals.size:
        raise ValueError("points and values must have equal length")
    for i in range(pts.size):
        for j in range(i + 1, pts.size):
            if abs(pts[i] - pts[j]) <= 1e-14:
                raise DuplicateNodes(f"nodes {i} and {j} coincide at {pts[i]}")
    if not (bound > 0.0):
        raise ValueError("norm bound must be positive")

    problem = TangentialProblem(
        points=pts,
        directions=np.ones((pts.size, 1), dtype=complex),
        targets=vals,
        bound=bound,
        algebra=FullHinf(),
    )
    pm = build_pick_matrix(problem, SzegoKernel())
    verdict = is_psd(pm.matrix, 1e-10)
    if not verdict.is_psd:
        raise InfeasibleProblem(
            f"Pick matrix not PSD: min eigenvalue {verdict.min_eig:.3e}"
        )
    num, den = _schur_recursion(pts, vals / bound)
    return SchurInterpolant(num * bound, den)


@dataclass
class SeparationPartition:
    """Grouping of nodes the algebra cannot tell apart.

    ``order`` lists original indices reordered so classes are contiguous;
    ``boundaries`` are the cumulative class endpoints 0 = n_0 < ... < n_p;
    ``classes`` holds the original indices of each class.
    """

    order: tuple
    boundaries: tuple
    classes: tuple

    @property
    def class_count(self) -> int:
        return len(self.classes)

    def class_of(self, original_index: int) -> int:
        for k, cls in enumerate(self.classes):
            if original_index in cls:
                return k
        raise IndexError(original_index)


def separation_classes(algebra, points) -> SeparationPartition:
    """Equivalence classes of nodes under point separation by the algebra.

    H-infinity separates every pair of distinct points, so classes are the
    coincidence groups (singletons for distinct nodes); in C + B*H-infinity
    additionally all nodes at zeros of B collapse into one class, since
    every element is constant on the zero set of B.
    """
    pts = check_in_disk(points, "point")
    n = pts.size
    classes = []
    if isinstance(algebra, CplusB):
        zeros = algebra.product.zeros
        merged = tuple(i for i in range(n)
                       if min(abs(pts[i] - a) for a in zeros) <= 1e-12)
        if merged:
            classes.append(merged)
    assigned = set(i for cls in classes for i in cls)
    for i in range(n):
        if i in assigned:
            continue
        group = tuple(j for j in range(n)
                      if j not in assigned and abs(pts[j] - pts[i]) <= 1e-14)
        assigned.update(group)
        classes.append(group)
    order = tuple(i for cls in classes for i in cls)
    boundaries = (0,) + tuple(int(b) for b in np.cumsum([len(c) for c in classes]))
    return SeparationPartition(order, boundaries, tuple(classes))


def separating_idempotents(algebra, partition: SeparationPartition, points,
                           degree: int):
    """Functions e_1..e_p in the algebra with e_k = delta_{kl} on class l.

    Solved on one representative per class (algebra elements are constant
    on classes) by minimal-coefficient-norm least squares; residual above
    1e-9 raises DegreeTooSmall.
    """
    pts = np.atleast_1d(np.asarray(points, dtype=complex))
    basis = AnalyticBasis(algebra, degree)
    reps = np.array([pts[cls[0]] for cls in partition.classes])
    emat = basis.eval_matrix(reps)
    p = len(partition.classes)
    out = []
    for k in range(p):
        rhs = np.zeros(p, dtype=complex)
        rhs[k] = 1.0
        coeff, *_ = np.linalg.lstsq(emat, rhs, rcond=None)
        resid = float(np.linalg.norm(emat @ coeff - rhs))
        if resid > 1e-9:
            raise DegreeTooSmall(
                f"degree {degree} cannot separate the {p} classes "
                f"(residual {resid:.3e})"
            )
        out.append(VectorAnalyticFunction(basis, coeff[None, :]))
    return out


@dataclass
class WitnessConstruction:
    """Interpolating function with no norm control: F = sum_k e_k x xi_k."""

    idempotents: list
    class_vectors: list
    function: VectorAnalyticFunction


def witness_interpolant(problem: TangentialProblem, degree: int) -> WitnessConstruction:
    """Solve the tangential data exactly, ignoring the norm bound.

    Per separation class the target vector must lie in the range of the
    direction Gram matrix P = [<v_j, v_i>] (least-squares residual at most
    1e-8 relative); otherwise NoSolutionExists is raised, since no Pick
    matrix can then be PSD.  The result is F = sum_k e_k (x) xi_k built on
    the separating idempotents.
    """
    partition = separation_classes(problem.algebra, problem.points)
    idem = separating_idempotents(problem.algebra, partition, problem.points, degree)
    m = problem.component_count
    basis = idem[0].basis
    coeffs = np.zeros((m, basis.size), dtype=complex)
    class_vectors = []
    for k, cls in enumerate(partition.classes):
        v = problem.directions[list(cls)]
        w = problem.targets[list(cls)]
        gram = np.conj(v) @ v.T  # P[i, j] = <v_j, v_i>
        alpha, *_ = np.linalg.lstsq(gram, w, rcond=None)
        resid = float(np.linalg.norm(gram @ alpha - w))
        if resid > 1e-8 * max(1.0, float(np.linalg.norm(w))):
            raise NoSolutionExists(
                f"class {k}: targets outside the range of the direction "
                f"Gram matrix (residual {resid:.3e})"
            )
        xi = alpha @ v  # sum_j alpha_j v_j
        class_vectors.append(xi)
        coeffs += np.outer(xi, idem[k].coefficients[0])
    func = VectorAnalyticFunction(basis, coeffs)
    return WitnessConstruction(idem, class_vectors, func)


@dataclass
class TangentialSolveResult:
    """Near-optimal tangential solution on a grid.

    ``grid_norm`` is the achieved grid maximum of the solution's vector
    norm; ``level`` echoes the caller's comparison level (alpha, or
    alpha*c from the scaled check) when one was supplied.
    """

    function: VectorAnalyticFunction
    grid_norm: float
    level: Optional[float]
    meets_level: Optional[bool]
    minimax: MinimaxSolution


def tangential_solve(problem: TangentialProblem, degree: int, grid: DiskGrid,
                     level: Optional[float] = None,
                     tol: float = 1e-6) -> TangentialSolveResult:
    """Minimize the grid norm over the degree-d algebra basis subject to
    the interpolation constraints.

    The constraint consistency is established first through the witness
    construction (NoSolutionExists / DegreeTooSmall propagate).  The
    reported norm is a grid maximum: a lower bound for the true supremum.
    """
    witness_interpolant(problem, degree)
    basis = AnalyticBasis(problem.algebra, degree)
    m = problem.component_count
    nb = basis.size
    nodes_eval = basis.eval_matrix(problem.points)
    n = problem.node_count
    lmat = np.zeros((n, m * nb), dtype=complex)
    for j in range(n):
        for k in range(m):
            lmat[j, k * nb:(k + 1) * nb] = np.conj(problem.directions[j, k]) * nodes_eval[j]
    grid_eval = basis.eval_matrix(grid.points)
    solution = minimax_affine([grid_eval] * m, (lmat, problem.targets), grid, tol)
    func = VectorAnalyticFunction(basis, solution.coefficients)
    achieved = solution.achieved_level
    return TangentialSolveResult(
        function=func,
        grid_norm=achieved,
        level=level,
        meets_level=None if level is None else bool(achieved <= level * (1.0 + 1e-6)),
        minimax=solution,
    )


@dataclass
class SolutionReport:
    """Verification summary for a candidate solution."""

    residuals: np.ndarray
    max_residual: float
    grid_norm: float
    pick_min_eig: float
    pick_psd: bool


def verify_solution(function, problem: TangentialProblem, grid: DiskGrid,
                    psd_tol: float = 1e-6) -> SolutionReport:
    """Residuals, grid norm, and the Pick PSD re-check at alpha = grid norm.

    The PSD status uses the algebra's canonical single kernel; it is a
    necessity check, meaningful when the grid norm is close to the true
    supremum of the candidate.
    """
    vals = function.values(problem.points)
    attained = np.sum(vals * np.conj(problem.directions), axis=1)
    residuals = np.abs(attained - problem.targets)
    gnorm = function.grid_norm(grid.points)
    check_problem = TangentialProblem(
        points=problem.points,
        directions=problem.directions,
        targets=problem.targets,
        bound=max(gnorm, 1e-300),
        algebra=problem.algebra,
    )
    pm = build_pick_matrix(check_problem, default_kernel(problem.algebra))
    verdict = is_psd(pm.matrix, psd_tol)
    return SolutionReport(
        residuals=residuals,
        max_residual=float(residuals.max()),
        grid_norm=gnorm,
        pick_min_eig=verdict.min_eig,
        pick_psd=verdict.is_psd,
    )
