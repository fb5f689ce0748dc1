"""Pick-type matrices and feasibility verdicts.

Assembles the matrices [(alpha^2 <v_j, v_i> - w_i conj(w_j)) K(x_i, x_j)]
for tangential interpolation data and decides feasibility: a single-kernel
test for H-infinity, a swept-and-refined kernel-family test for
C + B*H-infinity, and a scaled single-kernel check whose conclusion is
conditional on a user-supplied similarity bound.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Optional

import numpy as np

from .errors import InconsistentNodes, KernelMismatch
from .numerics import hermitian_min_eig, is_psd
from .rkhs import (
    BlaschkeProduct,
    CyclicKernel,
    ModelVector,
    SzegoKernel,
    check_in_disk,
    sample_model_sphere,
    tm_basis,
)

__all__ = [
    "FullHinf",
    "CplusB",
    "TangentialProblem",
    "PickMatrix",
    "Verdict",
    "FeasibilityReport",
    "default_kernel",
    "unit_constant_projection",
    "build_pick_matrix",
    "feasible_single",
    "feasible_family",
    "scaled_single_kernel_check",
]


@dataclass(frozen=True)
class FullHinf:
    """The full multiplier algebra H-infinity of the disk."""

    def describe(self) -> str:
        return "H-infinity"


@dataclass(frozen=True)
class CplusB:
    """The subalgebra C + B*H-infinity for a finite Blaschke product B."""

    product: BlaschkeProduct

    def describe(self) -> str:
        return f"C+B*H-infinity (B degree {self.product.degree})"


@dataclass
class TangentialProblem:
    """Tangential interpolation data.

    points x_j in the open disk, direction vectors v_j in C^m (rows of
    ``directions``), scalar targets w_j, norm bound alpha > 0, and the
    algebra the solution must live in.  The constraint solved downstream is
    sum_k F_k(x_j) conj(v_{j,k}) = w_j with grid norm at most alpha.
    """

    points: np.ndarray
    directions: np.ndarray
    targets: np.ndarray
    bound: float
    algebra: object

    def __post_init__(self):
        self.points = check_in_disk(self.points, "interpolation node")
        self.directions = np.atleast_2d(np.asarray(self.directions, dtype=complex))
        self.targets = np.atleast_1d(np.asarray(self.targets, dtype=complex))
        n = self.points.size
        if self.directions.shape[0] != n or self.targets.size != n:
            raise ValueError("points, directions and targets must have equal length")
        if n < 1 or self.directions.shape[1] < 1:
            raise ValueError("need at least one node and one component")
        norms = np.linalg.norm(self.directions, axis=1)
        if np.any(norms == 0.0):
            raise ValueError("every direction vector must be nonzero")
        if not (self.bound > 0.0):
            raise ValueError("norm bound must be positive")
        if not isinstance(self.algebra, (FullHinf, CplusB)):
            raise ValueError("algebra must be FullHinf or CplusB")

    @property
    def node_count(self) -> int:
        return self.points.size

    @property
    def component_count(self) -> int:
        return self.directions.shape[1]


@dataclass
class PickMatrix:
    """Hermitian Pick matrix together with the kernel that built it."""

    matrix: np.ndarray
    kernel_tag: str


class Verdict(str, Enum):
    FEASIBLE = "feasible"
    INFEASIBLE = "infeasible"
    UNDETERMINED = "undetermined"


@dataclass
class FeasibilityReport:
    """Feasibility outcome with its numeric evidence.

    worst_min_eig is the smallest eigenvalue seen over all kernels tested;
    worst_parameter is the model vector achieving it (family sweeps only).
    For the scaled check, guarantee_level = alpha * c applies only under the
    caller's similarity hypothesis, flagged by ``conditional``.
    """

    verdict: Verdict
    worst_min_eig: float
    worst_parameter: Optional[ModelVector]
    samples_tested: int
    guarantee_level: Optional[float] = None
    conditional: bool = False


def default_kernel(algebra):
    """The canonical single kernel of an algebra: Szego for H-infinity, the
    cyclic kernel of the normalized projection of 1 for C + B*H-infinity."""
    if isinstance(algebra, FullHinf):
        return SzegoKernel()
    return CyclicKernel(algebra.product, unit_constant_projection(algebra.product))


def unit_constant_projection(product: BlaschkeProduct) -> ModelVector:
    """Normalized model-space projection of the constant function 1.

    The projection is 1 - conj(B(0)) B with norm sqrt(1 - |B(0)|^2), never
    zero for zeros inside the open disk; its coefficients in the orthonormal
    basis are conj(e_k(0)).
    """
    basis = tm_basis(product)
    coeffs = np.conj(basis.eval_matrix(np.array([0.0 + 0.0j]))[0])
    nrm = np.linalg.norm(coeffs)
    return ModelVector(basis, coeffs / nrm)


def _check_duplicate_consistency(problem: TangentialProblem) -> None:
    """Reject duplicate nodes whose (v, w) data cannot be met by one value."""
    pts = problem.points
    n = pts.size
    seen = [False] * n
    for i in range(n):
        if seen[i]:
            continue
        group = [j for j in range(n) if abs(pts[j] - pts[i]) <= 1e-14]
        for j in group:
            seen[j] = True
        if len(group) == 1:
            continue
        vmat = np.conj(problem.directions[group])
        w = problem.targets[group]
        sol, *_ = np.linalg.lstsq(vmat, w, rcond=None)
        resid = float(np.linalg.norm(vmat @ sol - w))
        if resid > 1e-8 * max(1.0, float(np.linalg.norm(w))):
            raise InconsistentNodes(
                f"duplicate node {pts[i]} carries contradictory data "
                f"(residual {resid:.3e})"
            )


def _kernel_matches(problem: TangentialProblem, kernel) -> bool:
    if isinstance(problem.algebra, FullHinf):
        return isinstance(kernel, SzegoKernel)
    if isinstance(kernel, CyclicKernel):
        return kernel.product == problem.algebra.product
    return False


def _coefficient_matrix(problem: TangentialProblem) -> np.ndarray:
    v = problem.directions
    gram = np.conj(v) @ v.T  # entry (i, j) = <v_j, v_i>, linear first slot
    w = problem.targets
    c = (problem.bound ** 2) * gram - np.outer(w, np.conj(w))
    return 0.5 * (c + c.conj().T)


def build_pick_matrix(problem: TangentialProblem, kernel) -> PickMatrix:
    """Entrywise product of the data coefficients with the kernel Gramian:

        Q[i, j] = (alpha^2 <v_j, v_i> - w_i conj(w_j)) K(x_i, x_j).

    The kernel must match the problem's algebra (Szego for H-infinity,
    a cyclic kernel of the same Blaschke product for C + B*H-infinity).
    """
    if not _kernel_matches(problem, kernel):
        raise KernelMismatch(
            f"kernel {getattr(kernel, 'tag', type(kernel).__name__)!r} does not "
            f"match algebra {problem.algebra.describe()}"
        )
    _check_duplicate_consistency(problem)
    q = _coefficient_matrix(problem) * kernel.gram(problem.points)
    return PickMatrix(0.5 * (q + q.conj().T), kernel.tag)


def feasible_single(problem: TangentialProblem, kernel=None,
                    tol: float = 1e-8) -> FeasibilityReport:
    """Single-kernel feasibility: PSD test of one Pick matrix.

    For H-infinity this verdict is exact; for C + B*H-infinity a single
    kernel gives only a necessary condition (see feasible_family).
    """
    if kernel is None:
        kernel = default_kernel(problem.algebra)
    pm = build_pick_matrix(problem, kernel)
    verdict = is_psd(pm.matrix, tol)
    witness = kernel.vector if isinstance(kernel, CyclicKernel) else None
    return FeasibilityReport(
        verdict=Verdict.FEASIBLE if verdict.is_psd else Verdict.INFEASIBLE,
        worst_min_eig=verdict.min_eig,
        worst_parameter=None if verdict.is_psd else witness,
        samples_tested=1,
    )


def _family_min_eig(coeffs: np.ndarray, basis_at_nodes: np.ndarray,
                    inner_gram: np.ndarray, cmat: np.ndarray) -> float:
    a = basis_at_nodes @ coeffs
    kv = np.outer(a, np.conj(a)) + inner_gram
    q = cmat * kv
    return hermitian_min_eig(0.5 * (q + q.conj().T))


def feasible_family(problem: TangentialProblem, samples: int = 512,
                    refine: bool = True, tol: float = 1e-8,
                    seed: int = 0, workers: int = 1) -> FeasibilityReport:
    """Kernel-family feasibility sweep for C + B*H-infinity.

    Evaluates the Pick minimum eigenvalue over a deterministic sweep of unit
    model-space vectors; with ``refine`` the worst sample seeds a projected
    descent on the minimum eigenvalue over the sphere (50 steps with step
    halving).  Feasible means no violation was found at the stated sweep
    size; Infeasible carries the witness vector.
    """
    if isinstance(problem.algebra, FullHinf):
        raise KernelMismatch("family sweep applies to C+B*H-infinity; "
                             "use feasible_single with the Szego kernel")
    if samples < 1:
        raise ValueError("samples must be at least 1")
    _check_duplicate_consistency(problem)
    product = problem.algebra.product
    basis = tm_basis(product)
    pts = problem.points
    nodes_eval = basis.eval_matrix(pts)
    bvals = product(pts)
    szego = 1.0 / (1.0 - pts[:, None] * np.conj(pts)[None, :])
    inner_gram = (bvals[:, None] * np.conj(bvals)[None, :]) * szego
    cmat = _coefficient_matrix(problem)

    vectors = sample_model_sphere(product, samples, seed)
    coeff_list = [v.coefficients for v in vectors]

    def eig_of(c):
        return _family_min_eig(c, nodes_eval, inner_gram, cmat)

    if workers > 1:
        from concurrent.futures import ThreadPoolExecutor

        with ThreadPoolExecutor(max_workers=workers) as pool:
            eigs = list(pool.map(eig_of, coeff_list))
    else:
        eigs = [eig_of(c) for c in coeff_list]
    worst_idx = int(np.argmin(eigs))
    worst_eig = float(eigs[worst_idx])
    worst_c = coeff_list[worst_idx].copy()

    if refine:
        # projected descent on the minimum eigenvalue over the unit sphere;
        # gradients by central differences in the real coordinates
        c = worst_c.copy()
        val = worst_eig
        step = 0.1
        d = c.size
        h = 1e-6

        def renorm(vec):
            return vec / np.linalg.norm(vec)

        for _ in range(50):
            grad = np.zeros(d, dtype=complex)
            for j in range(d):
                unit = np.zeros(d, dtype=complex)
                unit[j] = 1.0
                g_re = (eig_of(renorm(c + h * unit)) - eig_of(renorm(c - h * unit))) / (2 * h)
                g_im = (eig_of(renorm(c + 1j * h * unit)) - eig_of(renorm(c - 1j * h * unit))) / (2 * h)
                grad[j] = g_re + 1j * g_im
            gn = np.linalg.norm(grad)
            if gn < 1e-14:
                break
            moved = False
            while step > 1e-12:
                cand = c - step * grad / gn
                cand = cand / np.linalg.norm(cand)
                cand_val = eig_of(cand)
                if cand_val < val - 1e-15:
                    c, val = cand, cand_val
                    step *= 1.5
                    moved = True
                    break
                step *= 0.5
            if not moved:
                break
        if val < worst_eig:
            worst_eig, worst_c = val, c

    feasible = worst_eig >= -tol
    witness = None if feasible else ModelVector(basis, worst_c)
    return FeasibilityReport(
        verdict=Verdict.FEASIBLE if feasible else Verdict.INFEASIBLE,
        worst_min_eig=worst_eig,
        worst_parameter=witness,
        samples_tested=samples,
    )


def scaled_single_kernel_check(problem: TangentialProblem, c: float,
                               tol: float = 1e-8) -> FeasibilityReport:
    """Single-kernel test whose guarantee is scaled by a similarity bound.

    Tests the cyclic kernel with the normalized projection of the constant
    function 1.  On a feasible verdict the report records the guarantee
    level alpha * c, valid only under the caller's hypothesis that every
    cyclic subspace is similar to the base one with condition number at
    most c; the report is flagged conditional.
    """
    if not isinstance(problem.algebra, CplusB):
        raise KernelMismatch("the scaled check applies to C+B*H-infinity")
    if c < 1.0:
        raise ValueError("similarity bound c must be at least 1")
    vector = unit_constant_projection(problem.algebra.product)
    kernel = CyclicKernel(problem.algebra.product, vector)
    report = feasible_single(problem, kernel, tol)
    return FeasibilityReport(
        verdict=report.verdict,
        worst_min_eig=report.worst_min_eig,
        worst_parameter=vector if report.verdict is Verdict.INFEASIBLE else None,
        samples_tested=1,
        guarantee_level=problem.bound * c if report.verdict is Verdict.FEASIBLE else None,
        conditional=True,
    )
