"""Tangential Nevanlinna-Pick interpolation and Toeplitz-corona solvers
over H-infinity and the constrained subalgebras C + B*H-infinity on the
unit disk, with kernel-family feasibility tests, constructive interpolants,
and a finite-truncation check of the operator-distance duality."""

from .corona import CoronaProblem, CoronaReport, corona_check, corona_solve, grid_min_norm
from .duality import TruncatedDistanceProblem, distance_dual, distance_primal
from .errors import (
    DegenerateBoundaryData,
    DegreeTooSmall,
    DuplicateNodes,
    HardyInterpError,
    HypothesisInsufficientAtScale,
    InconsistentNodes,
    InfeasibleConstraints,
    InfeasibleProblem,
    InvalidMatrix,
    InvalidRadius,
    KernelMismatch,
    NoSolutionExists,
    NotConverged,
    NotLogIntegrable,
    NotNormalized,
    ProblemFileError,
)
from .numerics import (
    DiskGrid,
    MinimaxSolution,
    PsdVerdict,
    QuadratureRule,
    circle_integral,
    disk_grid,
    hermitian_eigenvalues,
    hermitian_min_eig,
    is_psd,
    minimax_affine,
    uniform_rule,
)
from .pick import (
    CplusB,
    FeasibilityReport,
    FullHinf,
    PickMatrix,
    TangentialProblem,
    Verdict,
    build_pick_matrix,
    default_kernel,
    feasible_family,
    feasible_single,
    scaled_single_kernel_check,
    unit_constant_projection,
)
from .rkhs import (
    BlaschkeProduct,
    CyclicKernel,
    ModelSpaceBasis,
    ModelSpaceKernel,
    ModelVector,
    OuterFunction,
    SzegoKernel,
    blaschke_eval,
    cyclic_kernel,
    model_space_kernel,
    outer_from_modulus,
    sample_model_sphere,
    szego_kernel,
    tm_basis,
)
from .solve import (
    AnalyticBasis,
    SchurInterpolant,
    SeparationPartition,
    SolutionReport,
    TangentialSolveResult,
    VectorAnalyticFunction,
    WitnessConstruction,
    schur_interpolate,
    separating_idempotents,
    separation_classes,
    tangential_solve,
    verify_solution,
    witness_interpolant,
)

__version__ = "0.1.0"
