"""Disk-analytic primitives.

Finite Blaschke products, the Szego and model-space kernels, the cyclic
subspace kernel family attached to C + B*H-infinity, Takenaka-Malmquist
orthonormal bases, outer functions built from boundary modulus, and a
deterministic sweep of unit model-space vectors.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np
from scipy.special import ndtri
from scipy.stats import qmc

from .errors import NotLogIntegrable, NotNormalized
from .numerics import QuadratureRule

__all__ = [
    "check_in_disk",
    "BlaschkeProduct",
    "blaschke_eval",
    "szego_kernel",
    "model_space_kernel",
    "ModelSpaceBasis",
    "tm_basis",
    "ModelVector",
    "cyclic_kernel",
    "SzegoKernel",
    "ModelSpaceKernel",
    "CyclicKernel",
    "OuterFunction",
    "outer_from_modulus",
    "sample_model_sphere",
]


def check_in_disk(points, name: str = "point") -> np.ndarray:
    """Validate that every value has modulus strictly below 1."""
    z = np.atleast_1d(np.asarray(points, dtype=complex))
    if np.any(np.abs(z) >= 1.0):
        worst = float(np.abs(z).max())
        raise ValueError(f"{name} must lie in the open unit disk, got modulus {worst}")
    return z


@dataclass(frozen=True)
class BlaschkeProduct:
    """Finite Blaschke product: unimodular constant times factors
    (z - a) / (1 - conj(a) z) over a nonempty zero list with multiplicity."""

    zeros: tuple
    constant: complex = 1.0 + 0.0j

    def __post_init__(self):
        zs = tuple(complex(a) for a in self.zeros)
        if len(zs) == 0:
            raise ValueError("a Blaschke product needs at least one zero")
        if any(abs(a) >= 1.0 for a in zs):
            raise ValueError("Blaschke zeros must lie in the open unit disk")
        c = complex(self.constant)
        if abs(abs(c) - 1.0) > 1e-12:
            raise ValueError(f"constant must be unimodular, got |c| = {abs(c)}")
        object.__setattr__(self, "zeros", zs)
        object.__setattr__(self, "constant", c)

    @property
    def degree(self) -> int:
        return len(self.zeros)

    def __call__(self, z):
        return blaschke_eval(self, z)


def blaschke_eval(product: BlaschkeProduct, z):
    """Evaluate a Blaschke product for |z| <= 1 (scalar or array input)."""
    zz = np.asarray(z, dtype=complex)
    out = np.full(zz.shape, product.constant, dtype=complex)
    for a in product.zeros:
        out = out * (zz - a) / (1.0 - np.conj(a) * zz)
    return out if zz.shape else complex(out)


def szego_kernel(z, w):
    """Szego kernel of the Hardy space H^2: 1 / (1 - z conj(w))."""
    zz = check_in_disk(z, "z")
    ww = check_in_disk(w, "w")
    val = 1.0 / (1.0 - zz * np.conj(ww))
    return complex(val[0]) if val.size == 1 and np.isscalar(z) else np.squeeze(val)[()]


def model_space_kernel(product: BlaschkeProduct, z, w):
    """Reproducing kernel of H^2 minus B*H^2:
    (1 - B(z) conj(B(w))) / (1 - z conj(w))."""
    zz = check_in_disk(z, "z")
    ww = check_in_disk(w, "w")
    val = (1.0 - product(zz) * np.conj(product(ww))) / (1.0 - zz * np.conj(ww))
    return complex(val[0]) if val.size == 1 and np.isscalar(z) else np.squeeze(val)[()]


class ModelSpaceBasis:
    """Takenaka-Malmquist orthonormal basis of the model space of a finite
    Blaschke product.

    For the zero sequence a_1..a_d the k-th function is

        e_k(z) = sqrt(1 - |a_k|^2) / (1 - conj(a_k) z) * prod_{l<k} (z - a_l)/(1 - conj(a_l) z)

    which is orthonormal in H^2 and spans H^2 minus B*H^2.
    """

    def __init__(self, product: BlaschkeProduct):
        self.product = product
        self.dimension = product.degree

    def eval_matrix(self, points) -> np.ndarray:
        """Basis values at points, shape (len(points), dimension)."""
        z = np.atleast_1d(np.asarray(points, dtype=complex))
        d = self.dimension
        out = np.empty((z.size, d), dtype=complex)
        prefix = np.ones(z.size, dtype=complex)
        for k, a in enumerate(self.product.zeros):
            out[:, k] = np.sqrt(1.0 - abs(a) ** 2) / (1.0 - np.conj(a) * z) * prefix
            prefix = prefix * (z - a) / (1.0 - np.conj(a) * z)
        return out

    def function(self, k: int):
        """The k-th basis function as a scalar-or-array callable."""

        def e_k(z):
            zz = np.asarray(z, dtype=complex)
            vals = self.eval_matrix(zz.reshape(-1))[:, k]
            return vals.reshape(zz.shape) if zz.shape else complex(vals[0])

        return e_k


def tm_basis(product: BlaschkeProduct) -> ModelSpaceBasis:
    """Orthonormal model-space basis for a finite Blaschke product."""
    return ModelSpaceBasis(product)


@dataclass
class ModelVector:
    """Coefficient vector in a ModelSpaceBasis; the kernel parameter.

    Used as a cyclic-kernel parameter only at unit norm (within 1e-10).
    """

    basis: ModelSpaceBasis
    coefficients: np.ndarray

    def __post_init__(self):
        c = np.atleast_1d(np.asarray(self.coefficients, dtype=complex))
        if c.size != self.basis.dimension:
            raise ValueError(
                f"expected {self.basis.dimension} coefficients, got {c.size}"
            )
        self.coefficients = c

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.coefficients))

    def require_unit(self, tol: float = 1e-10) -> None:
        if abs(self.norm - 1.0) > tol:
            raise NotNormalized(f"model vector norm {self.norm} is not 1 within {tol}")

    def evaluate(self, points):
        z = np.atleast_1d(np.asarray(points, dtype=complex))
        vals = self.basis.eval_matrix(z) @ self.coefficients
        return vals if np.asarray(points).shape else complex(vals[0])


def cyclic_kernel(product: BlaschkeProduct, vector: ModelVector, z, w):
    """Kernel of the cyclic subspace span{v} + B*H^2 for unit v:

        K(z, w) = v(z) conj(v(w)) + B(z) conj(B(w)) / (1 - z conj(w)).
    """
    vector.require_unit()
    zz = check_in_disk(z, "z")
    ww = check_in_disk(w, "w")
    vz = vector.evaluate(zz)
    vw = vector.evaluate(ww)
    val = vz * np.conj(vw) + product(zz) * np.conj(product(ww)) / (1.0 - zz * np.conj(ww))
    return complex(val[0]) if val.size == 1 and np.isscalar(z) else np.squeeze(val)[()]


class SzegoKernel:
    """Evaluable Szego kernel with a Gram-matrix helper."""

    tag = "szego"

    def __call__(self, z, w):
        return szego_kernel(z, w)

    def gram(self, points) -> np.ndarray:
        z = check_in_disk(points, "points")
        g = 1.0 / (1.0 - z[:, None] * np.conj(z)[None, :])
        return 0.5 * (g + g.conj().T)


class ModelSpaceKernel:
    """Evaluable kernel of the model space of a finite Blaschke product."""

    def __init__(self, product: BlaschkeProduct):
        self.product = product
        self.tag = f"model-space(deg {product.degree})"

    def __call__(self, z, w):
        return model_space_kernel(self.product, z, w)

    def gram(self, points) -> np.ndarray:
        z = check_in_disk(points, "points")
        bz = self.product(z)
        g = (1.0 - bz[:, None] * np.conj(bz)[None, :]) / (
            1.0 - z[:, None] * np.conj(z)[None, :]
        )
        return 0.5 * (g + g.conj().T)


class CyclicKernel:
    """Evaluable cyclic-subspace kernel for C + B*H-infinity."""

    def __init__(self, product: BlaschkeProduct, vector: ModelVector):
        vector.require_unit()
        if vector.basis.product != product:
            raise ValueError("model vector belongs to a different Blaschke product")
        self.product = product
        self.vector = vector
        self.tag = f"cyclic(deg {product.degree})"

    def __call__(self, z, w):
        return cyclic_kernel(self.product, self.vector, z, w)

    def gram(self, points) -> np.ndarray:
        z = check_in_disk(points, "points")
        vz = self.vector.evaluate(z)
        bz = self.product(z)
        g = vz[:, None] * np.conj(vz)[None, :] + (
            bz[:, None] * np.conj(bz)[None, :]
        ) / (1.0 - z[:, None] * np.conj(z)[None, :])
        return 0.5 * (g + g.conj().T)


class OuterFunction:
    """Outer function determined by boundary log-modulus samples.

    Interior evaluation exponentiates the quadrature Herglotz integral of
    log p; boundary values at the rule's own nodes come from the discrete
    conjugate function, so |g|^2 reproduces p there to rounding.  The phase
    is normalized by g(0) > 0.  Interior evaluation is capped at a radius
    below 1 (default 0.995) to keep the Herglotz kernel well conditioned.
    """

    def __init__(self, rule: QuadratureRule, log_modulus: np.ndarray,
                 max_eval_radius: float = 0.995):
        self.rule = rule
        self.log_modulus = np.asarray(log_modulus, dtype=float)
        self.max_eval_radius = float(max_eval_radius)
        self._boundary = None

    @property
    def value_at_origin(self) -> float:
        return float(np.exp(0.5 * np.mean(self.log_modulus)))

    def __call__(self, z):
        zz = np.atleast_1d(np.asarray(z, dtype=complex))
        if np.any(np.abs(zz) > self.max_eval_radius):
            raise ValueError(
                f"evaluation radius capped at {self.max_eval_radius}; "
                f"got modulus {float(np.abs(zz).max())}"
            )
        bnd = self.rule.boundary_points
        # chunked so grid-sized requests do not allocate a grid-by-rule matrix
        flat = zz.reshape(-1)
        res = np.empty(flat.size, dtype=complex)
        for start in range(0, flat.size, 256):
            blk = flat[start:start + 256, None]
            herglotz = (bnd[None, :] + blk) / (bnd[None, :] - blk)
            res[start:start + 256] = np.exp(
                0.5 * np.mean(herglotz * self.log_modulus[None, :], axis=1)
            )
        out = res.reshape(zz.shape)
        return out if np.asarray(z).shape else complex(out[0])

    def boundary_values(self) -> np.ndarray:
        """g at the rule's nodes via the discrete conjugate function."""
        if self._boundary is None:
            u = 0.5 * self.log_modulus
            coeffs = np.fft.fft(u)
            n = u.size
            mult = np.zeros(n, dtype=complex)
            mult[1:n // 2] = -1j
            mult[n // 2 + 1:] = 1j
            v = np.fft.ifft(mult * coeffs).real
            self._boundary = np.exp(u + 1j * v)
        return self._boundary


def outer_from_modulus(samples, rule: QuadratureRule,
                       max_eval_radius: float = 0.995) -> OuterFunction:
    """Outer function g with |g|^2 = p from boundary samples p(t_k) > 0.

    Raises NotLogIntegrable when any sample is nonpositive or its log is
    not finite.
    """
    p = np.asarray(samples, dtype=float)
    if p.shape != rule.nodes.shape:
        raise ValueError(f"expected {rule.node_count} samples, got {p.size}")
    if np.any(p <= 0.0) or not np.all(np.isfinite(p)):
        raise NotLogIntegrable("boundary modulus samples must be strictly positive")
    logp = np.log(p)
    if not np.all(np.isfinite(logp)):
        raise NotLogIntegrable("log of boundary modulus is not finite at every node")
    return OuterFunction(rule, logp, max_eval_radius)


def sample_model_sphere(product: BlaschkeProduct, count: int, seed: int):
    """Deterministic low-discrepancy unit vectors in the model space.

    A scrambled Sobol sequence in 2d real dimensions is pushed through the
    normal quantile and normalized, giving a well-spread deterministic
    sample of the unit sphere parameterizing the cyclic kernel family.
    """
    if count < 1:
        raise ValueError("count must be at least 1")
    basis = tm_basis(product)
    d = basis.dimension
    sampler = qmc.Sobol(d=2 * d, scramble=True, seed=int(seed))
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", UserWarning)
        u = sampler.random(count)
    u = np.clip(u, 1e-12, 1.0 - 1e-12)
    normals = ndtri(u)
    vecs = normals[:, :d] + 1j * normals[:, d:]
    out = []
    for row in vecs:
        nrm = np.linalg.norm(row)
        if nrm < 1e-12:
            row = np.zeros(d, dtype=complex)
            row[0] = 1.0
            nrm = 1.0
        out.append(ModelVector(basis, row / nrm))
    return out
