"""Finite-dimensional laboratory for the operator-distance formula.

Computes the distance from a matrix A to a subspace S of matrices two ways:
directly, by minimizing the operator norm of A + S over the subspace, and
dually, by maximizing |<(A (x) I) h1, h2>| over unit vectors with h2
orthogonal to (S (x) I) h1.  In finite dimensions the two agree; the tensor
factor of rank r = n1 already saturates the dual.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.optimize

__all__ = [
    "TruncatedDistanceProblem",
    "distance_primal",
    "distance_dual",
]


@dataclass
class TruncatedDistanceProblem:
    """Distance data: target A (n2 x n1), subspace basis, tensor rank r.

    The basis matrices must be linearly independent (Gram of vectorizations
    nonsingular within 1e-10) and r >= n1, which makes the dual formula
    exact at this truncation.
    """

    target: np.ndarray
    basis: tuple
    rank: int = 0

    def __post_init__(self):
        self.target = np.atleast_2d(np.asarray(self.target, dtype=complex))
        self.basis = tuple(np.asarray(b, dtype=complex) for b in self.basis)
        n2, n1 = self.target.shape
        for b in self.basis:
            if b.shape != (n2, n1):
                raise ValueError("basis matrices must match the target shape")
        if self.rank == 0:
            self.rank = n1
        if self.rank < n1:
            raise ValueError(f"tensor rank {self.rank} below n1 = {n1}")
        if self.basis:
            vecs = np.stack([b.reshape(-1) for b in self.basis])
            gram = vecs @ vecs.conj().T
            lam = float(np.linalg.eigvalsh(gram)[0])
            if lam <= 1e-10 * max(1.0, float(np.abs(gram).max())):
                raise ValueError(
                    f"basis matrices are not independent (Gram min eig {lam:.3e})"
                )

    @property
    def dims(self):
        return self.target.shape


def _combine(problem: TruncatedDistanceProblem, theta: np.ndarray) -> np.ndarray:
    m = problem.target.astype(complex).copy()
    for k, b in enumerate(problem.basis):
        m = m + (theta[2 * k] + 1j * theta[2 * k + 1]) * b
    return m


def _opnorm(m: np.ndarray) -> float:
    return float(np.linalg.svd(m, compute_uv=False)[0])


def _golden_min(fun, center: float, width: float = 1.0, iters: int = 40):
    """Golden-section minimum of a 1-D convex slice around center."""
    lo, hi = center - width, center + width
    f_center = fun(center)
    f_lo, f_hi = fun(lo), fun(hi)
    for _ in range(40):
        grew = False
        if f_lo < f_center:
            lo -= (hi - lo)
            f_lo = fun(lo)
            grew = True
        if f_hi < f_center:
            hi += (hi - lo)
            f_hi = fun(hi)
            grew = True
        if not grew:
            break
    ratio = (np.sqrt(5.0) - 1.0) / 2.0
    a, b = lo, hi
    c1 = b - ratio * (b - a)
    c2 = a + ratio * (b - a)
    f1, f2 = fun(c1), fun(c2)
    for _ in range(iters):
        if f1 <= f2:
            b, c2, f2 = c2, c1, f1
            c1 = b - ratio * (b - a)
            f1 = fun(c1)
        else:
            a, c1, f1 = c1, c2, f2
            c2 = a + ratio * (b - a)
            f2 = fun(c2)
    x = 0.5 * (a + b)
    return (x, fun(x)) if fun(x) < f_center else (center, f_center)


def _smoothed_polish(problem: TruncatedDistanceProblem, theta0: np.ndarray) -> np.ndarray:
    """L-BFGS descent on the soft-max of singular values, mu-continuation.

    The exponential smoothing of the largest singular value is convex and
    differentiable, so this reliably escapes the nonsmooth ties where pure
    coordinate descent stalls; the final error is of order mu * log(n).
    """
    s = len(problem.basis)

    def f_mu(theta, mu):
        m = _combine(problem, theta)
        u, sv, vh = np.linalg.svd(m)
        shifted = (sv - sv[0]) / mu
        weights = np.exp(shifted)
        weights /= weights.sum()
        val = mu * np.log(np.sum(np.exp(shifted))) + sv[0]
        grad = np.zeros(2 * s)
        for k, b in enumerate(problem.basis):
            inner = np.array([np.vdot(u[:, i], b @ vh[i].conj()) for i in range(sv.size)])
            grad[2 * k] = float(np.sum(weights * inner.real))
            grad[2 * k + 1] = float(np.sum(weights * (-inner.imag)))
        return val, grad

    theta = np.asarray(theta0, dtype=float).copy()
    for mu in (1e-2, 1e-4, 1e-6, 1e-8):
        res = scipy.optimize.minimize(
            lambda t: f_mu(t, mu), theta, jac=True, method="L-BFGS-B",
            options=dict(maxiter=500, ftol=1e-18, gtol=1e-14),
        )
        theta = res.x
    return theta


def distance_primal(problem: TruncatedDistanceProblem, tol: float = 1e-8,
                    restarts: int = 2, seed: int = 0) -> float:
    """Distance by direct minimization of the operator norm over the span.

    Cyclic coordinate descent (golden-section line minimizations in the
    real coordinates of the coefficients) with random restarts, followed by
    a smoothed-norm descent that resolves the singular-value ties at which
    coordinate steps alone can stall.  The returned value is the exact
    operator norm at the best coefficients found, hence always an upper
    bound of the true distance.
    """
    s = len(problem.basis)
    if s == 0:
        return _opnorm(problem.target)
    rng = np.random.default_rng(seed)
    best_val = np.inf
    for trial in range(max(1, restarts)):
        theta = np.zeros(2 * s) if trial == 0 else rng.normal(size=2 * s)
        val = _opnorm(_combine(problem, theta))
        for _ in range(12):
            gain = 0.0
            for i in range(2 * s):
                def slice_fun(x, i=i):
                    t = theta.copy()
                    t[i] = x
                    return _opnorm(_combine(problem, t))

                xi, vi = _golden_min(slice_fun, theta[i])
                if vi < val - 1e-15:
                    gain += val - vi
                    theta[i] = xi
                    val = vi
            if gain < max(tol * 1e-3, 1e-13):
                break
        theta = _smoothed_polish(problem, theta)
        val = _opnorm(_combine(problem, theta))
        if val < best_val:
            best_val = val
    return float(best_val)


def distance_dual(problem: TruncatedDistanceProblem, tol: float = 1e-8,
                  starts: int = 64, steps: int = 500, seed: int = 0) -> float:
    """Distance by the cyclic-vector dual formula.

    Maximizes phi(h1) = || P_perp (A (x) I) h1 || over unit h1, where
    P_perp projects onto the orthocomplement of span{(S_k (x) I) h1}; the
    optimal h2 is the normalized residual, so every iterate yields a valid
    feasible value and the result is always a lower bound of the distance.

    A batched multistart gradient ascent explores the sphere; the best
    starts are polished by quasi-Newton ascent of the scale-invariant form
    phi(h)/||h||, which is smooth away from rank drops.
    """
    n2, n1 = problem.dims
    r = problem.rank
    s = len(problem.basis)
    big_b = np.kron(problem.target, np.eye(r))
    big_s = [np.kron(b, np.eye(r)) for b in problem.basis]
    dim = n1 * r

    def residual_split(h):
        bh = big_b @ h
        if not s:
            return bh, None
        w = np.column_stack([c @ h for c in big_s])
        beta, *_ = np.linalg.lstsq(w, bh, rcond=None)
        return bh - w @ beta, beta

    def phi_grad(h):
        y, beta = residual_split(h)
        phi = float(np.linalg.norm(y))
        if phi < 1e-300:
            return 0.0, np.zeros(dim, dtype=complex)
        g = big_b.conj().T @ y
        if s:
            for a, c in enumerate(big_s):
                g -= np.conj(beta[a]) * (c.conj().T @ y)
        return phi, g / phi

    rng = np.random.default_rng(seed)
    h = rng.normal(size=(dim, starts)) + 1j * rng.normal(size=(dim, starts))
    h /= np.linalg.norm(h, axis=0, keepdims=True)

    def phi_batch_grad(hmat):
        bh = big_b @ hmat
        if s:
            w = np.stack([c @ hmat for c in big_s], axis=1)
            gram = np.einsum("nak,nbk->kab", w.conj(), w)
            rhs = np.einsum("nak,nk->ka", w.conj(), bh)
            beta = np.linalg.solve(gram + 1e-30 * np.eye(s)[None], rhs[..., None])[..., 0]
            y = bh - np.einsum("nak,ka->nk", w, beta)
        else:
            y = bh
            beta = None
        phis = np.linalg.norm(y, axis=0)
        grads = big_b.conj().T @ y
        if s:
            for a, c in enumerate(big_s):
                grads -= np.conj(beta[:, a])[None, :] * (c.conj().T @ y)
        grads /= np.maximum(phis, 1e-300)[None, :]
        return phis, grads

    step = np.full(starts, 0.15)
    phis, grads = phi_batch_grad(h)
    for _ in range(steps):
        along = np.real(np.sum(np.conj(h) * grads, axis=0))
        tangent = grads - h * along[None, :]
        if float(np.linalg.norm(tangent, axis=0).max()) < 1e-13:
            break
        trial = h + step[None, :] * tangent
        trial /= np.linalg.norm(trial, axis=0, keepdims=True)
        phis_new, grads_new = phi_batch_grad(trial)
        accept = phis_new >= phis
        step = np.where(accept, step * 1.1, step * 0.5)
        h = np.where(accept[None, :], trial, h)
        grads = np.where(accept[None, :], grads_new, grads)
        phis = np.maximum(phis, phis_new)
        if float(step.max()) < 1e-12:
            break

    best = float(phis.max())
    polish = min(8, starts)
    for j in np.argsort(phis)[::-1][:polish]:
        h0 = h[:, j]
        x0 = np.concatenate([h0.real, h0.imag])

        def neg_quotient(x):
            hh = x[:dim] + 1j * x[dim:]
            nh = float(np.linalg.norm(hh))
            phi, g = phi_grad(hh)
            if nh < 1e-300 or phi == 0.0:
                return 0.0, np.zeros_like(x)
            val = phi / nh
            gq = g / nh - (phi / nh ** 3) * hh
            return -val, -np.concatenate([gq.real, gq.imag])

        res = scipy.optimize.minimize(
            neg_quotient, x0, jac=True, method="L-BFGS-B",
            options=dict(maxiter=300, ftol=1e-18, gtol=1e-14),
        )
        best = max(best, float(-res.fun))
    return best
