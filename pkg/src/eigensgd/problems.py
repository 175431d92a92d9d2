"""Synthetic least-squares instances with exactly known singular structure.

Problems are built from a prescribed spectrum as A = U diag(sigma) V^T with
seeded orthonormal factors, so the minimizer, every right-singular direction,
and all scalar constants used by the convergence bounds are known exactly.

Row indices and singular-direction (probe) indices are 1-based throughout the
package, matching the usual linear-algebra convention sigma_1 >= ... >= sigma_N.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass

import numpy as np

CONSTRUCTION_RTOL = 1e-10


class ProblemConstructionError(RuntimeError):
    """A construction-time invariant check failed."""


@dataclass(frozen=True)
class SpectrumSpec:
    """Prescription for the singular spectrum of a synthetic matrix.

    The generated spectrum is sorted descending with sigma_1 = sigma_max and
    sigma_N = sigma_min, interpolated linearly or geometrically in between.
    """

    rows: int
    cols: int
    sigma_min: float
    sigma_max: float
    spacing: str = "linear"
    seed: int = 0

    def __post_init__(self):
        if self.cols < 1 or self.rows < self.cols:
            raise ValueError(f"need rows >= cols >= 1, got {self.rows}x{self.cols}")
        if not (0.0 < self.sigma_min <= self.sigma_max):
            raise ValueError(
                f"need 0 < sigma_min <= sigma_max, got [{self.sigma_min}, {self.sigma_max}]"
            )
        if self.spacing not in ("linear", "geometric"):
            raise ValueError(f"unknown spacing {self.spacing!r}")

    def spectrum(self) -> np.ndarray:
        """Descending singular values, length ``cols``."""
        if self.cols == 1:
            return np.array([self.sigma_max])
        if self.spacing == "linear":
            return np.linspace(self.sigma_max, self.sigma_min, self.cols)
        return np.geomspace(self.sigma_max, self.sigma_min, self.cols)


def random_orthonormal(dim, cols, seed):
    """Seeded matrix Q of shape (dim, cols) with Q^T Q = I.

    Orthonormalizes a Gaussian matrix by QR with the sign convention that the
    triangular factor has nonnegative diagonal, so the result is unique and
    bitwise reproducible for a fixed seed.
    """
    if cols > dim:
        raise ValueError(f"cols={cols} exceeds dim={dim}")
    rng = np.random.default_rng(seed)
    g = rng.standard_normal((dim, cols))
    q, r = np.linalg.qr(g)
    signs = np.sign(np.diag(r))
    signs[signs == 0] = 1.0
    q = q * signs
    if np.max(np.abs(q.T @ q - np.eye(cols))) > 1e-12:
        raise ProblemConstructionError("orthonormalization failed")
    return q


@dataclass(frozen=True)
class SyntheticProblem:
    """A least-squares instance min_x 0.5*||Ax - b||^2 with known SVD.

    Attributes:
        a: the M x N coefficient matrix (A = u @ diag(sigma) @ v.T).
        b: right-hand side, length M.
        u: thin left orthonormal factor, M x N.
        sigma: descending singular values, length N.
        v: right orthonormal factor, N x N.
        x_star: the least-squares minimizer.
        f_star: minimum objective value, 0.5*||A x_star - b||^2.
        consistent: True iff b lies in range(A) (f_star == 0).
    """

    a: np.ndarray
    b: np.ndarray
    u: np.ndarray
    sigma: np.ndarray
    v: np.ndarray
    x_star: np.ndarray
    f_star: float
    consistent: bool

    @property
    def m(self) -> int:
        return self.a.shape[0]

    @property
    def n(self) -> int:
        return self.a.shape[1]

    def digest(self) -> str:
        """Short content hash identifying the instance."""
        h = hashlib.sha256()
        h.update(np.ascontiguousarray(self.a).tobytes())
        h.update(np.ascontiguousarray(self.b).tobytes())
        return h.hexdigest()[:16]

    def component(self, x, ell):
        """Signed error component <x - x_star, v_ell>, ell 1-based."""
        return component(self, x, ell)


def component(p: SyntheticProblem, x, ell: int) -> float:
    """Signed projection of the error x - x_star onto the ell-th right-singular
    direction of A (1 <= ell <= N)."""
    if not 1 <= ell <= p.n:
        raise IndexError(f"probe index {ell} outside 1..{p.n}")
    return float(p.v[:, ell - 1] @ (np.asarray(x) - p.x_star))


def _check(cond, what):
    if not cond:
        raise ProblemConstructionError(f"invariant violated: {what}")


def build_problem(spec: SpectrumSpec, seed: int, noise_level: float | None = None) -> SyntheticProblem:
    """Construct a synthetic problem from a spectrum prescription.

    ``spec.seed`` seeds the orthonormal factors; ``seed`` seeds the generated
    true solution and (for inconsistent problems) the residual perturbation.

    With ``noise_level=None`` the problem is consistent: b = A x_true and
    x_star = x_true exactly.  Otherwise b = A x_true + r where r is a Gaussian
    perturbation rescaled so that the norm of its component orthogonal to
    range(A) equals noise_level * ||A x_true||; x_star is then recomputed from
    the pseudoinverse.
    """
    m, n = spec.rows, spec.cols
    sigma = spec.spectrum()
    u = random_orthonormal(m, n, np.random.SeedSequence([spec.seed, 0]))
    v = random_orthonormal(n, n, np.random.SeedSequence([spec.seed, 1]))
    a = (u * sigma) @ v.T

    rng = np.random.default_rng(np.random.SeedSequence([seed, 2]))
    x_true = rng.standard_normal(n)
    ax_true = a @ x_true

    if noise_level is None:
        b = ax_true
        x_star = x_true
        f_star = 0.0
        consistent = True
    else:
        if noise_level <= 0:
            raise ValueError("noise_level must be positive")
        g = rng.standard_normal(m)
        g_perp = g - u @ (u.T @ g)
        norm_perp = float(np.linalg.norm(g_perp))
        if norm_perp == 0.0:
            raise ProblemConstructionError("degenerate perturbation draw")
        r = g * (noise_level * float(np.linalg.norm(ax_true)) / norm_perp)
        b = ax_true + r
        # pseudoinverse solution through the known factors
        x_star = v @ ((u.T @ b) / sigma)
        resid = b - a @ x_star
        f_star = 0.5 * float(resid @ resid)
        consistent = False

    p = SyntheticProblem(a=a, b=b, u=u, sigma=sigma, v=v, x_star=x_star,
                         f_star=f_star, consistent=consistent)
    _validate_problem(p)
    return p


def _validate_problem(p: SyntheticProblem):
    tol = CONSTRUCTION_RTOL
    a_norm = np.linalg.norm(p.a)
    _check(np.linalg.norm((p.u * p.sigma) @ p.v.T - p.a) <= tol * a_norm,
           "SVD reconstruction")
    _check(np.max(np.abs(p.a @ p.v - p.u * p.sigma)) <= tol * p.sigma[0],
           "A v_ell = sigma_ell u_ell")
    atb = p.a.T @ p.b
    grad = p.a.T @ (p.a @ p.x_star) - atb
    _check(np.linalg.norm(grad) <= tol * max(np.linalg.norm(atb), 1.0),
           "normal equations at x_star")
    if p.consistent:
        _check(abs(p.f_star) <= tol, "consistent problem has F_star = 0")
        _check(np.linalg.norm(p.a @ p.x_star - p.b) <= tol * np.linalg.norm(p.b),
               "consistent problem has zero residual")
    else:
        _check(p.f_star > 0, "inconsistent problem has F_star > 0")


@dataclass(frozen=True)
class ProblemConstants:
    """Scalar constants feeding the second-moment bounds.

    sigma_noise_sq is the mean over rows of ||grad f_i(x_star)||^2 with
    f_i(x) = (M/2)(a_i^T x - b_i)^2; it vanishes on consistent problems.
    ``m`` and ``f_star`` are carried along so the coefficient functions can be
    built from the constants alone.
    """

    l_tilde: float
    c_a: float
    frob_sq: float
    sigma_noise_sq: float
    sigma_min_sq: float
    sigma_max_sq: float
    m: int
    f_star: float


def compute_constants(p: SyntheticProblem) -> ProblemConstants:
    """All scalar constants of a problem used by the theory module."""
    row_sq = np.einsum("ij,ij->i", p.a, p.a)
    resid = p.a @ p.x_star - p.b
    # grad f_i(x_star) = M (a_i^T x_star - b_i) a_i
    noise = float(np.mean((p.m * resid) ** 2 * row_sq))
    return ProblemConstants(
        l_tilde=float(np.max(row_sq)),
        c_a=float(p.sigma[0] ** 2 / p.sigma[-1] ** 2),
        frob_sq=float(np.sum(p.sigma**2)),
        sigma_noise_sq=noise,
        sigma_min_sq=float(p.sigma[-1] ** 2),
        sigma_max_sq=float(p.sigma[0] ** 2),
        m=p.m,
        f_star=p.f_star,
    )
