"""Alternating-projection sequences and the two analytic update formulas.

``run_ap`` drives the hot kernel loop and returns an immutable trace; the
rest of the module verifies the parameter-space descriptions of one AP step:
the eigenvalue formula on an orthogonal basis, and the rank-1 chart relation
M(x)(p~ - p) + grad 1/2 d^2(psi(x), E) = 0.
"""

from dataclasses import dataclass

import numpy as np

from . import kernels
from .symcore import (EigenSolverError, JACOBI_MAX_SWEEPS,
                      JACOBI_TOL_FACTOR, check_sym, frob_inner, frob_norm,
                      project_affine, project_psd)

_STOP_NAMES = {kernels.STOP_MAX_ITER: "max_iter",
               kernels.STOP_TOL: "tol",
               kernels.STOP_STAGNATION: "stagnation"}


class EigenCrossingError(RuntimeError):
    """A finite-difference stencil straddles an eigenvalue sign change."""


class RankOneError(ValueError):
    """The intermediate PSD projection does not have rank one."""


def default_stride(max_iter):
    return 1 if max_iter <= 1000 else 1000


@dataclass(frozen=True)
class APTrace:
    """Per-iteration log of one alternating-projection run.

    ``dists[k]`` is the Frobenius distance of iterate k to the target and
    ``psd_ranks[k]`` the rank of its PSD projection; full coefficient vectors
    are kept every ``stride`` iterations (``sample_ks`` / ``sample_coeffs``).
    """

    plane: object
    dists: np.ndarray
    psd_ranks: np.ndarray
    sample_ks: np.ndarray
    sample_coeffs: np.ndarray
    converged: bool
    stop_reason: str

    def __len__(self):
        return len(self.dists)

    def iterates(self):
        """(k, coeffs, dist, psd_rank) rows at the sampled iterations."""
        for i, k in enumerate(self.sample_ks):
            yield int(k), self.sample_coeffs[i], float(self.dists[k]), \
                int(self.psd_ranks[k])


def ap_step(E, U):
    """One alternating-projection step P_E(P_psd(U)).

    Returns (next iterate, rank of the intermediate PSD projection).
    """
    V, rank = project_psd(U)
    W, _ = project_affine(E, V)
    return W, rank


def run_ap(E, p0, max_iter, tol, stride=None, target=None):
    """Iterate U <- P_E(P_psd(U)) from phi(p0) and record an APTrace.

    Stops on dist < tol, on max_iter, or once the distance stagnates (less
    than 1e-16 relative decrease for 100 consecutive steps).
    """
    if max_iter < 1:
        raise ValueError("max_iter must be >= 1")
    if tol < 0:
        raise ValueError("tol must be >= 0")
    p0 = np.asarray(p0, dtype=float)
    if p0.shape != (E.dim,):
        raise ValueError(f"expected {E.dim} starting coefficients")
    if stride is None:
        stride = default_stride(max_iter)
    target = E.anchor if target is None else check_sym(target)

    dists, ranks, ks, coeffs, n_rows, stop, eig_ok = kernels.ap_iterate(
        E.anchor, E.basis, E.chol, p0, max_iter, tol, target, stride,
        JACOBI_TOL_FACTOR, JACOBI_MAX_SWEEPS)
    if not eig_ok:
        raise EigenSolverError("eigensolver failed to converge during the run")

    def own(a):
        out = np.array(a)
        out.setflags(write=False)
        return out

    return APTrace(plane=E, dists=own(dists[:n_rows]),
                   psd_ranks=own(ranks[:n_rows]), sample_ks=own(ks),
                   sample_coeffs=own(coeffs),
                   converged=(stop == kernels.STOP_TOL),
                   stop_reason=_STOP_NAMES[int(stop)])


# --- eigenvalue formula ----------------------------------------------------

def _require_orthogonal(E, tol=1e-10):
    m = E.dim
    scale = max(frob_norm(B) for B in E.basis)
    for i in range(m):
        for j in range(i + 1, m):
            if abs(E.gram[i, j]) > tol * scale * scale:
                raise ValueError(
                    "operation needs a pairwise-orthogonal basis; call "
                    "symcore.orthogonalize first")


def _negative_energy(E, p):
    """1/2 sum of squared negative eigenvalues of phi(p) and their count.

    Eigenvalues inside the rounding band |lam| <= 1e-12 max(1, |lam_max|)
    count as zero, so structurally-zero spectra do not flip the count.
    """
    lam, _, ok = kernels.jacobi_eigh(
        E.point(p), JACOBI_TOL_FACTOR, JACOBI_MAX_SWEEPS)
    if not ok:
        raise EigenSolverError("eigensolver failed to converge")
    band = 1e-12 * max(1.0, float(np.max(np.abs(lam))))
    neg = lam[lam < -band]
    return 0.5 * float(np.sum(neg * neg)), len(neg)


def eigenvalue_formula_step(E, p, fd_step=1e-5, max_retries=10):
    """Parameter update p_i - (1/||B_i||^2) d/dp_i [1/2 sum_{lam<0} lam^2].

    The derivative is taken by central finite differences; the set of
    negative eigenvalues must be stable across each stencil, otherwise the
    step is halved (up to ``max_retries`` times) before giving up.
    """
    _require_orthogonal(E)
    p = np.asarray(p, dtype=float)
    if fd_step <= 0:
        raise ValueError("fd_step must be positive")
    _, n_neg = _negative_energy(E, p)

    out = np.empty(E.dim)
    for i in range(E.dim):
        h = fd_step
        for _ in range(max_retries + 1):
            pp = p.copy(); pp[i] += h
            pm = p.copy(); pm[i] -= h
            ep, count_p = _negative_energy(E, pp)
            em, count_m = _negative_energy(E, pm)
            if count_p == n_neg == count_m:
                out[i] = p[i] - (ep - em) / (2.0 * h) / E.gram[i, i]
                break
            h *= 0.5
        else:
            raise EigenCrossingError(
                f"negative-eigenvalue set unstable near p along coordinate {i}")
    return out


# --- rank-1 chart ------------------------------------------------------------

def psi(x):
    """Rank-1 chart psi(x) = (1/x1) x x^T."""
    x = np.asarray(x, dtype=float)
    if x.shape != (3,):
        raise ValueError("x must be a 3-vector")
    if x[0] == 0.0:
        raise ValueError("psi requires x1 != 0")
    return np.outer(x, x) / x[0]


def psi_partial(x, k):
    """Exact partial derivative of psi with respect to x_k (k = 0, 1, 2)."""
    x = np.asarray(x, dtype=float)
    if x[0] == 0.0:
        raise ValueError("psi requires x1 != 0")
    D = np.zeros((3, 3))
    for i in range(3):
        for j in range(3):
            D[i, j] = ((x[j] if k == i else 0.0)
                       + (x[i] if k == j else 0.0)) / x[0]
            if k == 0:
                D[i, j] -= x[i] * x[j] / (x[0] * x[0])
    return D


def m_matrix(E, x):
    """Coupling matrix M(x) with entries <d_k psi(x), B_i>."""
    if E.n != 3 or E.dim != 3:
        raise ValueError("m_matrix needs a 3-plane in S^3")
    return np.array([[frob_inner(psi_partial(x, k), E.basis[i])
                      for i in range(3)] for k in range(3)])


def grad_half_dist2_psi(E, x):
    """Gradient in x of 1/2 d^2(psi(x), E), via the projection residual."""
    P = psi(x)
    R = P - project_affine(E, P)[0]
    return np.array([frob_inner(R, psi_partial(x, k)) for k in range(3)])


def extract_rank_one_param(V, u1_tol=1e-8):
    """Recover x with psi(x) = V from a rank-1 PSD matrix V = lam u u^T."""
    lam, vecs, ok = kernels.jacobi_eigh(
        check_sym(V), JACOBI_TOL_FACTOR, JACOBI_MAX_SWEEPS)
    if not ok:
        raise EigenSolverError("eigensolver failed to converge")
    u = vecs[:, 0]
    if abs(u[0]) < u1_tol:
        raise RankOneError("leading eigenvector has (near-)zero first component")
    if u[0] < 0:
        u = -u
    return lam[0] * u[0] * u


def rank_one_step_residual(E, p):
    """Residual of M(x)(p~ - p) + grad 1/2 d^2(psi(x), E) over one AP step.

    Requires an orthogonal basis and a rank-1 intermediate projection; the
    relation holds to rounding whenever those preconditions do.
    """
    _require_orthogonal(E)
    p = np.asarray(p, dtype=float)
    U = E.point(p)
    V, rank = project_psd(U)
    if rank != 1:
        raise RankOneError(f"PSD projection has rank {rank}, expected 1")
    x = extract_rank_one_param(V)
    p_next = E.coefficients(V)
    res = m_matrix(E, x) @ (p_next - p) + grad_half_dist2_psi(E, x)
    return float(np.linalg.norm(res))
