"""Hot numerical kernels with a numba-compiled and a plain-Python variant.

Every function below is written in loop-based, nopython-compatible style.
At import time the module decorates them with ``numba.njit`` unless the
environment variable ``APCONE_NUMBA`` disables it (``0``/``false``/``no``) or
numba is not installed; ``APCONE_NUMBA=1`` makes numba mandatory.  Both paths
execute the identical statements, so results agree bit for bit.

``benchmarks/bench_backends.py`` times the two paths against each other.
"""

import os

import numpy as np

_FLAG = os.environ.get("APCONE_NUMBA", "auto").strip().lower()

USING_NUMBA = False
if _FLAG in ("0", "false", "no", "off"):
    pass
else:
    try:
        from numba import njit as _njit

        USING_NUMBA = True
    except ImportError:
        if _FLAG in ("1", "true", "yes", "on"):
            raise


def _jit(func):
    if USING_NUMBA:
        return _njit(cache=True, fastmath=False)(func)
    return func


# Stop codes reported by ap_iterate.
STOP_MAX_ITER = 0
STOP_TOL = 1
STOP_STAGNATION = 2

_STAGNATION_REL = 1e-16
_STAGNATION_RUN = 100


@_jit
def sym_inner(a, b):
    """Frobenius inner product sum_ij a_ij b_ij."""
    n = a.shape[0]
    acc = 0.0
    for i in range(n):
        for j in range(n):
            acc += a[i, j] * b[i, j]
    return acc


@_jit
def fro_norm(a):
    return np.sqrt(sym_inner(a, a))


@_jit
def jacobi_eigh(a, tol_factor, max_sweeps):
    """Cyclic Jacobi diagonalization of a symmetric matrix.

    Sweeps rotate away every off-diagonal pair until the off-diagonal
    Frobenius norm falls below ``tol_factor`` times the input norm.  Returns
    ``(eigenvalues, eigenvectors, converged)`` with eigenvalues sorted in
    descending order, eigenvectors as matching orthonormal columns whose
    first component larger than 1e-12 in magnitude is positive.
    """
    n = a.shape[0]
    A = a.copy()
    V = np.eye(n)
    threshold = tol_factor * fro_norm(a)

    converged = False
    sweep = 0
    while sweep <= max_sweeps:
        off = 0.0
        for i in range(n):
            for j in range(i + 1, n):
                off += 2.0 * A[i, j] * A[i, j]
        if np.sqrt(off) <= threshold:
            converged = True
            break
        if sweep == max_sweeps:
            break
        sweep += 1
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = A[p, q]
                if apq == 0.0:
                    continue
                theta = (A[q, q] - A[p, p]) / (2.0 * apq)
                if theta >= 0.0:
                    t = 1.0 / (theta + np.sqrt(1.0 + theta * theta))
                else:
                    t = -1.0 / (-theta + np.sqrt(1.0 + theta * theta))
                c = 1.0 / np.sqrt(1.0 + t * t)
                s = t * c
                app = A[p, p]
                aqq = A[q, q]
                A[p, p] = app - t * apq
                A[q, q] = aqq + t * apq
                A[p, q] = 0.0
                A[q, p] = 0.0
                for i in range(n):
                    if i != p and i != q:
                        aip = A[i, p]
                        aiq = A[i, q]
                        A[i, p] = c * aip - s * aiq
                        A[p, i] = A[i, p]
                        A[i, q] = s * aip + c * aiq
                        A[q, i] = A[i, q]
                for i in range(n):
                    vip = V[i, p]
                    viq = V[i, q]
                    V[i, p] = c * vip - s * viq
                    V[i, q] = s * vip + c * viq

    evals = np.empty(n)
    for i in range(n):
        evals[i] = A[i, i]
    order = np.argsort(-evals)
    evals_sorted = np.empty(n)
    vecs = np.empty((n, n))
    for k in range(n):
        col = order[k]
        evals_sorted[k] = evals[col]
        sign = 1.0
        for i in range(n):
            if abs(V[i, col]) > 1e-12:
                if V[i, col] < 0.0:
                    sign = -1.0
                break
        for i in range(n):
            vecs[i, k] = sign * V[i, col]
    return evals_sorted, vecs, converged


@_jit
def psd_project(a, tol_factor, max_sweeps):
    """Project onto the PSD cone by clipping negative eigenvalues.

    Eigenvalues above tau = 1e-12 * max(1, lambda_max) are retained; returns
    ``(projection, rank, converged)``.
    """
    n = a.shape[0]
    evals, vecs, converged = jacobi_eigh(a, tol_factor, max_sweeps)
    tau = 1e-12 * max(1.0, evals[0])
    P = np.zeros((n, n))
    rank = 0
    for k in range(n):
        lam = evals[k]
        if lam > tau:
            rank += 1
            for i in range(n):
                for j in range(n):
                    P[i, j] += lam * vecs[i, k] * vecs[j, k]
    # rebalance round-off so symmetry stays exact
    for i in range(n):
        for j in range(i + 1, n):
            m = 0.5 * (P[i, j] + P[j, i])
            P[i, j] = m
            P[j, i] = m
    return P, rank, converged


@_jit
def chol_solve(L, b):
    """Solve (L L^T) x = b for a lower-triangular Cholesky factor L."""
    m = L.shape[0]
    y = np.empty(m)
    for i in range(m):
        acc = b[i]
        for j in range(i):
            acc -= L[i, j] * y[j]
        y[i] = acc / L[i, i]
    x = np.empty(m)
    for i in range(m - 1, -1, -1):
        acc = y[i]
        for j in range(i + 1, m):
            acc -= L[j, i] * x[j]
        x[i] = acc / L[i, i]
    return x


@_jit
def basis_coefficients(L, basis, anchor, X):
    """Gram-system coefficients s with sum_i s_i B_i ~ X - anchor."""
    m = basis.shape[0]
    b = np.empty(m)
    for i in range(m):
        b[i] = sym_inner(basis[i], X - anchor)
    return chol_solve(L, b)


@_jit
def affine_point(anchor, basis, coeffs):
    """anchor + sum_i coeffs_i basis_i."""
    n = anchor.shape[0]
    U = anchor.copy()
    for i in range(basis.shape[0]):
        ci = coeffs[i]
        for r in range(n):
            for c in range(n):
                U[r, c] += ci * basis[i, r, c]
    return U


@_jit
def ap_iterate(anchor, basis, L, p0, max_iter, tol, target, stride,
               tol_factor, max_sweeps):
    """Run the alternating-projection loop U <- P_E(P_psd(U)).

    Records the distance to ``target`` and the PSD-projection rank at every
    iterate, and the affine coefficients every ``stride`` iterations (plus
    the final iterate).  Returns
    ``(dists, ranks, sample_ks, sample_coeffs, n_rows, stop_code, eig_ok)``
    where only the first ``n_rows`` entries of the per-step arrays are valid.
    """
    m = basis.shape[0]
    dists = np.empty(max_iter + 1)
    ranks = np.empty(max_iter + 1, dtype=np.int64)
    n_samples_cap = max_iter // stride + 2
    sample_ks = np.empty(n_samples_cap, dtype=np.int64)
    sample_coeffs = np.empty((n_samples_cap, m))
    n_samples = 0

    p = p0.copy()
    U = affine_point(anchor, basis, p)
    dists[0] = fro_norm(U - target)

    stop_code = STOP_MAX_ITER
    eig_ok = True
    stagnant = 0
    k = 0
    while True:
        V, rank, ok = psd_project(U, tol_factor, max_sweeps)
        if not ok:
            eig_ok = False
        ranks[k] = rank
        if k % stride == 0:
            sample_ks[n_samples] = k
            for i in range(m):
                sample_coeffs[n_samples, i] = p[i]
            n_samples += 1
        if dists[k] < tol:
            stop_code = STOP_TOL
            break
        if k == max_iter:
            stop_code = STOP_MAX_ITER
            break
        if stagnant >= _STAGNATION_RUN:
            stop_code = STOP_STAGNATION
            break
        p = basis_coefficients(L, basis, anchor, V)
        U = affine_point(anchor, basis, p)
        k += 1
        dists[k] = fro_norm(U - target)
        drop = dists[k - 1] - dists[k]
        if drop < _STAGNATION_REL * max(dists[k - 1], 1e-300):
            stagnant += 1
        else:
            stagnant = 0

    if sample_ks[n_samples - 1] != k:
        sample_ks[n_samples] = k
        for i in range(m):
            sample_coeffs[n_samples, i] = p[i]
        n_samples += 1
    return (dists[:k + 1], ranks[:k + 1], sample_ks[:n_samples],
            sample_coeffs[:n_samples], k + 1, stop_code, eig_ok)


@_jit
def recurrence_sequence(C, K, q, x0, n, mode):
    """Iterate x <- x (1 - C x^q +/- K x^(q+1)).

    ``mode``: 0 adds the K term, 1 subtracts it, 2 alternates starting with +.
    """
    xs = np.empty(n + 1)
    xs[0] = x0
    x = x0
    for k in range(n):
        xq = x ** q
        sign = 1.0
        if mode == 1 or (mode == 2 and k % 2 == 1):
            sign = -1.0
        x = x * (1.0 - C * xq + sign * K * xq * x)
        xs[k + 1] = x
    return xs
