"""Symmetric-matrix core: Frobenius geometry, eigendecomposition, and the
two projections (PSD cone, affine subspace) everything else composes.

Matrices are plain float64 ndarrays kept exactly symmetric; an affine
subspace carries its anchor, a (not necessarily orthogonal) basis of the
direction space, the Cholesky factor of the basis Gram matrix, and an
orthogonal basis of the Frobenius-orthogonal complement.
"""

from dataclasses import dataclass, field

import numpy as np

from . import kernels

JACOBI_TOL_FACTOR = 1e-14
JACOBI_MAX_SWEEPS = 100
COMPLEMENT_DROP_TOL = 1e-10


class EigenSolverError(RuntimeError):
    """Jacobi sweeps exhausted without reaching the convergence threshold."""


class DependentBasisError(ValueError):
    """Basis matrices fed to an affine subspace are linearly dependent."""


def sym_matrix(entries):
    """Build an exactly symmetric float64 matrix, upper triangle authoritative."""
    a = np.array(entries, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {a.shape}")
    u = np.triu(a)
    return u + np.triu(a, 1).T


def check_sym(a):
    a = np.asarray(a, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {a.shape}")
    if not np.array_equal(a, a.T):
        raise ValueError("matrix is not exactly symmetric")
    return a


def frob_inner(a, b):
    """Frobenius inner product <A, B> = sum_ij A_ij B_ij."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if a.shape != b.shape:
        raise ValueError(f"dimension mismatch: {a.shape} vs {b.shape}")
    return float(kernels.sym_inner(a, b))


def frob_norm(a):
    return float(kernels.fro_norm(np.asarray(a, dtype=float)))


@dataclass(frozen=True)
class EigDecomp:
    """Eigenvalues sorted descending with matching orthonormal columns."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    def reconstruct(self):
        return (self.eigenvectors * self.eigenvalues) @ self.eigenvectors.T


def eig_sym(a):
    """Symmetric eigendecomposition via cyclic Jacobi rotations."""
    a = check_sym(a)
    evals, vecs, converged = kernels.jacobi_eigh(
        a, JACOBI_TOL_FACTOR, JACOBI_MAX_SWEEPS)
    if not converged:
        raise EigenSolverError(
            f"Jacobi sweeps did not converge within {JACOBI_MAX_SWEEPS} sweeps")
    return EigDecomp(evals, vecs)


def project_psd(a):
    """Project onto the PSD cone; returns (projection, retained rank)."""
    a = check_sym(a)
    P, rank, converged = kernels.psd_project(
        a, JACOBI_TOL_FACTOR, JACOBI_MAX_SWEEPS)
    if not converged:
        raise EigenSolverError(
            f"Jacobi sweeps did not converge within {JACOBI_MAX_SWEEPS} sweeps")
    return P, int(rank)


def _standard_sym_basis(n):
    """Orthonormal basis of S^n: E_ii then (E_ij + E_ji)/sqrt(2), i<j."""
    out = []
    for i in range(n):
        M = np.zeros((n, n))
        M[i, i] = 1.0
        out.append(M)
    for i in range(n):
        for j in range(i + 1, n):
            M = np.zeros((n, n))
            M[i, j] = M[j, i] = 1.0 / np.sqrt(2.0)
            out.append(M)
    return out


def _freeze(a):
    a = np.array(a, dtype=float)  # private copy
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class AffineSubspace:
    """Affine subspace anchor + span{basis} of S^n with projection data."""

    anchor: np.ndarray
    basis: np.ndarray          # (m, n, n)
    gram: np.ndarray           # (m, m)
    chol: np.ndarray           # lower Cholesky factor of gram
    complement: np.ndarray = field(repr=False)  # (n(n+1)/2 - m, n, n)

    @property
    def n(self):
        return self.anchor.shape[0]

    @property
    def dim(self):
        return self.basis.shape[0]

    @classmethod
    def from_basis(cls, anchor, basis):
        anchor = check_sym(anchor)
        basis = np.array([check_sym(B) for B in basis], dtype=float)
        m, n = basis.shape[0], anchor.shape[0]
        if basis.shape[1:] != (n, n):
            raise ValueError("basis dimension does not match anchor")
        gram = np.array([[frob_inner(basis[i], basis[j]) for j in range(m)]
                         for i in range(m)])
        try:
            chol = np.linalg.cholesky(gram)
        except np.linalg.LinAlgError as exc:
            raise DependentBasisError(
                "basis Gram matrix is not positive definite") from exc

        # Orthogonal complement: sweep the standard basis of S^n, remove the
        # span{basis} part with a Gram solve, then Gram-Schmidt the residuals.
        comp = []
        for S in _standard_sym_basis(n):
            s = kernels.chol_solve(chol, np.array(
                [frob_inner(basis[i], S) for i in range(m)]))
            R = S - np.tensordot(s, basis, axes=1)
            for C in comp:
                R = R - (frob_inner(C, R) / frob_inner(C, C)) * C
            if frob_norm(R) > COMPLEMENT_DROP_TOL:
                comp.append(0.5 * (R + R.T))
        expected = n * (n + 1) // 2 - m
        if len(comp) != expected:
            raise DependentBasisError(
                f"complement construction found {len(comp)} directions, "
                f"expected {expected}")
        return cls(_freeze(anchor), _freeze(basis), _freeze(gram),
                   _freeze(chol), _freeze(np.array(comp)))

    def point(self, coeffs):
        """phi(p) = anchor + sum_i p_i B_i."""
        coeffs = np.asarray(coeffs, dtype=float)
        if coeffs.shape != (self.dim,):
            raise ValueError(f"expected {self.dim} coefficients")
        return kernels.affine_point(self.anchor, self.basis, coeffs)

    def coefficients(self, X):
        """Gram-system coefficients of the best approximation to X - anchor."""
        X = check_sym(X)
        if X.shape[0] != self.n:
            raise ValueError("dimension mismatch")
        return kernels.basis_coefficients(self.chol, self.basis, self.anchor, X)


def project_affine(E, X):
    """Orthogonal projection onto E; returns (point, coefficients)."""
    s = E.coefficients(X)
    return E.point(s), s


def dist2_affine(E, X):
    """Squared Frobenius distance to E via the orthogonal-complement sum."""
    X = check_sym(X)
    if X.shape[0] != E.n:
        raise ValueError("dimension mismatch")
    acc = 0.0
    D = X - E.anchor
    for C in E.complement:
        acc += frob_inner(C, D) ** 2 / frob_inner(C, C)
    return acc


def orthogonalize(E):
    """Gram-Schmidt the basis in order (first element kept verbatim)."""
    basis = [np.array(E.basis[0])]
    for i in range(1, E.dim):
        R = np.array(E.basis[i])
        for C in basis:
            R = R - (frob_inner(C, E.basis[i]) / frob_inner(C, C)) * C
        if frob_norm(R) <= COMPLEMENT_DROP_TOL * max(1.0, frob_norm(E.basis[i])):
            raise DependentBasisError(
                f"basis element {i} is dependent on its predecessors")
        basis.append(0.5 * (R + R.T))
    return AffineSubspace.from_basis(E.anchor, np.array(basis))


def read_sym_matrices(text):
    """Parse the test matrix format: '#' comments, blank-line-separated
    blocks of whitespace-separated row-major entries, one matrix per block."""
    blocks, current = [], []
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            if current:
                blocks.append(current)
                current = []
            continue
        current.extend(float(tok) for tok in line.split())
    if current:
        blocks.append(current)
    out = []
    for vals in blocks:
        n = int(round(len(vals) ** 0.5))
        if n * n != len(vals):
            raise ValueError(f"block of {len(vals)} entries is not square")
        out.append(sym_matrix(np.array(vals).reshape(n, n)))
    return out


def write_sym_matrices(mats):
    lines = []
    for M in mats:
        for row in np.asarray(M):
            lines.append(" ".join(f"{v:.17g}" for v in row))
        lines.append("")
    return "\n".join(lines)
