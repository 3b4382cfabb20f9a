"""Dense complex matrix core: Hermitian eigendecomposition with deterministic
tie-breaking, polar decomposition, adjugate, right momentum, and the PSD square
root section of the momentum map.

Conventions used throughout the package:

* u(n)* is identified with Hermitian matrices; the right momentum of an
  operator B is stored as B*B (the traceless part is the su(n)* component).
* Spectra are reported in weakly decreasing order.
* All operations are pure and deterministic: identical input bits produce
  identical output bits.
"""

from __future__ import annotations

import numpy as np

from .config import DEFAULTS
from .errors import InvariantViolation, NotPositiveSemidefinite

__all__ = [
    "as_complex_matrix",
    "check_hermitian",
    "check_unitary",
    "check_spectrum",
    "eig_hermitian",
    "eigenvalue_blocks",
    "polar_decompose",
    "adjugate",
    "momentum_right",
    "traceless",
    "section_sqrt",
    "haar_unitary",
    "haar_special_unitary",
]


def as_complex_matrix(A) -> np.ndarray:
    """Coerce to a square complex ndarray with finite entries."""
    M = np.asarray(A, dtype=complex)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise InvariantViolation(f"expected a square matrix, got shape {M.shape}")
    if not np.all(np.isfinite(M.view(float))):
        raise InvariantViolation("matrix has non-finite entries")
    return M


def check_hermitian(A, tol: float = DEFAULTS.hermitian_tol) -> np.ndarray:
    """Validate max|A - A*| <= tol * (1 + max|A|) and return A as ndarray."""
    M = as_complex_matrix(A)
    scale = 1.0 + np.max(np.abs(M), initial=0.0)
    dev = np.max(np.abs(M - M.conj().T), initial=0.0)
    if dev > tol * scale:
        raise InvariantViolation(f"matrix is not Hermitian: max|A - A*| = {dev:.3e}")
    return M


def check_unitary(U, tol: float = DEFAULTS.unitary_tol) -> np.ndarray:
    """Validate max|U*U - I| <= tol and return U as ndarray."""
    M = as_complex_matrix(U)
    dev = np.max(np.abs(M.conj().T @ M - np.eye(M.shape[0])))
    if dev > tol:
        raise InvariantViolation(f"matrix is not unitary: max|U*U - I| = {dev:.3e}")
    return M


def check_spectrum(w) -> np.ndarray:
    """Validate a weakly decreasing real vector."""
    v = np.asarray(w, dtype=float).ravel()
    if v.size and np.any(np.diff(v) > 0):
        raise InvariantViolation("spectrum is not weakly decreasing")
    return v


def eigenvalue_blocks(w, cluster_tol: float | None = None, scale: float | None = None):
    """Partition a weakly decreasing spectrum into clusters of nearly equal values.

    Returns a list of (lo, hi) index ranges (hi exclusive). Two consecutive
    eigenvalues belong to one block when they differ by at most
    cluster_tol * (1 + scale); scale defaults to max|w|.
    """
    v = np.asarray(w, dtype=float).ravel()
    if cluster_tol is None:
        cluster_tol = DEFAULTS.cluster_tol
    if scale is None:
        scale = float(np.max(np.abs(v), initial=0.0))
    gap = cluster_tol * (1.0 + scale)
    blocks = []
    lo = 0
    for i in range(1, v.size):
        if v[lo] - v[i] > gap or v[i - 1] - v[i] > gap:
            blocks.append((lo, i))
            lo = i
    if v.size:
        blocks.append((lo, v.size))
    return blocks


def _fix_phases(U: np.ndarray) -> np.ndarray:
    """Make the first non-negligible component of each column real positive."""
    V = U.copy()
    for j in range(V.shape[1]):
        col = V[:, j]
        idx = np.flatnonzero(np.abs(col) > 1e-12)
        if idx.size:
            z = col[idx[0]]
            V[:, j] = col * (z.conjugate() / abs(z))
    return V


def _gram_schmidt(cols: np.ndarray) -> np.ndarray:
    out = cols.copy()
    for j in range(out.shape[1]):
        for k in range(j):
            out[:, j] -= (out[:, k].conj() @ out[:, j]) * out[:, k]
        nrm = np.linalg.norm(out[:, j])
        if nrm > 0:
            out[:, j] /= nrm
    return out


def eig_hermitian(A, hermitian_tol: float = DEFAULTS.hermitian_tol,
                  cluster_tol: float = DEFAULTS.cluster_tol):
    """Eigendecomposition of a Hermitian matrix.

    Returns (w, U) with w weakly decreasing and U unitary such that
    U* A U = diag(w). Within each eigenvalue cluster the basis is
    re-orthonormalized in place (Gram-Schmidt in column order) and each
    column's phase is fixed so the first sizable component is real positive,
    which makes the output deterministic.
    """
    M = check_hermitian(A, hermitian_tol)
    H = 0.5 * (M + M.conj().T)
    vals, vecs = np.linalg.eigh(H)
    w = vals[::-1].copy()
    U = vecs[:, ::-1].copy()
    scale = float(np.max(np.abs(w), initial=0.0))
    for lo, hi in eigenvalue_blocks(w, cluster_tol, scale):
        if hi - lo > 1:
            U[:, lo:hi] = _gram_schmidt(U[:, lo:hi])
    U = _fix_phases(U)
    return w, U


def polar_decompose(B):
    """Polar decomposition B = U P with U unitary and P = sqrt(B*B) PSD.

    Computed from the SVD, which also completes U deterministically when B is
    singular.
    """
    M = as_complex_matrix(B)
    W, s, Vh = np.linalg.svd(M)
    U = W @ Vh
    P = (Vh.conj().T * s) @ Vh
    P = 0.5 * (P + P.conj().T)
    return U, P


def adjugate(A) -> np.ndarray:
    """Adjugate (transposed cofactor matrix): A @ adjugate(A) = det(A) I."""
    M = as_complex_matrix(A)
    n = M.shape[0]
    if n == 1:
        return np.ones((1, 1), dtype=complex)
    if n == 2:
        return np.array([[M[1, 1], -M[0, 1]], [-M[1, 0], M[0, 0]]], dtype=complex)
    if n == 3:
        (a, b, c), (d, e, f), (g, h, i) = M
        return np.array([
            [e * i - f * h, c * h - b * i, b * f - c * e],
            [f * g - d * i, a * i - c * g, c * d - a * f],
            [d * h - e * g, b * g - a * h, a * e - b * d],
        ])
    # Stack all (n-1)x(n-1) minors and take one batched determinant call.
    minors = np.empty((n, n, n - 1, n - 1), dtype=complex)
    for i in range(n):
        rows = np.delete(np.arange(n), i)
        sub = M[rows]
        for j in range(n):
            cols = np.delete(np.arange(n), j)
            minors[i, j] = sub[:, cols]
    cof = np.linalg.det(minors.reshape(n * n, n - 1, n - 1)).reshape(n, n)
    signs = (-1.0) ** (np.add.outer(np.arange(n), np.arange(n)))
    return (signs * cof).T


def momentum_right(B, traceless_part: bool = False) -> np.ndarray:
    """Right momentum of B under the dropped-i identification: B*B.

    With traceless_part=True, returns the su(n)* component
    B*B - (tr(B*B)/n) I.
    """
    M = as_complex_matrix(B)
    H = M.conj().T @ M
    H = 0.5 * (H + H.conj().T)
    if traceless_part:
        return traceless(H)
    return H


def traceless(H) -> np.ndarray:
    M = as_complex_matrix(H)
    n = M.shape[0]
    return M - (np.trace(M) / n) * np.eye(n)


def section_sqrt(H, psd_tol: float = DEFAULTS.psd_tol):
    """Principal PSD square root: the momentum-map section on PSD matrices.

    Eigenvalues within psd_tol * (1 + |H|) of zero are clamped to zero; an
    eigenvalue below that margin raises NotPositiveSemidefinite.
    """
    M = check_hermitian(H)
    w, U = eig_hermitian(M)
    margin = psd_tol * (1.0 + float(np.max(np.abs(w), initial=0.0)))
    if w.size and w[-1] < -margin:
        raise NotPositiveSemidefinite(
            f"eigenvalue {w[-1]:.3e} below -{margin:.3e}")
    wc = np.clip(w, 0.0, None)
    S = (U * np.sqrt(wc)) @ U.conj().T
    return 0.5 * (S + S.conj().T)


def haar_unitary(n: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-distributed U(n) element: QR of a complex Gaussian with the
    R-diagonal phases normalized away."""
    Z = (rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))) / np.sqrt(2.0)
    Q, R = np.linalg.qr(Z)
    d = np.diagonal(R)
    return Q * (d / np.abs(d))


def haar_special_unitary(n: int, rng: np.random.Generator) -> np.ndarray:
    """Haar U(n) sample with the determinant phase divided out (an SU(n) point)."""
    U = haar_unitary(n, rng)
    return U * np.linalg.det(U) ** (-1.0 / n)
