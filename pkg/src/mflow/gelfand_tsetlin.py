"""The Gel'fand-Tsetlin integrable system on Hermitian matrices.

The pattern of a Hermitian matrix collects the descending spectra of its
nested leading submatrices; Cauchy interlacing makes it a point of the GT
polytope over its top row. Integer patterns with a fixed top row are counted
and streamed by exact depth-first enumeration, with the Weyl dimension
product formula as an independent oracle. Poisson brackets of the pattern
entries (Kostant-Kirillov form, eigenvalue gradients = spectral projectors)
certify integrability numerically.
"""

from __future__ import annotations

import dataclasses
from fractions import Fraction
from functools import lru_cache
from itertools import product

import numpy as np

from .config import DEFAULTS
from .errors import InvariantViolation, PrincipalStratumViolation
from .matrices import check_hermitian, eig_hermitian, haar_unitary

__all__ = [
    "GTPattern",
    "gt_pattern",
    "validate_interlacing",
    "enumerate_gt",
    "iter_gt_patterns",
    "weyl_dim",
    "OrbitFunction",
    "poisson_bracket",
    "random_orbit_point",
]


@dataclasses.dataclass(frozen=True)
class GTPattern:
    """Triangular array: rows[0] has length n, down to rows[n-1] of length 1."""

    rows: tuple

    def __post_init__(self):
        rows = tuple(tuple(r) for r in self.rows)
        object.__setattr__(self, "rows", rows)
        n = len(rows)
        for j, row in enumerate(rows):
            if len(row) != n - j:
                raise InvariantViolation(
                    f"row {j} has length {len(row)}, expected {n - j}")

    @property
    def n(self) -> int:
        return len(self.rows)

    def row(self, level: int) -> tuple:
        """Row at chain level j (1-based, length j)."""
        return self.rows[self.n - level]

    def entry(self, i: int, j: int):
        """Pattern entry x_{i,j}: i-th value (1-based) of the level-j row."""
        return self.row(j)[i - 1]

    def top(self) -> tuple:
        return self.rows[0]


def gt_pattern(A, gt_tol: float = DEFAULTS.gt_tol) -> GTPattern:
    """Pattern of descending leading-submatrix spectra (levels n down to 1)."""
    M = check_hermitian(A)
    n = M.shape[0]
    rows = []
    for j in range(n, 0, -1):
        vals = np.linalg.eigvalsh(M[:j, :j])
        rows.append(tuple(float(v) for v in vals[::-1]))
    return GTPattern(tuple(rows))


def validate_interlacing(P: GTPattern, tol: float = 0.0) -> list:
    """All interlacing violations x_{i,j} >= x_{i,j-1} >= x_{i+1,j}.

    Empty iff the pattern interlaces within tol. Each violation is reported
    as (i, j, deficit) keyed by the level-j entry whose bound failed: (i, j)
    when x_{i,j} < x_{i,j-1}, and (i+1, j) when x_{i,j-1} < x_{i+1,j}.
    """
    violations = []
    for j in range(P.n, 1, -1):
        upper = P.row(j)
        lower = P.row(j - 1)
        for i in range(1, j):
            if lower[i - 1] - upper[i - 1] > tol:
                violations.append((i, j, float(lower[i - 1] - upper[i - 1])))
            if upper[i] - lower[i - 1] > tol:
                violations.append((i + 1, j, float(upper[i] - lower[i - 1])))
    return violations


def _check_top_row(top) -> tuple:
    row = tuple(int(v) for v in top)
    if any(row[i] < row[i + 1] for i in range(len(row) - 1)):
        raise InvariantViolation("top row must be weakly decreasing integers")
    return row


def _children(row):
    """Integer rows interlacing below `row`, ascending lexicographic."""
    if len(row) == 1:
        return
    yield from product(*(range(row[i + 1], row[i] + 1) for i in range(len(row) - 1)))


@lru_cache(maxsize=None)
def _count_below(row: tuple) -> int:
    if len(row) == 1:
        return 1
    return sum(_count_below(child) for child in _children(row))


def enumerate_gt(top) -> int:
    """Exact number of integer patterns with the given top row."""
    row = _check_top_row(top)
    if not row:
        return 1
    # counts are translation invariant; shift for cache sharing
    base = row[-1]
    return _count_below(tuple(v - base for v in row))


def iter_gt_patterns(top):
    """Stream the integer patterns with the given top row.

    Order is lexicographic in the flattened rows below the top row.
    """
    row = _check_top_row(top)

    def rec(prefix, current):
        if len(current) == 1:
            yield GTPattern(tuple(prefix))
            return
        for child in _children(current):
            yield from rec(prefix + [child], child)

    yield from rec([row], row)


def weyl_dim(weight) -> int:
    """Dimension of the U(n) irrep with the given highest weight.

    Product formula prod_{i<j} (w_i - w_j + j - i)/(j - i), evaluated in
    exact rational arithmetic.
    """
    w = _check_top_row(weight)
    n = len(w)
    acc = Fraction(1)
    for i in range(n):
        for j in range(i + 1, n):
            acc *= Fraction(w[i] - w[j] + j - i, j - i)
    if acc.denominator != 1:
        raise AssertionError("Weyl product did not reduce to an integer")
    return int(acc)


class OrbitFunction:
    """Closed family of observables on Hermitian matrices for the bracket.

    Either a pattern entry x_{i,j} (i-th descending eigenvalue of the leading
    j x j submatrix, gradient = embedded spectral projector) or a linear
    pairing A -> Re tr(A H) with fixed Hermitian H (gradient = H).
    """

    def __init__(self, kind, i=None, j=None, H=None):
        self.kind = kind
        self.i = i
        self.j = j
        self.H = H

    @classmethod
    def gt_entry(cls, i: int, j: int) -> "OrbitFunction":
        if not 1 <= i <= j:
            raise InvariantViolation(f"need 1 <= i <= j, got ({i}, {j})")
        return cls("gt", i=i, j=j)

    @classmethod
    def linear(cls, H) -> "OrbitFunction":
        return cls("linear", H=check_hermitian(H))

    def __repr__(self):
        if self.kind == "gt":
            return f"x[{self.i},{self.j}]"
        return "<linear>"

    def value(self, A) -> float:
        M = check_hermitian(A)
        if self.kind == "linear":
            return float(np.trace(M @ self.H).real)
        vals = np.linalg.eigvalsh(M[: self.j, : self.j])[::-1]
        return float(vals[self.i - 1])

    def gradient(self, A, cluster_tol: float = DEFAULTS.cluster_tol) -> np.ndarray:
        M = check_hermitian(A)
        n = M.shape[0]
        if self.kind == "linear":
            if self.H.shape != M.shape:
                raise InvariantViolation("pairing matrix dimension mismatch")
            return self.H
        if self.j > n:
            raise InvariantViolation(f"level {self.j} exceeds dimension {n}")
        w, U = eig_hermitian(M[: self.j, : self.j], cluster_tol=cluster_tol)
        scale = 1.0 + float(np.max(np.abs(w), initial=0.0))
        gap = cluster_tol * scale
        i = self.i - 1
        if (i > 0 and w[i - 1] - w[i] <= gap) or (i + 1 < w.size and w[i] - w[i + 1] <= gap):
            raise PrincipalStratumViolation(
                f"eigenvalue {self.i} of the leading {self.j}x{self.j} block is degenerate")
        u = U[:, i]
        G = np.zeros((n, n), dtype=complex)
        G[: self.j, : self.j] = np.outer(u, u.conj())
        return G


def poisson_bracket(f: OrbitFunction, g: OrbitFunction, A,
                    cluster_tol: float = DEFAULTS.cluster_tol) -> float:
    """Kostant-Kirillov bracket <A, i[grad f, grad g]> at the point A."""
    M = check_hermitian(A)
    Gf = f.gradient(M, cluster_tol)
    Gg = g.gradient(M, cluster_tol)
    comm = Gf @ Gg - Gg @ Gf
    return float(np.trace(M @ (1j * comm)).real)


def random_orbit_point(spectrum, seed: int) -> np.ndarray:
    """Haar-conjugated point U diag(spectrum) U* of the coadjoint orbit."""
    lam = np.asarray(spectrum, dtype=float).ravel()
    U = haar_unitary(lam.size, np.random.default_rng(seed))
    A = (U * lam) @ U.conj().T
    return 0.5 * (A + A.conj().T)
