"""Matrix factorizations the canonical-form pipelines are built from.

All routines are deterministic for a fixed input and make no random
choices.  Decompositions of structured matrices (symmetric, skew
symmetric, normal) check their structural precondition and raise
PreconditionError when it fails, rather than silently returning junk.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .blocks import sqrt_dplus
from .errors import ConvergenceError, PreconditionError
from .matrix import DEFAULT_TOL, ToleranceConfig, as_matrix, norm, rank, rel_residual

__all__ = [
    "SvdResult",
    "PolarResult",
    "svd",
    "eig_normal",
    "polar",
    "takagi_symmetric",
    "hua_skew",
    "range_null_bases",
    "cluster_complex",
    "cluster_real_sorted",
]


@dataclass(frozen=True)
class SvdResult:
    """Full singular value decomposition a = u @ diag(sigma) @ v*.

    u and v are square unitaries; sigma is real, nonnegative, and sorted
    nonincreasing, of length min(a.shape).
    """

    u: np.ndarray
    sigma: np.ndarray
    v: np.ndarray


@dataclass(frozen=True)
class PolarResult:
    """Polar decomposition of a square matrix.

    side "right" means a = w @ q, side "left" means a = q @ w; w is
    unitary and q is Hermitian positive semidefinite either way.
    """

    w: np.ndarray
    q: np.ndarray
    side: str


def svd(a) -> SvdResult:
    a = as_matrix(a)
    u, s, vh = np.linalg.svd(a, full_matrices=True)
    return SvdResult(u=u, sigma=s, v=vh.conj().T)


def cluster_complex(values: np.ndarray, radius: float) -> list[list[int]]:
    """Single-linkage clusters of complex values at the given radius.

    Returns index lists ordered by each cluster's smallest member index.
    """
    values = np.asarray(values, dtype=np.complex128)
    k = len(values)
    parent = list(range(k))

    def find(i: int) -> int:
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i in range(k):
        for j in range(i + 1, k):
            if abs(values[i] - values[j]) <= radius:
                ri, rj = find(i), find(j)
                if ri != rj:
                    parent[max(ri, rj)] = min(ri, rj)

    groups: dict[int, list[int]] = {}
    for i in range(k):
        groups.setdefault(find(i), []).append(i)
    return [groups[key] for key in sorted(groups)]


def cluster_real_sorted(values: np.ndarray, radius: float) -> list[list[int]]:
    """Clusters of a real array already sorted (either direction).

    Contiguity makes single linkage a linear scan over adjacent gaps.
    """
    values = np.asarray(values, dtype=np.float64)
    clusters: list[list[int]] = []
    for i in range(len(values)):
        if clusters and abs(values[i] - values[clusters[-1][-1]]) <= radius:
            clusters[-1].append(i)
        else:
            clusters.append([i])
    return clusters


def eig_normal(a, tol: ToleranceConfig = DEFAULT_TOL) -> tuple[np.ndarray, np.ndarray]:
    """Unitary eigendecomposition of a normal matrix.

    Returns (lam, u) with a = u @ diag(lam) @ u* and u unitary.  Works by
    diagonalizing the Hermitian part, then diagonalizing the restriction
    of the skew-Hermitian part to each eigenvalue cluster; both passes
    are Hermitian eigenproblems.
    """
    a = as_matrix(a, square=True)
    n = a.shape[0]
    if n == 0:
        return np.zeros(0, dtype=np.complex128), np.zeros((0, 0), dtype=np.complex128)

    res = rel_residual(a.conj().T @ a, a @ a.conj().T)
    if res > tol.residual_rtol:
        raise PreconditionError("matrix is not normal", residual=res)

    h = (a + a.conj().T) / 2.0
    k = (a - a.conj().T) / 2.0j
    hvals, u = np.linalg.eigh(h)

    # Cluster radius is tied to the overall spectral scale so that a
    # zero Hermitian part still lands in a single cluster.
    scale = norm(a, "spectral")
    radius = tol.cluster_rtol * scale
    for idx in cluster_real_sorted(hvals, radius):
        if len(idx) == 1:
            continue
        cols = u[:, idx]
        kr = cols.conj().T @ k @ cols
        kr = (kr + kr.conj().T) / 2.0
        _, w = np.linalg.eigh(kr)
        u[:, idx] = cols @ w

    lam = np.einsum("ij,jk,ki->i", u.conj().T, a, u)
    recon = norm(a - (u * lam) @ u.conj().T)
    bound = tol.residual_rtol * max(1.0, norm(a))
    if recon > bound:
        raise ConvergenceError(
            f"eigendecomposition residual {recon:.3e} exceeds {bound:.3e}"
        )
    return lam, u


def polar(a, side: str = "right", tol: ToleranceConfig = DEFAULT_TOL) -> PolarResult:
    """Polar decomposition via the SVD; valid for singular input too."""
    if side not in ("right", "left"):
        raise ValueError(f"side must be 'right' or 'left', got {side!r}")
    a = as_matrix(a, square=True)
    f = svd(a)
    w = f.u @ f.v.conj().T
    if side == "right":
        q = (f.v * f.sigma) @ f.v.conj().T
    else:
        q = (f.u * f.sigma) @ f.u.conj().T
    q = (q + q.conj().T) / 2.0
    return PolarResult(w=w, q=q, side=side)


def _sqrt_normal(a, tol: ToleranceConfig) -> np.ndarray:
    # Square root of a (small, normal) matrix as a spectral function,
    # using the unique root in the closed right half plane.  Equal
    # eigenvalues get equal roots, so the result is a polynomial in a;
    # in particular it inherits symmetry.
    lam, q = eig_normal(a, tol)
    roots = np.array([sqrt_dplus(z) for z in lam], dtype=np.complex128)
    return (q * roots) @ q.conj().T


def takagi_symmetric(
    a, tol: ToleranceConfig = DEFAULT_TOL
) -> tuple[np.ndarray, np.ndarray]:
    """Symmetric SVD: a = v @ diag(sigma) @ v.T with v unitary.

    The input must be complex symmetric.  sigma is sorted nonincreasing.

    Construction: from a full SVD a = u @ diag(sigma) @ w*, symmetry
    forces z = w* @ conj(u) to be unitary, block diagonal along equal
    singular values, and symmetric on blocks with positive singular
    value.  A per-block symmetric square root d then gives v = u @ d.
    """
    a = as_matrix(a, square=True)
    n = a.shape[0]
    res = rel_residual(a, a.T)
    if res > tol.residual_rtol:
        raise PreconditionError("matrix is not symmetric", residual=res)
    if n == 0:
        return np.zeros(0, dtype=np.float64), np.zeros((0, 0), dtype=np.complex128)
    a = (a + a.T) / 2.0

    f = svd(a)
    z = f.v.conj().T @ f.u.conj()
    zero_cutoff = tol.rank_rtol * float(f.sigma[0]) * n if f.sigma[0] > 0 else 0.0
    radius = tol.cluster_rtol * float(f.sigma[0])

    d = np.zeros((n, n), dtype=np.complex128)
    for idx in cluster_real_sorted(f.sigma, radius):
        ix = np.ix_(idx, idx)
        if f.sigma[idx[0]] <= zero_cutoff:
            d[ix] = np.eye(len(idx))
        else:
            zb = z[ix]
            zb = (zb + zb.T) / 2.0
            d[ix] = _sqrt_normal(zb, tol)
    v = f.u @ d

    recon = norm(a - (v * f.sigma) @ v.T)
    bound = tol.residual_rtol * max(1.0, norm(a))
    if recon > bound:
        raise ConvergenceError(
            f"symmetric SVD residual {recon:.3e} exceeds {bound:.3e}"
        )
    return f.sigma.copy(), v


def hua_skew(a, tol: ToleranceConfig = DEFAULT_TOL) -> tuple[np.ndarray, np.ndarray]:
    """Skew-symmetric analogue of takagi_symmetric.

    Returns (tau, v) with a = v @ s @ v.T where s is the direct sum of
    the blocks tau_j * [[0, 1], [-1, 0]] and v is unitary.  Requires a
    nonsingular complex skew-symmetric input, which forces even order.

    The pairing below exploits that for skew-symmetric a and a unit
    right singular vector x with value t, the vector y = conj(a @ x)/t
    is again a right singular vector for t, orthogonal to x, with
    a @ x = t * conj(y) and a @ y = -t * conj(x).
    """
    a = as_matrix(a, square=True)
    n = a.shape[0]
    res = rel_residual(a, -a.T)
    if res > tol.residual_rtol:
        raise PreconditionError("matrix is not skew-symmetric", residual=res)
    if n % 2 == 1:
        raise PreconditionError("skew-symmetric input must have even order")
    if rank(a, tol) < n:
        raise PreconditionError("matrix is singular")
    a = (a - a.T) / 2.0
    if n == 0:
        return np.zeros(0, dtype=np.float64), np.zeros((0, 0), dtype=np.complex128)

    gram = a.conj().T @ a
    gram = (gram + gram.conj().T) / 2.0
    evals, q = np.linalg.eigh(gram)
    svals = np.sqrt(np.clip(evals, 0.0, None))
    order = np.argsort(svals)[::-1]
    svals = svals[order]
    q = q[:, order]

    radius = tol.cluster_rtol * float(svals[0])
    pairs: list[tuple[float, np.ndarray, np.ndarray]] = []
    for idx in cluster_real_sorted(svals, radius):
        if len(idx) % 2 == 1:
            raise ConvergenceError(
                "could not pair singular values of the skew-symmetric input"
            )
        basis = q[:, idx].copy()
        while basis.shape[1] > 0:
            x = basis[:, 0]
            ax = a @ x
            t = float(np.linalg.norm(ax))
            y = np.conj(ax) / t
            # Keep y inside the current subspace and orthogonal to x.
            y = basis @ (basis.conj().T @ y)
            y = y - x * (x.conj() @ y)
            ny = float(np.linalg.norm(y))
            if ny < 0.5:
                raise ConvergenceError("singular vector pairing degenerated")
            y = y / ny
            pairs.append((t, x, y))
            rest = basis[:, 1:]
            rest = rest - np.outer(x, x.conj() @ rest) - np.outer(y, y.conj() @ rest)
            if rest.shape[1] > 0:
                # Orthonormalize what is left of the cluster basis.
                bu, bs, _ = np.linalg.svd(rest, full_matrices=False)
                basis = bu[:, : rest.shape[1] - 1]
            else:
                basis = rest

    pairs.sort(key=lambda item: -item[0])
    cols = []
    taus = []
    for t, x, y in pairs:
        cols.append(np.conj(x))
        cols.append(-np.conj(y))
        taus.append(t)
    v = np.column_stack(cols)

    sblocks = np.zeros((n, n), dtype=np.complex128)
    for j, t in enumerate(taus):
        sblocks[2 * j, 2 * j + 1] = t
        sblocks[2 * j + 1, 2 * j] = -t
    recon = norm(a - v @ sblocks @ v.T)
    bound = tol.residual_rtol * max(1.0, norm(a))
    if recon > bound:
        raise ConvergenceError(
            f"skew-symmetric SVD residual {recon:.3e} exceeds {bound:.3e}"
        )
    return np.array(taus, dtype=np.float64), v


def range_null_bases(
    a, tol: ToleranceConfig = DEFAULT_TOL
) -> tuple[np.ndarray, np.ndarray]:
    """Orthonormal bases (v1, v2) of range(a) and null(a*).

    Stacking them gives the unitary [v1 v2]; v1 has rank(a) columns.
    """
    a = as_matrix(a, square=True)
    f = svd(a)
    r = rank(a, tol)
    return f.u[:, :r].copy(), f.u[:, r:].copy()
