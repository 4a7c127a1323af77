"""Unitary reduction of singular matrices to a bordered regular core.

For a singular A the reduced form under either transformation kind is

    [[A', B, 0], [C, D, [S 0]], [0, 0, 0]]

with [[A', B], [C, D]] nonsingular of order n - m1, D of order m2, S a
positive diagonal of order m2, m1 the nullity, and the trailing m1
columns otherwise zero.  When A is congruence normal (transpose kind) or
squared normal (star kind) the blocks B, C, D vanish and the form splits
into a nonsingular part and elementary singular blocks.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .blocks import block_diag, permutation_matrix
from .errors import ConvergenceError, PreconditionError
from .factorizations import svd
from .matrix import (
    DEFAULT_TOL,
    ToleranceConfig,
    as_matrix,
    matrix_to_json,
    norm,
    rank,
)
from .predicates import classify

__all__ = ["ReducedForm", "RegularSplit", "regularize", "split_regular_singular"]

MODES = ("congruence", "star")


def _apply(t: np.ndarray, a: np.ndarray, mode: str) -> np.ndarray:
    """t a t^T for congruence, t a t* for star."""
    if mode == "congruence":
        return t @ a @ t.T
    return t @ a @ t.conj().T


@dataclass(frozen=True)
class ReducedForm:
    """Result of regularize: t @ a @ t^(T or *) equals assembled()."""

    mode: str
    m1: int
    m2: int
    core: np.ndarray
    sigma: np.ndarray
    transform: np.ndarray

    def assembled(self) -> np.ndarray:
        k = self.core.shape[0]
        n = k + self.m1
        out = np.zeros((n, n), dtype=np.complex128)
        out[:k, :k] = self.core
        for i, s in enumerate(self.sigma):
            out[k - self.m2 + i, k + i] = s
        return out

    def to_json(self) -> dict:
        return {
            "mode": self.mode,
            "m1": self.m1,
            "m2": self.m2,
            "core": matrix_to_json(self.core),
            "sigma": [float(s) for s in self.sigma],
            "transform": matrix_to_json(self.transform),
        }


@dataclass(frozen=True)
class RegularSplit:
    """Split of a congruence-normal or squared-normal matrix.

    transform carries the input to the direct sum of regular, the blocks
    sigma_i * [[0, 1], [0, 0]], and a zero block of order zero_count.
    """

    mode: str
    regular: np.ndarray
    singular_sigmas: np.ndarray
    zero_count: int
    transform: np.ndarray

    def assembled(self) -> np.ndarray:
        k = self.regular.shape[0]
        m2 = len(self.singular_sigmas)
        n = k + 2 * m2 + self.zero_count
        out = np.zeros((n, n), dtype=np.complex128)
        out[:k, :k] = self.regular
        for i, s in enumerate(self.singular_sigmas):
            out[k + 2 * i, k + 2 * i + 1] = s
        return out

    def to_json(self) -> dict:
        return {
            "mode": self.mode,
            "regular": matrix_to_json(self.regular),
            "singular_sigmas": [float(s) for s in self.singular_sigmas],
            "zero_count": self.zero_count,
            "transform": matrix_to_json(self.transform),
        }


def regularize(a, mode: str, tol: ToleranceConfig = DEFAULT_TOL) -> ReducedForm:
    """Unitary reduction of any square matrix to the bordered form above.

    Nonsingular input reduces trivially (m1 = m2 = 0, core = a); zero
    input reduces to nothing but zeros.  The transform is unitary.
    """
    if mode not in MODES:
        raise ValueError(f"mode must be one of {MODES}, got {mode!r}")
    a = as_matrix(a, square=True)
    n = a.shape[0]
    r = rank(a, tol)
    eye = np.eye(n, dtype=np.complex128)

    if r == n:
        return ReducedForm(
            mode=mode,
            m1=0,
            m2=0,
            core=a.copy(),
            sigma=np.zeros(0, dtype=np.float64),
            transform=eye,
        )
    if r == 0:
        return ReducedForm(
            mode=mode,
            m1=n,
            m2=0,
            core=np.zeros((0, 0), dtype=np.complex128),
            sigma=np.zeros(0, dtype=np.float64),
            transform=eye,
        )

    f = svd(a)
    scale = float(f.sigma[0])
    v1 = f.u[:, :r]
    v2 = f.u[:, r:]
    if mode == "congruence":
        m = v1.conj().T @ a @ v1.conj()
        nmat = v1.conj().T @ a @ v2.conj()
    else:
        m = v1.conj().T @ a @ v1
        nmat = v1.conj().T @ a @ v2
    m2 = rank(nmat, tol, scale=scale)

    if m2 == 0:
        core = m
        sigma = np.zeros(0, dtype=np.float64)
        transform = f.u.conj().T
    else:
        g = svd(nmat)
        x = np.column_stack([g.u[:, m2:], g.u[:, :m2]])
        y = g.v
        if mode == "congruence":
            z = block_diag([x.conj().T, y.T])
            core = x.conj().T @ m @ x.conj()
        else:
            z = block_diag([x.conj().T, y.conj().T])
            core = x.conj().T @ m @ x
        sigma = g.sigma[:m2].copy()
        transform = z @ f.u.conj().T

    form = ReducedForm(
        mode=mode, m1=n - r, m2=m2, core=core, sigma=sigma, transform=transform
    )
    res = norm(_apply(transform, a, mode) - form.assembled())
    bound = tol.residual_rtol * max(1.0, norm(a))
    if res > bound:
        raise ConvergenceError(
            f"regularization residual {res:.3e} exceeds {bound:.3e}"
        )
    return form


def split_regular_singular(
    a, mode: str, tol: ToleranceConfig = DEFAULT_TOL
) -> RegularSplit:
    """Split a congruence-normal (or squared-normal) matrix.

    Requires the class membership matching the mode; the bordering
    blocks then vanish and the reduced form is a direct sum of a
    nonsingular matrix of the same class, blocks sigma_i*[[0,1],[0,0]],
    and zeros.
    """
    if mode not in MODES:
        raise ValueError(f"mode must be one of {MODES}, got {mode!r}")
    a = as_matrix(a, square=True)
    n = a.shape[0]
    report = classify(a, tol)
    flag = "congruence_normal" if mode == "congruence" else "squared_normal"
    if not report[flag]:
        raise PreconditionError(
            f"input is not {flag.replace('_', ' ')}",
            residual=report.residuals[flag],
        )

    reduced = regularize(a, mode, tol)
    m1, m2 = reduced.m1, reduced.m2
    k0 = reduced.core.shape[0] - m2

    off = 0.0
    if m2 > 0 and reduced.core.size:
        off = float(
            np.sqrt(
                norm(reduced.core[:k0, k0:]) ** 2
                + norm(reduced.core[k0:, :k0]) ** 2
                + norm(reduced.core[k0:, k0:]) ** 2
            )
        )
    bound = 100.0 * tol.residual_rtol * max(1.0, norm(a))
    if off > bound:
        raise PreconditionError(
            "bordering blocks did not vanish; input is not numerically in class",
            residual=off,
        )

    # Independent rank identity for the number of elementary blocks.
    # The product rank is measured against ||a||^2: the product of a
    # singular a with itself can be pure rounding noise, and its own
    # largest singular value is then a meaningless scale.
    scale2 = norm(a, kind="spectral") ** 2
    if mode == "congruence":
        m2_check = rank(a, tol) - rank(a.conj() @ a, tol, scale=scale2)
    else:
        m2_check = rank(a, tol) - rank(a @ a, tol, scale=scale2)
    if m2_check != m2:
        raise ConvergenceError(
            f"rank identity gives {m2_check} elementary blocks, reduction gives {m2}"
        )

    order = list(range(k0))
    for i in range(m2):
        order.extend((k0 + i, k0 + m2 + i))
    order.extend(range(k0 + 2 * m2, n))
    perm = permutation_matrix(order)
    transform = perm @ reduced.transform

    split = RegularSplit(
        mode=mode,
        regular=reduced.core[:k0, :k0].copy(),
        singular_sigmas=reduced.sigma.copy(),
        zero_count=m1 - m2,
        transform=transform,
    )
    res = norm(_apply(transform, a, mode) - split.assembled())
    if res > bound:
        raise ConvergenceError(
            f"split residual {res:.3e} exceeds {bound:.3e}"
        )
    return split
