"""Dense complex matrices: tolerances, norms, rank, and JSON interchange.

Everything downstream works on square complex128 arrays.  All comparisons
go through the helpers here so that the whole package shares one notion
of "equal", "zero", and "rank".
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Iterable

import numpy as np

from .errors import ParseError

__all__ = [
    "ToleranceConfig",
    "DEFAULT_TOL",
    "as_matrix",
    "transpose",
    "conjugate",
    "conjugate_transpose",
    "adjoint",
    "norm",
    "rank",
    "rel_residual",
    "matrices_close",
    "matrix_to_json",
    "matrix_from_json",
    "loads_matrix",
    "dumps_matrix",
]


@dataclass(frozen=True)
class ToleranceConfig:
    """Relative tolerances used throughout the package.

    rank_rtol decides which singular values count as zero, residual_rtol
    decides when two matrices are equal, and cluster_rtol is the radius
    used when grouping eigenvalues or singular values.  All three must
    lie strictly between 0 and 1.
    """

    rank_rtol: float = 1e-10
    residual_rtol: float = 1e-9
    cluster_rtol: float = 1e-8

    def __post_init__(self) -> None:
        for name in ("rank_rtol", "residual_rtol", "cluster_rtol"):
            value = getattr(self, name)
            if not (0.0 < value < 1.0):
                raise ValueError(f"{name} must lie in (0, 1), got {value!r}")


DEFAULT_TOL = ToleranceConfig()


def as_matrix(a, square: bool = False) -> np.ndarray:
    """Coerce input to a 2-D complex128 array, validating finiteness."""
    m = np.asarray(a, dtype=np.complex128)
    if m.ndim != 2:
        raise ParseError(f"expected a 2-D matrix, got ndim={m.ndim}")
    if not np.all(np.isfinite(m)):
        raise ParseError("matrix contains non-finite entries")
    if square and m.shape[0] != m.shape[1]:
        raise ParseError(f"expected a square matrix, got shape {m.shape}")
    return m


def transpose(a) -> np.ndarray:
    return as_matrix(a).T


def conjugate(a) -> np.ndarray:
    return as_matrix(a).conj()


def conjugate_transpose(a) -> np.ndarray:
    return as_matrix(a).conj().T


_ADJOINTS = {
    "transpose": transpose,
    "conjugate": conjugate,
    "conjugate_transpose": conjugate_transpose,
}


def adjoint(a, which: str) -> np.ndarray:
    """Apply one of the three entrywise/axis adjoints by name."""
    try:
        fn = _ADJOINTS[which]
    except KeyError:
        raise ValueError(f"unknown adjoint {which!r}") from None
    return fn(a)


def norm(a, kind: str = "frobenius") -> float:
    a = as_matrix(a)
    if kind == "frobenius":
        return float(np.linalg.norm(a, "fro"))
    if kind == "spectral":
        if min(a.shape) == 0:
            return 0.0
        return float(np.linalg.norm(a, 2))
    raise ValueError(f"unknown norm kind {kind!r}")


def rank(a, tol: ToleranceConfig = DEFAULT_TOL, scale: float | None = None) -> int:
    """Numerical rank: singular values above rank_rtol * scale * max(shape).

    scale defaults to the largest singular value of a itself.  Pass the
    parent matrix's largest singular value when a is a block extracted
    from a larger problem, so that noise inherited from the parent is
    not mistaken for rank.
    """
    a = as_matrix(a)
    if min(a.shape) == 0:
        return 0
    s = np.linalg.svd(a, compute_uv=False)
    if scale is None:
        scale = float(s[0])
    if scale <= 0.0:
        return 0
    cutoff = tol.rank_rtol * scale * max(a.shape)
    return int(np.count_nonzero(s > cutoff))


def rel_residual(lhs, rhs) -> float:
    """Relative residual ||lhs - rhs||_F / max(1, ||lhs||_F + ||rhs||_F)."""
    lhs = as_matrix(lhs)
    rhs = as_matrix(rhs)
    denom = max(1.0, norm(lhs) + norm(rhs))
    return norm(lhs - rhs) / denom


def matrices_close(x, y, tol: ToleranceConfig = DEFAULT_TOL) -> bool:
    """Whether ||x - y||_F <= residual_rtol * max(1, ||x||_F)."""
    x = as_matrix(x)
    y = as_matrix(y)
    return norm(x - y) <= tol.residual_rtol * max(1.0, norm(x))


def matrix_to_json(a) -> dict:
    """Encode as {"rows", "cols", "data"} with data a row-major list of
    [re, im] pairs."""
    a = as_matrix(a)
    rows, cols = a.shape
    data = [[float(z.real), float(z.imag)] for z in a.reshape(-1)]
    return {"rows": rows, "cols": cols, "data": data}


def matrix_from_json(obj) -> np.ndarray:
    """Decode the interchange dict, rejecting malformed payloads."""
    if not isinstance(obj, dict):
        raise ParseError("matrix JSON must be an object")
    try:
        rows = obj["rows"]
        cols = obj["cols"]
        data = obj["data"]
    except KeyError as missing:
        raise ParseError(f"matrix JSON missing key {missing}") from None
    if not isinstance(rows, int) or not isinstance(cols, int) or rows < 0 or cols < 0:
        raise ParseError("rows and cols must be non-negative integers")
    if not isinstance(data, list) or len(data) != rows * cols:
        raise ParseError(
            f"data must list rows*cols = {rows * cols} entries, got "
            f"{len(data) if isinstance(data, list) else type(data).__name__}"
        )
    values = []
    for entry in data:
        if (
            not isinstance(entry, (list, tuple))
            or len(entry) != 2
            or not all(isinstance(part, (int, float)) for part in entry)
        ):
            raise ParseError(f"each data entry must be an [re, im] pair, got {entry!r}")
        re, im = entry
        if not (math.isfinite(re) and math.isfinite(im)):
            raise ParseError("matrix entries must be finite")
        values.append(complex(re, im))
    return np.array(values, dtype=np.complex128).reshape(rows, cols)


def loads_matrix(text: str) -> np.ndarray:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc}") from None
    return matrix_from_json(obj)


def dumps_matrix(a) -> str:
    return json.dumps(matrix_to_json(a), sort_keys=True)


def vector_from_json(obj) -> np.ndarray:
    """Decode a vector given as a list of [re, im] pairs."""
    if not isinstance(obj, list):
        raise ParseError("vector JSON must be a list of [re, im] pairs")
    values = []
    for entry in obj:
        if (
            not isinstance(entry, (list, tuple))
            or len(entry) != 2
            or not all(isinstance(part, (int, float)) for part in entry)
        ):
            raise ParseError(f"each vector entry must be an [re, im] pair, got {entry!r}")
        re, im = entry
        if not (math.isfinite(re) and math.isfinite(im)):
            raise ParseError("vector entries must be finite")
        values.append(complex(re, im))
    return np.array(values, dtype=np.complex128)


def sorted_desc(values: Iterable[float]) -> tuple[float, ...]:
    """Sort real values descending, as plain floats."""
    return tuple(sorted((float(v) for v in values), reverse=True))
