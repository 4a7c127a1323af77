"""Membership tests for the matrix classes the canonical forms cover.

Every flag is the comparison of a defining identity's relative residual
against residual_rtol, with the residual reported alongside the flag so
borderline calls are visible to the caller.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import PreconditionError
from .factorizations import svd
from .matrix import DEFAULT_TOL, ToleranceConfig, as_matrix, norm, rank, rel_residual

__all__ = [
    "ClassReport",
    "classify",
    "bar_double",
    "verify_characterizations",
    "bar_block_dualities",
]

FLAG_NAMES = (
    "normal",
    "conjugate_normal",
    "congruence_normal",
    "squared_normal",
    "unitary",
    "coninvolutory",
    "involutory",
    "hermitian_square",
    "range_hermitian",
    "lambda_projection",
)


@dataclass(frozen=True)
class ClassReport:
    """Flags and residuals for the standard matrix classes.

    lam is the recovered scalar when the lambda_projection flag is set,
    None otherwise.
    """

    flags: dict = field(default_factory=dict)
    residuals: dict = field(default_factory=dict)
    lam: complex | None = None

    def __getitem__(self, name: str) -> bool:
        return bool(self.flags[name])

    def to_json(self) -> dict:
        lam = None if self.lam is None else [self.lam.real, self.lam.imag]
        return {
            "flags": {k: bool(v) for k, v in self.flags.items()},
            "residuals": {k: float(v) for k, v in self.residuals.items()},
            "lambda": lam,
        }


def _commutator_residual(x: np.ndarray, y: np.ndarray) -> float:
    return rel_residual(x @ y, y @ x)


def _normality_residual(x: np.ndarray) -> float:
    return _commutator_residual(x.conj().T, x)


def _range_projector_residual(a: np.ndarray, tol: ToleranceConfig) -> float:
    # range(a) vs range(a*) compared through their orthogonal projectors
    f = svd(a)
    r = rank(a, tol)
    p_col = f.u[:, :r] @ f.u[:, :r].conj().T
    p_row = f.v[:, :r] @ f.v[:, :r].conj().T
    return rel_residual(p_col, p_row)


def _projection_lambda(a: np.ndarray, tol: ToleranceConfig) -> complex:
    tr = complex(np.trace(a))
    if abs(tr) <= tol.residual_rtol * max(1.0, norm(a)):
        return 0.0 + 0.0j
    return complex(np.trace(a @ a)) / tr


def classify(a, tol: ToleranceConfig = DEFAULT_TOL) -> ClassReport:
    """Evaluate all class memberships of a square matrix at once."""
    a = as_matrix(a, square=True)
    n = a.shape[0]
    eye = np.eye(n, dtype=np.complex128)
    a_star = a.conj().T
    gram_right = a_star @ a
    gram_left = a @ a_star
    a_bar_a = a.conj() @ a
    a_sq = a @ a
    lam = _projection_lambda(a, tol)

    residuals = {
        "normal": rel_residual(gram_right, gram_left),
        "conjugate_normal": rel_residual(gram_right, gram_left.conj()),
        "congruence_normal": _normality_residual(a_bar_a),
        "squared_normal": _normality_residual(a_sq),
        "unitary": rel_residual(gram_right, eye),
        "coninvolutory": rel_residual(a_bar_a, eye),
        "involutory": rel_residual(a_sq, eye),
        "hermitian_square": rel_residual(a_sq, a_sq.conj().T),
        "range_hermitian": _range_projector_residual(a, tol),
        "lambda_projection": rel_residual(a_sq, lam * a),
    }
    flags = {name: residuals[name] <= tol.residual_rtol for name in FLAG_NAMES}
    return ClassReport(
        flags=flags,
        residuals=residuals,
        lam=lam if flags["lambda_projection"] else None,
    )


def bar_double(a) -> np.ndarray:
    """The doubled matrix [[0, a], [conj(a), 0]]."""
    a = as_matrix(a, square=True)
    n = a.shape[0]
    out = np.zeros((2 * n, 2 * n), dtype=np.complex128)
    out[:n, n:] = a
    out[n:, :n] = a.conj()
    return out


def _polar_parts(a: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    # w unitary, p = left positive factor, q = right positive factor,
    # so a = p w = w q; for singular a, w comes from the SVD factors.
    f = svd(a)
    w = f.u @ f.v.conj().T
    p = (f.u * f.sigma) @ f.u.conj().T
    q = (f.v * f.sigma) @ f.v.conj().T
    return w, (p + p.conj().T) / 2.0, (q + q.conj().T) / 2.0


def _sigma_cluster_blocks(sigma: np.ndarray, tol: ToleranceConfig) -> list[list[int]]:
    from .factorizations import cluster_real_sorted

    radius = tol.cluster_rtol * float(sigma[0]) if len(sigma) else 0.0
    return cluster_real_sorted(sigma, radius)


def _condition(residual: float, tol: ToleranceConfig) -> dict:
    return {"residual": float(residual), "holds": bool(residual <= tol.residual_rtol)}


def verify_characterizations(
    a, which: str, tol: ToleranceConfig = DEFAULT_TOL
) -> dict:
    """Evaluate a family of equivalent class characterizations.

    which selects the family:

    * ``congruence_normal_idents``: conj(a) a normal, the cubic identity
      a conj(a) a^T = a^T conj(a) a, and for nonsingular input normality
      of the transpose cosquare.
    * ``squared_normal_idents``: a^2 normal, a^2 a* = a* a^2, and for
      nonsingular input normality of the star cosquare.
    * ``conjugate_normal_afd``: symmetric/skew part identity, the
      definition, the polar conditions q = conj(p) and p a = a conj(p),
      and the scaled-unitary direct sum conditions.
    * ``congruence_normal_afd``: commutation of the Hermitian and skew
      parts of conj(a) a, the definition, and the polar conditions
      a conj(p) = conj(q) a and the family {conj(p), q, conj(w) w}.

    Returns {"conditions": {name: {residual, holds}}, "nonsingular",
    "agree"}; "agree" states whether all evaluated flags coincide, with
    the polar-based conditions only required to match on nonsingular
    input.
    """
    a = as_matrix(a, square=True)
    n = a.shape[0]
    nonsingular = rank(a, tol) == n
    conditions: dict[str, dict] = {}
    # Conditions whose equivalence to the rest is only asserted for
    # nonsingular input; they are still evaluated and reported.
    nonsingular_only: set[str] = set()

    if which == "congruence_normal_idents":
        b = a.conj() @ a
        conditions["gram_normal"] = _condition(_normality_residual(b), tol)
        conditions["cubic_identity"] = _condition(
            rel_residual(a @ a.conj() @ a.T, a.T @ a.conj() @ a), tol
        )
        nonsingular_only.add("cosquare_normal")
        if nonsingular:
            cosq = np.linalg.solve(a.T, a)
            conditions["cosquare_normal"] = _condition(_normality_residual(cosq), tol)
    elif which == "squared_normal_idents":
        c = a @ a
        conditions["square_normal"] = _condition(_normality_residual(c), tol)
        conditions["cubic_identity"] = _condition(
            rel_residual(c @ a.conj().T, a.conj().T @ c), tol
        )
        nonsingular_only.add("cosquare_normal")
        if nonsingular:
            cosq = np.linalg.solve(a.conj().T, a)
            conditions["cosquare_normal"] = _condition(_normality_residual(cosq), tol)
    elif which == "conjugate_normal_afd":
        s = (a + a.T) / 2.0
        c = (a - a.T) / 2.0
        conditions["part_identity"] = _condition(
            rel_residual(s @ c.conj(), c @ s.conj()), tol
        )
        conditions["definition"] = _condition(
            rel_residual(a.conj().T @ a, (a @ a.conj().T).conj()), tol
        )
        w, p, q = _polar_parts(a)
        nonsingular_only.update(("polar_conjugate", "polar_intertwine"))
        conditions["polar_conjugate"] = _condition(rel_residual(q, p.conj()), tol)
        conditions["polar_intertwine"] = _condition(
            rel_residual(p @ a, a @ p.conj()), tol
        )
        # Scaled-unitary direct sum: in the left singular basis x, the
        # unitary polar factor must be block diagonal along singular
        # value clusters (sum condition), with unitary blocks (real
        # orthogonal rendering exists per block).
        f = svd(a)
        m = f.v.conj().T @ f.u.conj()
        blocks = _sigma_cluster_blocks(f.sigma, tol)
        mask = np.zeros((n, n), dtype=bool)
        for idx in blocks:
            mask[np.ix_(idx, idx)] = True
        off_mass = norm(np.where(mask, 0.0, m))
        conditions["unitary_sum"] = _condition(
            off_mass / max(1.0, norm(m)), tol
        )
        block_res = 0.0
        for idx in blocks:
            mb = m[np.ix_(idx, idx)]
            block_res = max(
                block_res, rel_residual(mb.conj().T @ mb, np.eye(len(idx)))
            )
        conditions["orthogonal_sum"] = _condition(block_res, tol)
    elif which == "congruence_normal_afd":
        s = (a + a.T) / 2.0
        c = (a - a.T) / 2.0
        herm_part = s.conj() @ s + c.conj() @ c
        skew_part = s.conj() @ c + c.conj() @ s
        conditions["part_commute"] = _condition(
            _commutator_residual(herm_part, skew_part), tol
        )
        conditions["definition"] = _condition(
            _normality_residual(a.conj() @ a), tol
        )
        w, p, q = _polar_parts(a)
        nonsingular_only.update(("polar_intertwine", "polar_family"))
        conditions["polar_intertwine"] = _condition(
            rel_residual(a @ p.conj(), q.conj() @ a), tol
        )
        ww = w.conj() @ w
        family_res = max(
            _commutator_residual(p.conj(), q),
            _commutator_residual(p.conj(), ww),
            _commutator_residual(q, ww),
        )
        conditions["polar_family"] = _condition(family_res, tol)
    else:
        raise ValueError(f"unknown characterization family {which!r}")

    binding = [
        cond["holds"]
        for name, cond in conditions.items()
        if nonsingular or name not in nonsingular_only
    ]
    agree = len(set(binding)) <= 1
    return {"conditions": conditions, "nonsingular": nonsingular, "agree": agree}


def bar_block_dualities(a, tol: ToleranceConfig = DEFAULT_TOL) -> dict:
    """Check the dualities between a and its doubled matrix.

    Each entry pairs a condition on a with the equivalent condition on
    [[0, a], [conj(a), 0]], both computed independently; "agree" states
    whether the two flags coincide.  The inverse-based pairs (g*, h*)
    appear only for nonsingular input.
    """
    a = as_matrix(a, square=True)
    n = a.shape[0]
    d = bar_double(a)
    rep_a = classify(a, tol)
    rep_d = classify(d, tol)

    def entry(left: float, right: float) -> dict:
        lh = left <= tol.residual_rtol
        rh = right <= tol.residual_rtol
        return {
            "left_residual": float(left),
            "right_residual": float(right),
            "left_holds": bool(lh),
            "right_holds": bool(rh),
            "agree": bool(lh == rh),
        }

    out = {
        "squared_vs_congruence": entry(
            rep_a.residuals["squared_normal"], rep_d.residuals["congruence_normal"]
        ),
        "congruence_vs_squared": entry(
            rep_a.residuals["congruence_normal"], rep_d.residuals["squared_normal"]
        ),
        "normal_vs_conjugate": entry(
            rep_a.residuals["normal"], rep_d.residuals["conjugate_normal"]
        ),
        "conjugate_vs_normal": entry(
            rep_a.residuals["conjugate_normal"], rep_d.residuals["normal"]
        ),
        "cubic_transpose": entry(
            rel_residual(d @ d.conj() @ d.T, d.T @ d.conj() @ d),
            rel_residual(a.conj().T @ (a @ a), (a @ a) @ a.conj().T),
        ),
        "cubic_star": entry(
            rel_residual(d.conj().T @ (d @ d), (d @ d) @ d.conj().T),
            rel_residual(a @ a.conj() @ a.T, a.T @ a.conj() @ a),
        ),
    }

    if rank(a, tol) == n:
        cos_a = np.linalg.solve(a.T, a)
        star_a = np.linalg.solve(a.conj().T, a)
        cos_d = np.linalg.solve(d.T, d)
        star_d = np.linalg.solve(d.conj().T, d)
        eye2 = np.eye(2 * n, dtype=np.complex128)
        checks = {
            "normal": lambda x, m: _normality_residual(x),
            "hermitian": lambda x, m: rel_residual(x, x.conj().T),
            "unitary": lambda x, m: rel_residual(x.conj().T @ x, m),
        }
        for kind, fn in checks.items():
            out[f"transpose_cosquare_{kind}"] = entry(
                fn(cos_a, np.eye(n)), fn(star_d, eye2)
            )
            out[f"star_cosquare_{kind}"] = entry(
                fn(star_a, np.eye(n)), fn(cos_d, eye2)
            )

    out["agree"] = all(v["agree"] for k, v in out.items() if isinstance(v, dict))
    return out
