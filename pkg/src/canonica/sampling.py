"""Seeded random constructors for the matrix families.

Every sampler takes a numpy Generator so suites stay reproducible, and
keeps block parameters separated well above the clustering tolerances:
moduli of interior mu stay in [0.15, 0.8], distinct parameters at least
0.08 apart, unimodular angles away from 0 and pi.  That is deliberate;
the pipelines are exact on these families and the tests should fail on
logic errors, not on manufactured near-degeneracies.
"""

from __future__ import annotations

import numpy as np

from .blocks import direct_sum
from .canon_congruence import CongruenceCanonicalForm
from .canon_star import StarCanonicalForm

__all__ = [
    "default_rng",
    "random_unitary",
    "random_nonsingular",
    "random_matrix",
    "random_normal",
    "random_vector",
    "random_congruence_form",
    "random_congruence_instance",
    "random_star_form",
    "random_star_instance",
    "random_conjugate_normal_instance",
    "random_coninvolutory",
    "random_involution",
    "random_lambda_projection",
    "random_quadratic_instance",
]


def default_rng(seed: int | None = None) -> np.random.Generator:
    return np.random.default_rng(seed)


def _gaussian(n: int, gen: np.random.Generator) -> np.ndarray:
    return gen.standard_normal((n, n)) + 1j * gen.standard_normal((n, n))


def random_matrix(n: int, gen: np.random.Generator) -> np.ndarray:
    return _gaussian(n, gen) / np.sqrt(2.0)


def random_vector(n: int, gen: np.random.Generator) -> np.ndarray:
    v = gen.standard_normal(n) + 1j * gen.standard_normal(n)
    return v / np.linalg.norm(v)


def random_unitary(n: int, gen: np.random.Generator) -> np.ndarray:
    """Haar-distributed unitary via phase-fixed QR."""
    if n == 0:
        return np.zeros((0, 0), dtype=np.complex128)
    q, r = np.linalg.qr(_gaussian(n, gen))
    d = np.diagonal(r)
    return q * (d / np.abs(d))


def random_nonsingular(
    n: int, gen: np.random.Generator, cond: float = 4.0
) -> np.ndarray:
    """Random matrix with condition number about cond."""
    u = random_unitary(n, gen)
    v = random_unitary(n, gen)
    lo, hi = 1.0 / np.sqrt(cond), np.sqrt(cond)
    s = np.exp(gen.uniform(np.log(lo), np.log(hi), size=n))
    s[0], s[-1] = hi, lo  # pin the extremes so cond is exact
    return u @ np.diag(s.astype(np.complex128)) @ v.conj().T


def random_normal(n: int, gen: np.random.Generator) -> np.ndarray:
    u = random_unitary(n, gen)
    lam = gen.standard_normal(n) + 1j * gen.standard_normal(n)
    return u @ np.diag(lam) @ u.conj().T


def _separated(
    gen: np.random.Generator,
    count: int,
    draw,
    min_dist: float,
    max_tries: int = 200,
) -> list:
    vals: list = []
    for _ in range(count):
        for _ in range(max_tries):
            v = draw()
            if all(abs(v - w) >= min_dist for w in vals):
                vals.append(v)
                break
        else:
            raise RuntimeError("failed to draw separated parameters")
    return vals


def _tau(gen: np.random.Generator) -> float:
    return float(gen.uniform(0.5, 3.0))


def _interior_mu(gen: np.random.Generator) -> complex:
    rho = gen.uniform(0.15, 0.8)
    phi = gen.uniform(-np.pi, np.pi)
    return complex(rho * np.exp(1j * phi))


def random_congruence_form(
    n: int, gen: np.random.Generator, singular: bool = False
) -> CongruenceCanonicalForm:
    """Random valid congruence-form block multiset of dimension n."""
    ones: list[float] = []
    twos: list[tuple[float, complex]] = []
    left = n
    if singular and left:
        zeros = min(int(gen.integers(1, 3)), left)
        ones.extend([0.0] * zeros)
        left -= zeros
        while left >= 2 and gen.random() < 0.4:
            twos.append((_tau(gen), 0.0 + 0.0j))
            left -= 2

    pair_budget = int(gen.integers(0, left // 2 + 1))
    ones.extend(float(gen.uniform(0.5, 3.0)) for _ in range(left - 2 * pair_budget))

    kinds = [gen.random() for _ in range(pair_budget)]
    n_minus = sum(1 for r in kinds if r < 0.25)
    n_circle = sum(1 for r in kinds if 0.25 <= r < 0.5)
    n_inner = pair_budget - n_minus - n_circle

    twos.extend((_tau(gen), complex(-1.0)) for _ in range(n_minus))
    thetas = _separated(
        gen, n_circle, lambda: float(gen.uniform(0.3, np.pi - 0.3)), 0.1
    )
    twos.extend((_tau(gen), complex(np.exp(1j * t))) for t in thetas)
    mus = _separated(gen, n_inner, lambda: _interior_mu(gen), 0.08)
    twos.extend((_tau(gen), mu) for mu in mus)
    return CongruenceCanonicalForm.build(ones, twos)


def random_congruence_instance(
    n: int, gen: np.random.Generator, singular: bool = False
) -> tuple[CongruenceCanonicalForm, np.ndarray]:
    """(form, u @ assemble(form) @ u.T) for a random unitary u."""
    form = random_congruence_form(n, gen, singular=singular)
    u = random_unitary(n, gen)
    return form, u @ form.assemble() @ u.T


def random_star_form(
    n: int, gen: np.random.Generator, singular: bool = False
) -> StarCanonicalForm:
    """Random valid *congruence-form block multiset of dimension n."""
    ones: list[complex] = []
    twos: list[tuple[float, complex]] = []
    left = n
    if singular and left:
        zeros = min(int(gen.integers(1, 3)), left)
        ones.extend([0.0 + 0.0j] * zeros)
        left -= zeros
        while left >= 2 and gen.random() < 0.4:
            twos.append((_tau(gen), 0.0 + 0.0j))
            left -= 2

    pair_budget = int(gen.integers(0, left // 2 + 1))
    n_ones = left - 2 * pair_budget

    if n_ones:
        n_rays = int(gen.integers(1, n_ones + 1))
        rays = _separated(
            gen, n_rays, lambda: float(gen.uniform(0.05, np.pi - 0.05)), 0.1
        )
        for i in range(n_ones):
            theta = rays[i % n_rays]
            sign = 1.0 if gen.random() < 0.5 else -1.0
            ones.append(
                complex(sign * gen.uniform(0.5, 2.0) * np.exp(1j * theta))
            )

    mus = _separated(gen, pair_budget, lambda: _interior_mu(gen), 0.08)
    twos.extend((_tau(gen), mu) for mu in mus)
    return StarCanonicalForm.build(ones, twos)


def random_star_instance(
    n: int, gen: np.random.Generator, singular: bool = False
) -> tuple[StarCanonicalForm, np.ndarray]:
    """(form, u @ assemble(form) @ u*) for a random unitary u."""
    form = random_star_form(n, gen, singular=singular)
    u = random_unitary(n, gen)
    return form, u @ form.assemble() @ u.conj().T


def random_conjugate_normal_instance(
    n: int, gen: np.random.Generator, singular: bool = False
) -> tuple[CongruenceCanonicalForm, np.ndarray]:
    """Conjugate-normal instance: positive ones, unimodular twos, zeros."""
    ones: list[float] = []
    twos: list[tuple[float, complex]] = []
    left = n
    if singular and left:
        zeros = min(int(gen.integers(1, 3)), left)
        ones.extend([0.0] * zeros)
        left -= zeros
    pair_budget = int(gen.integers(0, left // 2 + 1))
    ones.extend(float(gen.uniform(0.5, 3.0)) for _ in range(left - 2 * pair_budget))
    kinds = [gen.random() for _ in range(pair_budget)]
    n_minus = sum(1 for r in kinds if r < 0.3)
    thetas = _separated(
        gen,
        pair_budget - n_minus,
        lambda: float(gen.uniform(0.3, np.pi - 0.3)),
        0.1,
    )
    twos.extend((_tau(gen), complex(-1.0)) for _ in range(n_minus))
    twos.extend((_tau(gen), complex(np.exp(1j * t))) for t in thetas)
    form = CongruenceCanonicalForm.build(ones, twos)
    u = random_unitary(n, gen)
    return form, u @ form.assemble() @ u.T


def random_coninvolutory(n: int, gen: np.random.Generator) -> np.ndarray:
    """Random coninvolutory matrix (conj(a) a = I)."""
    q = int(gen.integers(0, n // 2 + 1))
    sigmas = _separated(
        gen, q, lambda: float(gen.uniform(1.2, 2.5)), 0.05
    )
    blocks = [np.eye(n - 2 * q, dtype=np.complex128)]
    blocks.extend(
        np.array([[0.0, 1.0 / s], [s, 0.0]], dtype=np.complex128) for s in sigmas
    )
    u = random_unitary(n, gen)
    return u @ direct_sum(blocks) @ u.T


def random_involution(
    n: int,
    gen: np.random.Generator,
    plus: int | None = None,
    sigmas: list[float] | None = None,
) -> np.ndarray:
    """Random involution with given +1-multiplicity and singular values.

    plus counts the +1 eigenvalues; sigmas lists the singular values
    above 1 (each contributes one 2-by-2 block, so plus must leave room
    for len(sigmas) blocks on both eigenvalue sides).
    """
    if sigmas is None:
        q = int(gen.integers(0, n // 2 + 1))
        sigmas = [float(gen.uniform(1.3, 2.5)) for _ in range(q)]
    q = len(sigmas)
    if plus is None:
        plus = int(gen.integers(q, n - q + 1))
    if not q <= plus <= n - q:
        raise ValueError(f"plus={plus} incompatible with q={q}, n={n}")
    blocks = [np.array([[1.0]], dtype=np.complex128) for _ in range(plus - q)]
    blocks.extend(
        np.array([[-1.0]], dtype=np.complex128) for _ in range(n - plus - q)
    )
    blocks.extend(
        np.array([[0.0, 1.0 / s], [s, 0.0]], dtype=np.complex128) for s in sigmas
    )
    u = random_unitary(n, gen)
    return u @ direct_sum(blocks) @ u.conj().T


def random_lambda_projection(
    n: int, gen: np.random.Generator, lam: complex | None = None
) -> np.ndarray:
    """Random matrix with a^2 = lam a."""
    if lam is None:
        lam = complex(
            gen.uniform(0.5, 1.5) * np.exp(1j * gen.uniform(-np.pi, np.pi))
        )
    lam = complex(lam)
    m2 = int(gen.integers(0, n // 2 + 1))
    rest = n - 2 * m2
    eig_count = int(gen.integers(0, rest + 1)) if lam != 0 else 0
    blocks = [np.array([[lam]], dtype=np.complex128) for _ in range(eig_count)]
    blocks.extend(
        np.array([[lam, gen.uniform(0.4, 2.0)], [0.0, 0.0]], dtype=np.complex128)
        for _ in range(m2)
    )
    blocks.append(np.zeros((rest - eig_count, rest - eig_count), dtype=np.complex128))
    u = random_unitary(n, gen)
    return u @ direct_sum(blocks) @ u.conj().T


def random_quadratic_instance(
    n: int,
    gen: np.random.Generator,
    roots: tuple[complex, complex] | None = None,
    opposite: bool = False,
) -> tuple[np.ndarray, tuple[complex, complex]]:
    """Random matrix with minimal polynomial (t - l1)(t - l2), l1 != l2.

    opposite=True forces l2 = -l1, which keeps the square normal so the
    canonical *congruence pipeline applies as well.  Returns the matrix
    and the roots.
    """
    if roots is None:
        l1 = complex(
            gen.uniform(1.0, 2.0) * np.exp(1j * gen.uniform(-np.pi, np.pi))
        )
        if opposite:
            l2 = -l1
        else:
            l2 = complex(
                gen.uniform(0.4, 0.8) * np.exp(1j * gen.uniform(-np.pi, np.pi))
            )
    else:
        l1, l2 = complex(roots[0]), complex(roots[1])
    m = int(gen.integers(1, n // 2 + 1))
    rest = n - 2 * m
    n1_extra = int(gen.integers(0, rest + 1))
    blocks = [np.array([[l1]], dtype=np.complex128) for _ in range(n1_extra)]
    blocks.extend(
        np.array(
            [[l1, gen.uniform(0.5, 2.0)], [0.0, l2]], dtype=np.complex128
        )
        for _ in range(m)
    )
    blocks.extend(
        np.array([[l2]], dtype=np.complex128) for _ in range(rest - n1_extra)
    )
    u = random_unitary(n, gen)
    return u @ direct_sum(blocks) @ u.conj().T, (l1, l2)
