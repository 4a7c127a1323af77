"""Reduction of singular matrices and the in-class block split."""

import numpy as np
import pytest

from canonica.errors import PreconditionError
from canonica.matrix import norm, rank
from canonica.regularization import regularize, split_regular_singular
from canonica.blocks import direct_sum
from canonica.sampling import (
    random_congruence_instance,
    random_star_instance,
    random_unitary,
)

J2 = np.array([[0.0, 1.0], [0.0, 0.0]])


def apply(t, a, mode):
    return t @ a @ (t.T if mode == "congruence" else t.conj().T)


def nullity_intersection(a, mode):
    """dim of null(a) ∩ null(a^T) (congruence) or null(a) ∩ null(a*)."""
    other = a.T if mode == "congruence" else a.conj().T
    return a.shape[0] - rank(np.vstack([a, other]), scale=norm(a, kind="spectral"))


@pytest.mark.parametrize("mode", ["congruence", "star"])
def test_nilpotent_jordan_block(mode):
    red = regularize(J2, mode)
    assert (red.m1, red.m2) == (1, 1)
    assert red.sigma == pytest.approx([1.0])
    assert red.core.shape == (1, 1)
    assert norm(apply(red.transform, J2, mode) - red.assembled()) <= 1e-10
    assert norm(red.assembled() - J2) <= 1e-10


def test_nonsingular_input_is_untouched():
    a = np.diag([1.0, 2.0])
    red = regularize(a, "congruence")
    assert (red.m1, red.m2) == (0, 0)
    assert np.array_equal(red.core, a)
    assert np.array_equal(red.transform, np.eye(2))
    assert len(red.sigma) == 0


def test_zero_input():
    red = regularize(np.zeros((3, 3)), "star")
    assert (red.m1, red.m2) == (3, 0)
    assert red.core.shape == (0, 0)
    assert np.array_equal(red.assembled(), np.zeros((3, 3)))


def test_symmetric_rank_one_has_no_coupling():
    # Shared left and right null spaces force m2 = 0.
    u = np.array([[1.0], [2.0]]) / np.sqrt(5.0)
    a = u @ u.T
    red = regularize(a, "congruence")
    assert (red.m1, red.m2) == (1, 0)
    assert abs(red.core[0, 0]) == pytest.approx(1.0)


def test_mode_validation():
    with pytest.raises(ValueError):
        regularize(J2, "both")
    with pytest.raises(ValueError):
        split_regular_singular(J2, "both")


@pytest.mark.parametrize("mode", ["congruence", "star"])
def test_generic_singular_reduction(mode):
    gen = np.random.default_rng(11 if mode == "congruence" else 12)
    for trial in range(10):
        n = 3 + trial % 3
        r = 1 + trial % (n - 1)
        c = gen.standard_normal((n, r)) + 1j * gen.standard_normal((n, r))
        d = gen.standard_normal((r, n)) + 1j * gen.standard_normal((r, n))
        a = c @ d
        red = regularize(a, mode)
        assert red.m1 == n - r
        assert norm(red.transform.conj().T @ red.transform - np.eye(n)) <= 1e-9
        got = apply(red.transform, a, mode)
        assert norm(got - red.assembled()) <= 1e-8 * max(1.0, norm(a))
        assert all(s > 0 for s in red.sigma)
        assert len(red.sigma) == red.m2
        # The coupling count is the nullity minus the shared null space.
        assert red.m2 == red.m1 - nullity_intersection(a, mode)


@pytest.mark.parametrize("mode", ["congruence", "star"])
def test_reduction_shape_is_transformation_invariant(mode):
    # (m1, m2, sigma) must not depend on the unitary presentation.
    gen = np.random.default_rng(21 if mode == "congruence" else 22)
    for trial in range(5):
        n = 4 + trial % 2
        if mode == "congruence":
            _, a = random_congruence_instance(n, gen, singular=True)
        else:
            _, a = random_star_instance(n, gen, singular=True)
        u = random_unitary(n, gen)
        b = apply(u, a, mode)
        red_a = regularize(a, mode)
        red_b = regularize(b, mode)
        assert (red_a.m1, red_a.m2) == (red_b.m1, red_b.m2)
        assert np.sort(red_a.sigma) == pytest.approx(np.sort(red_b.sigma), abs=1e-8)


def test_reduced_form_json_shape():
    obj = regularize(J2, "star").to_json()
    assert set(obj) == {"mode", "m1", "m2", "core", "sigma", "transform"}
    assert obj["sigma"] == pytest.approx([1.0])
    assert obj["core"]["rows"] == 1


def test_split_mixed_example():
    a = direct_sum([J2, np.array([[5.0]])])
    split = split_regular_singular(a, "star")
    assert split.regular.shape == (1, 1)
    assert abs(split.regular[0, 0]) == pytest.approx(5.0)
    assert split.singular_sigmas == pytest.approx([1.0])
    assert split.zero_count == 0
    got = apply(split.transform, a, "star")
    assert norm(got - split.assembled()) <= 1e-8


def test_split_with_zero_rows():
    a = direct_sum([J2, np.zeros((1, 1))])
    split = split_regular_singular(a, "star")
    assert split.regular.shape == (0, 0)
    assert split.singular_sigmas == pytest.approx([1.0])
    assert split.zero_count == 1


def test_split_nonsingular_is_all_regular():
    a = np.diag([2.0, 3.0])
    split = split_regular_singular(a, "congruence")
    assert split.regular.shape == (2, 2)
    assert len(split.singular_sigmas) == 0
    assert split.zero_count == 0


def test_split_requires_class_membership():
    with pytest.raises(PreconditionError):
        split_regular_singular([[0.0, 1.0], [0.0, 2.0]], "congruence")


def test_split_random_instances_round_trip():
    gen = np.random.default_rng(31)
    for trial in range(5):
        n = 4 + trial % 3
        mode = "congruence" if trial % 2 == 0 else "star"
        if mode == "congruence":
            _, a = random_congruence_instance(n, gen, singular=True)
        else:
            _, a = random_star_instance(n, gen, singular=True)
        split = split_regular_singular(a, mode)
        got = apply(split.transform, a, mode)
        assert norm(got - split.assembled()) <= 1e-7 * max(1.0, norm(a))
        assert rank(split.regular) == split.regular.shape[0]


def test_split_json_shape():
    obj = split_regular_singular(J2, "star").to_json()
    assert set(obj) == {
        "mode",
        "regular",
        "singular_sigmas",
        "zero_count",
        "transform",
    }
