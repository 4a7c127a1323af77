"""Class membership flags and the equivalence-of-conditions checks."""

import numpy as np
import pytest

from canonica.predicates import (
    FLAG_NAMES,
    bar_block_dualities,
    bar_double,
    classify,
    verify_characterizations,
)

J2 = np.array([[0.0, 1.0], [0.0, 0.0]])
ROT90 = np.array([[0.0, 1.0], [-1.0, 0.0]])
H2_TWO = np.array([[0.0, 1.0], [2.0, 0.0]])
CONINV = np.array([[0.0, 0.5], [2.0, 0.0]])
INVOL = np.array([[1.0, 1.5], [0.0, -1.0]])


def flags_of(a):
    rep = classify(a)
    return {name for name in FLAG_NAMES if rep[name]}


def test_identity_is_in_every_class():
    rep = classify(np.eye(3))
    assert all(rep[name] for name in FLAG_NAMES)
    assert rep.lam == pytest.approx(1.0)


def test_nilpotent_jordan_block():
    assert flags_of(J2) == {
        "congruence_normal",
        "squared_normal",
        "hermitian_square",
        "lambda_projection",
    }
    assert classify(J2).lam == pytest.approx(0.0)


def test_rotation_by_ninety_degrees():
    assert flags_of(ROT90) == {
        "normal",
        "conjugate_normal",
        "congruence_normal",
        "squared_normal",
        "unitary",
        "hermitian_square",
        "range_hermitian",
    }


def test_weighted_antidiagonal():
    # Congruence normal but not conjugate normal: the singular values
    # attach to the wrong axes for the conjugate condition.
    assert flags_of(H2_TWO) == {
        "congruence_normal",
        "squared_normal",
        "hermitian_square",
        "range_hermitian",
    }


def test_coninvolutory_example():
    rep = classify(CONINV)
    assert rep["coninvolutory"]
    # real entries make conjugation a no-op, so this one is also involutory
    assert rep["involutory"]


def test_coninvolutory_not_involutory():
    # i * CONINV squares to -I but conjugate-squares to I
    rep = classify([[0.0, 0.5j], [2.0j, 0.0]])
    assert rep["coninvolutory"]
    assert not rep["involutory"]


def test_involutory_example():
    rep = classify(INVOL)
    assert rep["involutory"]
    assert rep["congruence_normal"]
    assert not rep["lambda_projection"]


@pytest.mark.parametrize(
    "a, lam",
    [
        ([[1.0, 1.0], [0.0, 0.0]], 1.0),
        ([[2.0, 2.0], [0.0, 0.0]], 2.0),
        ([[0.5j, 0.0], [0.0, 0.0]], 0.5j),
    ],
)
def test_lambda_projection_recovers_scalar(a, lam):
    rep = classify(a)
    assert rep["lambda_projection"]
    assert rep.lam == pytest.approx(lam)


def test_report_json_shape():
    obj = classify(J2).to_json()
    assert set(obj) == {"flags", "residuals", "lambda"}
    assert set(obj["flags"]) == set(FLAG_NAMES)
    assert obj["lambda"] == pytest.approx([0.0, 0.0])
    assert all(isinstance(v, float) for v in obj["residuals"].values())


def test_report_getitem_unknown_flag():
    with pytest.raises(KeyError):
        classify(J2)["positive"]


def test_bar_double_layout():
    d = bar_double([[1j, 2.0], [0.0, 3.0]])
    assert d.shape == (4, 4)
    assert np.array_equal(d[:2, :2], np.zeros((2, 2)))
    assert d[0, 2] == 1j
    assert d[2, 0] == -1j


FAMILIES = (
    "congruence_normal_idents",
    "squared_normal_idents",
    "conjugate_normal_afd",
    "congruence_normal_afd",
)

PROBES = (
    J2,
    ROT90,
    H2_TWO,
    CONINV,
    INVOL,
    np.array([[0.0, 1.0], [0.0, 2.0]]),
    np.array([[1.0, 2.0], [3.0, 4.0]]),
    np.diag([1.0, 0.0, 2.0]),
)


@pytest.mark.parametrize("which", FAMILIES)
def test_characterization_conditions_agree(which):
    # The listed conditions are equivalent, in and out of class alike.
    for a in PROBES:
        res = verify_characterizations(a, which)
        assert res["agree"], (which, a)
        assert isinstance(res["nonsingular"], bool)
        for cond in res["conditions"].values():
            assert set(cond) == {"residual", "holds"}


def test_characterization_holds_in_class():
    res = verify_characterizations(H2_TWO, "congruence_normal_idents")
    assert all(c["holds"] for c in res["conditions"].values())


def test_characterization_fails_out_of_class():
    res = verify_characterizations(
        np.array([[0.0, 1.0], [0.0, 2.0]]), "congruence_normal_idents"
    )
    assert res["agree"]
    assert not any(c["holds"] for c in res["conditions"].values())


def test_characterizations_unknown_family():
    with pytest.raises(ValueError):
        verify_characterizations(J2, "unitary_idents")


def test_bar_block_dualities_agree_on_probes():
    for a in PROBES:
        assert bar_block_dualities(a)["agree"], a


def test_bar_block_dualities_extra_entries_need_inverses():
    singular = set(bar_block_dualities(J2))
    nonsingular = set(bar_block_dualities(H2_TWO))
    assert "squared_vs_congruence" in singular
    assert "congruence_vs_squared" in singular
    assert singular < nonsingular
