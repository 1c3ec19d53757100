"""CDGA axioms, exact cohomology, and formal-model extraction."""

from fractions import Fraction

import pytest

from pathring import fixtures
from pathring.cdga import (
    CDGA,
    Augmentation,
    GradedVectorSpace,
    augmentations_of_formal_model,
    formal_model,
    unit_augmentation,
)
from pathring.errors import (
    InvalidAugmentation,
    InvalidCDGA,
    NotConnective,
    NotCurveLike,
)
from pathring.signs import koszul, koszul_shifted, parity

ALL_FIXTURES = [
    fixtures.formal_model_cdga(2),
    fixtures.p1_minus_three_points_cdga(),
    fixtures.sphere_cdga(),
    fixtures.torus_cdga(),
    fixtures.two_idempotent_cdga(),
    fixtures.nilpotent_line_cdga(),
    fixtures.exact_direction_cdga(),
    fixtures.contractible_cdga(),
]


def test_sign_rules():
    assert koszul(1, 1) == -1
    assert koszul(1, 2) == 1
    assert koszul(2, 2) == 1
    assert koszul(3, 5) == -1
    assert koszul(0, 7) == 1
    # bar shift: degree-1 letters commute, degree-0 and degree-2 letters
    # anticommute after the shift
    assert koszul_shifted(1, 1) == 1
    assert koszul_shifted(0, 0) == -1
    assert koszul_shifted(2, 2) == -1
    assert koszul_shifted(0, 1) == 1
    assert parity(0) == 1 and parity(3) == -1


@pytest.mark.parametrize("algebra", ALL_FIXTURES, ids=lambda a: ",".join(a.space.all_names()))
def test_fixture_axioms(algebra):
    assert algebra.check_axioms() == []


def test_planted_dd_violation_names_element():
    space = GradedVectorSpace({0: ["one", "t"], 1: ["u"], 2: ["w"]})
    algebra = CDGA(space, "one", differential={"t": {"u": 1}, "u": {"w": 1}})
    report = algebra.check_axioms()
    assert any(v.axiom == "d*d=0" and v.subjects == ("t",) for v in report)
    with pytest.raises(InvalidCDGA):
        algebra.cohomology(0)


def test_planted_commutativity_violation():
    space = GradedVectorSpace({0: ["one"], 1: ["a", "b"], 2: ["ab"]})
    algebra = CDGA(
        space,
        "one",
        products={("a", "b"): {"ab": 1}, ("b", "a"): {"ab": 1}},
    )
    report = algebra.check_axioms()
    assert any(v.axiom == "graded commutativity" for v in report)


def test_planted_unit_violation():
    space = GradedVectorSpace({0: ["one"], 1: ["a"]})
    algebra = CDGA(space, "one", products={("one", "a"): {"a": 2}})
    report = algebra.check_axioms()
    assert any(v.axiom == "unit" for v in report)


def test_trivial_algebra_cohomology():
    algebra = fixtures.formal_model_cdga(0)
    assert algebra.cohomology(0)[0] == 1


def test_p1_model_cohomology():
    algebra = fixtures.p1_minus_three_points_cdga()
    dim1, reps = algebra.cohomology(1)
    assert dim1 == 2
    assert reps == [{"om0": Fraction(1)}, {"om1": Fraction(1)}]
    assert algebra.cohomology(2)[0] == 0


def test_fixture_cohomology_values():
    sphere = fixtures.sphere_cdga()
    assert [sphere.cohomology(i)[0] for i in range(3)] == [1, 0, 1]
    torus = fixtures.torus_cdga()
    assert [torus.cohomology(i)[0] for i in range(3)] == [1, 2, 1]
    nil = fixtures.nilpotent_line_cdga()
    assert [nil.cohomology(i)[0] for i in range(2)] == [1, 0]
    exact = fixtures.exact_direction_cdga()
    assert [exact.cohomology(i)[0] for i in range(2)] == [1, 1]


@pytest.mark.parametrize("algebra", ALL_FIXTURES, ids=lambda a: ",".join(a.space.all_names()))
def test_euler_characteristic(algebra):
    top = algebra.max_degree()
    chain = sum((-1) ** i * algebra.dim(i) for i in range(top + 1))
    cohom = sum((-1) ** i * algebra.cohomology(i)[0] for i in range(top + 1))
    assert chain == cohom


def test_cohomology_representatives_reproducible():
    a = fixtures.torus_cdga()
    b = fixtures.torus_cdga()
    assert a.cohomology(1) == b.cohomology(1)


def test_augmentation_validation():
    nil = fixtures.nilpotent_line_cdga()
    good = Augmentation(nil, {"one": 1, "t": 0, "t2": 0})
    good.validate()
    bad = Augmentation(nil, {"one": 1, "t": 1, "t2": 0})
    with pytest.raises(InvalidAugmentation):
        bad.validate()  # t is nilpotent, it cannot map to 1
    with pytest.raises(InvalidAugmentation):
        Augmentation(nil, {"one": 0}).validate()
    with pytest.raises(InvalidAugmentation):
        unit_augmentation(fixtures.two_idempotent_cdga())


def test_idempotent_augmentations_are_valid():
    algebra = fixtures.two_idempotent_cdga()
    for aug in fixtures.idempotent_augmentations(algebra):
        aug.validate()


def test_formal_model_identity_case():
    algebra = fixtures.formal_model_cdga(2)
    fm = formal_model(algebra)
    assert fm.h1_letters == ["om0", "om1"]
    assert fm.inclusion["om0"] == {"om0": Fraction(1)}
    assert fm.model.space.basis(1) == ["om0", "om1"]
    assert fm.model.d_of("om0") == {}
    assert fm.model.product("om0", "om1") == {}


def test_formal_model_drops_exact_direction():
    fm = formal_model(fixtures.exact_direction_cdga())
    assert fm.h1_letters == ["u"]
    assert fm.inclusion["u"] == {"u": Fraction(1)}


def test_formal_model_preconditions():
    with pytest.raises(NotCurveLike):
        formal_model(fixtures.sphere_cdga())
    with pytest.raises(NotConnective):
        formal_model(fixtures.two_idempotent_cdga())


def test_formal_model_custom_splitting():
    algebra = fixtures.exact_direction_cdga()
    # u + v is still a cocycle hitting the same H^1 class
    fm = formal_model(algebra, h1_cocycles=[{"u": Fraction(1), "v": Fraction(1)}])
    assert len(fm.h1_letters) == 1
    assert fm.inclusion[fm.h1_letters[0]] == {"u": Fraction(1), "v": Fraction(1)}
    with pytest.raises(ValueError):
        formal_model(algebra, h1_cocycles=[{"v": Fraction(1)}])  # exact, not iso on H^1


@pytest.mark.parametrize("m", [0, 1, 3])
def test_formal_model_augmentations_singleton(m):
    fm = formal_model(fixtures.formal_model_cdga(m))
    augs = augmentations_of_formal_model(fm)
    assert len(augs) == 1
    assert augs[0].evaluate({fm.model.unit: Fraction(1)}) == 1
