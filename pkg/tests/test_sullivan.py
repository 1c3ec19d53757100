"""Staged free replacements: elementary algebras, pushout steps, augmentations."""

from fractions import Fraction

import pytest

from pathring import fixtures
from pathring.cdga import formal_model
from pathring.errors import NonChainMap, PathringError
from pathring.sullivan import (
    FreeCDGA,
    StageMap,
    augmentation_count,
    bg_initial,
    bg_step,
    elementary_S,
    elementary_T,
)


def test_S1_is_exterior():
    s = elementary_S(1)
    assert s.generators == [("a", 1)]
    assert s.dims_by_degree()[2] == 0  # a*a = 0


def test_S2_polynomial_monomials():
    s = elementary_S(2, degree_cap=6)
    names = [s.mono_name(m) for d in range(7) for m in s.monomials(d)]
    assert names == ["1", "a", "a^2", "a^3"]


def test_S0_and_T0_error():
    with pytest.raises(ValueError):
        elementary_S(0)
    with pytest.raises(ValueError):
        elementary_T(0)


def test_T1_acyclic():
    t = elementary_T(1, degree_cap=4)
    assert t.cohomology_dim(0) == 1
    assert [t.cohomology_dim(i) for i in (1, 2, 3)] == [0, 0, 0]


def test_T2_differential_degree():
    t = elementary_T(2, degree_cap=5)
    (mono,) = t.d_gen[0].keys()
    assert t.mono_degree(mono) == 3  # db = c with |c| = 3


def test_mono_mul_odd_generators_anticommute():
    f = FreeCDGA([("x", 1), ("y", 1)], degree_cap=3)
    sign_xy, mono_xy = f.mono_mul(((0, 1),), ((1, 1),))
    sign_yx, mono_yx = f.mono_mul(((1, 1),), ((0, 1),))
    assert mono_xy == mono_yx and sign_xy == -sign_yx
    assert f.mono_mul(((0, 1),), ((0, 1),)) is None


def test_free_cdga_rejects_broken_differential():
    with pytest.raises(PathringError):
        # d(x) = y, d(y) = z with dz = 0 fails d*d = 0 at x
        FreeCDGA(
            [("x", 1), ("y", 2), ("z", 3)],
            {0: {((1, 1),): 1}, 1: {((2, 1),): 1}},
            degree_cap=4,
        )


def test_bg_initial_formal_model():
    fm = formal_model(fixtures.formal_model_cdga(2))
    stage, psi = bg_initial(fm, degree_cap=3)
    assert stage.generators == [("x_om0", 1), ("x_om1", 1)]
    assert psi.images[0] == {"om0": Fraction(1)}
    assert psi.chain_map_defects() == []


def test_bg_initial_no_letters():
    fm = formal_model(fixtures.formal_model_cdga(0))
    stage, _ = bg_initial(fm, degree_cap=3)
    assert stage.generators == []
    assert stage.dims_by_degree() == {0: 1, 1: 0, 2: 0, 3: 0}


def test_bg_initial_sphere():
    stage, psi = bg_initial(fixtures.sphere_cdga(), degree_cap=5)
    assert stage.generators == [("x_e", 2)]
    assert psi.images[0] == {"e": Fraction(1)}


def test_bg_step_formal_model_adjoins_one_killer():
    fm = formal_model(fixtures.formal_model_cdga(2))
    stage, psi = bg_initial(fm, degree_cap=3)
    # degree-2 cocycles of the exterior stage: just x_om0 * x_om1
    assert stage.cohomology_dim(2) == 1
    stage2, psi2 = bg_step(stage, psi)
    assert len(stage2.generators) == 3
    name, degree = stage2.generators[2]
    assert degree == 1
    assert stage2.mono_name(next(iter(stage2.d_gen[2]))) == "x_om0*x_om1"
    assert psi2.images[2] == {}  # its target preimage is zero
    assert psi2.chain_map_defects() == []


def test_bg_step_empty_model_stalls():
    fm = formal_model(fixtures.formal_model_cdga(0))
    stage, psi = bg_initial(fm, degree_cap=3)
    stage2, _ = bg_step(stage, psi)
    assert stage2.generators == []


def test_bg_step_sphere_kills_square():
    stage, psi = bg_initial(fixtures.sphere_cdga(), degree_cap=5)
    stage2, psi2 = bg_step(stage, psi)
    assert len(stage2.generators) == 2
    name, degree = stage2.generators[1]
    assert degree == 3
    assert stage2.mono_name(next(iter(stage2.d_gen[1]))) == "x_e^2"
    assert psi2.chain_map_defects() == []


@pytest.mark.parametrize("m", [1, 2])
def test_stage_invariants_through_three_stages(m):
    fm = formal_model(fixtures.formal_model_cdga(m))
    stage, psi = bg_initial(fm, degree_cap=3)
    for _ in range(2):
        stage, psi = bg_step(stage, psi)
        assert stage.cohomology_dim(0) == 1
        assert stage.cohomology_dim(1) == m  # letters survive, nothing extra
        assert psi.chain_map_defects() == []
        assert augmentation_count(stage)[0] == 1


def test_augmentation_count_base_cases():
    fm = formal_model(fixtures.formal_model_cdga(2))
    stage, _ = bg_initial(fm, degree_cap=3)
    count, witness = augmentation_count(stage)
    assert count == 1
    assert witness == {"x_om0": Fraction(0), "x_om1": Fraction(0)}
    trivial = FreeCDGA([], {}, degree_cap=2)
    assert augmentation_count(trivial)[0] == 1


def test_non_chain_map_is_rejected():
    # T(1) maps into the contractible algebra by b -> x, c -> dx = y
    target = fixtures.contractible_cdga()
    stage = elementary_T(1, degree_cap=3)
    good = StageMap(stage, target, {0: {"x": Fraction(1)}, 1: {"y": Fraction(1)}})
    good.ensure_chain_map()
    bad = StageMap(stage, target, {0: {"x": Fraction(1)}, 1: {}})
    assert bad.chain_map_defects() == ["b"]
    with pytest.raises(NonChainMap):
        bad.ensure_chain_map()


def test_cohomology_needs_room_below_cap():
    s = elementary_S(1, degree_cap=2)
    with pytest.raises(ValueError):
        s.cohomology_dim(2)
