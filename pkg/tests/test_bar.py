"""Reduced bar complexes: construction, D*D = 0, exact cohomology, theorems.

The dense row-reduction oracle below is local to this file and shares no
code with pathring.linalg; dimensions asserted against it are computed
twice through independent eliminations.
"""

from fractions import Fraction

import pytest

from pathring import fixtures, hopf
from pathring.bar import (
    BarComplex,
    bar_cohomology,
    build_bar,
    h0_length_graded_dims,
    h0_product_coordinates,
    reduce_letters,
    shuffle_words,
    verify_concentration,
    verify_connectedness,
)
from pathring.cdga import Augmentation, formal_model, unit_augmentation
from pathring.errors import BasisCapExceeded, InvalidAugmentation


def dense_rank(rows):
    """Oracle: plain Gaussian elimination on dense rational rows."""
    rows = [list(r) for r in rows]
    rank = 0
    cols = len(rows[0]) if rows else 0
    for col in range(cols):
        pivot = None
        for i in range(rank, len(rows)):
            if rows[i][col]:
                pivot = i
                break
        if pivot is None:
            continue
        rows[rank], rows[pivot] = rows[pivot], rows[rank]
        inv = Fraction(1) / rows[rank][col]
        rows[rank] = [x * inv for x in rows[rank]]
        for i in range(len(rows)):
            if i != rank and rows[i][col]:
                f = rows[i][col]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[rank])]
        rank += 1
    return rank


def oracle_cohomology_dims(complex_: BarComplex):
    """H^i dims from the stored matrices via the dense oracle."""
    dims = {}
    for deg in complex_.degrees():
        n = complex_.dim(deg)
        d_here = complex_.matrix(deg)
        rows_here = [[d_here.entry(r, c) for c in range(n)] for r in range(d_here.rows)]
        rank_here = dense_rank(rows_here) if rows_here else 0
        d_below = complex_.matrix(deg - 1)
        rows_below = [
            [d_below.entry(r, c) for c in range(d_below.cols)] for r in range(d_below.rows)
        ]
        rank_below = dense_rank([list(col) for col in zip(*rows_below)]) if d_below.cols and d_below.rows else 0
        dims[deg] = n - rank_here - rank_below
    return dims


def loop_bar(algebra, truncation):
    aug = unit_augmentation(algebra)
    return build_bar(algebra, aug, aug, truncation)


# -- letters -------------------------------------------------------------


def test_reduce_letters_formal_model():
    algebra = fixtures.formal_model_cdga(2)
    reduced = reduce_letters(algebra, unit_augmentation(algebra))
    assert [(l.name, l.degree) for l in reduced.letters] == [("om0", 1), ("om1", 1)]


def test_reduce_letters_trivial_degree_zero():
    algebra = fixtures.formal_model_cdga(0)
    reduced = reduce_letters(algebra, unit_augmentation(algebra))
    assert reduced.letters == []


def test_reduce_letters_idempotent():
    algebra = fixtures.two_idempotent_cdga()
    at_zero, _ = fixtures.idempotent_augmentations(algebra)
    reduced = reduce_letters(algebra, at_zero)
    assert [(l.name, l.degree, l.vector) for l in reduced.letters] == [
        ("e", 0, {"e": Fraction(1)})
    ]


def test_reduce_letters_rejects_bad_augmentation():
    algebra = fixtures.two_idempotent_cdga()
    with pytest.raises(InvalidAugmentation):
        reduce_letters(algebra, Augmentation(algebra, {"one": 1, "e": 2}))


# -- construction --------------------------------------------------------


def test_formal_model_bar_differential_is_zero():
    complex_ = loop_bar(fixtures.formal_model_cdga(2), 4)
    assert all(m.is_zero() for m in complex_.matrices.values())


def test_truncation_zero_is_base_field():
    complex_ = loop_bar(fixtures.formal_model_cdga(2), 0)
    assert complex_.graded_basis == {0: [()]}
    assert bar_cohomology(complex_, 0) == (1, [{(): Fraction(1)}])


def test_sphere_words_by_direct_enumeration():
    complex_ = loop_bar(fixtures.sphere_cdga(), 3)
    # only letter: e in degree 2; the length-n word sits in degree n
    for n in range(4):
        assert complex_.graded_basis[n] == [tuple([0] * n)]
    assert all(m.is_zero() for m in complex_.matrices.values())


def test_basis_cap_guard():
    algebra = fixtures.formal_model_cdga(3)
    aug = unit_augmentation(algebra)
    with pytest.raises(BasisCapExceeded):
        build_bar(algebra, aug, aug, 5, basis_cap=100)


def test_length_filtration_of_differential():
    algebra = fixtures.nilpotent_line_cdga()
    aug = Augmentation(algebra, {"one": 1, "t": 0, "t2": 0})
    complex_ = build_bar(algebra, aug, aug, 3)
    for deg, matrix in complex_.matrices.items():
        src = complex_.graded_basis[deg]
        tgt = complex_.graded_basis.get(deg + 1, [])
        for (r, c) in matrix.entries:
            assert len(tgt[r]) in (len(src[c]), len(src[c]) - 1)


# -- cohomology ------------------------------------------------------------


@pytest.mark.parametrize("m", [0, 1, 2, 3])
def test_formal_model_h0_is_tensor_algebra(m):
    complex_ = loop_bar(fixtures.formal_model_cdga(m), 3)
    expected = sum(m**n for n in range(4))
    assert bar_cohomology(complex_, 0)[0] == expected
    assert bar_cohomology(complex_, 1)[0] == 0
    assert bar_cohomology(complex_, -1)[0] == 0


def test_formal_model_h0_basis_is_all_words():
    complex_ = loop_bar(fixtures.formal_model_cdga(2), 3)
    _, reps = bar_cohomology(complex_, 0)
    words = sorted(complex_.graded_basis[0], key=lambda w: (len(w), w))
    assert [set(r) == {w} and r[w] == 1 for r, w in zip(reps, words)] == [True] * len(words)


def test_sphere_cohomology_against_oracle():
    complex_ = loop_bar(fixtures.sphere_cdga(), 4)
    dims = {deg: bar_cohomology(complex_, deg)[0] for deg in complex_.degrees()}
    assert dims == {0: 1, 1: 1, 2: 1, 3: 1, 4: 1}
    assert dims == oracle_cohomology_dims(complex_)


def test_torus_h0_matches_symmetric_dimensions():
    # the free rank-2 abelian case: length-graded H^0 dims are n + 1
    complex_ = loop_bar(fixtures.torus_cdga(), 4)
    assert h0_length_graded_dims(complex_) == [1, 2, 3, 4, 5]
    dims = {deg: bar_cohomology(complex_, deg)[0] for deg in complex_.degrees()}
    assert dims == oracle_cohomology_dims(complex_)


def test_nilpotent_line_bar_is_trivial():
    algebra = fixtures.nilpotent_line_cdga()
    aug = Augmentation(algebra, {"one": 1, "t": 0, "t2": 0})
    complex_ = build_bar(algebra, aug, aug, 4)
    dims = {deg: bar_cohomology(complex_, deg)[0] for deg in complex_.degrees()}
    assert dims[0] == 1
    assert all(d == 0 for deg, d in dims.items() if deg != 0)
    assert dims == oracle_cohomology_dims(complex_)


def test_contractible_bar_is_trivial():
    complex_ = loop_bar(fixtures.contractible_cdga(), 4)
    dims = {deg: bar_cohomology(complex_, deg)[0] for deg in complex_.degrees()}
    assert dims == {0: 1, 1: 0, 2: 0, 3: 0, 4: 0}


def test_two_point_path_ring_h0_vanishes():
    algebra = fixtures.two_idempotent_cdga()
    at_zero, at_one = fixtures.idempotent_augmentations(algebra)
    complex_ = build_bar(algebra, at_zero, at_one, 4)
    assert bar_cohomology(complex_, 0)[0] == 0
    # with equal endpoints the empty word class survives
    loop = build_bar(algebra, at_zero, at_zero, 4)
    assert bar_cohomology(loop, 0)[0] == 1


def test_truncation_stability_of_h0_classes():
    small = loop_bar(fixtures.formal_model_cdga(2), 3)
    large = loop_bar(fixtures.formal_model_cdga(2), 4)
    def classes(c, max_len):
        _, reps = bar_cohomology(c, 0)
        return sorted(
            tuple(sorted(r.items())) for r in reps if all(len(w) <= max_len for w in r)
        )
    assert classes(small, 2) == classes(large, 2)


def test_splitting_independence_of_dimensions():
    algebra = fixtures.exact_direction_cdga()
    default = formal_model(algebra)
    twisted = formal_model(algebra, h1_cocycles=[{"u": Fraction(1), "v": Fraction(1)}])
    for model in (default, twisted):
        aug = unit_augmentation(model.model)
        complex_ = build_bar(model.model, aug, aug, 3)
        assert bar_cohomology(complex_, 0)[0] == sum(1**n for n in range(4))


# -- theorem reports -------------------------------------------------------


def test_concentration_report_formal_model():
    report = verify_concentration(loop_bar(fixtures.formal_model_cdga(2), 4))
    assert report.passed
    assert report.h0_length_graded == [1, 2, 4, 8, 16]
    assert report.dims == {0: 31}


def test_concentration_report_sphere_fails():
    report = verify_concentration(loop_bar(fixtures.sphere_cdga(), 4))
    assert not report.passed
    assert report.dims[2] == 1


def test_concentration_truncation_zero_vacuous():
    report = verify_concentration(loop_bar(fixtures.formal_model_cdga(2), 0))
    assert report.passed


def test_connectedness_reports():
    assert verify_connectedness(loop_bar(fixtures.formal_model_cdga(2), 3)).passed
    assert verify_connectedness(loop_bar(fixtures.formal_model_cdga(0), 0)).passed
    algebra = fixtures.two_idempotent_cdga()
    at_zero, at_one = fixtures.idempotent_augmentations(algebra)
    report = verify_connectedness(build_bar(algebra, at_zero, at_one, 4))
    assert not report.passed and report.h0_dim == 0


# -- products on H^0 ---------------------------------------------------------


def test_chain_shuffle_counts_on_formal_model():
    complex_ = loop_bar(fixtures.formal_model_cdga(2), 4)
    out = shuffle_words(complex_.reduced, (0, 1), (0,))
    assert out == {(0, 1, 0): Fraction(1), (0, 0, 1): Fraction(2)}


@pytest.mark.parametrize("m,n", [(1, 4), (2, 4)])
def test_bar_h0_product_equals_shuffle(m, n):
    complex_ = loop_bar(fixtures.formal_model_cdga(m), n)
    algebra_h = hopf.TensorWordAlgebra([f"om{i}" for i in range(m)], n)
    _, reps = bar_cohomology(complex_, 0)
    # identify representative index -> word (reps are single words, coeff 1)
    rep_word = []
    for rep in reps:
        (word, coeff), = rep.items()
        assert coeff == 1
        rep_word.append(word)
    index_of = {w: i for i, w in enumerate(rep_word)}
    for i, u in enumerate(rep_word):
        for j, v in enumerate(rep_word):
            if len(u) + len(v) > n:
                continue
            coords = h0_product_coordinates(complex_, i, j)
            got = {rep_word[k]: c for k, c in enumerate(coords) if c}
            expected = hopf.shuffle_product(algebra_h, u, v)
            assert got == expected
