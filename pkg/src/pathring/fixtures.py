"""Canonical desk-scale fixtures used by the CLI and the test suite.

The affine-curve models (formal shape), the 2-sphere hypothesis-violation
control, the two-idempotent counterexample, and a couple of sign-stress
algebras with nonzero differentials and products.
"""

from __future__ import annotations

from fractions import Fraction
from importlib import resources

from .cdga import CDGA, Augmentation, GradedVectorSpace, unit_augmentation

ONE = Fraction(1)


def fixture_path(name: str) -> str:
    """Filesystem path of a shipped JSON fixture document."""
    return str(resources.files("pathring").joinpath("fixtures_data", name))


def formal_model_cdga(m: int) -> CDGA:
    """Unit plus m closed degree-1 generators with vanishing products.

    For m = 2 this is the standard model of the projective line minus
    three points, with letters om0, om1.
    """
    letters = [f"om{i}" for i in range(m)]
    space = GradedVectorSpace({0: ["one"], 1: letters})
    return CDGA(space, unit="one")


def p1_minus_three_points_cdga() -> CDGA:
    return formal_model_cdga(2)


def sphere_cdga() -> CDGA:
    """Unit plus one closed degree-2 generator squaring to zero."""
    space = GradedVectorSpace({0: ["one"], 2: ["e"]})
    return CDGA(space, unit="one")


def torus_cdga() -> CDGA:
    """Exterior algebra on two degree-1 generators with a*b nonzero.

    H^2 is one-dimensional, so this is curve-like in no way; it stresses
    the merge part of the bar differential.
    """
    space = GradedVectorSpace({0: ["one"], 1: ["a", "b"], 2: ["ab"]})
    return CDGA(space, unit="one", products={("a", "b"): {"ab": 1}})


def two_idempotent_cdga() -> CDGA:
    """Functions on two points: basis (1, e) with e*e = e.

    H^0 is two-dimensional; the two evaluation augmentations give the
    connectedness counterexample.
    """
    space = GradedVectorSpace({0: ["one", "e"]})
    return CDGA(space, unit="one", products={("e", "e"): {"e": 1}})


def idempotent_augmentations(algebra: CDGA):
    """The two point evaluations of the two-idempotent algebra."""
    at_zero = Augmentation(algebra, {"one": 1, "e": 0})
    at_one = Augmentation(algebra, {"one": 1, "e": 1})
    return at_zero, at_one


def nilpotent_line_cdga() -> CDGA:
    """Truncated polynomial de Rham model: t nilpotent, dt = u.

    Contractible (cohomology Q in degree 0) but with nonzero products and
    a nonzero differential interacting in the bar complex; the strongest
    in-repo stress test of the sign conventions.
    """
    space = GradedVectorSpace({0: ["one", "t", "t2"], 1: ["u", "tu"]})
    return CDGA(
        space,
        unit="one",
        differential={"t": {"u": 1}, "t2": {"tu": 2}},
        products={("t", "t"): {"t2": 1}, ("t", "u"): {"tu": 1}},
    )


def exact_direction_cdga() -> CDGA:
    """Degree-1 space = one cocycle direction plus one exact direction."""
    space = GradedVectorSpace({0: ["one", "t"], 1: ["u", "v"]})
    return CDGA(space, unit="one", differential={"t": {"v": 1}})


def contractible_cdga() -> CDGA:
    """dx = y with all products zero; cohomology is Q in degree 0."""
    space = GradedVectorSpace({0: ["one"], 1: ["x"], 2: ["y"]})
    return CDGA(space, unit="one", differential={"x": {"y": 1}})


def canonical_augmentation(algebra: CDGA) -> Augmentation:
    return unit_augmentation(algebra)
