"""Finite-dimensional commutative differential graded algebras over Q.

A CDGA is given by an explicit graded basis, a differential table, and a
product table.  The axioms (d*d = 0, Leibniz, graded commutativity,
associativity, unit) are checked by `check_axioms`, which reports
violations as data rather than raising.  Cohomology is computed exactly
through the linalg module, and `formal_model` extracts the
quasi-isomorphic replacement Q + H^1 (zero differential, vanishing
products of degree-1 elements) that exists for curve-like algebras.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from . import linalg
from .errors import (
    InvalidAugmentation,
    InvalidCDGA,
    NonVanishingProducts,
    NotConnective,
    NotCurveLike,
)
from .linalg import SparseMatrix, kernel_basis, quotient_basis, rank, rational
from .signs import koszul

ZERO = Fraction(0)
ONE = Fraction(1)

# Vectors are sparse dicts basis_name -> Fraction with no stored zeros.
Vector = dict


def vec_clean(v: Vector) -> Vector:
    return {k: val for k, val in v.items() if val}


def vec_add_into(acc: Vector, v: Vector, scale: Fraction = ONE) -> None:
    for k, val in v.items():
        nv = acc.get(k, ZERO) + scale * val
        if nv:
            acc[k] = nv
        else:
            acc.pop(k, None)


def vec_scale(v: Vector, scale: Fraction) -> Vector:
    if not scale:
        return {}
    return {k: scale * val for k, val in v.items()}


class GradedVectorSpace:
    """Finite graded basis with unique names across all degrees."""

    def __init__(self, degrees):
        # degrees: mapping or iterable of (degree, [names]); empty lists allowed
        if isinstance(degrees, dict):
            items = sorted(degrees.items())
        else:
            items = sorted((int(d), list(names)) for d, names in degrees)
        self.degrees = [(int(d), list(names)) for d, names in items]
        self._degree_of = {}
        self._index_of = {}
        for d, names in self.degrees:
            if d < 0:
                raise ValueError("negative degrees are not supported")
            for i, name in enumerate(names):
                if not name:
                    raise ValueError("empty basis name")
                if name in self._degree_of:
                    raise ValueError(f"duplicate basis name {name!r}")
                self._degree_of[name] = d
                self._index_of[name] = i

    def basis(self, degree: int) -> list:
        for d, names in self.degrees:
            if d == degree:
                return names
        return []

    def dim(self, degree: int) -> int:
        return len(self.basis(degree))

    def degree_of(self, name: str) -> int:
        try:
            return self._degree_of[name]
        except KeyError:
            raise KeyError(f"unknown basis element {name!r}") from None

    def index_of(self, name: str) -> int:
        return self._index_of[name]

    def max_degree(self) -> int:
        return max((d for d, names in self.degrees if names), default=0)

    def all_names(self) -> list:
        out = []
        for _, names in self.degrees:
            out.extend(names)
        return out


@dataclass(frozen=True)
class AxiomViolation:
    axiom: str
    subjects: tuple
    detail: str

    def __str__(self):
        where = ", ".join(self.subjects)
        return f"{self.axiom} violated at ({where}): {self.detail}"


class CDGA:
    """Explicit cdga: graded basis, unit, differential table, product table.

    `differential` maps basis names to vectors one degree up (missing
    names differentiate to zero).  `products` maps ordered name pairs to
    vectors in the sum degree; pairs absent in both orders multiply to
    zero, except unit products which default to the identity rule.
    """

    def __init__(self, space: GradedVectorSpace, unit: str, differential=None, products=None):
        self.space = space
        self.unit = unit
        if space.degree_of(unit) != 0:
            raise ValueError("unit must live in degree 0")
        self._d = {}
        for name, vec in (differential or {}).items():
            d = space.degree_of(name)
            vec = vec_clean({k: rational(v) for k, v in vec.items()})
            for k in vec:
                if space.degree_of(k) != d + 1:
                    raise ValueError(f"d({name}) has a component {k} outside degree {d + 1}")
            if vec:
                self._d[name] = vec
        self._products = {}
        for (a, b), vec in (products or {}).items():
            da, db = space.degree_of(a), space.degree_of(b)
            vec = vec_clean({k: rational(v) for k, v in vec.items()})
            for k in vec:
                if space.degree_of(k) != da + db:
                    raise ValueError(f"product ({a},{b}) has component {k} outside degree {da + db}")
            self._products[(a, b)] = vec
        self._d_matrices = {}
        self._valid = None
        self._cohomology_cache = {}

    # -- basic structure ---------------------------------------------------

    def dim(self, degree: int) -> int:
        return self.space.dim(degree)

    def max_degree(self) -> int:
        return self.space.max_degree()

    def d_of(self, name: str) -> Vector:
        return self._d.get(name, {})

    def product(self, a: str, b: str) -> Vector:
        """Product of two basis elements, deriving missing orders by sign."""
        if (a, b) in self._products:
            return self._products[(a, b)]
        if (b, a) in self._products:
            sign = koszul(self.space.degree_of(a), self.space.degree_of(b))
            return vec_scale(self._products[(b, a)], Fraction(sign))
        if a == self.unit:
            return {b: ONE}
        if b == self.unit:
            return {a: ONE}
        return {}

    def differential_vec(self, v: Vector) -> Vector:
        out = {}
        for name, coeff in v.items():
            vec_add_into(out, self.d_of(name), coeff)
        return out

    def product_vec(self, va: Vector, vb: Vector) -> Vector:
        out = {}
        for a, ca in va.items():
            for b, cb in vb.items():
                vec_add_into(out, self.product(a, b), ca * cb)
        return out

    def to_coords(self, v: Vector, degree: int) -> list:
        names = self.space.basis(degree)
        idx = {name: i for i, name in enumerate(names)}
        out = [ZERO] * len(names)
        for name, coeff in v.items():
            if self.space.degree_of(name) != degree:
                raise ValueError(f"{name} is not in degree {degree}")
            out[idx[name]] = coeff
        return out

    def from_coords(self, coords, degree: int) -> Vector:
        names = self.space.basis(degree)
        return vec_clean({names[i]: c for i, c in enumerate(coords)})

    def d_matrix(self, degree: int) -> SparseMatrix:
        """Matrix of d: A^degree -> A^(degree+1) in the stored bases."""
        if degree in self._d_matrices:
            return self._d_matrices[degree]
        src = self.space.basis(degree)
        tgt = self.space.basis(degree + 1)
        tgt_idx = {name: i for i, name in enumerate(tgt)}
        entries = {}
        for j, name in enumerate(src):
            for out_name, coeff in self.d_of(name).items():
                entries[(tgt_idx[out_name], j)] = coeff
        mat = SparseMatrix(len(tgt), len(src), entries)
        self._d_matrices[degree] = mat
        return mat

    # -- axioms ------------------------------------------------------------

    def check_axioms(self) -> list:
        """Return every axiom violation; empty list iff this is a valid cdga."""
        violations = []
        names = self.space.all_names()
        deg = self.space.degree_of

        if self.d_of(self.unit):
            violations.append(AxiomViolation("d(unit)=0", (self.unit,), "unit is not closed"))

        for name in names:
            dd = self.differential_vec(self.d_of(name))
            if dd:
                violations.append(AxiomViolation("d*d=0", (name,), f"d(d({name})) = {dd}"))

        for a in names:
            if self.product(self.unit, a) != {a: ONE}:
                violations.append(AxiomViolation("unit", (a,), "unit*a != a"))

        for a in names:
            for b in names:
                ab = self.product(a, b)
                ba = self.product(b, a)
                sign = koszul(deg(a), deg(b))
                if ab != vec_scale(ba, Fraction(sign)):
                    violations.append(
                        AxiomViolation("graded commutativity", (a, b), "a*b != (-1)^(|a||b|) b*a")
                    )
                # Leibniz: d(ab) = da*b + (-1)^|a| a*db
                lhs = self.differential_vec(ab)
                rhs = self.product_vec(self.d_of(a), {b: ONE})
                vec_add_into(rhs, self.product_vec({a: ONE}, self.d_of(b)), Fraction(koszul(deg(a), 1)))
                if lhs != rhs:
                    violations.append(AxiomViolation("Leibniz", (a, b), "d(a*b) != da*b + (-1)^|a| a*db"))

        for a in names:
            for b in names:
                ab = self.product(a, b)
                for c in names:
                    lhs = self.product_vec(ab, {c: ONE})
                    rhs = self.product_vec({a: ONE}, self.product(b, c))
                    if lhs != rhs:
                        violations.append(AxiomViolation("associativity", (a, b, c), "(a*b)*c != a*(b*c)"))
        return violations

    def ensure_valid(self) -> None:
        if self._valid is None:
            self._valid = self.check_axioms()
        if self._valid:
            raise InvalidCDGA("; ".join(str(v) for v in self._valid[:3]))

    # -- cohomology ----------------------------------------------------------

    def cohomology_full(self, degree: int):
        """(dimension, representatives, coordinates) of H^degree, cached."""
        self.ensure_valid()
        if degree in self._cohomology_cache:
            return self._cohomology_cache[degree]
        dim_here = self.dim(degree)
        if dim_here == 0:
            result = (0, [], lambda v: [])
            self._cohomology_cache[degree] = result
            return result
        cocycles = kernel_basis(self.d_matrix(degree))
        if degree > 0 and self.dim(degree - 1) > 0:
            below = self.d_matrix(degree - 1)
            boundaries = [col for col in below.columns() if any(col)]
        else:
            boundaries = []
        reps, coords = quotient_basis(dim_here, boundaries, cocycles)
        result = (len(reps), [self.from_coords(r, degree) for r in reps], coords)
        self._cohomology_cache[degree] = result
        return result

    def cohomology(self, degree: int):
        """Exact (dimension, representatives) of ker d / im d in one degree."""
        dim, reps, _ = self.cohomology_full(degree)
        return dim, reps


def check_axioms(algebra: CDGA) -> list:
    return algebra.check_axioms()


def cohomology(algebra: CDGA, degree: int):
    return algebra.cohomology(degree)


class Augmentation:
    """Degree-0 algebra map to Q, given by its values on the degree-0 basis."""

    def __init__(self, algebra: CDGA, values):
        self.algebra = algebra
        self.values = {name: rational(v) for name, v in values.items()}
        for name in self.values:
            if algebra.space.degree_of(name) != 0:
                raise InvalidAugmentation(f"{name} is not a degree-0 basis element")

    def validate(self) -> None:
        alg = self.algebra
        if self.evaluate({alg.unit: ONE}) != ONE:
            raise InvalidAugmentation("augmentation does not send the unit to 1")
        basis0 = alg.space.basis(0)
        for a in basis0:
            for b in basis0:
                lhs = self.evaluate(alg.product(a, b))
                rhs = self.evaluate({a: ONE}) * self.evaluate({b: ONE})
                if lhs != rhs:
                    raise InvalidAugmentation(f"not multiplicative on ({a}, {b})")

    def evaluate(self, v: Vector) -> Fraction:
        """Evaluate on a vector; positive-degree components map to 0."""
        total = ZERO
        for name, coeff in v.items():
            if self.algebra.space.degree_of(name) == 0:
                total += coeff * self.values.get(name, ZERO)
        return total


def unit_augmentation(algebra: CDGA) -> Augmentation:
    """The canonical augmentation when A^0 is spanned by the unit."""
    if algebra.space.basis(0) != [algebra.unit]:
        raise InvalidAugmentation("degree 0 is not spanned by the unit alone")
    return Augmentation(algebra, {algebra.unit: ONE})


@dataclass
class FormalModel:
    """Quasi-isomorphic replacement Q + H^1 with zero differential.

    `inclusion` sends each model basis name to its cocycle in the source;
    `h1_letters` lists the degree-1 model basis in order.
    """

    model: CDGA
    inclusion: dict
    h1_letters: list
    source: CDGA

    def letter_vector(self, name: str) -> Vector:
        return self.inclusion[name]


def _fresh_name(base: str, taken: set) -> str:
    if base not in taken:
        return base
    k = 0
    while f"{base}_{k}" in taken:
        k += 1
    return f"{base}_{k}"


def formal_model(algebra: CDGA, h1_cocycles=None) -> FormalModel:
    """Extract the zero-differential model Q + H^1 of a curve-like cdga.

    Preconditions: H^0 is spanned by the unit and H^i = 0 for i >= 2.
    The degree-1 splitting is chosen by the deterministic lowest-pivot
    rule; pass `h1_cocycles` (vectors of degree-1 cocycles) to impose a
    different splitting, which is validated the same way.
    """
    algebra.ensure_valid()
    h0_dim, _ = algebra.cohomology(0)
    if h0_dim != 1:
        raise NotConnective(f"H^0 has dimension {h0_dim}, expected 1")
    for i in range(2, algebra.max_degree() + 2):
        hi, _ = algebra.cohomology(i)
        if hi:
            raise NotCurveLike(f"H^{i} has dimension {hi}, expected 0")

    h1_dim, default_reps, _ = algebra.cohomology_full(1)
    if h1_cocycles is None:
        reps = default_reps
    else:
        reps = [vec_clean(dict(v)) for v in h1_cocycles]
        if len(reps) != h1_dim:
            raise ValueError(f"expected {h1_dim} cocycles for the splitting, got {len(reps)}")
        for v in reps:
            if algebra.differential_vec(v):
                raise ValueError("supplied splitting vector is not a cocycle")
        # must map isomorphically onto H^1: independent modulo boundaries
        boundaries = [c for c in algebra.d_matrix(0).columns() if any(c)] if algebra.dim(0) else []
        coords = [algebra.to_coords(v, 1) for v in reps]
        if linalg.rank(SparseMatrix.from_dense(coords + boundaries)) - (
            linalg.rank(SparseMatrix.from_dense(boundaries)) if boundaries else 0
        ) != h1_dim:
            raise ValueError("supplied splitting does not map isomorphically onto H^1")

    # products of chosen representatives must vanish in H^2 (guaranteed by
    # the curve-like precondition; asserted anyway)
    for i, va in enumerate(reps):
        for vb in reps[i:]:
            prod = algebra.product_vec(va, vb)
            if prod:
                coords = algebra.to_coords(prod, 2)
                image = [c for c in algebra.d_matrix(1).columns() if any(c)]
                if not image or rank(SparseMatrix.from_dense(image + [coords])) != rank(
                    SparseMatrix.from_dense(image)
                ):
                    raise NonVanishingProducts("splitting product has a nonzero class in H^2")

    taken = set(algebra.space.all_names())
    unit_name = algebra.unit
    letters = []
    inclusion = {unit_name: {unit_name: ONE}}
    used = {unit_name}
    for k, vec in enumerate(reps):
        if len(vec) == 1:
            (name, coeff), = vec.items()
            if coeff == ONE and name not in used:
                letters.append(name)
                inclusion[name] = vec
                used.add(name)
                continue
        name = _fresh_name(f"h1_{k}", taken | used)
        letters.append(name)
        inclusion[name] = vec
        used.add(name)

    model = CDGA(
        GradedVectorSpace({0: [unit_name], 1: letters}),
        unit=unit_name,
        differential={},
        products={},
    )
    fm = FormalModel(model=model, inclusion=inclusion, h1_letters=letters, source=algebra)

    # the inclusion is a quasi-isomorphism: H^0 matches by the connectivity
    # check, and the letters hit an H^1 basis by construction (recheck rank)
    if letters:
        boundaries = [c for c in algebra.d_matrix(0).columns() if any(c)] if algebra.dim(0) else []
        coords = [algebra.to_coords(inclusion[name], 1) for name in letters]
        got = rank(SparseMatrix.from_dense(coords + boundaries))
        base = rank(SparseMatrix.from_dense(boundaries)) if boundaries else 0
        if got - base != h1_dim:
            raise InvalidCDGA("internal: chosen splitting lost rank")
    return fm


def augmentations_of_formal_model(model: FormalModel) -> list:
    """The formal model has exactly one augmentation (unit -> 1)."""
    return [unit_augmentation(model.model)]
