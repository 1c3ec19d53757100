"""Two-sided reduced bar complexes of augmented cdgas.

Given a cdga A with augmentations eta (left) and xi (right), the
length-truncated reduced bar complex has, in each word length n, the
tensor power of the reduced letters Abar = ker(xi) in degree 0 plus all
of A in positive degrees; words containing a unit factor are degenerate
and quotiented away.  A word (a_1|...|a_n) sits in total degree
sum(|a_i| - 1).

Differential convention (fixed here, asserted by D*D = 0 on every build):
simplicial faces with alternating signs  sum_i (-1)^i face_i  where
face_0 absorbs the first letter through eta, face_i (0 < i < n) merges
letters i, i+1 through the product followed by the reduction projection,
and face_n absorbs the last letter through xi (identically zero on
reduced letters); plus the internal differential of the tensor power,
twisted by (-1)^n.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .cdga import CDGA, Augmentation, Vector, vec_add_into, vec_scale
from .errors import BasisCapExceeded, DifferentialSquareNonzero, InvalidAugmentation
from .linalg import SparseMatrix, kernel_basis, linear_expander, quotient_basis, rank
from .signs import koszul_shifted, parity

ZERO = Fraction(0)
ONE = Fraction(1)

# A bar word is a tuple of letter indices; formal sums are dicts word -> Fraction.
Word = tuple


@dataclass(frozen=True)
class Letter:
    """A reduced basis element: degree and its vector inside the source cdga."""

    name: str
    degree: int
    vector: dict


class ReducedBasis:
    """Splitting A = Q*unit + Abar determined by the right augmentation."""

    def __init__(self, algebra: CDGA, augmentation: Augmentation):
        self.algebra = algebra
        self.augmentation = augmentation
        letters = []
        # degree 0: kernel of the augmentation functional
        basis0 = algebra.space.basis(0)
        row = [[augmentation.evaluate({name: ONE}) for name in basis0]]
        kernel = kernel_basis(SparseMatrix.from_dense(row))
        self._deg0_vectors = kernel
        for k, coords in enumerate(kernel):
            vec = algebra.from_coords(coords, 0)
            if len(vec) == 1 and next(iter(vec.values())) == ONE:
                name = next(iter(vec))
            else:
                name = f"red0_{k}"
            letters.append(Letter(name, 0, vec))
        self._deg0_expand = linear_expander(kernel) if kernel else None
        self._deg0_offset = 0
        # positive degrees: all basis elements are reduced
        self._pos_index = {}
        for degree, names in algebra.space.degrees:
            if degree == 0:
                continue
            for name in names:
                self._pos_index[name] = len(letters)
                letters.append(Letter(name, degree, {name: ONE}))
        self.letters = letters

    def project(self, vec: Vector, degree: int):
        """Split a homogeneous vector as unit_coeff * unit + reduced letters.

        Returns (unit_coeff, {letter_index: coefficient}); the unit
        coefficient is zero in positive degrees.
        """
        if not vec:
            return ZERO, {}
        if degree == 0:
            c = self.augmentation.evaluate(vec)
            reduced = dict(vec)
            vec_add_into(reduced, {self.algebra.unit: ONE}, -c)
            if not reduced:
                return c, {}
            coords = self.algebra.to_coords(reduced, 0)
            out = {}
            for i, coeff in enumerate(self._deg0_expand(coords)):
                if coeff:
                    out[self._deg0_offset + i] = coeff
            return c, out
        out = {}
        for name, coeff in vec.items():
            out[self._pos_index[name]] = coeff
        return ZERO, out


def reduce_letters(algebra: CDGA, augmentation: Augmentation) -> ReducedBasis:
    """Split off the unit using the augmentation; the result indexes bar letters."""
    algebra.ensure_valid()
    augmentation.validate()
    return ReducedBasis(algebra, augmentation)


class BarComplex:
    """Length-truncated reduced bar complex with its total differential."""

    def __init__(self, source, left_aug, right_aug, truncation, reduced, graded_basis, matrices):
        self.source = source
        self.left_aug = left_aug
        self.right_aug = right_aug
        self.truncation = truncation
        self.reduced = reduced
        self.graded_basis = graded_basis  # degree -> ordered list of words
        self.matrices = matrices  # degree -> SparseMatrix into degree + 1
        self._word_index = {
            deg: {w: i for i, w in enumerate(words)} for deg, words in graded_basis.items()
        }
        self._cohomology_cache = {}

    def degrees(self) -> list:
        return sorted(self.graded_basis)

    def dim(self, degree: int) -> int:
        return len(self.graded_basis.get(degree, ()))

    def word_degree(self, word: Word) -> int:
        return sum(self.reduced.letters[i].degree - 1 for i in word)

    def word_name(self, word: Word) -> str:
        if not word:
            return "()"
        return "(" + "|".join(self.reduced.letters[i].name for i in word) + ")"

    def matrix(self, degree: int) -> SparseMatrix:
        if degree in self.matrices:
            return self.matrices[degree]
        return SparseMatrix.zero(self.dim(degree + 1), self.dim(degree))

    def to_coords(self, chain: dict, degree: int) -> list:
        index = self._word_index.get(degree, {})
        out = [ZERO] * self.dim(degree)
        for word, coeff in chain.items():
            out[index[word]] = coeff
        return out

    def from_coords(self, coords, degree: int) -> dict:
        words = self.graded_basis.get(degree, [])
        return {words[i]: c for i, c in enumerate(coords) if c}

    def cohomology_full(self, degree: int):
        """(dimension, representative chains, coordinates) in one degree."""
        if degree in self._cohomology_cache:
            return self._cohomology_cache[degree]
        n = self.dim(degree)
        if n == 0:
            result = (0, [], lambda v: [])
        else:
            cocycles = kernel_basis(self.matrix(degree))
            below = self.matrix(degree - 1)
            boundaries = [col for col in below.columns() if any(col)] if below.cols else []
            reps, coords = quotient_basis(n, boundaries, cocycles)
            result = (len(reps), [self.from_coords(r, degree) for r in reps], coords)
        self._cohomology_cache[degree] = result
        return result


def _word_differential(reduced: ReducedBasis, left_aug: Augmentation, word: Word) -> dict:
    """Total differential of a single reduced word, as a word sum."""
    algebra = reduced.algebra
    letters = reduced.letters
    out = {}

    def add(w, coeff):
        nv = out.get(w, ZERO) + coeff
        if nv:
            out[w] = nv
        else:
            out.pop(w, None)

    n = len(word)
    if n:
        # face 0: absorb the first letter on the left
        first = letters[word[0]]
        if first.degree == 0:
            c = left_aug.evaluate(first.vector)
            if c:
                add(word[1:], c)
        # faces 1..n-1: merge adjacent letters, drop the degenerate unit part
        for i in range(1, n):
            a = letters[word[i - 1]]
            b = letters[word[i]]
            prod = algebra.product_vec(a.vector, b.vector)
            if prod:
                _, coords = reduced.project(prod, a.degree + b.degree)
                sign = parity(i)
                for lj, c in coords.items():
                    add(word[: i - 1] + (lj,) + word[i + 1 :], sign * c)
        # face n: absorb the last letter on the right; zero on reduced letters
    # internal differential, twisted by (-1)^n
    prefix = 0
    for i in range(n):
        a = letters[word[i]]
        dv = algebra.differential_vec(a.vector)
        if dv:
            _, coords = reduced.project(dv, a.degree + 1)
            sign = parity(n) * parity(prefix)
            for lj, c in coords.items():
                add(word[:i] + (lj,) + word[i + 1 :], sign * c)
        prefix += a.degree
    return out


def build_bar(
    algebra: CDGA,
    right_aug: Augmentation,
    left_aug: Augmentation,
    truncation: int,
    basis_cap: int = 1_000_000,
) -> BarComplex:
    """Assemble the reduced bar complex of (algebra, left_aug, right_aug).

    `right_aug` both reduces the letters and absorbs the last tensor
    factor; `left_aug` absorbs the first.  Word length is truncated at
    `truncation`; the estimated basis count must stay below `basis_cap`.
    Raises DifferentialSquareNonzero if the assembled differential fails
    D*D = 0 (a library bug, not a data error).
    """
    if truncation < 0:
        raise ValueError("truncation must be >= 0")
    algebra.ensure_valid()
    right_aug.validate()
    left_aug.validate()
    reduced = ReducedBasis(algebra, right_aug)
    n_letters = len(reduced.letters)
    estimate = 1 if n_letters == 0 else sum(n_letters**k for k in range(truncation + 1))
    if estimate > basis_cap:
        raise BasisCapExceeded(
            f"estimated basis count {estimate} exceeds cap {basis_cap} "
            f"({n_letters} letters, truncation {truncation})"
        )

    graded: dict = {}
    stack = [()]
    graded.setdefault(0, []).append(())
    for length in range(1, truncation + 1):
        new_stack = []
        for word in stack:
            for li in range(n_letters):
                w = word + (li,)
                new_stack.append(w)
        for w in new_stack:
            deg = sum(reduced.letters[i].degree - 1 for i in w)
            graded.setdefault(deg, []).append(w)
        stack = new_stack
    # order words of equal degree by length, then lexicographically
    for deg in graded:
        graded[deg].sort(key=lambda w: (len(w), w))

    word_index = {deg: {w: i for i, w in enumerate(words)} for deg, words in graded.items()}
    matrices = {}
    for deg, words in sorted(graded.items()):
        target = graded.get(deg + 1, [])
        tgt_index = word_index.get(deg + 1, {})
        entries = {}
        for j, w in enumerate(words):
            image = _word_differential(reduced, left_aug, w)
            for out_word, coeff in image.items():
                entries[(tgt_index[out_word], j)] = coeff
        matrices[deg] = SparseMatrix(len(target), len(words), entries)

    complex_ = BarComplex(algebra, left_aug, right_aug, truncation, reduced, graded, matrices)
    for deg in sorted(graded):
        upper = matrices.get(deg + 1)
        if upper is None or upper.is_zero() or matrices[deg].is_zero():
            continue
        square = upper.compose(matrices[deg])
        if not square.is_zero():
            raise DifferentialSquareNonzero(
                f"D*D != 0 from degree {deg}; sign convention bug"
            )
    return complex_


def bar_cohomology(complex_: BarComplex, degree: int):
    """Exact (dimension, representatives) of the truncated total complex."""
    dim, reps, _ = complex_.cohomology_full(degree)
    return dim, reps


def shuffle_words(reduced: ReducedBasis, u: Word, v: Word) -> dict:
    """Chain-level shuffle product of two bar words.

    Signs are Koszul signs over the shifted letter degrees; on a formal
    model all letters have shifted degree 0 and every shuffle has
    coefficient one.
    """
    letters = reduced.letters

    def rec(a: Word, b: Word):
        if not a:
            return {b: ONE}
        if not b:
            return {a: ONE}
        out = {}
        for w, c in rec(a[1:], b).items():
            key = (a[0],) + w
            out[key] = out.get(key, ZERO) + c
        sign = 1
        db = letters[b[0]].degree
        for ai in a:
            sign *= koszul_shifted(db, letters[ai].degree)
        for w, c in rec(a, b[1:]).items():
            key = (b[0],) + w
            out[key] = out.get(key, ZERO) + sign * c
        return {k: c for k, c in out.items() if c}

    return rec(u, v)


def h0_product_coordinates(complex_: BarComplex, i: int, j: int) -> list:
    """Coordinates of (rep_i shuffle rep_j) in the H^0 representative basis."""
    dim, reps, coords = complex_.cohomology_full(0)
    chain = {}
    for u, cu in reps[i].items():
        for v, cv in reps[j].items():
            for w, c in shuffle_words(complex_.reduced, u, v).items():
                nv = chain.get(w, ZERO) + cu * cv * c
                if nv:
                    chain[w] = nv
                else:
                    chain.pop(w, None)
    return coords(complex_.to_coords(chain, 0))


@dataclass
class ConcentrationReport:
    truncation: int
    dims: dict
    h0_length_graded: list
    passed: bool

    def rows(self):
        for deg in sorted(self.dims):
            yield (f"H^{deg}", str(self.dims[deg]))
        yield ("h0_length_graded", ",".join(str(d) for d in self.h0_length_graded))
        yield ("concentration", "PASS" if self.passed else "FAIL")


@dataclass
class ConnectednessReport:
    h0_dim: int
    passed: bool

    def rows(self):
        yield ("H^0", str(self.h0_dim))
        yield ("connectedness", "PASS" if self.passed else "FAIL")


def h0_length_graded_dims(complex_: BarComplex) -> list:
    """Dimensions of the word-length graded pieces of H^0.

    Entry n is dim of (classes of chains supported in length <= n) minus
    the same for n-1; truncation by length is a subcomplex so the
    filtration is computed from restricted kernels.
    """
    words = complex_.graded_basis.get(0, [])
    if not words:
        return [0] * (complex_.truncation + 1)
    full = complex_.matrix(0)
    below = complex_.matrix(-1)
    boundaries = [col for col in below.columns() if any(col)] if below.cols else []
    b_rank = rank(SparseMatrix.from_dense(boundaries)) if boundaries else 0
    dims = []
    previous = 0
    for n in range(complex_.truncation + 1):
        keep = [j for j, w in enumerate(words) if len(w) <= n]
        entries = {}
        col_map = {j: k for k, j in enumerate(keep)}
        for (r, c), v in full.entries.items():
            if c in col_map:
                entries[(r, col_map[c])] = v
        restricted = SparseMatrix(full.rows, len(keep), entries)
        kern = kernel_basis(restricted)
        # pad restricted kernel vectors back to the full word basis
        padded = []
        for vec in kern:
            out = [ZERO] * len(words)
            for k, j in enumerate(keep):
                out[j] = vec[k]
            padded.append(out)
        total = rank(SparseMatrix.from_dense(padded + boundaries)) if (padded or boundaries) else 0
        f_n = total - b_rank
        dims.append(f_n - previous)
        previous = f_n
    return dims


def verify_concentration(complex_: BarComplex) -> ConcentrationReport:
    """Check that cohomology vanishes outside degree 0 at this truncation."""
    dims = {}
    passed = True
    for deg in complex_.degrees():
        dim, _ = bar_cohomology(complex_, deg)
        dims[deg] = dim
        if deg != 0 and dim:
            passed = False
    return ConcentrationReport(
        truncation=complex_.truncation,
        dims=dims,
        h0_length_graded=h0_length_graded_dims(complex_),
        passed=passed,
    )


def verify_connectedness(complex_: BarComplex) -> ConnectednessReport:
    """Check that H^0 of the path ring is nonzero."""
    dim, _ = bar_cohomology(complex_, 0)
    return ConnectednessReport(h0_dim=dim, passed=dim >= 1)
