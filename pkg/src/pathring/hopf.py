"""The Hopf structure on H^0 of the bar of a formal model.

Words in the degree-1 letters with the shuffle product, deconcatenation
coproduct, and reverse-with-sign antipode form the coordinate ring of
the free prounipotent path groupoid, truncated by word length.  The
module also verifies the cotorsor conditions (coassociative coaction,
bijective Galois map, nonvanishing) on table-presented comodule algebras
and realizes the Kunneth concentration argument on dimension tables.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction

from .errors import TruncationExceeded, TruncationMismatch, ZeroH0
from .linalg import SparseMatrix, rank, rational

ZERO = Fraction(0)
ONE = Fraction(1)

Word = tuple  # tuple of letter indices
WordSum = dict  # Word -> Fraction
PairSum = dict  # (Word, Word) -> Fraction


def _add(acc: dict, key, coeff) -> None:
    nv = acc.get(key, ZERO) + coeff
    if nv:
        acc[key] = nv
    else:
        acc.pop(key, None)


class TensorWordAlgebra:
    """Words of length <= truncation over an ordered letter alphabet."""

    def __init__(self, letters, truncation: int):
        if truncation < 0:
            raise ValueError("truncation must be >= 0")
        self.letters = tuple(letters)
        self.truncation = truncation

    @property
    def m(self) -> int:
        return len(self.letters)

    def words(self, max_length=None):
        """All words ordered by length then lexicographically."""
        top = self.truncation if max_length is None else min(max_length, self.truncation)
        for n in range(top + 1):
            for w in itertools.product(range(self.m), repeat=n):
                yield w

    def basis_size(self) -> int:
        return sum(self.m**n for n in range(self.truncation + 1))

    def word_name(self, word: Word) -> str:
        if not word:
            return "()"
        return "(" + "|".join(self.letters[i] for i in word) + ")"

    def check_word(self, word: Word) -> None:
        if len(word) > self.truncation:
            raise TruncationExceeded(f"word of length {len(word)} exceeds truncation {self.truncation}")
        for i in word:
            if not 0 <= i < self.m:
                raise ValueError(f"letter index {i} out of range")


def shuffle_product(algebra: TensorWordAlgebra, w1: Word, w2: Word) -> WordSum:
    """Sum over all order-preserving interleavings, unit coefficients.

    All letters sit in degree 1, hence shifted degree 0, hence no signs.
    """
    algebra.check_word(w1)
    algebra.check_word(w2)
    if len(w1) + len(w2) > algebra.truncation:
        raise TruncationExceeded(
            f"shuffle of lengths {len(w1)}+{len(w2)} exceeds truncation {algebra.truncation}"
        )

    out: WordSum = {}

    def rec(a: Word, b: Word, prefix: Word):
        if not a:
            _add(out, prefix + b, ONE)
            return
        if not b:
            _add(out, prefix + a, ONE)
            return
        rec(a[1:], b, prefix + (a[0],))
        rec(a, b[1:], prefix + (b[0],))

    rec(w1, w2, ())
    return out


def shuffle_sums(algebra: TensorWordAlgebra, s1: WordSum, s2: WordSum) -> WordSum:
    """Bilinear extension of the shuffle product, truncation-quotiented.

    Words longer than the truncation are dropped (the length quotient),
    so this is the product of the truncated algebra.
    """
    out: WordSum = {}
    for u, cu in s1.items():
        for v, cv in s2.items():
            if len(u) + len(v) > algebra.truncation:
                continue
            for w, c in shuffle_product(algebra, u, v).items():
                _add(out, w, cu * cv * c)
    return out


def deconcatenate(algebra: TensorWordAlgebra, w: Word) -> PairSum:
    """Split the word at every position: Delta(w) = sum prefix (x) suffix."""
    algebra.check_word(w)
    return {(w[:k], w[k:]): ONE for k in range(len(w) + 1)}


def counit(w: Word) -> Fraction:
    """1 on the empty word, 0 on every other word."""
    return ONE if not w else ZERO


def antipode(algebra: TensorWordAlgebra, w: Word) -> WordSum:
    """S(w) = (-1)^|w| * reverse(w)."""
    algebra.check_word(w)
    sign = ONE if len(w) % 2 == 0 else -ONE
    return {tuple(reversed(w)): sign}


@dataclass(frozen=True)
class HopfViolation:
    axiom: str
    word: tuple
    detail: str

    def __str__(self):
        return f"{self.axiom} fails at {self.word}: {self.detail}"


def check_hopf_axioms(algebra: TensorWordAlgebra, antipode_fn=None) -> list:
    """Brute-force verification of all Hopf axioms on words up to truncation.

    `antipode_fn(algebra, word) -> WordSum` may be overridden to
    demonstrate that a broken antipode is caught and named.
    """
    S = antipode_fn or antipode
    N = algebra.truncation
    violations = []
    words = list(algebra.words())

    # unit, commutativity, associativity of the shuffle
    for u in words:
        for v in words:
            if len(u) + len(v) > N:
                continue
            uv = shuffle_product(algebra, u, v)
            vu = shuffle_product(algebra, v, u)
            if uv != vu:
                violations.append(HopfViolation("commutativity", (u, v), "u#v != v#u"))
            if not u and uv != {v: ONE}:
                violations.append(HopfViolation("unit", (u, v), "empty word is not neutral"))
            for w in words:
                if len(u) + len(v) + len(w) > N:
                    continue
                lhs: WordSum = {}
                for x, c in uv.items():
                    for y, c2 in shuffle_product(algebra, x, w).items():
                        _add(lhs, y, c * c2)
                rhs: WordSum = {}
                for x, c in shuffle_product(algebra, v, w).items():
                    for y, c2 in shuffle_product(algebra, u, x).items():
                        _add(rhs, y, c * c2)
                if lhs != rhs:
                    violations.append(HopfViolation("associativity", (u, v, w), "(u#v)#w != u#(v#w)"))

    for w in words:
        delta = deconcatenate(algebra, w)
        # counit on both legs
        left = {}
        right = {}
        for (a, b), c in delta.items():
            if counit(a):
                _add(left, b, c)
            if counit(b):
                _add(right, a, c)
        if left != {w: ONE} or right != {w: ONE}:
            violations.append(HopfViolation("counit", (w,), "(eps x id)Delta != id"))
        # coassociativity
        lhs = {}
        rhs = {}
        for (a, b), c in delta.items():
            for (a1, a2), c2 in deconcatenate(algebra, a).items():
                _add(lhs, (a1, a2, b), c * c2)
            for (b1, b2), c2 in deconcatenate(algebra, b).items():
                _add(rhs, (a, b1, b2), c * c2)
        if lhs != rhs:
            violations.append(HopfViolation("coassociativity", (w,), "(Delta x id)Delta != (id x Delta)Delta"))
        # antipode identity on both sides
        conv_left: WordSum = {}
        conv_right: WordSum = {}
        for (a, b), c in delta.items():
            for sa, cs in S(algebra, a).items():
                for y, c2 in shuffle_product(algebra, sa, b).items():
                    _add(conv_left, y, c * cs * c2)
            for sb, cs in S(algebra, b).items():
                for y, c2 in shuffle_product(algebra, a, sb).items():
                    _add(conv_right, y, c * cs * c2)
        expected: WordSum = {(): ONE} if not w else {}
        if conv_left != expected or conv_right != expected:
            violations.append(HopfViolation("antipode", (w,), "m(S x id)Delta != unit*counit"))

    # Delta is an algebra map for the shuffle product
    for u in words:
        for v in words:
            if len(u) + len(v) > N:
                continue
            lhs = {}
            for w, c in shuffle_product(algebra, u, v).items():
                for (a, b), c2 in deconcatenate(algebra, w).items():
                    _add(lhs, (a, b), c * c2)
            rhs = {}
            for (a1, a2), c1 in deconcatenate(algebra, u).items():
                for (b1, b2), c2 in deconcatenate(algebra, v).items():
                    for x, cx in shuffle_product(algebra, a1, b1).items():
                        for y, cy in shuffle_product(algebra, a2, b2).items():
                            _add(rhs, (x, y), c1 * c2 * cx * cy)
            if lhs != rhs:
                violations.append(HopfViolation("compatibility", (u, v), "Delta(u#v) != Delta(u)#Delta(v)"))
    return violations


@dataclass(frozen=True)
class LabeledWord:
    """A word in a specific path-torsor copy, from `src` to `dst`."""

    word: tuple
    src: str
    dst: str


def cocomposition(algebra: TensorWordAlgebra, w: Word, src: str = "xi", mid: str = "eta", dst: str = "zeta"):
    """Deconcatenation with groupoid bookkeeping.

    A word of the (src -> dst) torsor splits into (mid -> dst) x
    (src -> mid) legs; the first tensor leg carries the prefix.
    """
    out = {}
    for (a, b), c in deconcatenate(algebra, w).items():
        out[(LabeledWord(a, mid, dst), LabeledWord(b, src, mid))] = c
    return out


def vertex_counit(algebra: TensorWordAlgebra, labeled: LabeledWord) -> Fraction:
    """Counit at a vertex: defined on loop torsors only."""
    if labeled.src != labeled.dst:
        raise ValueError("counit is defined at a single vertex")
    return counit(labeled.word)


# -- characters and translation twists -------------------------------------


def straight_line_character(algebra: TensorWordAlgebra, constants) -> dict:
    """The algebra map word -> (prod of letter constants) / |word|!.

    This is the exponential of the primitive functional determined by
    `constants`; the table satisfies g(u)g(v) = g(u # v) exactly.
    """
    consts = [rational(c) for c in constants]
    if len(consts) != algebra.m:
        raise ValueError("need one constant per letter")
    table = {}
    for w in algebra.words():
        val = ONE
        for i in w:
            val *= consts[i]
        table[w] = val / math.factorial(len(w))
    return table


def convolve(algebra: TensorWordAlgebra, g1: dict, g2: dict) -> dict:
    """Convolution product of two functionals on the word coalgebra."""
    out = {}
    for w in algebra.words():
        total = ZERO
        for (a, b), c in deconcatenate(algebra, w).items():
            total += c * g1.get(a, ZERO) * g2.get(b, ZERO)
        out[w] = total
    return out


def convolution_inverse(algebra: TensorWordAlgebra, g: dict) -> dict:
    """g composed with the antipode; inverse for convolution."""
    out = {}
    for w in algebra.words():
        total = ZERO
        for sw, c in antipode(algebra, w).items():
            total += c * g.get(sw, ZERO)
        out[w] = total
    return out


def is_character(algebra: TensorWordAlgebra, g: dict) -> bool:
    """Exact check that g is an algebra map on all in-window pairs."""
    for u in algebra.words():
        for v in algebra.words():
            if len(u) + len(v) > algebra.truncation:
                continue
            total = ZERO
            for w, c in shuffle_product(algebra, u, v).items():
                total += c * g.get(w, ZERO)
            if total != g.get(u, ZERO) * g.get(v, ZERO):
                return False
    return True


def translate(algebra: TensorWordAlgebra, g: dict, w: Word) -> WordSum:
    """Left translation tau_g(w) = sum g(prefix) * suffix."""
    out: WordSum = {}
    for (a, b), c in deconcatenate(algebra, w).items():
        _add(out, b, c * g.get(a, ZERO))
    return out


# -- cotorsors ---------------------------------------------------------------


@dataclass
class CotorsorData:
    """Table presentation of a comodule algebra over the word Hopf algebra.

    basis: hashable element ids (words for the shipped fixtures);
    unit: the algebra unit element or None when absent;
    product: (p, q) -> {element: coefficient};
    coaction: p -> {(hopf_word, element): coefficient}.
    """

    truncation: int
    basis: list
    unit: object
    product: dict
    coaction: dict


def trivial_cotorsor(algebra: TensorWordAlgebra) -> CotorsorData:
    """The loop torsor itself: coaction = deconcatenation."""
    basis = list(algebra.words())
    product = {}
    for u in basis:
        for v in basis:
            if len(u) + len(v) <= algebra.truncation:
                product[(u, v)] = shuffle_product(algebra, u, v)
            else:
                product[(u, v)] = {}
    coaction = {w: {pair: c for pair, c in deconcatenate(algebra, w).items()} for w in basis}
    return CotorsorData(algebra.truncation, basis, (), product, coaction)


def twisted_cotorsor(algebra: TensorWordAlgebra, constants) -> CotorsorData:
    """The deconcatenation coaction conjugated by a letter translation.

    The group-like assignment letters -> letters + constants defines the
    translation automorphism tau_g; the coaction is
    (id x tau_g^{-1}) Delta tau_g, the torsor of paths out of the
    translated base point.
    """
    g = straight_line_character(algebra, constants)
    g_inv = convolution_inverse(algebra, g)
    base = trivial_cotorsor(algebra)
    coaction = {}
    for w in base.basis:
        out = {}
        for v, cv in translate(algebra, g, w).items():
            for (a, b), c in deconcatenate(algebra, v).items():
                for b2, c2 in translate(algebra, g_inv, b).items():
                    _add(out, (a, b2), cv * c * c2)
        coaction[w] = out
    return CotorsorData(algebra.truncation, base.basis, (), base.product, coaction)


def zero_cotorsor(truncation: int) -> CotorsorData:
    """The zero algebra; fails the nonvanishing clause."""
    return CotorsorData(truncation, [], None, {}, {})


@dataclass
class CotorsorReport:
    coassociative: bool
    counital: bool
    galois_bijective: bool
    nonzero: bool

    @property
    def passed(self) -> bool:
        return self.coassociative and self.counital and self.galois_bijective and self.nonzero

    def rows(self):
        yield ("coaction_coassociative", "PASS" if self.coassociative else "FAIL")
        yield ("coaction_counital", "PASS" if self.counital else "FAIL")
        yield ("galois_bijective", "PASS" if self.galois_bijective else "FAIL")
        yield ("nonzero_algebra", "PASS" if self.nonzero else "FAIL")
        yield ("cotorsor", "PASS" if self.passed else "FAIL")


def verify_cotorsor(data: CotorsorData, algebra: TensorWordAlgebra) -> CotorsorReport:
    """Check the three cotorsor clauses exactly at the shared truncation."""
    if data.truncation != algebra.truncation:
        raise TruncationMismatch(
            f"cotorsor truncation {data.truncation} != Hopf truncation {algebra.truncation}"
        )
    nonzero = bool(data.basis)

    coassociative = True
    counital = True
    for p in data.basis:
        rho_p = data.coaction[p]
        # counit leg
        collapsed = {}
        for (h, q), c in rho_p.items():
            if counit(h):
                _add(collapsed, q, c)
        if collapsed != {p: ONE}:
            counital = False
        lhs = {}
        rhs = {}
        for (h, q), c in rho_p.items():
            for (h1, h2), c2 in deconcatenate(algebra, h).items():
                _add(lhs, (h1, h2, q), c * c2)
            for (h2, q2), c2 in data.coaction[q].items():
                _add(rhs, (h, h2, q2), c * c2)
        if lhs != rhs:
            coassociative = False

    # Galois map P x P -> H x P on the total-length-<= N window
    pairs_in = [
        (p, q) for p in data.basis for q in data.basis if len(p) + len(q) <= data.truncation
    ]
    pairs_out = [
        (h, q) for h in algebra.words() for q in data.basis if len(h) + len(q) <= data.truncation
    ]
    out_index = {pq: i for i, pq in enumerate(pairs_out)}
    entries = {}
    for j, (p, q) in enumerate(pairs_in):
        for (h, p2), c in data.coaction[p].items():
            for r, c2 in data.product[(p2, q)].items():
                if len(h) + len(r) > data.truncation:
                    continue
                key = (out_index[(h, r)], j)
                _add(entries, key, c * c2)
    matrix = SparseMatrix(len(pairs_out), len(pairs_in), entries)
    galois = len(pairs_in) == len(pairs_out) and rank(matrix) == len(pairs_in)

    return CotorsorReport(coassociative, counital, galois, nonzero)


# -- Kunneth concentration and length quotients ------------------------------


@dataclass
class KunnethReport:
    asserted: dict  # degree -> bool (claim H^i(P)=0 held)
    skipped: list  # degrees where H^i(B) != 0, no assertion made

    @property
    def passed(self) -> bool:
        return all(self.asserted.values())

    def rows(self):
        for deg in sorted(self.asserted):
            yield (f"kunneth_H^{deg}", "PASS" if self.asserted[deg] else "FAIL")
        yield ("kunneth", "PASS" if self.passed else "FAIL")


def concentration_from_kunneth(h_dims: dict, p_dims: dict) -> KunnethReport:
    """Lemma: H^i(B) = 0 and H^0(P) != 0 force H^i(P) = 0.

    Given dimension tables of the loop ring B and a cotorsor P, asserts
    vanishing of H^i(P) for every i != 0 with H^i(B) = 0.
    """
    if not p_dims.get(0, 0):
        raise ZeroH0("H^0(P) must be nonzero")
    asserted = {}
    skipped = []
    for deg in sorted(set(h_dims) | set(p_dims)):
        if deg == 0:
            continue
        if h_dims.get(deg, 0) == 0:
            asserted[deg] = p_dims.get(deg, 0) == 0
        else:
            skipped.append(deg)
    return KunnethReport(asserted, skipped)


def length_quotient(algebra: TensorWordAlgebra, n: int) -> TensorWordAlgebra:
    """Coordinate ring of the level-n quotient: words of length < n.

    Realized as truncation to min(n - 1, N); level n of level m equals
    level min(n, m).
    """
    if n < 1:
        raise ValueError("quotient level must be >= 1")
    return TensorWordAlgebra(algebra.letters, min(n - 1, algebra.truncation))
