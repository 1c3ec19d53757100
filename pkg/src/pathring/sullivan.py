"""Staged free replacements of curve-like models.

Free graded-commutative algebras with a differential given on
generators, truncated above a degree cap.  The initial stage adjoins one
closed generator per cocycle basis element of the target; each further
step adjoins, for every cohomology class of the current stage that dies
in the target, a generator one degree down killing it.  All stages are
concentrated in positive generator degrees, so a stage admits exactly
one augmentation.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction

from .cdga import CDGA, FormalModel, Vector, vec_add_into
from .errors import DegreeZeroGenerator, NonChainMap, PathringError
from .linalg import SparseMatrix, kernel_basis, quotient_basis, solve
from .signs import koszul, parity

ZERO = Fraction(0)
ONE = Fraction(1)

# Monomial: tuple of (generator_index, exponent), sorted by index, exponents >= 1.
Monomial = tuple
Poly = dict  # Monomial -> Fraction

EMPTY: Monomial = ()


def _poly_add(acc: Poly, p: Poly, scale: Fraction = ONE) -> None:
    for m, c in p.items():
        nv = acc.get(m, ZERO) + scale * c
        if nv:
            acc[m] = nv
        else:
            acc.pop(m, None)


class FreeCDGA:
    """Free graded-commutative algebra on positive-degree generators.

    Monomials above `degree_cap` are dropped everywhere; cohomology is
    therefore exact only in degrees < degree_cap.
    """

    def __init__(self, generators, differential_on_generators=None, degree_cap: int = 4, stage: int = 1):
        self.generators = [(str(n), int(d)) for n, d in generators]
        names = [n for n, _ in self.generators]
        if len(set(names)) != len(names):
            raise ValueError("duplicate generator names")
        for n, d in self.generators:
            if d < 1:
                raise ValueError(f"generator {n} has degree {d}; generators must be positive")
        if degree_cap < 1:
            raise ValueError("degree cap must be >= 1")
        self.degree_cap = degree_cap
        self.stage = stage
        self.d_gen = {}
        for idx, poly in (differential_on_generators or {}).items():
            clean = {tuple(m): Fraction(c) for m, c in poly.items() if c}
            if clean:
                self.d_gen[int(idx)] = clean
        self._monomials = {}
        self._d_mono_cache = {}
        self._matrices = {}
        self._check_d_squared()

    # -- monomial bookkeeping ------------------------------------------------

    def gen_degree(self, idx: int) -> int:
        return self.generators[idx][1]

    def mono_degree(self, m: Monomial) -> int:
        return sum(self.gen_degree(g) * e for g, e in m)

    def mono_name(self, m: Monomial) -> str:
        if not m:
            return "1"
        parts = []
        for g, e in m:
            name = self.generators[g][0]
            parts.append(name if e == 1 else f"{name}^{e}")
        return "*".join(parts)

    def monomials(self, degree: int) -> list:
        """Monomial basis of one degree, graded-lex by exponent vectors."""
        if degree in self._monomials:
            return self._monomials[degree]
        out = []

        def rec(idx: int, remaining: int, acc):
            if remaining == 0:
                out.append(tuple(acc))
                return
            if idx >= len(self.generators):
                return
            rec(idx + 1, remaining, acc)
            d = self.gen_degree(idx)
            max_exp = 1 if d % 2 == 1 else remaining // d
            for e in range(1, max_exp + 1):
                if d * e <= remaining:
                    acc.append((idx, e))
                    rec(idx + 1, remaining - d * e, acc)
                    acc.pop()

        if degree == 0:
            out = [EMPTY]
        elif degree > 0:
            rec(0, degree, [])
            out.sort()
        self._monomials[degree] = out
        return out

    def dims_by_degree(self) -> dict:
        return {d: len(self.monomials(d)) for d in range(self.degree_cap + 1)}

    def mono_mul(self, m1: Monomial, m2: Monomial):
        """(sign, monomial) or None when an odd generator squares to zero.

        The sign counts crossings of odd-degree generators when the
        concatenation is sorted back into index order.
        """
        exps = {}
        for g, e in itertools.chain(m1, m2):
            exps[g] = exps.get(g, 0) + e
        for g, e in exps.items():
            if self.gen_degree(g) % 2 == 1 and e > 1:
                return None
        odds1 = [g for g, e in m1 if self.gen_degree(g) % 2 == 1]
        odds2 = [g for g, e in m2 if self.gen_degree(g) % 2 == 1]
        inversions = sum(1 for a in odds1 for b in odds2 if a > b)
        mono = tuple(sorted(exps.items()))
        return (-1 if inversions % 2 else 1), mono

    def poly_mul(self, p1: Poly, p2: Poly) -> Poly:
        """Product with monomials above the cap dropped."""
        out: Poly = {}
        for m1, c1 in p1.items():
            for m2, c2 in p2.items():
                res = self.mono_mul(m1, m2)
                if res is None:
                    continue
                sign, mono = res
                if self.mono_degree(mono) > self.degree_cap:
                    continue
                _poly_add(out, {mono: ONE}, c1 * c2 * sign)
        return out

    # -- the differential ------------------------------------------------------

    def d_mono(self, m: Monomial) -> Poly:
        if m in self._d_mono_cache:
            return self._d_mono_cache[m]
        if not m:
            return {}
        (g, e), rest = m[0], m[1:]
        deg_head = self.gen_degree(g) * e
        out: Poly = {}
        dg = self.d_gen.get(g)
        if dg:
            head = {((g, e - 1),) if e > 1 else EMPTY: Fraction(e)}
            _poly_add(out, self.poly_mul(self.poly_mul(head, dg), {rest: ONE}))
        tail = self.d_mono(rest)
        if tail:
            _poly_add(out, self.poly_mul({((g, e),): ONE}, tail), Fraction(parity(deg_head)))
        self._d_mono_cache[m] = out
        return out

    def d_poly(self, p: Poly) -> Poly:
        out: Poly = {}
        for m, c in p.items():
            _poly_add(out, self.d_mono(m), c)
        return out

    def _check_d_squared(self) -> None:
        for idx in range(len(self.generators)):
            dg = self.d_gen.get(idx)
            if dg and self.d_poly(dg):
                raise PathringError(
                    f"d*d != 0 on generator {self.generators[idx][0]}"
                )
        for degree in range(0, max(self.degree_cap - 1, 0)):
            for m in self.monomials(degree):
                if self.d_poly(self.d_mono(m)):
                    raise PathringError(f"d*d != 0 on monomial {self.mono_name(m)}")

    # -- exact cohomology below the cap ---------------------------------------

    def to_coords(self, p: Poly, degree: int) -> list:
        basis = self.monomials(degree)
        index = {m: i for i, m in enumerate(basis)}
        out = [ZERO] * len(basis)
        for m, c in p.items():
            out[index[m]] = c
        return out

    def from_coords(self, coords, degree: int) -> Poly:
        basis = self.monomials(degree)
        return {basis[i]: c for i, c in enumerate(coords) if c}

    def d_matrix(self, degree: int) -> SparseMatrix:
        if degree in self._matrices:
            return self._matrices[degree]
        src = self.monomials(degree)
        tgt = self.monomials(degree + 1) if degree + 1 <= self.degree_cap else []
        tgt_index = {m: i for i, m in enumerate(tgt)}
        entries = {}
        for j, m in enumerate(src):
            for out_m, c in self.d_mono(m).items():
                entries[(tgt_index[out_m], j)] = c
        mat = SparseMatrix(len(tgt), len(src), entries)
        self._matrices[degree] = mat
        return mat

    def cohomology_full(self, degree: int):
        """(dim, representative polys, coordinates); degree must be < cap."""
        if degree >= self.degree_cap:
            raise ValueError(f"H^{degree} is not computable at cap {self.degree_cap}")
        n = len(self.monomials(degree))
        if n == 0:
            return 0, [], lambda v: []
        cocycles = kernel_basis(self.d_matrix(degree))
        if degree >= 1 and self.monomials(degree - 1):
            below = self.d_matrix(degree - 1)
            boundaries = [c for c in below.columns() if any(c)]
        else:
            boundaries = []
        reps, coords = quotient_basis(n, boundaries, cocycles)
        return len(reps), [self.from_coords(r, degree) for r in reps], coords

    def cohomology_dim(self, degree: int) -> int:
        return self.cohomology_full(degree)[0]


@dataclass
class StageMap:
    """A dga map from a stage into an explicit finite cdga."""

    free: FreeCDGA
    target: CDGA
    images: dict  # generator index -> Vector in target

    def mono_image(self, m: Monomial) -> Vector:
        out: Vector = {self.target.unit: ONE}
        for g, e in m:
            img = self.images.get(g, {})
            for _ in range(e):
                out = self.target.product_vec(out, img)
        return out

    def poly_image(self, p: Poly) -> Vector:
        out: Vector = {}
        for m, c in p.items():
            vec_add_into(out, self.mono_image(m), c)
        return out

    def chain_map_defects(self) -> list:
        """Generators where psi(d g) != d(psi(g)); empty iff a chain map."""
        bad = []
        for idx, (name, _) in enumerate(self.free.generators):
            lhs = self.poly_image(self.free.d_gen.get(idx, {}))
            rhs = self.target.differential_vec(self.images.get(idx, {}))
            if lhs != rhs:
                bad.append(name)
        return bad

    def ensure_chain_map(self) -> None:
        bad = self.chain_map_defects()
        if bad:
            raise NonChainMap(f"psi fails to commute with d on generators: {', '.join(bad)}")


def elementary_S(n: int, degree_cap: int = 6) -> FreeCDGA:
    """Free graded-commutative algebra on one closed generator in degree n."""
    if n < 1:
        raise ValueError("S(n) requires n >= 1")
    return FreeCDGA([("a", n)], {}, degree_cap=degree_cap)


def elementary_T(n: int, degree_cap: int = 6) -> FreeCDGA:
    """Generators b (degree n) and c (degree n+1) with db = c.

    Acyclic in positive degrees; checked exactly below the cap.
    """
    if n < 1:
        raise ValueError("T(n) requires n >= 1")
    algebra = FreeCDGA([("b", n), ("c", n + 1)], {0: {((1, 1),): 1}}, degree_cap=degree_cap)
    if algebra.cohomology_dim(0) != 1:
        raise PathringError("T(n) lost connectivity")
    for i in range(1, degree_cap):
        if algebra.cohomology_dim(i):
            raise PathringError(f"T({n}) is not acyclic in degree {i}")
    return algebra


def _target_of(model) -> CDGA:
    return model.model if isinstance(model, FormalModel) else model


def bg_initial(model, degree_cap: int = 4):
    """Initial stage: one closed generator per positive cocycle basis element.

    Accepts a FormalModel or any explicit cdga; returns (stage, psi).
    """
    target = _target_of(model)
    target.ensure_valid()
    generators = []
    images = {}
    for degree in range(1, min(target.max_degree(), degree_cap) + 1):
        if target.dim(degree) == 0:
            continue
        for k, coords in enumerate(kernel_basis(target.d_matrix(degree))):
            vec = target.from_coords(coords, degree)
            if len(vec) == 1 and next(iter(vec.values())) == ONE:
                name = f"x_{next(iter(vec))}"
            else:
                name = f"x{degree}_{k}"
            images[len(generators)] = vec
            generators.append((name, degree))
    stage = FreeCDGA(generators, {}, degree_cap=degree_cap, stage=1)
    psi = StageMap(stage, target, images)
    psi.ensure_chain_map()
    return stage, psi


def bg_step(stage: FreeCDGA, psi: StageMap):
    """One pushout step: kill every stage class that dies in the target.

    For each degree k < cap, a deterministic basis of
    ker(H^k(stage) -> H^k(target)) is enumerated; each basis class w
    receives a fresh generator of degree k-1 with differential w, whose
    target image is a deterministic preimage b of psi(w).  Returns the
    new (stage, psi).
    """
    if psi.free is not stage:
        raise ValueError("psi does not belong to this stage")
    psi.ensure_chain_map()
    target = psi.target
    adjoin = []  # (degree k, w_poly, b_vector)
    for k in range(1, stage.degree_cap):
        dim_k, reps, _ = stage.cohomology_full(k)
        if dim_k == 0:
            continue
        t_dim, _, t_coords = (
            target.cohomology_full(k) if target.dim(k) else (0, [], lambda v: [])
        )
        columns = []
        for rep in reps:
            img = psi.poly_image(rep)
            columns.append(t_coords(target.to_coords(img, k)) if target.dim(k) else [])
        entries = {}
        for j, col in enumerate(columns):
            for i, v in enumerate(col):
                if v:
                    entries[(i, j)] = v
        kern = kernel_basis(SparseMatrix(t_dim, dim_k, entries))
        if not kern:
            continue
        if k == 1:
            raise DegreeZeroGenerator(
                "killing a degree-1 class needs a degree-0 generator; unsupported"
            )
        for kv in kern:
            w_poly: Poly = {}
            for j, c in enumerate(kv):
                if c:
                    _poly_add(w_poly, reps[j], c)
            img = psi.poly_image(w_poly)
            if img:
                rhs = target.to_coords(img, k)
                sol = solve(target.d_matrix(k - 1), rhs)
                if sol is None:
                    raise PathringError("class dies in target cohomology but is not exact")
                b_vec = target.from_coords(sol, k - 1)
            else:
                b_vec = {}
            adjoin.append((k, w_poly, b_vec))

    generators = list(stage.generators)
    d_gen = {idx: dict(p) for idx, p in stage.d_gen.items()}
    images = {idx: dict(v) for idx, v in psi.images.items()}
    next_stage_index = stage.stage + 1
    for j, (k, w_poly, b_vec) in enumerate(adjoin):
        idx = len(generators)
        generators.append((f"t{next_stage_index}_{k - 1}_{j}", k - 1))
        d_gen[idx] = w_poly
        images[idx] = b_vec
    new_stage = FreeCDGA(generators, d_gen, degree_cap=stage.degree_cap, stage=next_stage_index)
    new_psi = StageMap(new_stage, target, images)
    new_psi.ensure_chain_map()
    return new_stage, new_psi


def augmentation_count(stage: FreeCDGA):
    """(1, augmentation): positive generators leave no choice.

    The unique dga map to Q kills every generator; compatibility with the
    differential is verified (no differential has a constant term).
    """
    for idx, poly in stage.d_gen.items():
        if EMPTY in poly:
            raise PathringError(
                f"d({stage.generators[idx][0]}) has a constant term; no augmentation exists"
            )
    witness = {name: ZERO for name, _ in stage.generators}
    return 1, witness
