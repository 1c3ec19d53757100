"""Iterated integrals of logarithmic forms and unipotent parallel transport.

Floating point lives only in this module.  Words of the forms
dz/(z - a_i) are paired with piecewise-smooth paths through the
first-order recursion F_emptyword = 1, F'_(w.k) = F_w * f_k, integrated
per segment by adaptive Runge-Kutta with step-halving error control.

Conventions (fixed here, asserted by the identity tests):

* iterated_integral(w) integrates over 0 <= t_1 <= ... <= t_n <= 1 with
  letter w_1 at the earliest time;
* composition splits with the earlier path taking the prefix:
  I_{g1.g2}(w) = sum_k I_{g1}(w[:k]) * I_{g2}(w[k:]);
* transport solves T' = T . Omega(t), so T(g1.g2) = T(g1) . T(g2)
  (earlier path acts on the left) and the (0, r-1) entry of the polylog
  connection is the iterated integral of the word read left to right.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from fractions import Fraction

from .errors import EndpointMismatch, PathTooClose, ToleranceNotMet

DEFAULT_TOL = 1e-10
CLEARANCE_RATIO = 1e-3
_MIN_STEP = 1e-12


# -- geometry ----------------------------------------------------------------


@dataclass(frozen=True)
class LineSegment:
    start: complex
    end: complex

    def point(self, t):
        return self.start + t * (self.end - self.start)

    def velocity(self, t):
        return self.end - self.start

    def reversed(self) -> "LineSegment":
        return LineSegment(self.end, self.start)

    def min_distance(self, p: complex) -> float:
        d = self.end - self.start
        denom = abs(d) ** 2
        if denom == 0.0:
            return abs(self.start - p)
        t = ((p - self.start) * d.conjugate()).real / denom
        t = min(1.0, max(0.0, t))
        return abs(self.start + t * d - p)


@dataclass(frozen=True)
class CircularArc:
    center: complex
    radius: float
    angle_start: float
    angle_end: float

    @property
    def start(self) -> complex:
        return self.center + self.radius * cmath.exp(1j * self.angle_start)

    @property
    def end(self) -> complex:
        return self.center + self.radius * cmath.exp(1j * self.angle_end)

    def point(self, t):
        ang = self.angle_start + t * (self.angle_end - self.angle_start)
        return self.center + self.radius * cmath.exp(1j * ang)

    def velocity(self, t):
        sweep = self.angle_end - self.angle_start
        ang = self.angle_start + t * sweep
        return 1j * sweep * self.radius * cmath.exp(1j * ang)

    def reversed(self) -> "CircularArc":
        return CircularArc(self.center, self.radius, self.angle_end, self.angle_start)

    def min_distance(self, p: complex) -> float:
        rel = p - self.center
        if rel == 0:
            return self.radius
        ang = cmath.phase(rel)
        lo, hi = sorted((self.angle_start, self.angle_end))
        # does the ray through p meet the swept sector (mod 2 pi)?
        for shift in (-2.0 * math.pi, 0.0, 2.0 * math.pi):
            if lo <= ang + shift <= hi:
                return abs(abs(rel) - self.radius)
        return min(abs(p - self.start), abs(p - self.end))


@dataclass(frozen=True)
class CubicBezier:
    p0: complex
    p1: complex
    p2: complex
    p3: complex

    @property
    def start(self) -> complex:
        return self.p0

    @property
    def end(self) -> complex:
        return self.p3

    def point(self, t):
        s = 1 - t
        return s * s * s * self.p0 + 3 * s * s * t * self.p1 + 3 * s * t * t * self.p2 + t * t * t * self.p3

    def velocity(self, t):
        s = 1 - t
        return 3 * (s * s * (self.p1 - self.p0) + 2 * s * t * (self.p2 - self.p1) + t * t * (self.p3 - self.p2))

    def reversed(self) -> "CubicBezier":
        return CubicBezier(self.p3, self.p2, self.p1, self.p0)

    def min_distance(self, p: complex, samples: int = 512) -> float:
        # certified lower bound: sampled minimum minus Lipschitz slack
        lipschitz = 3.0 * max(abs(self.p1 - self.p0), abs(self.p2 - self.p1), abs(self.p3 - self.p2))
        best = min(abs(self.point(k / samples) - p) for k in range(samples + 1))
        return max(best - lipschitz / (2.0 * samples), 0.0)


Segment = object


@dataclass
class Path:
    """Ordered piecewise-smooth curve; consecutive endpoints must agree."""

    segments: list
    clearance: float | None = None

    def __post_init__(self):
        if not self.segments:
            raise ValueError("a path needs at least one segment")
        for a, b in zip(self.segments, self.segments[1:]):
            if a.end != b.start:
                raise EndpointMismatch(f"segment ends at {a.end}, next starts at {b.start}")

    @property
    def start(self) -> complex:
        return self.segments[0].start

    @property
    def end(self) -> complex:
        return self.segments[-1].end


def line_path(*points) -> Path:
    """Polyline through the given complex points."""
    pts = [complex(p) for p in points]
    return Path([LineSegment(a, b) for a, b in zip(pts, pts[1:])])


def compose_paths(first: Path, second: Path) -> Path:
    """Concatenate; the stored control data must match exactly at the seam."""
    if first.end != second.start:
        raise EndpointMismatch(f"paths meet at {first.end} != {second.start}")
    return Path(list(first.segments) + list(second.segments))


def reverse_path(path: Path) -> Path:
    return Path([seg.reversed() for seg in reversed(path.segments)])


@dataclass
class PuncturedLine:
    """The complex line minus finitely many points, with its dlog forms.

    Form k is dz/(z - punctures[k]).
    """

    punctures: list

    def __post_init__(self):
        self.punctures = [complex(p) for p in self.punctures]
        for i, a in enumerate(self.punctures):
            for b in self.punctures[i + 1 :]:
                if a == b:
                    raise ValueError(f"repeated puncture {a}")

    @property
    def n_forms(self) -> int:
        return len(self.punctures)

    def puncture_scale(self) -> float:
        pairs = [
            abs(a - b)
            for i, a in enumerate(self.punctures)
            for b in self.punctures[i + 1 :]
        ]
        return min(pairs) if pairs else 1.0

    def ensure_clear(self, path: Path, ratio: float = CLEARANCE_RATIO) -> float:
        """Verify the clearance invariant; returns and stores the bound."""
        threshold = ratio * self.puncture_scale()
        clearance = math.inf
        for seg in path.segments:
            for p in self.punctures:
                clearance = min(clearance, seg.min_distance(p))
        if clearance < threshold:
            raise PathTooClose(
                f"path clearance {clearance:.3e} below threshold {threshold:.3e}"
            )
        path.clearance = clearance
        return clearance


# -- numeric contexts ----------------------------------------------------------


class _Arithmetic:
    """Double-precision arithmetic, or mpmath when mantissa bits are given."""

    def __init__(self, precision_bits=None):
        self.bits = precision_bits
        if precision_bits:
            import mpmath

            self.mp = mpmath.mp.clone()
            self.mp.prec = int(precision_bits)
            self._mpc = mpmath.mpc
            self._mpf = mpmath.mpf
        else:
            self.mp = None

    def number(self, z):
        if self.mp is None:
            return complex(z)
        z = complex(z)
        return self._mpc(z.real, z.imag)

    def real(self, x):
        if self.mp is None:
            return float(x)
        return self._mpf(x)

    def magnitude(self, z) -> float:
        return float(abs(z))

    def epsilon(self) -> float:
        if self.mp is None:
            return 2.220446049250313e-16
        return float(self.mp.eps)

    def to_complex(self, z) -> complex:
        return complex(z)


def _segment_funcs(seg, arith: _Arithmetic):
    if isinstance(seg, LineSegment):
        a = arith.number(seg.start)
        d = arith.number(seg.end - seg.start)
        return (lambda t: a + t * d), (lambda t: d)
    if isinstance(seg, CircularArc):
        c = arith.number(seg.center)
        r = arith.real(seg.radius)
        th0 = arith.real(seg.angle_start)
        sweep = arith.real(seg.angle_end - seg.angle_start)
        i_ = arith.number(1j)
        if arith.mp is None:
            exp = cmath.exp
        else:
            exp = arith.mp.exp

        def point(t):
            return c + r * exp(i_ * (th0 + t * sweep))

        def velocity(t):
            return i_ * sweep * r * exp(i_ * (th0 + t * sweep))

        return point, velocity
    if isinstance(seg, CubicBezier):
        p0 = arith.number(seg.p0)
        p1 = arith.number(seg.p1)
        p2 = arith.number(seg.p2)
        p3 = arith.number(seg.p3)

        def point(t):
            s = 1 - t
            return s * s * s * p0 + 3 * s * s * t * p1 + 3 * s * t * t * p2 + t * t * t * p3

        def velocity(t):
            s = 1 - t
            return 3 * (s * s * (p1 - p0) + 2 * s * t * (p2 - p1) + t * t * (p3 - p2))

        return point, velocity
    raise TypeError(f"unknown segment type {type(seg).__name__}")


def _adaptive_rk4(rhs, state, tol_per_unit, arith: _Arithmetic):
    """Integrate state' = rhs(t, state) over [0, 1]; returns (state, error_sum).

    Classic fourth-order steps with step halving; a step of size h is
    accepted when the Richardson error estimate is below tol_per_unit*h,
    and the fifth-order extrapolation is kept.
    """

    def step(t, y, h):
        k1 = rhs(t, y)
        k2 = rhs(t + h / 2, [yi + h / 2 * ki for yi, ki in zip(y, k1)])
        k3 = rhs(t + h / 2, [yi + h / 2 * ki for yi, ki in zip(y, k2)])
        k4 = rhs(t + h, [yi + h * ki for yi, ki in zip(y, k3)])
        return [
            yi + h / 6 * (a + 2 * b + 2 * c + d)
            for yi, a, b, c, d in zip(y, k1, k2, k3, k4)
        ]

    t = arith.real(0.0)
    one = arith.real(1.0)
    h = arith.real(0.1)
    y = list(state)
    err_total = 0.0
    eps = arith.epsilon()
    while True:
        remaining = float(one - t)
        if remaining <= 1e-15:
            break
        if float(h) > remaining:
            h = one - t
        full = step(t, y, h)
        mid = step(t, y, h / 2)
        half = step(t + h / 2, mid, h / 2)
        err = max(arith.magnitude(a - b) for a, b in zip(full, half)) / 15.0
        # roundoff floor: below this the Richardson estimate is noise
        scale = 1.0 + max(arith.magnitude(v) for v in y) if y else 1.0
        budget = max(tol_per_unit * float(h), eps * scale)
        if err <= budget:
            y = [b + (b - a) / 15 for a, b in zip(full, half)]
            t = t + h
            err_total += err
            if err < budget / 32.0:
                h = h * 2
        elif float(h) <= _MIN_STEP:
            raise ToleranceNotMet(f"step size underflow with error estimate {err:.3e}")
        else:
            h = h / 2
    return y, err_total


def _log_form_factory(line: PuncturedLine, arith: _Arithmetic):
    punctures = [arith.number(a) for a in line.punctures]

    def value(coeffs: dict, z, dz):
        total = None
        for k, c in coeffs.items():
            term = arith.number(c) * dz / (z - punctures[k])
            total = term if total is None else total + term
        return total if total is not None else arith.number(0.0)

    return value


def _integrate_slots(line: PuncturedLine, path: Path, slots: list, tol: float, arith: _Arithmetic):
    """Core recursion for a word whose letters are form-coefficient dicts.

    Returns (value, achieved-error estimate); the state carries all
    prefix integrals across segment boundaries.
    """
    n = len(slots)
    if n == 0:
        return arith.number(1.0), 0.0
    form_value = _log_form_factory(line, arith)
    zero = arith.number(0.0)
    one = arith.number(1.0)
    state = [zero] * n
    tol_unit = tol / max(len(path.segments), 1)
    err_total = 0.0
    for seg in path.segments:
        point, velocity = _segment_funcs(seg, arith)

        def rhs(t, y):
            z = point(t)
            dz = velocity(t)
            out = []
            for s in range(n):
                below = y[s - 1] if s > 0 else one
                out.append(below * form_value(slots[s], z, dz))
            return out

        state, err = _adaptive_rk4(rhs, state, tol_unit, arith)
        err_total += err
    return state[-1], err_total


def iterated_integral(
    line: PuncturedLine,
    path: Path,
    word,
    tol: float = DEFAULT_TOL,
    precision_bits=None,
) -> complex:
    """Iterated integral of a word of form indices along a path."""
    value, _ = iterated_integral_with_estimate(line, path, word, tol, precision_bits)
    return value


def iterated_integral_with_estimate(
    line: PuncturedLine,
    path: Path,
    word,
    tol: float = DEFAULT_TOL,
    precision_bits=None,
):
    if tol <= 0:
        raise ValueError("tol must be positive")
    word = tuple(word)
    if not word:
        raise ValueError("iterated_integral needs a nonempty word; pair handles units")
    for k in word:
        if not 0 <= k < line.n_forms:
            raise ValueError(f"form index {k} out of range")
    line.ensure_clear(path)
    arith = _Arithmetic(precision_bits)
    slots = [{k: 1.0} for k in word]
    value, err = _integrate_slots(line, path, slots, tol, arith)
    return arith.to_complex(value), err


@dataclass
class H0Class:
    """Formal rational combination of words of form indices."""

    terms: dict  # tuple of form indices -> coefficient
    max_length: int | None = None

    def __post_init__(self):
        clean = {}
        for word, coeff in self.terms.items():
            word = tuple(word)
            if self.max_length is not None and len(word) > self.max_length:
                raise ValueError(f"word {word} exceeds the configured bound {self.max_length}")
            if coeff:
                clean[word] = coeff
        self.terms = clean


def pair(
    line: PuncturedLine,
    path: Path,
    cls: H0Class,
    tol: float = DEFAULT_TOL,
    precision_bits=None,
) -> complex:
    """Linear extension of iterated_integral; the empty word contributes 1."""
    line.ensure_clear(path)
    total = 0j
    for word, coeff in sorted(cls.terms.items(), key=lambda item: (len(item[0]), item[0])):
        c = complex(Fraction(coeff)) if isinstance(coeff, (int, Fraction)) else complex(coeff)
        if not word:
            total += c
        else:
            total += c * iterated_integral(line, path, word, tol, precision_bits)
    return total


@dataclass
class UnipotentConnection:
    """Strictly upper-triangular matrix of logarithmic one-forms.

    entries maps (row, col) with row < col to {form_index: complex
    coefficient}.  Nilpotency is structural; flatness holds because the
    base is a curve (no nonzero two-forms), recorded rather than computed.
    """

    rank: int
    entries: dict

    def __post_init__(self):
        clean = {}
        for (i, j), coeffs in self.entries.items():
            if not (0 <= i < j < self.rank):
                raise ValueError(f"entry ({i},{j}) is not strictly upper triangular")
            coeffs = {int(k): complex(c) for k, c in coeffs.items() if c}
            if coeffs:
                clean[(i, j)] = coeffs
        self.entries = clean


def transport(
    line: PuncturedLine,
    connection: UnipotentConnection,
    path: Path,
    tol: float = DEFAULT_TOL,
    precision_bits=None,
    method: str = "dyson",
):
    """Path-ordered exponential of the connection along the path.

    method 'dyson' sums the finite chain expansion through iterated
    integrals (exact in the nilpotency length); method 'ode' solves
    T' = T . Omega(t) directly with the same step control.  Both satisfy
    transport(g1.g2) = transport(g1) . transport(g2).
    """
    line.ensure_clear(path)
    r = connection.rank
    arith = _Arithmetic(precision_bits)
    if method == "dyson":
        out = [[1.0 + 0j if i == j else 0j for j in range(r)] for i in range(r)]
        for i in range(r):
            for j in range(i + 1, r):
                total = 0j
                for chain in _chains(connection, i, j):
                    slots = [connection.entries[(a, b)] for a, b in chain]
                    value, _ = _integrate_slots(line, path, slots, tol, arith)
                    total += arith.to_complex(value)
                out[i][j] = total
        return out
    if method == "ode":
        keys = [(i, j) for i in range(r) for j in range(i + 1, r)]
        index = {key: s for s, key in enumerate(keys)}
        form_value = _log_form_factory(line, arith)
        zero = arith.number(0.0)
        one = arith.number(1.0)
        state = [zero] * len(keys)
        tol_unit = tol / max(len(path.segments), 1)
        for seg in path.segments:
            point, velocity = _segment_funcs(seg, arith)

            def rhs(t, y):
                z = point(t)
                dz = velocity(t)
                omega = {
                    key: form_value(coeffs, z, dz)
                    for key, coeffs in connection.entries.items()
                }
                out = []
                for (i, j) in keys:
                    acc = zero
                    # (T Omega)[i][j] with T[i][i] = 1 on the diagonal
                    for k in range(i, j):
                        om = omega.get((k, j))
                        if om is None:
                            continue
                        acc = acc + (one if k == i else y[index[(i, k)]]) * om
                    out.append(acc)
                return out

            state, _ = _adaptive_rk4(rhs, state, tol_unit, arith)
        out = [[1.0 + 0j if i == j else 0j for j in range(r)] for i in range(r)]
        for key, s in index.items():
            out[key[0]][key[1]] = arith.to_complex(state[s])
        return out
    raise ValueError(f"unknown transport method {method!r}")


def _chains(connection: UnipotentConnection, i: int, j: int):
    """All strictly increasing index chains from i to j through stored entries."""
    if i >= j:
        return
    stack = [(i, (i,))]
    while stack:
        node, chain = stack.pop()
        for (a, b) in sorted(connection.entries):
            if a != node:
                continue
            if b == j:
                yield list(zip(chain + (b,), (chain + (b,))[1:]))
            elif b < j:
                stack.append((b, chain + (b,)))


@dataclass
class KFormVerdict:
    admits_form: bool
    frame: list | None
    obstructions: list

    def rows(self):
        yield ("canonical_k_form", "YES" if self.admits_form else "NO")
        for (i, j, k) in self.obstructions:
            yield (f"obstruction_{i}_{j}", f"form {k}")


def canonical_k_form(connection: UnipotentConnection, splitting_forms) -> KFormVerdict:
    """Check that every connection entry lies in the chosen splitting span.

    When it does, the constant frame realizes the rational form of the
    bundle and the identity matrix is the canonical comparison of the
    splitting fiber functor with any point fiber functor.
    """
    allowed = set(splitting_forms)
    obstructions = []
    for (i, j), coeffs in sorted(connection.entries.items()):
        for k in sorted(coeffs):
            if k not in allowed:
                obstructions.append((i, j, k))
    if obstructions:
        return KFormVerdict(False, None, obstructions)
    r = connection.rank
    frame = [[1.0 + 0j if i == j else 0j for j in range(r)] for i in range(r)]
    return KFormVerdict(True, frame, [])
