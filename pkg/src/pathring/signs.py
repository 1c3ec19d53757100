"""All graded sign rules used by this package live here.

Convention summary (fixed, validated computationally elsewhere):

* `koszul(p, q)` is the sign picked up when elements of degrees p and q
  move past each other: -1 iff both degrees are odd.
* Bar words carry letters shifted down by one; signs between letters are
  Koszul signs of the shifted degrees, via `koszul_shifted`.
* The total bar differential uses simplicial face signs (-1)^i together
  with an internal differential twisted by (-1)^(word length); see
  bar.py for the assembled formula.  D*D = 0 is asserted on every
  constructed complex.
"""

from __future__ import annotations


def koszul(deg_a: int, deg_b: int) -> int:
    """Sign for transposing homogeneous elements of the given degrees."""
    return -1 if (deg_a % 2 == 1 and deg_b % 2 == 1) else 1


def koszul_shifted(deg_a: int, deg_b: int) -> int:
    """Koszul sign after the bar shift (degrees lowered by one)."""
    return koszul(deg_a - 1, deg_b - 1)


def parity(k: int) -> int:
    """(-1)**k without float round-trips."""
    return -1 if k % 2 else 1
