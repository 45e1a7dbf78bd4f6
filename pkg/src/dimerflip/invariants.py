"""Colour invariant, pyramid configurations and hypercube isoperimetry.

The colouring: for a dimer ``uv`` with ``u`` odd and ``v`` even along axis
``i``, both endpoints are red if ``u_i - v_i = 1`` and blue otherwise.  The
number of red vertices is unchanged by any switching.

The isoperimetric part evaluates Harper's function ``phi_d(a)`` (the least
size of ``A`` together with its vertex boundary over ``a``-subsets of the
unit cube), brute-force oracles for it, and the even-set expansion
sequences used to bound alternating-path exploration in ``Q^d``.
"""
from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass
from fractions import Fraction
from math import comb

import numpy as np

from .errors import DimerError
from .lattice import HYPERCUBIC, build_hypercubic
from .matching import DimerConfig


class Colour(str, enum.Enum):
    RED = "red"
    BLUE = "blue"


def colour(cfg: DimerConfig) -> tuple[Colour, ...]:
    lat = cfg.lattice
    lat.require_kind(HYPERCUBIC)
    out: list[Colour | None] = [None] * lat.num_vertices
    for a, b in cfg.dimers():
        u, v = (a, b) if lat.parity(a) == 1 else (b, a)
        cu, cv = lat.coords[u], lat.coords[v]
        diff = next(x - y for x, y in zip(cu, cv) if x != y)
        c = Colour.RED if diff == 1 else Colour.BLUE
        out[u] = out[v] = c
    return tuple(out)


def red_count(cfg: DimerConfig) -> int:
    return sum(c is Colour.RED for c in colour(cfg))


def _pyramid_partner(c: tuple[int, ...], n: int) -> tuple[int, ...]:
    v1, v2, rest = c[0], c[1], c[2:]
    mirror = n + 1 - v2
    if v1 < v2 and v1 >= mirror:
        return (v1 + 1, v2, *rest)
    if v1 <= v2 and v1 < mirror:
        return (v1, v2 + 1, *rest)
    if v1 > v2 and v1 <= mirror:
        return (v1 - 1, v2, *rest)
    if v1 >= v2 and v1 > mirror:
        return (v1, v2 - 1, *rest)
    raise DimerError(f"no pyramid case applies to {c}")  # unreachable for even n


def pyramid(d: int, n: int, inverse: bool = False) -> DimerConfig:
    """The pyramid configuration on ``Q^d_n``.

    The four-case partner rule is applied to the even vertices; the inverse
    applies it to the odd vertices, which swaps the two section patterns
    and hence the colours.  No dimer changes coordinates ``3..d``.
    """
    if d < 2:
        raise DimerError("pyramid configurations need d >= 2")
    if n % 2 or n < 2:
        raise DimerError(f"pyramid configurations need an even side length, got {n}")
    lat = build_hypercubic((n,) * d)
    source = 1 if inverse else 0
    dimers = [
        (v, lat.index(_pyramid_partner(lat.coords[v], n)))
        for v in range(lat.num_vertices)
        if lat.parity(v) == source
    ]
    return DimerConfig.from_dimers(lat, dimers)


def diameter_lower_bound(d: int, n: int, ell: int) -> Fraction:
    """``n^(d-1) (n^2 - 1) / (6 ell^2)``, exactly."""
    if d < 2 or ell < 2 or n < 2 or n % 2:
        raise DimerError(f"need d, ell, n >= 2 and n even; got d={d}, n={n}, ell={ell}")
    return Fraction(n ** (d - 1) * (n * n - 1), 6 * ell * ell)


# -- Harper -------------------------------------------------------------------

@dataclass(frozen=True)
class HarperDecomposition:
    """``a = sum_{j>k} C(d, j) + sum_{i=t..k} C(tops[i-t], i)``."""

    d: int
    k: int
    t: int
    tops: tuple[int, ...]  # a_t < ... < a_k

    def value(self) -> int:
        head = sum(comb(self.d, j) for j in range(self.k + 1, self.d + 1))
        return head + sum(comb(a, i) for i, a in zip(range(self.t, self.k + 1), self.tops))

    def phi(self) -> int:
        head = sum(comb(self.d, j) for j in range(self.k, self.d + 1))
        return head + sum(comb(a, i - 1) for i, a in zip(range(self.t, self.k + 1), self.tops))


def harper_decomposition(d: int, a: int) -> HarperDecomposition:
    if not 1 <= a < 2**d:
        raise DimerError(f"decomposition needs 1 <= a < 2^d, got a={a}, d={d}")
    k, head = d, 0
    while head + comb(d, k) <= a:
        head += comb(d, k)
        k -= 1
    rest = a - head
    tops: list[int] = []
    i = k
    while rest > 0:
        x = i
        while comb(x + 1, i) <= rest:
            x += 1
        tops.append(x)
        rest -= comb(x, i)
        i -= 1
    return HarperDecomposition(d, k, i + 1, tuple(reversed(tops)))


def harper_phi(d: int, a: int) -> int:
    if not 0 <= a <= 2**d:
        raise DimerError(f"a={a} outside [0, 2^{d}]")
    if a == 0:
        return 0
    if a == 2**d:
        return 2**d
    return harper_decomposition(d, a).phi()


_ORACLE_MAX_DIM = 4


def _cube_masks(d: int):
    lat = build_hypercubic((2,) * d)
    nb = [sum(1 << w for w in lat.adjacency[v]) for v in range(lat.num_vertices)]
    return lat, nb


def _closure_table(d: int) -> tuple[np.ndarray, np.ndarray]:
    """``(|A|, |A u dA|)`` for every subset mask ``A`` of the unit cube."""
    lat, nb = _cube_masks(d)
    n = lat.num_vertices
    closure = np.zeros(1 << n, dtype=np.int64)
    for b in range(n):
        closure[1 << b: 1 << (b + 1)] = closure[: 1 << b] | (nb[b] | (1 << b))
    masks = np.arange(1 << n, dtype=np.int64)
    return np.bitwise_count(masks), np.bitwise_count(closure)


def boundary_oracle(d: int, a: int) -> int:
    """Exact ``min |A u dA|`` over ``a``-subsets of the unit cube, by exhaustion."""
    if d < 1 or d > _ORACLE_MAX_DIM:
        raise DimerError(f"exhaustive oracle supports 1 <= d <= {_ORACLE_MAX_DIM}, got {d}")
    if not 0 <= a <= 2**d:
        raise DimerError(f"a={a} outside [0, 2^{d}]")
    sizes, closed = _closure_table(d)
    return int(closed[sizes == a].min())


def even_boundary_oracle(d: int, a: int) -> int:
    """Exact ``min |dA|`` over even ``a``-subsets of ``Q^d``."""
    if d < 1 or d > _ORACLE_MAX_DIM:
        raise DimerError(f"exhaustive oracle supports 1 <= d <= {_ORACLE_MAX_DIM}, got {d}")
    lat, nb = _cube_masks(d)
    evens = [v for v in range(lat.num_vertices) if lat.parity(v) == 0]
    if not 0 <= a <= len(evens):
        raise DimerError(f"a={a} exceeds the {len(evens)} even vertices of Q^{d}")
    best = None
    for subset in itertools.combinations(evens, a):
        mask = 0
        for v in subset:
            mask |= nb[v]
        size = bin(mask).count("1")
        best = size if best is None else min(best, size)
    return best


def _half_cube_profile(d: int, last: int) -> list[int]:
    """``f(s) = min |dX n Q|`` over even ``X`` in the facet ``Q = {x_d = last}``, ``|X| = s``."""
    lat = build_hypercubic((2,) * d)
    facet = {v for v in range(lat.num_vertices) if lat.coords[v][-1] == last}
    evens = [v for v in sorted(facet) if lat.parity(v) == 0]
    nb = [sum(1 << w for w in lat.adjacency[v] if w in facet) for v in range(lat.num_vertices)]
    prof = []
    for s in range(len(evens) + 1):
        best = None
        for subset in itertools.combinations(evens, s):
            mask = 0
            for v in subset:
                mask |= nb[v]
            size = bin(mask).count("1")
            best = size if best is None else min(best, size)
        prof.append(best)
    return prof


def expansion_sequences(d: int, max_dim: int = _ORACLE_MAX_DIM) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """``(a_0..a_{d-2}, b_0..b_{d-2})`` computed by exhaustion over even sets.

    ``a_0 = 1``, ``b_0 = 2^(d-2) + 1`` and each next term is the least total
    facet boundary ``|dX1 n Q1| + |dX2 n Q2|`` over even ``X1 c Q1``,
    ``X2 c Q2`` whose sizes add up to the previous term.
    """
    if d < 2 or d > max_dim:
        raise DimerError(f"exhaustive expansion supports 2 <= d <= {max_dim}, got {d}")
    f1 = _half_cube_profile(d, 1)
    f2 = _half_cube_profile(d, 2)

    def step(total: int) -> int:
        options = [
            f1[s1] + f2[total - s1]
            for s1 in range(len(f1))
            if 0 <= total - s1 < len(f2)
        ]
        if not options:
            raise DimerError(f"no even split of size {total} in Q^{d}")
        return min(options)

    a = [1]
    b = [2 ** (d - 2) + 1]
    for _ in range(d - 2):
        a.append(step(a[-1]))
        b.append(step(b[-1]))
    return tuple(a), tuple(b)
