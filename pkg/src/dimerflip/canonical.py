"""Constructive canonicalization by bounded-length switchings.

``canonicalize_hypercube`` drives any configuration of the unit hypercube
``Q^d`` to the one with every dimer along axis 1, using cycles of length at
most ``4d - 4``.  ``canonicalize_triangular`` drives any configuration of a
triangular box ``T_{m,n}`` to horizontal rows using only 4- and 6-cycles.
Both return a :class:`FlipSequence` that :func:`apply_flip_sequence`
replays and checks step by step.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Sequence

from .errors import CanonicalizationError, ConfigError, CycleError
from .lattice import HYPERCUBIC, TRIANGULAR, Lattice, transpose_triangular
from .matching import (
    AlternatingCycle,
    DimerConfig,
    _alternates,
    canonical_key,
    is_alternating,
    switch,
    switch_partner,
)


@dataclass(frozen=True)
class FlipSequence:
    """Switchings to apply in order, starting from the configuration ``start_key``.

    ``segments`` groups the flips: per sub-cube for the hypercube, per
    bottom-row position for triangular boxes, whose closing two-row base
    contributes ``base_flips`` more.
    """

    lattice: Lattice
    start_key: bytes
    cycles: tuple[AlternatingCycle, ...]
    ell: int
    segments: tuple[int, ...] = ()
    base_flips: int = 0

    def __len__(self) -> int:
        return len(self.cycles)

    @property
    def max_cycle_length(self) -> int:
        return max((len(c) for c in self.cycles), default=0)

    def reversed(self, final: DimerConfig) -> "FlipSequence":
        return FlipSequence(self.lattice, final.key(), tuple(reversed(self.cycles)), self.ell)

    def to_dict(self) -> dict[str, Any]:
        lat = self.lattice
        return {
            "start_key": self.start_key.hex(),
            "ell": self.ell,
            "cycles": [c.coords(lat) for c in self.cycles],
            "summary": {
                "flips": len(self.cycles),
                "max_cycle_length": self.max_cycle_length,
                "segments": list(self.segments),
                "base_flips": self.base_flips,
            },
        }


def apply_flip_sequence(cfg: DimerConfig, seq: FlipSequence) -> DimerConfig:
    if cfg.key() != seq.start_key:
        raise ConfigError("flip sequence does not start at this configuration")
    cur = cfg
    for i, cyc in enumerate(seq.cycles):
        if len(cyc) > 2 * seq.ell:
            raise CycleError(f"flip {i} has length {len(cyc)} > {2 * seq.ell}")
        if not is_alternating(cur, cyc):
            raise CycleError(f"flip {i} is not alternating at its position")
        cur = switch(cur, cyc)
    return cur


# -- unit hypercube -----------------------------------------------------------

@dataclass(frozen=True)
class AlternatingReachability:
    """Alternating exploration from an even vertex, first step along a non-dimer.

    ``even_levels[k]`` holds the even vertices reachable by an alternating
    path of length ``<= 2k``; ``odd_levels[k]`` the odd ones reachable
    within ``2k + 1``.  ``parent`` links rebuild the (simple) paths.
    """

    source: int
    even_levels: tuple[frozenset[int], ...]
    odd_levels: tuple[frozenset[int], ...]
    parent: dict[int, int] = field(repr=False)

    def path_to(self, x: int) -> list[int]:
        path = [x]
        while path[-1] != self.source:
            path.append(self.parent[path[-1]])
        return path[::-1]


def alternating_reachability(
    partner: Sequence[int],
    gamma: Sequence[Sequence[int]],
    source: int,
    max_k: int,
    stop_at: int | None = None,
) -> AlternatingReachability:
    """Breadth-first alternating search in the graph with adjacency ``gamma``.

    ``gamma`` must contain every dimer edge.  Frontiers are processed in
    ascending vertex order and neighbours in ascending order, so paths are
    shortest with ties broken by parent index.  Exploration stops early once
    ``stop_at`` is reached as an odd vertex.
    """
    parent: dict[int, int] = {}
    seen = {source}
    evens = [source]
    even_levels = [frozenset(evens)]
    odd_levels: list[frozenset[int]] = []
    odd_all: set[int] = set()
    frontier = [source]
    for _ in range(max_k + 1):
        odd_front = []
        for e in sorted(frontier):
            for w in gamma[e]:
                if w == partner[e] or w in seen:
                    continue
                seen.add(w)
                parent[w] = e
                odd_front.append(w)
        odd_all.update(odd_front)
        odd_levels.append(frozenset(odd_all))
        if stop_at is not None and stop_at in odd_all:
            break
        frontier = []
        for o in sorted(odd_front):
            e = partner[o]
            if e not in seen:
                seen.add(e)
                parent[e] = o
                frontier.append(e)
        evens.extend(frontier)
        if len(even_levels) <= max_k:
            even_levels.append(frozenset(evens))
        if not frontier:
            break
    return AlternatingReachability(source, tuple(even_levels), tuple(odd_levels), parent)


def _require_unit_hypercube(lat: Lattice) -> None:
    if lat.kind != HYPERCUBIC or any(n != 2 for n in lat.shape) or lat.dim < 2:
        raise CanonicalizationError(f"need a unit hypercube Q^d with d >= 2, got {lat!r}")


def hypercube_canonical_config(lat: Lattice) -> DimerConfig:
    """All dimers parallel to the first axis."""
    _require_unit_hypercube(lat)
    dimers = [(v, v + 1) for v in range(lat.num_vertices) if lat.coords[v][0] == 1]
    return DimerConfig.from_dimers(lat, dimers)


def crossing_count(partner: Sequence[int], lat: Lattice, verts: Sequence[int], axis: int) -> int:
    c = lat.coords
    return sum(1 for v in verts if c[v][axis] == 1 and c[partner[v]][axis] == 2)


def canonicalize_hypercube(cfg: DimerConfig) -> FlipSequence:
    lat = cfg.lattice
    _require_unit_hypercube(lat)
    d = lat.dim
    coords = lat.coords
    partner = list(cfg.partner)
    cycles: list[AlternatingCycle] = []
    segments: list[int] = []

    def process(verts: list[int], dd: int) -> None:
        if dd == 1:
            return
        axis = dd - 1
        vset = set(verts)
        half = {v: coords[v][axis] for v in verts}
        gamma_base = {
            v: [w for w in lat.adjacency[v] if w in vset and half[w] == half[v]] for v in verts
        }
        flips = 0
        while True:
            crossing = [v for v in verts if half[v] == 1 and half[partner[v]] == 2]
            if not crossing:
                break
            source = min(v for v in crossing if lat.parity(v) == 0)
            target = partner[source]
            gamma = [()] * lat.num_vertices
            for v in verts:
                gamma[v] = sorted(set(gamma_base[v]) | {partner[v]})
            reach = alternating_reachability(partner, gamma, source, 2 * dd - 3, stop_at=target)
            if target not in reach.parent:
                raise CanonicalizationError(
                    f"partner {coords[target]} of {coords[source]} not reached within depth {4 * dd - 5}"
                )
            path = reach.path_to(target)
            if len(path) > 4 * dd - 4:
                raise CanonicalizationError(f"cycle of length {len(path)} exceeds {4 * dd - 4}")
            before = len(crossing)
            switch_partner(partner, path)
            after = crossing_count(partner, lat, verts, axis)
            if after > before - 2:
                raise CanonicalizationError("switch did not remove two crossing dimers")
            cycles.append(AlternatingCycle.of(path))
            flips += 1
        segments.append(flips)
        process([v for v in verts if half[v] == 1], dd - 1)
        process([v for v in verts if half[v] == 2], dd - 1)

    process(list(range(lat.num_vertices)), d)
    return FlipSequence(lat, canonical_key(cfg), tuple(cycles), 2 * d - 2, tuple(segments))


# -- triangular boxes ---------------------------------------------------------

def triangular_canonical_config(lat: Lattice) -> DimerConfig:
    """Horizontal dimers ``(2y-1, r)(2y, r)`` in every row; transposed when ``m`` is odd."""
    lat.require_kind(TRIANGULAR)
    m, n = lat.shape
    if m % 2 == 0:
        pairs = [((2 * y - 1, r), (2 * y, r)) for r in range(1, n + 1) for y in range(1, m // 2 + 1)]
    else:
        pairs = [((c, 2 * y - 1), (c, 2 * y)) for c in range(1, m + 1) for y in range(1, n // 2 + 1)]
    return DimerConfig.from_coord_dimers(lat, pairs)


class _TriangularState:
    """Mutable partner list with row-offset coordinates for the case analysis."""

    def __init__(self, lat: Lattice, partner: list[int]):
        self.lat = lat
        self.partner = partner
        self.row0 = 0
        self.cycles: list[tuple[int, ...]] = []

    def at(self, x: int, y: int) -> int:
        c = (x, y + self.row0)
        if not self.lat.contains(c):
            raise CanonicalizationError(f"case analysis needs vertex {c} outside the box")
        return self.lat.index(c)

    def mate(self, x: int, y: int) -> tuple[int, int]:
        px, py = self.lat.coords[self.partner[self.at(x, y)]]
        return px, py - self.row0

    def flip(self, *pts: tuple[int, int]) -> None:
        vs = [self.at(x, y) for x, y in pts]
        if not _alternates(self.partner, vs) or any(
            not self.lat.has_edge(vs[i], vs[(i + 1) % len(vs)]) for i in range(len(vs))
        ):
            raise CanonicalizationError(f"cycle {pts} (row offset {self.row0}) is not alternating")
        switch_partner(self.partner, vs)
        self.cycles.append(tuple(vs))

    def require_mate(self, a: tuple[int, int], b: tuple[int, int]) -> None:
        if self.mate(*a) != b:
            raise CanonicalizationError(f"expected dimer {a}-{b} at row offset {self.row0}")

    def prefix(self, m: int) -> int:
        x = 0
        while x < m // 2 and self.mate(2 * x + 1, 1) == (2 * x + 2, 1):
            x += 1
        return x


def _one_move(st: _TriangularState, x: int) -> None:
    """Apply the single switching prescribed for the current state at position ``x``."""
    a = 2 * x  # columns are a+1, a+2, ... as in the case analysis
    X = st.mate(a + 1, 1)
    if X == (a + 1, 2):
        Y = st.mate(a + 2, 2)
        if Y == (a + 2, 1):
            st.flip((a + 1, 1), (a + 1, 2), (a + 2, 2), (a + 2, 1))
            return
        st.require_mate((a + 2, 1), (a + 3, 1))
        if Y == (a + 3, 2):
            st.flip((a + 2, 1), (a + 3, 1), (a + 3, 2), (a + 2, 2))
        elif Y == (a + 1, 3):
            st.flip((a + 1, 1), (a + 2, 1), (a + 3, 1), (a + 2, 2), (a + 1, 3), (a + 1, 2))
        elif Y == (a + 2, 3):
            Z = st.mate(a + 3, 2)
            if Z == (a + 3, 3):
                st.flip((a + 2, 2), (a + 3, 2), (a + 3, 3), (a + 2, 3))
            elif Z == (a + 4, 1):
                st.flip((a + 2, 1), (a + 3, 1), (a + 4, 1), (a + 3, 2), (a + 2, 3), (a + 2, 2))
            elif Z == (a + 4, 2):
                st.require_mate((a + 4, 1), (a + 5, 1))
                st.flip((a + 4, 1), (a + 5, 1), (a + 4, 2), (a + 3, 2))
            else:
                raise CanonicalizationError(f"case 1: unexpected partner {Z} of {(a + 3, 2)}")
        else:
            raise CanonicalizationError(f"case 1: unexpected partner {Y} of {(a + 2, 2)}")
    elif X == (a, 2):
        Y = st.mate(a + 1, 2)
        if Y == (a, 3):
            st.flip((a + 1, 2), (a, 3), (a, 2), (a + 1, 1))
        elif Y == (a + 2, 1):
            st.flip((a + 1, 1), (a + 2, 1), (a + 1, 2), (a, 2))
        elif Y == (a + 2, 2):
            st.require_mate((a + 2, 1), (a + 3, 1))
            st.flip((a + 2, 1), (a + 3, 1), (a + 2, 2), (a + 1, 2))
        elif Y == (a + 1, 3):
            Z = st.mate(a + 2, 2)
            if Z == (a + 2, 1):
                st.flip((a + 1, 2), (a + 1, 3), (a + 2, 2), (a + 2, 1))
            elif Z == (a + 2, 3):
                st.flip((a + 1, 2), (a + 1, 3), (a + 2, 3), (a + 2, 2))
            elif Z == (a + 3, 2):
                st.require_mate((a + 2, 1), (a + 3, 1))
                st.flip((a + 2, 1), (a + 3, 1), (a + 3, 2), (a + 2, 2))
            else:
                raise CanonicalizationError(f"case 2: unexpected partner {Z} of {(a + 2, 2)}")
        else:
            raise CanonicalizationError(f"case 2: unexpected partner {Y} of {(a + 1, 2)}")
    else:
        raise CanonicalizationError(f"unexpected partner {X} of bottom vertex {(a + 1, 1)}")


_MAX_FLIPS_PER_POSITION = 4


def _bottom_row(st: _TriangularState, m: int, segments: list[int]) -> None:
    while True:
        x = st.prefix(m)
        if x == m // 2:
            return
        flips = 0
        while st.mate(2 * x + 1, 1) != (2 * x + 2, 1):
            _one_move(st, x)
            flips += 1
            if flips > _MAX_FLIPS_PER_POSITION:
                raise CanonicalizationError(f"position {x} needed more than 4 flips")
        segments.append(flips)


def _two_row_base(st: _TriangularState, m: int) -> int:
    for c in range(1, m + 1):
        if c > 1 and st.mate(c, 1) == (c - 1, 2):
            raise CanonicalizationError(f"diagonal dimer at column {c} in the two-row base")
    flips = 0
    while True:
        verticals = [c for c in range(1, m + 1) if st.mate(c, 1) == (c, 2)]
        if not verticals:
            break
        c = verticals[0]
        if st.mate(c + 1, 1) == (c + 1, 2):
            st.flip((c, 1), (c + 1, 1), (c + 1, 2), (c, 2))
        else:
            st.require_mate((c + 1, 1), (c + 2, 1))
            st.flip((c + 1, 1), (c + 2, 1), (c + 2, 2), (c + 1, 2))
        flips += 1
    return flips


def _canonicalize_even_width(lat: Lattice, partner: list[int]) -> tuple[list[tuple[int, ...]], list[int], int]:
    m, n = lat.shape
    st = _TriangularState(lat, partner)
    segments: list[int] = []
    for r in range(max(0, n - 2)):
        st.row0 = r
        _bottom_row(st, m, segments)
    base = 0
    if n >= 2:
        st.row0 = n - 2
        base = _two_row_base(st, m)
    return st.cycles, segments, base


def canonicalize_triangular(cfg: DimerConfig) -> FlipSequence:
    lat = cfg.lattice
    lat.require_kind(TRIANGULAR)
    m, _ = lat.shape
    if m % 2 == 0:
        raw, segments, base = _canonicalize_even_width(lat, list(cfg.partner))
    else:
        other, fwd = transpose_triangular(lat)
        back = [0] * len(fwd)
        for v, w in enumerate(fwd):
            back[w] = v
        tp = [0] * len(fwd)
        for v, p in enumerate(cfg.partner):
            tp[fwd[v]] = fwd[p]
        raw_t, segments, base = _canonicalize_even_width(other, tp)
        raw = [tuple(back[x] for x in c) for c in raw_t]
    cycles = tuple(AlternatingCycle.of(c) for c in raw)
    for c in cycles:
        if len(c) not in (4, 6):
            raise CanonicalizationError(f"triangular flip of length {len(c)}")
    return FlipSequence(lat, canonical_key(cfg), cycles, 3, tuple(segments), base)


def canonicalize(cfg: DimerConfig) -> FlipSequence:
    if cfg.lattice.kind == TRIANGULAR:
        return canonicalize_triangular(cfg)
    return canonicalize_hypercube(cfg)


def canonical_target(lat: Lattice) -> DimerConfig:
    if lat.kind == TRIANGULAR:
        return triangular_canonical_config(lat)
    return hypercube_canonical_config(lat)


def connecting_sequence(a: DimerConfig, b: DimerConfig) -> list[AlternatingCycle]:
    """Switchings leading from ``a`` to ``b`` via the canonical configuration."""
    sa, sb = canonicalize(a), canonicalize(b)
    return list(sa.cycles) + list(reversed(sb.cycles))


__all__ = [
    "AlternatingReachability",
    "FlipSequence",
    "alternating_reachability",
    "apply_flip_sequence",
    "canonical_target",
    "canonicalize",
    "canonicalize_hypercube",
    "canonicalize_triangular",
    "connecting_sequence",
    "crossing_count",
    "hypercube_canonical_config",
    "triangular_canonical_config",
]
