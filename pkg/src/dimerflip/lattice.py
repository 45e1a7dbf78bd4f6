"""Finite graphs carrying dimer configurations.

Three families are supported: hypercubic boxes ``Q^d_n`` (vertex set
``[n_1] x ... x [n_d]``, nearest-neighbour edges), triangular boxes
``T_{m,n}`` (the square grid ``[m] x [n]`` plus the ``(+1,-1)`` diagonals)
and custom graphs given by explicit vertex and edge lists.

Coordinates are 1-based.  Box vertices are indexed in lexicographic
coordinate order with the *first* coordinate varying fastest, so that
``index(c) = sum((c_i - 1) * stride_i)`` with ``stride_1 = 1``.  Every
"smallest vertex" tie-break in the package refers to this index.
"""
from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from math import prod
from typing import Any, Iterable, Sequence

from .errors import LatticeError

HYPERCUBIC = "hypercubic"
TRIANGULAR = "triangular"
CUSTOM = "custom"

TRIANGULAR_OFFSETS = ((1, 0), (-1, 0), (0, 1), (0, -1), (1, -1), (-1, 1))

Coord = tuple[int, ...]


@dataclass(frozen=True, eq=False)
class Lattice:
    """Immutable graph with coordinate-labelled vertices.

    ``adjacency[v]`` is the ascending tuple of neighbour indices of ``v``.
    ``shape`` is the box shape for hypercubic lattices, ``(m, n)`` for
    triangular ones and ``None`` for custom graphs.
    """

    kind: str
    shape: tuple[int, ...] | None
    coords: tuple[Coord, ...]
    adjacency: tuple[tuple[int, ...], ...]
    _index: dict = field(init=False, repr=False)
    _neighbor_sets: tuple = field(init=False, repr=False)
    _cache: dict = field(init=False, repr=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "_index", {c: i for i, c in enumerate(self.coords)})
        object.__setattr__(self, "_neighbor_sets", tuple(frozenset(a) for a in self.adjacency))
        object.__setattr__(self, "_cache", {})

    # -- identity ---------------------------------------------------------
    def descriptor(self) -> dict[str, Any]:
        if self.kind == HYPERCUBIC:
            return {"kind": HYPERCUBIC, "shape": list(self.shape)}
        if self.kind == TRIANGULAR:
            return {"kind": TRIANGULAR, "m": self.shape[0], "n": self.shape[1]}
        return {
            "kind": CUSTOM,
            "vertices": [list(c) for c in self.coords],
            "edges": [list(e) for e in self.edges()],
        }

    def _identity(self):
        if self.kind == CUSTOM:
            return (self.kind, self.coords, self.adjacency)
        return (self.kind, self.shape)

    def __eq__(self, other: object) -> bool:
        if self is other:
            return True
        if not isinstance(other, Lattice):
            return NotImplemented
        return self._identity() == other._identity()

    def __hash__(self) -> int:
        return hash(self._identity())

    def __repr__(self) -> str:
        if self.kind == CUSTOM:
            return f"Lattice(custom, {self.num_vertices} vertices, {self.num_edges} edges)"
        return f"Lattice({self.kind}, {self.shape})"

    # -- queries ----------------------------------------------------------
    @property
    def num_vertices(self) -> int:
        return len(self.coords)

    @property
    def num_edges(self) -> int:
        return sum(len(a) for a in self.adjacency) // 2

    @property
    def dim(self) -> int:
        return len(self.coords[0]) if self.coords else 0

    @property
    def max_degree(self) -> int:
        return max((len(a) for a in self.adjacency), default=0)

    def index(self, coord: Sequence[int]) -> int:
        try:
            return self._index[tuple(coord)]
        except KeyError:
            raise LatticeError(f"{tuple(coord)} is not a vertex of {self!r}") from None

    def contains(self, coord: Sequence[int]) -> bool:
        return tuple(coord) in self._index

    def coord(self, v: int) -> Coord:
        self._check_vertex(v)
        return self.coords[v]

    def neighbors(self, v: int) -> tuple[int, ...]:
        self._check_vertex(v)
        return self.adjacency[v]

    def has_edge(self, u: int, v: int) -> bool:
        return v in self._neighbor_sets[u]

    def edges(self) -> list[tuple[int, int]]:
        return [(u, v) for u, nbrs in enumerate(self.adjacency) for v in nbrs if u < v]

    def parity(self, v: int) -> int:
        return sum(self.coords[v]) % 2

    def _check_vertex(self, v: int) -> None:
        if not 0 <= v < len(self.coords):
            raise LatticeError(f"vertex index {v} out of range for {self!r}")

    def require_kind(self, *kinds: str) -> None:
        if self.kind not in kinds:
            raise LatticeError(f"operation needs a {' or '.join(kinds)} lattice, got {self.kind}")

    def to_json(self) -> str:
        return json.dumps(self.descriptor(), separators=(",", ":"))


def _box_coords(dims: Sequence[int]) -> list[Coord]:
    # first coordinate fastest
    ranges = [range(1, n + 1) for n in reversed(dims)]
    return [tuple(reversed(p)) for p in itertools.product(*ranges)]


def _from_offsets(kind, shape, coords, offsets) -> Lattice:
    index = {c: i for i, c in enumerate(coords)}
    adjacency = []
    for c in coords:
        nbrs = []
        for off in offsets:
            w = tuple(a + b for a, b in zip(c, off))
            j = index.get(w)
            if j is not None:
                nbrs.append(j)
        adjacency.append(tuple(sorted(nbrs)))
    return Lattice(kind, tuple(shape), tuple(coords), tuple(adjacency))


def validate_shape(shape: Sequence[int]) -> tuple[int, ...]:
    dims = tuple(int(n) for n in shape)
    if len(dims) < 1:
        raise LatticeError("a shape needs at least one dimension")
    if any(n < 2 for n in dims):
        raise LatticeError(f"every side of a shape must be at least 2, got {dims}")
    if prod(dims) % 2:
        raise LatticeError(f"shape {dims} has odd volume {prod(dims)}")
    return dims


def build_hypercubic(shape: Sequence[int]) -> Lattice:
    dims = validate_shape(shape)
    d = len(dims)
    offsets = []
    for i in range(d):
        for s in (1, -1):
            off = [0] * d
            off[i] = s
            offsets.append(tuple(off))
    return _from_offsets(HYPERCUBIC, dims, _box_coords(dims), offsets)


def build_triangular(m: int, n: int) -> Lattice:
    m, n = int(m), int(n)
    if m < 1 or n < 1:
        raise LatticeError(f"triangular box needs m, n >= 1, got ({m}, {n})")
    if (m * n) % 2:
        raise LatticeError(f"triangular box T_{{{m},{n}}} has odd volume")
    return _from_offsets(TRIANGULAR, (m, n), _box_coords((m, n)), TRIANGULAR_OFFSETS)


def build_custom(vertices: Iterable[Sequence[int]], edges: Iterable[Sequence[int]]) -> Lattice:
    coords = tuple(tuple(int(x) for x in c) for c in vertices)
    if len(set(coords)) != len(coords):
        raise LatticeError("custom lattice has repeated vertex coordinates")
    nv = len(coords)
    nbrs: list[set[int]] = [set() for _ in range(nv)]
    for e in edges:
        u, v = (int(x) for x in e)
        if not (0 <= u < nv and 0 <= v < nv):
            raise LatticeError(f"edge {(u, v)} has a dangling endpoint")
        if u == v:
            raise LatticeError(f"edge {(u, v)} is a loop")
        if v in nbrs[u]:
            raise LatticeError(f"duplicate edge {(u, v)}")
        nbrs[u].add(v)
        nbrs[v].add(u)
    return Lattice(CUSTOM, None, coords, tuple(tuple(sorted(s)) for s in nbrs))


def lattice_from_descriptor(desc: dict[str, Any]) -> Lattice:
    kind = desc.get("kind")
    try:
        if kind == HYPERCUBIC:
            return build_hypercubic(desc["shape"])
        if kind == TRIANGULAR:
            return build_triangular(desc["m"], desc["n"])
        if kind == CUSTOM:
            return build_custom(desc["vertices"], desc["edges"])
    except KeyError as exc:
        raise LatticeError(f"lattice descriptor is missing {exc}") from None
    raise LatticeError(f"unknown lattice kind {kind!r}")


def lattice_from_json(text: str) -> Lattice:
    return lattice_from_descriptor(json.loads(text))


def transpose_triangular(lat: Lattice) -> tuple[Lattice, tuple[int, ...]]:
    """Return ``T_{n,m}`` and the vertex map ``(x, y) -> (y, x)`` from ``lat``.

    The offset set of the triangular lattice is invariant under swapping
    coordinates, so the map is a graph isomorphism.
    """
    lat.require_kind(TRIANGULAR)
    m, n = lat.shape
    other = build_triangular(n, m)
    mapping = tuple(other.index((y, x)) for (x, y) in lat.coords)
    return other, mapping


def unit_cube_anchors(lat: Lattice) -> list[Coord]:
    """Anchors ``x`` of all unit cubes ``x + {0,1}^d`` inside a box, in index order."""
    lat.require_kind(HYPERCUBIC)
    return _box_coords([n - 1 for n in lat.shape])


def unit_cube_vertices(lat: Lattice, anchor: Sequence[int]) -> list[int]:
    lat.require_kind(HYPERCUBIC)
    d = len(lat.shape)
    return sorted(
        lat.index(tuple(a + b for a, b in zip(anchor, bits)))
        for bits in itertools.product((0, 1), repeat=d)
    )


def ball(lat: Lattice, v: int, radius: int) -> set[int]:
    """Vertices within graph distance ``radius`` of ``v``."""
    seen = {v}
    frontier = [v]
    for _ in range(radius):
        nxt = []
        for u in frontier:
            for w in lat.adjacency[u]:
                if w not in seen:
                    seen.add(w)
                    nxt.append(w)
        frontier = nxt
    return seen
