"""Exhaustive state spaces: all perfect matchings and the flip graph D_l(G)."""
from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass
from typing import Iterator

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import shortest_path

from .cycles import alternating_cycles_raw
from .errors import CapExceeded, DimerError
from .lattice import Lattice
from .matching import DimerConfig, key_of_partner, switch_partner

DEFAULT_VERTEX_CAP = 36
DEFAULT_NODE_CAP = 100_000


def iter_matchings(lat: Lattice) -> Iterator[tuple[int, ...]]:
    """Yield every perfect matching as a partner tuple.

    Backtracking always matches the lowest-index uncovered vertex; its
    neighbours are tried in ascending order.
    """
    nv = lat.num_vertices
    if nv % 2:
        return
    adj = lat.adjacency
    partner = [-1] * nv

    def rec(start: int) -> Iterator[tuple[int, ...]]:
        v = start
        while v < nv and partner[v] != -1:
            v += 1
        if v == nv:
            yield tuple(partner)
            return
        for w in adj[v]:
            if partner[w] == -1:
                partner[v] = w
                partner[w] = v
                yield from rec(v + 1)
                partner[v] = -1
                partner[w] = -1

    yield from rec(0)


def count_matchings(lat: Lattice) -> int:
    """Number of perfect matchings, by memoised recursion over covered-vertex masks.

    Independent of :func:`iter_matchings`: nothing is stored but the counts.
    """
    nv = lat.num_vertices
    if nv % 2:
        return 0
    nb_masks = [sum(1 << w for w in lat.adjacency[v]) for v in range(nv)]
    full = (1 << nv) - 1
    memo: dict[int, int] = {full: 1}

    def rec(mask: int) -> int:
        got = memo.get(mask)
        if got is not None:
            return got
        free = ~mask & full
        v = (free & -free).bit_length() - 1
        options = nb_masks[v] & free
        total = 0
        while options:
            bit = options & -options
            total += rec(mask | (1 << v) | bit)
            options ^= bit
        memo[mask] = total
        return total

    return rec(0)


def _check_cap(lat: Lattice, cap: int | None) -> None:
    cap = DEFAULT_VERTEX_CAP if cap is None else cap
    if lat.num_vertices > cap:
        raise CapExceeded(f"{lat.num_vertices} vertices exceeds the enumeration cap of {cap}")


def enumerate_matchings(lat: Lattice, cap: int | None = None) -> list[DimerConfig]:
    """All dimer configurations of ``lat``, sorted by canonical key."""
    _check_cap(lat, cap)
    keyed = sorted((key_of_partner(lat, p), p) for p in iter_matchings(lat))
    return [DimerConfig(lat, p) for _, p in keyed]


@dataclass(frozen=True)
class ConfigGraph:
    """The flip graph ``D_ell``: configurations joined by switchings of length <= 2*ell.

    Node ``i`` has key ``keys[i]`` and representative ``partners[i]``.
    ``cycle_degree[i]`` counts distinct alternating cycles; ``neighbors[i]``
    lists distinct neighbouring configurations.  In a simple graph the two
    coincide, but they are recorded separately.
    """

    lattice: Lattice
    ell: int
    keys: tuple[bytes, ...]
    partners: tuple[tuple[int, ...], ...]
    neighbors: tuple[tuple[int, ...], ...]
    cycle_degree: tuple[int, ...]

    @property
    def num_nodes(self) -> int:
        return len(self.keys)

    @property
    def num_edges(self) -> int:
        return sum(len(n) for n in self.neighbors) // 2

    def node_of(self, cfg: DimerConfig) -> int:
        return self._key_index()[cfg.key()]

    def node_of_key(self, key: bytes) -> int:
        return self._key_index()[key]

    def config(self, i: int) -> DimerConfig:
        return DimerConfig(self.lattice, self.partners[i])

    def _key_index(self) -> dict[bytes, int]:
        idx = self.__dict__.get("_kidx")
        if idx is None:
            idx = {k: i for i, k in enumerate(self.keys)}
            object.__setattr__(self, "_kidx", idx)
        return idx

    def edge_set(self) -> set[frozenset[bytes]]:
        return {
            frozenset((self.keys[i], self.keys[j]))
            for i, nb in enumerate(self.neighbors)
            for j in nb
        }


def build_flip_graph(
    lat: Lattice, ell: int, cap: int | None = None, node_cap: int = DEFAULT_NODE_CAP
) -> ConfigGraph:
    if ell < 2:
        raise DimerError(f"half-length cap must be at least 2, got {ell}")
    configs = enumerate_matchings(lat, cap)
    if len(configs) > node_cap:
        raise CapExceeded(f"{len(configs)} configurations exceeds the node cap of {node_cap}")
    keys = tuple(c.key() for c in configs)
    index = {k: i for i, k in enumerate(keys)}
    neighbors, cdeg = [], []
    for cfg in configs:
        cycles = alternating_cycles_raw(cfg.partner, lat.adjacency, 2 * ell)
        nbrs = set()
        for cyc in cycles:
            partner = list(cfg.partner)
            switch_partner(partner, cyc)
            nbrs.add(index[key_of_partner(lat, partner)])
        neighbors.append(tuple(sorted(nbrs)))
        cdeg.append(len(cycles))
    return ConfigGraph(
        lat, ell, keys, tuple(c.partner for c in configs), tuple(neighbors), tuple(cdeg)
    )


class UnionFind:
    def __init__(self, size: int):
        self.parent = list(range(size))
        self.size = [1] * size

    def find(self, x: int) -> int:
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, a: int, b: int) -> None:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return
        if self.size[ra] < self.size[rb]:
            ra, rb = rb, ra
        self.parent[rb] = ra
        self.size[ra] += self.size[rb]


def component_labels(g: ConfigGraph) -> list[int]:
    """Root node (smallest index) of each node's component."""
    uf = UnionFind(g.num_nodes)
    for i, nb in enumerate(g.neighbors):
        for j in nb:
            uf.union(i, j)
    smallest: dict[int, int] = {}
    for i in range(g.num_nodes):
        smallest.setdefault(uf.find(i), i)
    return [smallest[uf.find(i)] for i in range(g.num_nodes)]


def components(g: ConfigGraph) -> list[tuple[int, bytes]]:
    """``(size, representative key)`` per component, largest first.

    The representative is the component's smallest key; ties in size are
    broken by that key.
    """
    members: dict[int, list[int]] = {}
    for i, root in enumerate(component_labels(g)):
        members.setdefault(root, []).append(i)
    out = [(len(ms), min(g.keys[i] for i in ms)) for ms in members.values()]
    out.sort(key=lambda t: (-t[0], t[1]))
    return out


def is_connected(g: ConfigGraph) -> bool:
    return len(components(g)) == 1


def bfs_distances(g: ConfigGraph, source: int) -> dict[int, int]:
    dist = {source: 0}
    queue = deque([source])
    while queue:
        u = queue.popleft()
        for w in g.neighbors[u]:
            if w not in dist:
                dist[w] = dist[u] + 1
                queue.append(w)
    return dist


@dataclass(frozen=True)
class DiameterReport:
    """Exact diameters; ``per_component`` follows the order of :func:`components`."""

    per_component: tuple[int, ...]
    connected: bool

    @property
    def largest(self) -> int:
        """Diameter of the largest component."""
        return self.per_component[0]

    @property
    def value(self) -> float:
        return self.per_component[0] if self.connected else math.inf


def _adjacency_matrix(g: ConfigGraph) -> csr_matrix:
    rows = [i for i, nb in enumerate(g.neighbors) for _ in nb]
    cols = [j for nb in g.neighbors for j in nb]
    data = np.ones(len(rows), dtype=np.int8)
    return csr_matrix((data, (rows, cols)), shape=(g.num_nodes, g.num_nodes))


def eccentricities(g: ConfigGraph, chunk: int = 512) -> list[int]:
    """Exact eccentricity of every node within its own component (BFS from all nodes)."""
    n = g.num_nodes
    if n == 0:
        return []
    mat = _adjacency_matrix(g)
    ecc = [0] * n
    for lo in range(0, n, chunk):
        idx = np.arange(lo, min(n, lo + chunk))
        dist = shortest_path(mat, directed=False, unweighted=True, indices=idx)
        dist[np.isinf(dist)] = -1
        for row, i in enumerate(idx):
            ecc[i] = int(dist[row].max())
    return ecc


def diameter(g: ConfigGraph) -> DiameterReport:
    labels = component_labels(g)
    ecc = eccentricities(g)
    members: dict[int, list[int]] = {}
    for i, root in enumerate(labels):
        members.setdefault(root, []).append(i)
    order = sorted(members.values(), key=lambda ms: (-len(ms), min(g.keys[i] for i in ms)))
    return DiameterReport(tuple(max(ecc[i] for i in ms) for ms in order), len(members) == 1)


def min_degree(g: ConfigGraph) -> tuple[int, int]:
    """``(edge-degree, cycle-degree)`` minima over all nodes."""
    return min(len(n) for n in g.neighbors), min(g.cycle_degree)


def isolated_vertices(g: ConfigGraph) -> list[bytes]:
    return [k for k, c in zip(g.keys, g.cycle_degree) if c == 0]


def distance(g: ConfigGraph, a: DimerConfig, b: DimerConfig) -> float:
    dist = bfs_distances(g, g.node_of(a))
    return dist.get(g.node_of(b), math.inf)
