"""Finding alternating cycles.

Bounded-length enumeration, the authorised/forbidden vertex machinery for
boxes ``Q^d_n`` (short cycles near authorised vertices and disjoint
packings of them), and extraction of a unit cube carrying many dimers.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Collection, Iterable, Sequence

from .errors import CapExceeded, CycleError, DimerError
from .lattice import HYPERCUBIC, Lattice, ball, unit_cube_anchors, unit_cube_vertices
from .matching import AlternatingCycle, DimerConfig, _alternates, canonical_cycle, is_alternating


def alternating_cycles_raw(
    partner: Sequence[int],
    adjacency: Sequence[Sequence[int]],
    max_len: int,
    allowed: Collection[int] | None = None,
) -> list[tuple[int, ...]]:
    """All alternating cycles of length ``<= max_len`` as canonical tuples.

    Works on partial matchings too (``partner[v] == -1`` marks an uncovered
    vertex).  Each cycle is discovered exactly once: the walk starts at its
    minimum vertex and leaves along that vertex's dimer, then alternates
    non-dimer / dimer steps through larger vertices only.
    """
    found: list[tuple[int, ...]] = []
    nv = len(partner)
    if allowed is not None:
        allowed = set(allowed)
    for s in range(nv):
        p = partner[s]
        if p < s or (allowed is not None and (s not in allowed or p not in allowed)):
            continue
        path = [s, p]
        on_path = {s, p}
        adj_s = set(adjacency[s])

        # iterative DFS over (path length, neighbour iterator)
        stack = [iter(adjacency[p])]
        while stack:
            advanced = False
            for w in stack[-1]:
                if w <= s or w in on_path:
                    continue
                if allowed is not None and w not in allowed:
                    continue
                q = partner[w]
                if q < s or q in on_path or (allowed is not None and q not in allowed):
                    continue
                if len(path) + 2 > max_len:
                    break
                path.append(w)
                path.append(q)
                on_path.add(w)
                on_path.add(q)
                if q in adj_s:
                    found.append(canonical_cycle(path))
                stack.append(iter(adjacency[q]))
                advanced = True
                break
            if not advanced:
                stack.pop()
                if len(path) > 2:
                    on_path.discard(path.pop())
                    on_path.discard(path.pop())
    found.sort()
    return found


def enumerate_alternating_cycles(
    cfg: DimerConfig,
    ell: int,
    region: Iterable[int] | None = None,
    within: Iterable[int] | None = None,
) -> list[AlternatingCycle]:
    """Alternating cycles of length at most ``2*ell``, canonical and sorted.

    ``region`` keeps only cycles meeting the given vertices; ``within``
    restricts the search to cycles whose vertices all lie in the given set.
    """
    if ell < 2:
        raise DimerError(f"half-length cap must be at least 2, got {ell}")
    raw = alternating_cycles_raw(cfg.partner, cfg.lattice.adjacency, 2 * ell, within)
    if region is not None:
        reg = set(region)
        raw = [c for c in raw if reg.intersection(c)]
    return [AlternatingCycle(c) for c in raw]


def all_simple_cycles(
    lat: Lattice, max_len: int, within: Collection[int] | None = None, limit: int | None = None
) -> list[tuple[int, ...]]:
    """Every simple cycle of the lattice of length ``3..max_len``, canonical, sorted.

    Plain DFS from each start vertex through larger vertices; a cycle is
    kept only in the orientation with ``path[1] < path[-1]``.  More than
    ``limit`` cycles raises :class:`CapExceeded`.
    """
    adj = lat.adjacency
    allowed = set(within) if within is not None else None
    out = []
    for s in range(lat.num_vertices):
        if allowed is not None and s not in allowed:
            continue
        adj_s = set(adj[s])
        path = [s]
        on_path = {s}

        def extend(u: int) -> None:
            for w in adj[u]:
                if w <= s or w in on_path or (allowed is not None and w not in allowed):
                    continue
                path.append(w)
                on_path.add(w)
                if len(path) >= 3 and w in adj_s and path[1] < w:
                    out.append(tuple(path))
                    if limit is not None and len(out) > limit:
                        raise CapExceeded(f"more than {limit} cycles of length <= {max_len}")
                if len(path) < max_len:
                    extend(w)
                path.pop()
                on_path.discard(w)

        extend(s)
    out.sort()
    return out


# -- authorised vertices ------------------------------------------------------

@dataclass(frozen=True)
class VertexClassification:
    authorised: tuple[bool, ...]
    forbidders: tuple[tuple[tuple[int, int], ...], ...]

    def authorised_vertices(self) -> list[int]:
        return [v for v, ok in enumerate(self.authorised) if ok]

    def count(self) -> int:
        return sum(self.authorised)


def _collinear_extensions(lat: Lattice, u: int, v: int) -> list[int]:
    cu, cv = lat.coords[u], lat.coords[v]
    out = []
    for a, b in ((cu, cv), (cv, cu)):
        w = tuple(2 * x - y for x, y in zip(a, b))
        if lat.contains(w):
            out.append(lat.index(w))
    return out


def classify_vertices(cfg: DimerConfig) -> VertexClassification:
    """Mark each vertex forbidden (by the dimers it is collinear-adjacent to) or authorised."""
    lat = cfg.lattice
    lat.require_kind(HYPERCUBIC)
    forb: list[list[tuple[int, int]]] = [[] for _ in range(lat.num_vertices)]
    for u, v in cfg.dimers():
        for w in _collinear_extensions(lat, u, v):
            forb[w].append((u, v))
    return VertexClassification(
        tuple(not f for f in forb), tuple(tuple(f) for f in forb)
    )


def count_authorised(cfg: DimerConfig) -> int:
    return classify_vertices(cfg).count()


def cycle_near_authorised(
    cfg: DimerConfig, w: int, classification: VertexClassification | None = None
) -> AlternatingCycle:
    """Short alternating cycle in the second neighbourhood of an authorised vertex.

    Let ``v1`` be the partner of ``w`` and ``u_i`` the partner of every other
    neighbour ``v_i``.  If some ``u_i`` is adjacent to ``v1`` this closes a
    4-cycle ``v1, w, v_i, u_i``.  Otherwise walk the digraph with arcs
    ``v_i -> u_i`` (dimers) and ``u_i -> v_j`` (lattice edges, ``j != i``),
    starting at its smallest vertex and always taking the smallest
    successor, until a vertex repeats; the closed part is the cycle.
    """
    lat = cfg.lattice
    cls = classification if classification is not None else classify_vertices(cfg)
    if not cls.authorised[w]:
        raise CycleError(f"vertex {lat.coords[w]} is not authorised")
    partner = cfg.partner
    v1 = partner[w]
    others = [v for v in lat.adjacency[w] if v != v1]
    for vi in others:
        ui = partner[vi]
        if lat.has_edge(ui, v1):
            return AlternatingCycle.of((v1, w, vi, ui))

    v_set = set(others)
    succ: dict[int, list[int]] = {}
    for vi in others:
        ui = partner[vi]
        succ[vi] = [ui]
        succ[ui] = sorted(x for x in lat.adjacency[ui] if x in v_set and x != vi)
    start = min(succ)
    seen: dict[int, int] = {}
    walk = []
    x = start
    while x not in seen:
        if not succ[x]:
            raise DimerError(f"digraph walk stuck at {lat.coords[x]}; lemma violated")
        seen[x] = len(walk)
        walk.append(x)
        x = succ[x][0]
    cycle = AlternatingCycle.of(walk[seen[x]:])
    if not is_alternating(cfg, cycle):
        raise DimerError("digraph walk produced a non-alternating cycle")
    return cycle


def disjoint_flip_packing(cfg: DimerConfig) -> list[AlternatingCycle]:
    """Cycles near authorised vertices chosen greedily at pairwise distance >= 5."""
    lat = cfg.lattice
    cls = classify_vertices(cfg)
    blocked: set[int] = set()
    cycles = []
    for w in cls.authorised_vertices():
        if w in blocked:
            continue
        blocked |= ball(lat, w, 4)
        cycles.append(cycle_near_authorised(cfg, w, cls))
    return cycles


# -- dense unit cube ----------------------------------------------------------

def _edge_cubes(lat: Lattice):
    """Per-lattice cache: anchors in index order and, per edge, the cubes containing it."""
    cached = lat._cache.get("edge_cubes")
    if cached is None:
        anchors = unit_cube_anchors(lat)
        pos = {a: i for i, a in enumerate(anchors)}
        limits = [n - 1 for n in lat.shape]
        table: dict[tuple[int, int], tuple[int, ...]] = {}
        for u, v in lat.edges():
            cu, cv = lat.coords[u], lat.coords[v]
            choices = []
            for i, (a, b) in enumerate(zip(cu, cv)):
                if a != b:
                    choices.append((min(a, b),))
                else:
                    choices.append(tuple(x for x in (a - 1, a) if 1 <= x <= limits[i]))
            table[(u, v)] = tuple(pos[a] for a in itertools.product(*choices))
        cached = (anchors, table)
        lat._cache["edge_cubes"] = cached
    return cached


def unit_cube_counts(cfg: DimerConfig) -> dict[tuple[int, ...], int]:
    """Number of dimers inside every unit cube ``x + {0,1}^d``, keyed by anchor."""
    lat = cfg.lattice
    lat.require_kind(HYPERCUBIC)
    anchors, counts = _cube_count_list(cfg)
    return dict(zip(anchors, counts))


def _cube_count_list(cfg: DimerConfig) -> tuple[list[tuple[int, ...]], list[int]]:
    anchors, table = _edge_cubes(cfg.lattice)
    counts = [0] * len(anchors)
    for u, v in enumerate(cfg.partner):
        if u < v:
            for c in table[(u, v)]:
                counts[c] += 1
    return anchors, counts


def dense_unit_cube(cfg: DimerConfig) -> tuple[tuple[int, ...], int]:
    """Unit cube holding the most dimers; ties go to the smallest anchor index."""
    lat = cfg.lattice
    if lat.kind != HYPERCUBIC or lat.dim < 2:
        raise DimerError("dense_unit_cube needs a hypercubic box of dimension >= 2")
    anchors, counts = _cube_count_list(cfg)
    best = max(counts)
    return anchors[counts.index(best)], best


def _cube_cycles(lat: Lattice, anchor: tuple[int, ...], max_len: int) -> list[tuple[int, ...]]:
    cache = lat._cache.setdefault("cube_cycles", {})
    key = (anchor, max_len)
    if key not in cache:
        verts = unit_cube_vertices(lat, anchor)
        cyc = [c for c in all_simple_cycles(lat, max_len, within=verts) if len(c) % 2 == 0]
        cache[key] = sorted(cyc, key=lambda c: (len(c), c))
    return cache[key]


def dense_cube_cycle(cfg: DimerConfig, max_len: int = 6):
    """``(anchor, count, cycle)`` with the shortest alternating cycle inside the dense cube.

    Ties in length go to the lexicographically smallest canonical cycle;
    ``cycle`` is ``None`` if the cube holds no alternating cycle of length
    ``<= max_len``.
    """
    anchor, count = dense_unit_cube(cfg)
    for c in _cube_cycles(cfg.lattice, anchor, max_len):
        if _alternates(cfg.partner, c):
            return anchor, count, AlternatingCycle(c)
    return anchor, count, None
