"""Dimer configurations (perfect matchings) and the switching move."""
from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Any, Iterable, Sequence

from .errors import ConfigError, CycleError
from .lattice import HYPERCUBIC, Lattice, lattice_from_descriptor


@dataclass(frozen=True)
class ValidationReport:
    ok: bool
    violation: str | None = None
    detail: str = ""

    def __bool__(self) -> bool:
        return self.ok


@dataclass(frozen=True)
class DimerConfig:
    """A dimer configuration stored as the partner involution.

    Instances are values: ``switch`` and friends return new objects.  The
    constructor does not check the matching invariants (so that broken
    inputs can be reported by :func:`validate`); use :meth:`from_dimers` or
    :func:`config_from_json` for checked construction.
    """

    lattice: Lattice
    partner: tuple[int, ...]

    @classmethod
    def from_dimers(cls, lat: Lattice, dimers: Iterable[Sequence[int]]) -> "DimerConfig":
        partner = [-1] * lat.num_vertices
        for u, v in dimers:
            for a, b in ((u, v), (v, u)):
                if not 0 <= a < lat.num_vertices:
                    raise ConfigError(f"dimer {(u, v)} references vertex {a} outside the lattice")
                if partner[a] != -1:
                    raise ConfigError(f"vertex {lat.coords[a]} is covered twice")
                partner[a] = b
        cfg = cls(lat, tuple(partner))
        report = validate(cfg)
        if not report:
            raise ConfigError(f"{report.violation}: {report.detail}")
        return cfg

    @classmethod
    def from_coord_dimers(cls, lat: Lattice, dimers: Iterable[Sequence[Sequence[int]]]) -> "DimerConfig":
        return cls.from_dimers(lat, [(lat.index(a), lat.index(b)) for a, b in dimers])

    def dimers(self) -> list[tuple[int, int]]:
        return [(u, v) for u, v in enumerate(self.partner) if u < v]

    def is_dimer(self, u: int, v: int) -> bool:
        return self.partner[u] == v

    def key(self) -> bytes:
        return canonical_key(self)

    def __repr__(self) -> str:
        return f"DimerConfig({self.lattice!r}, key={self.key().hex()})"


@dataclass(frozen=True, order=True)
class AlternatingCycle:
    """An even simple cycle in canonical form.

    Canonical form: rotated so the minimum vertex index comes first and
    reflected so that ``vertices[1] < vertices[-1]``.  Alternation is a
    property relative to a configuration, see :func:`is_alternating`.
    """

    vertices: tuple[int, ...]

    @classmethod
    def of(cls, seq: Sequence[int]) -> "AlternatingCycle":
        return cls(canonical_cycle(seq))

    def __len__(self) -> int:
        return len(self.vertices)

    def edges(self) -> list[tuple[int, int]]:
        vs = self.vertices
        return [(vs[i], vs[(i + 1) % len(vs)]) for i in range(len(vs))]

    def phase(self, cfg: DimerConfig) -> int:
        """0 if the edge ``v_0 v_1`` is a dimer of ``cfg``, else 1."""
        return 0 if cfg.partner[self.vertices[0]] == self.vertices[1] else 1

    def coords(self, lat: Lattice) -> list[list[int]]:
        return [list(lat.coords[v]) for v in self.vertices]


def canonical_cycle(seq: Sequence[int]) -> tuple[int, ...]:
    vs = list(seq)
    if len(vs) > 1 and vs[0] == vs[-1]:
        vs.pop()
    i = vs.index(min(vs))
    vs = vs[i:] + vs[:i]
    if len(vs) > 2 and vs[1] > vs[-1]:
        vs = [vs[0]] + vs[:0:-1]
    return tuple(vs)


def validate(cfg: DimerConfig) -> ValidationReport:
    lat, partner = cfg.lattice, cfg.partner
    nv = lat.num_vertices
    if len(partner) != nv:
        return ValidationReport(False, "not perfect", f"{len(partner)} partner entries for {nv} vertices")
    for v, p in enumerate(partner):
        if not 0 <= p < nv:
            return ValidationReport(False, "uncovered vertex", f"vertex {lat.coords[v]} has no partner")
        if p == v:
            return ValidationReport(False, "fixed point", f"vertex {lat.coords[v]} is matched to itself")
        if partner[p] != v:
            return ValidationReport(False, "not an involution", f"partner of {lat.coords[v]} does not point back")
        if not lat.has_edge(v, p):
            return ValidationReport(False, "not an edge", f"{lat.coords[v]}-{lat.coords[p]} is not a lattice edge")
    return ValidationReport(True)


def _closed_simple(lat: Lattice, seq: Sequence[int]) -> list[int]:
    vs = list(seq)
    if len(vs) > 1 and vs[0] == vs[-1]:
        vs.pop()
    if len(vs) < 3:
        raise CycleError(f"a cycle needs at least 3 vertices, got {len(vs)}")
    if len(set(vs)) != len(vs):
        raise CycleError("cycle repeats a vertex")
    for i, u in enumerate(vs):
        w = vs[(i + 1) % len(vs)]
        if not 0 <= u < lat.num_vertices or not lat.has_edge(u, w):
            raise CycleError(f"consecutive vertices {u}, {w} are not adjacent")
    return vs


def is_alternating(cfg: DimerConfig, cyc: Sequence[int] | AlternatingCycle) -> bool:
    seq = cyc.vertices if isinstance(cyc, AlternatingCycle) else cyc
    vs = _closed_simple(cfg.lattice, seq)
    if len(vs) % 2:
        return False
    return _alternates(cfg.partner, vs)


def _alternates(partner: Sequence[int], vs: Sequence[int]) -> bool:
    # even-length vs assumed; dimers sit on every other edge, either phase
    k = len(vs)
    first = partner[vs[0]] == vs[1]
    start = 0 if first else 1
    for i in range(start, k, 2):
        if partner[vs[i]] != vs[(i + 1) % k]:
            return False
    return True


def switch_partner(partner: list[int], vs: Sequence[int]) -> None:
    """Switch an alternating cycle in place on a mutable partner list."""
    k = len(vs)
    start = 1 if partner[vs[0]] == vs[1] else 0
    for i in range(start, k, 2):
        a, b = vs[i], vs[(i + 1) % k]
        partner[a] = b
        partner[b] = a


def switch(cfg: DimerConfig, cyc: Sequence[int] | AlternatingCycle) -> DimerConfig:
    seq = cyc.vertices if isinstance(cyc, AlternatingCycle) else cyc
    if not is_alternating(cfg, seq):
        raise CycleError("cycle is not alternating in the given configuration")
    vs = _closed_simple(cfg.lattice, seq)
    partner = list(cfg.partner)
    switch_partner(partner, vs)
    return DimerConfig(cfg.lattice, tuple(partner))


# -- hashing ----------------------------------------------------------------

def _key_layout(lat: Lattice):
    layout = lat._cache.get("key_layout")
    if layout is None:
        if lat.kind == HYPERCUBIC:
            # every dimer has exactly one even endpoint
            verts = tuple(v for v in range(lat.num_vertices) if lat.parity(v) == 0)
        else:
            verts = tuple(range(lat.num_vertices))
        bits = max(1, (lat.max_degree - 1).bit_length())
        slots = tuple({w: i for i, w in enumerate(nb)} for nb in lat.adjacency)
        nbytes = (bits * len(verts) + 7) // 8
        layout = (verts, bits, slots, nbytes)
        lat._cache["key_layout"] = layout
    return layout


def key_of_partner(lat: Lattice, partner: Sequence[int]) -> bytes:
    verts, bits, slots, nbytes = _key_layout(lat)
    value = 0
    for v in verts:
        value = (value << bits) | slots[v][partner[v]]
    return value.to_bytes(nbytes, "big")


def canonical_key(cfg: DimerConfig) -> bytes:
    """Fixed-length byte string, injective over configurations of one lattice.

    For each encoded vertex (the even vertices of a hypercubic box, every
    vertex otherwise) in index order, the position of its partner in its
    sorted neighbour list is packed into ``ceil(log2(max degree))`` bits.
    """
    return key_of_partner(cfg.lattice, cfg.partner)


def partner_from_key(lat: Lattice, key: bytes) -> tuple[int, ...]:
    verts, bits, _, nbytes = _key_layout(lat)
    if len(key) != nbytes:
        raise ConfigError(f"key has {len(key)} bytes, expected {nbytes}")
    value = int.from_bytes(key, "big")
    mask = (1 << bits) - 1
    partner = [-1] * lat.num_vertices
    for v in reversed(verts):
        slot = value & mask
        value >>= bits
        nbrs = lat.adjacency[v]
        if slot >= len(nbrs):
            raise ConfigError("key does not decode to a configuration")
        w = nbrs[slot]
        partner[v] = w
        partner[w] = v
    return tuple(partner)


def config_from_key(lat: Lattice, key: bytes) -> DimerConfig:
    cfg = DimerConfig(lat, partner_from_key(lat, key))
    report = validate(cfg)
    if not report:
        raise ConfigError(f"key decodes to an invalid configuration: {report.violation}")
    return cfg


# -- JSON ---------------------------------------------------------------------

def config_to_dict(cfg: DimerConfig) -> dict[str, Any]:
    lat = cfg.lattice
    return {
        "lattice": lat.descriptor(),
        "dimers": [[list(lat.coords[u]), list(lat.coords[v])] for u, v in cfg.dimers()],
    }


def config_to_json(cfg: DimerConfig) -> str:
    return json.dumps(config_to_dict(cfg), separators=(",", ":"))


def config_from_dict(obj: dict[str, Any], lattice: Lattice | None = None) -> DimerConfig:
    lat = lattice if lattice is not None else lattice_from_descriptor(obj["lattice"])
    if "dimers" not in obj:
        raise ConfigError("config JSON has no 'dimers' list")
    return DimerConfig.from_coord_dimers(lat, obj["dimers"])


def config_from_json(text: str, lattice: Lattice | None = None) -> DimerConfig:
    return config_from_dict(json.loads(text), lattice)
