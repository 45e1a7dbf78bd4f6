from __future__ import annotations

import pytest

from dimerflip.canonical import (
    FlipSequence,
    alternating_reachability,
    apply_flip_sequence,
    canonical_target,
    canonicalize,
    canonicalize_hypercube,
    canonicalize_triangular,
    connecting_sequence,
    crossing_count,
    hypercube_canonical_config,
    triangular_canonical_config,
)
from dimerflip.errors import CanonicalizationError, ConfigError, CycleError, LatticeError
from dimerflip.fixtures import load
from dimerflip.lattice import build_hypercubic, build_triangular
from dimerflip.matching import AlternatingCycle, switch, validate
from dimerflip.statespace import build_flip_graph, distance, enumerate_matchings
from dimerflip.verify import triangular_shapes


def cube(d):
    return build_hypercubic((2,) * d)


def test_canonical_configs():
    target = hypercube_canonical_config(cube(3))
    lat = target.lattice
    assert all(abs(lat.coords[u][0] - lat.coords[v][0]) == 1 for u, v in target.dimers())
    tri = triangular_canonical_config(build_triangular(4, 3))
    assert all(tri.lattice.coords[u][1] == tri.lattice.coords[v][1] for u, v in tri.dimers())
    odd = triangular_canonical_config(build_triangular(3, 4))
    assert all(odd.lattice.coords[u][0] == odd.lattice.coords[v][0] for u, v in odd.dimers())
    assert validate(odd).ok


@pytest.mark.parametrize("d,max_flips,max_len", [(2, 1, 4), (3, 3, 4), (4, 9, 8)])
def test_hypercube_round_trip(d, max_flips, max_len):
    target = hypercube_canonical_config(cube(d)).key()
    flips, longest = 0, 0
    for cfg in enumerate_matchings(cube(d)):
        seq = canonicalize_hypercube(cfg)
        assert apply_flip_sequence(cfg, seq).key() == target
        assert len(seq) <= (d - 1) * 2 ** (d - 2)
        assert seq.max_cycle_length <= 4 * d - 4 and seq.ell == 2 * d - 2
        assert sum(seq.segments) == len(seq)
        flips, longest = max(flips, len(seq)), max(longest, seq.max_cycle_length)
    assert (flips, longest) == (max_flips, max_len)


@pytest.mark.parametrize("d", [2, 3, 4])
def test_all_even_vertices_reachable(d):
    lat = cube(d)
    evens = {v for v in range(lat.num_vertices) if lat.parity(v) == 0}
    for cfg in enumerate_matchings(lat):
        for s in evens:
            reach = alternating_reachability(cfg.partner, lat.adjacency, s, 2 * d - 3)
            assert reach.even_levels[-1] == evens
            assert reach.even_levels[min(d - 1, len(reach.even_levels) - 1)] == evens
            for x in reach.parent:
                path = reach.path_to(x)
                assert path[0] == s and len(set(path)) == len(path)


def test_crossing_count():
    lat = cube(3)
    target = hypercube_canonical_config(lat)
    verts = list(range(8))
    assert crossing_count(target.partner, lat, verts, 0) == 4
    assert crossing_count(target.partner, lat, verts, 2) == 0


@pytest.mark.parametrize("m,n", triangular_shapes(16))
def test_triangular_round_trip(m, n):
    lat = build_triangular(m, n)
    target = canonical_target(lat).key()
    for cfg in enumerate_matchings(lat):
        seq = canonicalize_triangular(cfg)
        assert apply_flip_sequence(cfg, seq).key() == target
        assert {len(c) for c in seq.cycles} <= {4, 6}
        assert all(s <= 4 for s in seq.segments)
        assert sum(seq.segments) + seq.base_flips == len(seq) <= 2 * m * n


def test_triangular_fixture():
    cfg = load("fig1c")
    seq = canonicalize(cfg)
    assert apply_flip_sequence(cfg, seq).key() == canonical_target(cfg.lattice).key()
    assert seq.max_cycle_length == 6 and seq.ell == 3


def test_triangular_single_row_is_fixed():
    lat = build_triangular(6, 1)
    (cfg,) = enumerate_matchings(lat)
    assert len(canonicalize(cfg)) == 0


def test_reversed_sequence_replays_back():
    for cfg in enumerate_matchings(cube(3)) + enumerate_matchings(build_triangular(4, 3))[:20]:
        seq = canonicalize(cfg)
        final = apply_flip_sequence(cfg, seq)
        assert apply_flip_sequence(final, seq.reversed(final)).key() == cfg.key()


def test_replay_errors():
    a, b = enumerate_matchings(cube(2))
    seq = canonicalize(a)
    with pytest.raises(ConfigError):
        apply_flip_sequence(b, FlipSequence(a.lattice, a.key(), (), 2))
    target = hypercube_canonical_config(cube(3))
    face = AlternatingCycle.of((0, 2, 6, 4))  # no dimers of the canonical config on it
    with pytest.raises(CycleError):
        apply_flip_sequence(target, FlipSequence(target.lattice, target.key(), (face,), 2))
    square = AlternatingCycle.of((0, 1, 3, 2))
    with pytest.raises(CycleError):
        apply_flip_sequence(target, FlipSequence(target.lattice, target.key(), (square,), 1))
    assert len(FlipSequence(a.lattice, a.key(), (), 2)) == 0
    assert seq.to_dict()["summary"]["flips"] == len(seq)


def test_wrong_lattices():
    with pytest.raises(CanonicalizationError):
        canonicalize_hypercube(enumerate_matchings(build_hypercubic((4, 2)))[0])
    with pytest.raises(LatticeError):
        canonicalize_triangular(enumerate_matchings(cube(2))[0])


def test_connecting_sequence_respects_distance():
    lat = cube(3)
    g = build_flip_graph(lat, 4)
    configs = enumerate_matchings(lat)
    for a in configs:
        for b in configs:
            path = connecting_sequence(a, b)
            cur = a
            for cyc in path:
                cur = switch(cur, cyc)
            assert cur.key() == b.key()
            assert len(path) >= distance(g, a, b)


@pytest.mark.parametrize("m", [2, 3, 4, 5, 6, 8])
def test_two_row_strips_have_no_diagonal_dimers(m):
    # a diagonal (x+1,1)-(x,2) would leave 2x-1 vertices to its left
    lat = build_triangular(m, 2)
    for cfg in enumerate_matchings(lat):
        assert all(lat.coords[u][1] == lat.coords[v][1] or lat.coords[u][0] == lat.coords[v][0]
                   for u, v in cfg.dimers())
