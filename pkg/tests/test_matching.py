from __future__ import annotations

import itertools

import pytest
from hypothesis import given, settings, strategies as st

from dimerflip.cycles import enumerate_alternating_cycles
from dimerflip.errors import ConfigError, CycleError
from dimerflip.fixtures import load
from dimerflip.lattice import build_hypercubic, build_triangular
from dimerflip.matching import (
    AlternatingCycle,
    DimerConfig,
    canonical_cycle,
    canonical_key,
    config_from_json,
    config_from_key,
    config_to_json,
    is_alternating,
    switch,
    validate,
)
from dimerflip.statespace import enumerate_matchings


def square_configs():
    lat = build_hypercubic((2, 2))
    horiz = DimerConfig.from_coord_dimers(lat, [((1, 1), (2, 1)), ((1, 2), (2, 2))])
    vert = DimerConfig.from_coord_dimers(lat, [((1, 1), (1, 2)), ((2, 1), (2, 2))])
    return lat, horiz, vert


def test_validate_ok_and_violations():
    lat, horiz, _ = square_configs()
    assert validate(horiz)
    assert validate(load("fig1a"))
    assert validate(DimerConfig(lat, (0, 3, 2, 1))).violation == "fixed point"
    assert validate(DimerConfig(lat, (1, 2, 0, 0))).violation == "not an involution"
    assert validate(DimerConfig(lat, (3, 2, 1, 0))).violation == "not an edge"
    assert validate(DimerConfig(lat, (1, 0, -1, 2))).violation == "uncovered vertex"
    assert validate(DimerConfig(lat, (1, 0))).violation == "not perfect"


def test_from_dimers_rejects_bad_input():
    lat = build_hypercubic((2, 2))
    with pytest.raises(ConfigError):
        DimerConfig.from_dimers(lat, [(0, 1)])
    with pytest.raises(ConfigError):
        DimerConfig.from_dimers(lat, [(0, 1), (1, 3)])
    with pytest.raises(ConfigError):
        DimerConfig.from_dimers(lat, [(0, 3), (1, 2)])


def test_square_switch():
    lat, horiz, vert = square_configs()
    face = (0, 1, 3, 2)
    assert is_alternating(vert, face) and is_alternating(horiz, face)
    assert switch(vert, face) == horiz
    assert switch(horiz, AlternatingCycle.of(face)) == vert


def test_non_alternating_and_bad_sequences():
    lat = build_hypercubic((4, 2))
    cfg = DimerConfig.from_coord_dimers(lat, [((1, 1), (1, 2)), ((2, 1), (3, 1)), ((2, 2), (3, 2)), ((4, 1), (4, 2))])
    sq = [lat.index(c) for c in ((1, 1), (2, 1), (2, 2), (1, 2))]
    assert not is_alternating(cfg, sq)  # shares one dimer only
    with pytest.raises(CycleError):
        switch(cfg, sq)
    with pytest.raises(CycleError):
        is_alternating(cfg, [0, 1, 5, 1])
    with pytest.raises(CycleError):
        is_alternating(cfg, [0, 2, 6, 4])


def test_fig1c_has_no_alternating_four_cycle():
    cfg = load("fig1c")
    from dimerflip.cycles import all_simple_cycles

    fours = [c for c in all_simple_cycles(cfg.lattice, 4) if len(c) == 4]
    assert fours and not any(is_alternating(cfg, c) for c in fours)


def test_fig1a_six_cycle_changes_three_dimers():
    cfg = load("fig1a")
    cycles = enumerate_alternating_cycles(cfg, 3)
    assert cycles and all(len(c) == 6 for c in cycles)
    for c in cycles:
        after = switch(cfg, c)
        assert len(set(cfg.dimers()) - set(after.dimers())) == 3


@pytest.mark.parametrize("lat", [build_hypercubic((2, 2, 2)), build_triangular(3, 2)], ids=["Q3", "T32"])
def test_switch_is_an_involution(lat):
    for cfg in enumerate_matchings(lat):
        for cyc in enumerate_alternating_cycles(cfg, lat.num_vertices // 2):
            other = switch(cfg, cyc)
            assert validate(other)
            assert is_alternating(other, cyc)
            assert switch(other, cyc) == cfg
            changed = {v for v in range(lat.num_vertices) if other.partner[v] != cfg.partner[v]}
            assert changed == set(cyc.vertices)


def test_symmetric_difference_is_alternating_cycles():
    lat = build_hypercubic((4, 4))
    configs = enumerate_matchings(lat)
    for a, b in itertools.combinations(configs, 2):
        da, db = set(a.dimers()), set(b.dimers())
        diff = da ^ db
        touched = {v for e in diff for v in e}
        # every touched vertex has one edge from each side, so the union is a disjoint union of cycles
        for v in touched:
            assert sum(v in e for e in da - db) == 1 and sum(v in e for e in db - da) == 1


def test_keys():
    lat, horiz, vert = square_configs()
    assert canonical_key(horiz) != canonical_key(vert)
    keys = {c.key() for c in enumerate_matchings(build_hypercubic((2, 2, 2)))}
    assert len(keys) == 9 and len({len(k) for k in keys}) == 1
    again = DimerConfig.from_coord_dimers(lat, [((2, 2), (1, 2)), ((2, 1), (1, 1))])
    assert again.key() == horiz.key()


@pytest.mark.parametrize("lat", [build_hypercubic((4, 4)), build_triangular(4, 3), build_hypercubic((3, 3, 2))],
                         ids=["Q44", "T43", "Q332"])
def test_key_round_trip_and_injective(lat):
    configs = enumerate_matchings(lat)
    assert len({c.key() for c in configs}) == len(configs)
    for c in configs:
        assert config_from_key(lat, c.key()) == c
        assert config_from_json(config_to_json(c)) == c


@settings(max_examples=60, deadline=None)
@given(st.lists(st.integers(0, 99), min_size=4, max_size=9, unique=True), st.integers(0, 20), st.booleans())
def test_canonical_cycle_form(vs, shift, flip):
    seq = vs[shift % len(vs):] + vs[: shift % len(vs)]
    if flip:
        seq = seq[::-1]
    c = canonical_cycle(seq)
    assert c == canonical_cycle(vs)
    assert c[0] == min(vs) and c[1] < c[-1]
