from __future__ import annotations

import itertools
from fractions import Fraction
from math import comb

import pytest
from hypothesis import given, settings, strategies as st

from dimerflip.cycles import enumerate_alternating_cycles
from dimerflip.errors import DimerError, LatticeError
from dimerflip.fixtures import load
from dimerflip.invariants import (
    Colour,
    boundary_oracle,
    colour,
    diameter_lower_bound,
    even_boundary_oracle,
    expansion_sequences,
    harper_decomposition,
    harper_phi,
    pyramid,
    red_count,
)
from dimerflip.lattice import build_hypercubic
from dimerflip.matching import DimerConfig, switch, validate
from dimerflip.statespace import enumerate_matchings
from dimerflip.verify import superadditivity_violations


def test_square_colouring():
    lat = build_hypercubic((2, 2))
    vertical = DimerConfig.from_coord_dimers(lat, [((1, 1), (1, 2)), ((2, 1), (2, 2))])
    cols = colour(vertical)
    assert red_count(vertical) == 2
    for u, v in vertical.dimers():
        assert cols[u] == cols[v]
    # odd endpoint above its partner is red, odd endpoint below is blue
    assert cols[lat.index((1, 2))] is Colour.RED
    assert cols[lat.index((2, 1))] is Colour.BLUE


@pytest.mark.parametrize("shape,half", [((2, 2), 2), ((2, 2, 2), 4), ((4, 4), 8), ((2, 4, 4), 16)])
def test_red_count_is_half_the_volume(shape, half):
    assert {red_count(c) for c in enumerate_matchings(build_hypercubic(shape))} == {half}


def test_red_count_odd_sides_is_constant_but_not_half():
    # 3x3 sections have five even and four odd sites, so the lemma's n even hypothesis matters
    reds = {red_count(c) for c in enumerate_matchings(build_hypercubic((3, 3, 2)))}
    assert reds == {8}


def test_colours_outside_a_switched_cycle_are_unchanged():
    for cfg in enumerate_matchings(build_hypercubic((3, 3, 2)))[::7]:
        before = colour(cfg)
        for cyc in enumerate_alternating_cycles(cfg, 4):
            after = colour(switch(cfg, cyc))
            inside = set(cyc.vertices)
            assert all(before[v] == after[v] for v in range(len(before)) if v not in inside)
            assert sum(c is Colour.RED for c in after) == sum(c is Colour.RED for c in before)


def test_colour_rejects_triangular():
    with pytest.raises(LatticeError):
        colour(load("fig1c"))


def test_pyramid_small():
    p = pyramid(2, 2)
    lat = p.lattice
    assert sorted((lat.coords[u], lat.coords[v]) for u, v in p.dimers()) == [((1, 1), (1, 2)), ((2, 1), (2, 2))]


def test_pyramid_matches_section_figures():
    assert pyramid(2, 6).key() == load("fig3b").key()
    assert pyramid(2, 6, inverse=True).key() == load("fig3a").key()


@pytest.mark.parametrize("d,n", [(2, 4), (2, 6), (3, 4), (4, 2)])
def test_pyramid_structure(d, n):
    for inverse in (False, True):
        p = pyramid(d, n, inverse)
        lat = p.lattice
        assert validate(p).ok
        centre = Fraction(n + 1, 2)
        ring = lambda v: max(abs(lat.coords[v][0] - centre), abs(lat.coords[v][1] - centre))
        for u, v in p.dimers():
            assert lat.coords[u][2:] == lat.coords[v][2:]
            assert ring(u) == ring(v)


@pytest.mark.parametrize("d,n", [(2, 4), (2, 6), (3, 4)])
def test_pyramid_colours(d, n):
    a, b = pyramid(d, n), pyramid(d, n, inverse=True)
    lat = a.lattice
    ca, cb = colour(a), colour(b)
    for v, c in enumerate(lat.coords):
        if c[0] < c[1]:
            assert ca[v] is Colour.RED and cb[v] is Colour.BLUE
        mirror = lat.index((n + 1 - c[1], n + 1 - c[0], *c[2:]))
        assert ca[v] is not cb[mirror]


def test_pyramid_errors():
    with pytest.raises(DimerError):
        pyramid(2, 3)
    with pytest.raises(DimerError):
        pyramid(1, 4)


# -- bounds -------------------------------------------------------------------

def test_diameter_lower_bound_values():
    assert diameter_lower_bound(2, 2, 2) == Fraction(1, 4)
    assert diameter_lower_bound(3, 4, 3) == Fraction(40, 9)
    assert diameter_lower_bound(2, 4, 2) == Fraction(5, 2)
    for bad in ((1, 4, 2), (2, 3, 2), (2, 4, 1), (2, 0, 2)):
        with pytest.raises(DimerError):
            diameter_lower_bound(*bad)


def test_harper_small_values():
    assert [harper_phi(3, a) for a in range(9)] == [0, 4, 6, 7, 7, 8, 8, 8, 8]
    assert [harper_phi(2, a) for a in range(5)] == [0, 3, 4, 4, 4]
    assert harper_decomposition(4, 7).tops == (1, 2)


@pytest.mark.parametrize("d", [1, 2, 3, 4])
def test_harper_matches_exhaustive_oracle(d):
    assert [harper_phi(d, a) for a in range(2**d + 1)] == [boundary_oracle(d, a) for a in range(2**d + 1)]


@settings(max_examples=200, deadline=None)
@given(st.integers(1, 12).flatmap(lambda d: st.tuples(st.just(d), st.integers(1, 2**d - 1))))
def test_decomposition_reconstructs(da):
    d, a = da
    dec = harper_decomposition(d, a)
    assert dec.value() == a
    assert list(dec.tops) == sorted(set(dec.tops))
    assert all(top >= i for top, i in zip(dec.tops, range(dec.t, dec.k + 1)))
    assert dec.phi() >= a
    head = sum(comb(d, j) for j in range(dec.k + 1, d + 1))
    assert head <= a < head + comb(d, dec.k)


@pytest.mark.parametrize("d", range(1, 7))
def test_superadditivity(d):
    assert superadditivity_violations(d) == 0


def test_harper_errors():
    with pytest.raises(DimerError):
        harper_phi(3, 9)
    with pytest.raises(DimerError):
        harper_decomposition(3, 0)
    with pytest.raises(DimerError):
        boundary_oracle(5, 1)


def test_even_boundary_oracle():
    assert even_boundary_oracle(2, 1) == 2
    assert even_boundary_oracle(3, 1) == 3
    assert even_boundary_oracle(3, 4) == 4
    with pytest.raises(DimerError):
        even_boundary_oracle(3, 5)


def test_expansion_sequences():
    assert expansion_sequences(3) == ((1, 2), (3, 4))
    assert expansion_sequences(4) == ((1, 3, 4), (5, 7, 8))
    for d in (3, 4):
        a, b = expansion_sequences(d)
        assert (a[-1], b[-1]) == (2 ** (d - 2), 2 ** (d - 1))
    with pytest.raises(DimerError):
        expansion_sequences(5)
