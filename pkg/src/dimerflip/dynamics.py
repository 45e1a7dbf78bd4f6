"""Metropolis flip dynamics and exact small-instance diagnostics.

One step draws a cycle uniformly from a fixed table of all simple cycles of
length ``<= 2*ell`` and switches it when it is alternating in the current
configuration, otherwise the chain holds.  The proposal probability does not
depend on the state, so the kernel is symmetric and the uniform measure on
each component of ``D_ell`` is stationary.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator, Sequence

import numpy as np

from .cycles import all_simple_cycles
from .errors import DimerError
from .lattice import Lattice
from .matching import DimerConfig, _alternates, key_of_partner, switch_partner
from .statespace import enumerate_matchings

DEFAULT_PROPOSAL_CAP = 200_000
SUPPORTS = ("component", "all")


@dataclass(frozen=True)
class ProposalTable:
    lattice: Lattice
    ell: int
    cycles: tuple[tuple[int, ...], ...]

    def __len__(self) -> int:
        return len(self.cycles)


def build_proposals(lat: Lattice, ell: int, cap: int | None = DEFAULT_PROPOSAL_CAP) -> ProposalTable:
    """All simple cycles of length ``<= 2*ell`` (odd ones included; they never switch)."""
    if ell < 2:
        raise DimerError(f"half-length cap must be at least 2, got {ell}")
    return ProposalTable(lat, ell, tuple(all_simple_cycles(lat, 2 * ell, limit=cap)))


def _try_switch(partner: list[int], cyc: Sequence[int]) -> bool:
    if len(cyc) % 2 or not _alternates(partner, cyc):
        return False
    switch_partner(partner, cyc)
    return True


def spawn_streams(seed: int, count: int) -> list[np.random.Generator]:
    """Independent generators for parallel chains, derived from one seed."""
    return [np.random.default_rng(s) for s in np.random.SeedSequence(seed).spawn(count)]


@dataclass(frozen=True)
class ChainState:
    """Current configuration, number of steps taken and the random stream.

    The generator is shared with successor states and advanced in place.
    """

    config: DimerConfig
    step: int = 0
    rng: np.random.Generator = field(default_factory=np.random.default_rng, repr=False, compare=False)

    @classmethod
    def start(cls, cfg: DimerConfig, seed: int | None = None) -> "ChainState":
        return cls(cfg, 0, np.random.default_rng(seed))


def glauber_step(state: ChainState, table: ProposalTable) -> ChainState:
    i = int(state.rng.integers(len(table.cycles)))
    partner = list(state.config.partner)
    if _try_switch(partner, table.cycles[i]):
        cfg = DimerConfig(state.config.lattice, tuple(partner))
    else:
        cfg = state.config
    return ChainState(cfg, state.step + 1, state.rng)


def _walk(partner: list[int], table: ProposalTable, rng: np.random.Generator, steps: int) -> int:
    accepted = 0
    cycles = table.cycles
    n = len(cycles)
    for _ in range(steps):
        if _try_switch(partner, cycles[int(rng.integers(n))]):
            accepted += 1
    return accepted


@dataclass(frozen=True)
class ChainRun:
    final: DimerConfig
    steps: int
    accepted: int
    visits: dict[bytes, int]

    def to_dict(self) -> dict:
        return {
            "steps": self.steps,
            "accepted": self.accepted,
            "final_key": self.final.key().hex(),
            "distinct_visited": len(self.visits),
            "visits": {k.hex(): c for k, c in sorted(self.visits.items())},
        }


def run_chain(
    start: DimerConfig, table: ProposalTable, steps: int, seed: int | None = None
) -> ChainRun:
    """Run ``steps`` steps; ``visits`` counts the states occupied after each step.

    Draws the same random numbers as repeated :func:`glauber_step`, so both
    give the same trajectory for the same seed.
    """
    if table.lattice != start.lattice:
        raise DimerError("proposal table and configuration live on different lattices")
    rng = np.random.default_rng(seed)
    lat = start.lattice
    partner = list(start.partner)
    visits: dict[bytes, int] = {}
    accepted = 0
    for _ in range(steps):
        accepted += _walk(partner, table, rng, 1)
        k = key_of_partner(lat, partner)
        visits[k] = visits.get(k, 0) + 1
    return ChainRun(DimerConfig(lat, tuple(partner)), steps, accepted, visits)


def sample_configs(
    start: DimerConfig,
    table: ProposalTable,
    count: int,
    thin: int,
    burn_in: int = 0,
    seed: int | None = None,
) -> Iterator[DimerConfig]:
    """Yield ``count`` configurations, ``thin`` steps apart after ``burn_in`` steps."""
    rng = np.random.default_rng(seed)
    partner = list(start.partner)
    _walk(partner, table, rng, burn_in)
    for _ in range(count):
        _walk(partner, table, rng, thin)
        yield DimerConfig(start.lattice, tuple(partner))


# -- exact kernel -------------------------------------------------------------

@dataclass(frozen=True)
class ExactKernel:
    """Transition counts: ``P(i -> j) = moves[i][j] / table_size`` (holding included)."""

    lattice: Lattice
    ell: int
    keys: tuple[bytes, ...]
    table_size: int
    moves: tuple[dict[int, int], ...]

    @property
    def num_states(self) -> int:
        return len(self.keys)

    def probability(self, i: int, j: int) -> Fraction:
        return Fraction(self.moves[i].get(j, 0), self.table_size)

    def row_sum(self, i: int) -> Fraction:
        return Fraction(sum(self.moves[i].values()), self.table_size)

    def is_symmetric(self) -> bool:
        return all(
            self.moves[j].get(i, 0) == c for i, row in enumerate(self.moves) for j, c in row.items()
        )

    def component(self, i: int) -> list[int]:
        seen = {i}
        stack = [i]
        while stack:
            u = stack.pop()
            for w in self.moves[u]:
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        return sorted(seen)

    def fixes_uniform(self, members: Sequence[int]) -> bool:
        """Exact check that uniform measure on ``members`` is mapped to itself."""
        inside = set(members)
        inflow = {j: 0 for j in members}
        for i in members:
            for j, c in self.moves[i].items():
                if j not in inside:
                    return False
                inflow[j] += c
        return all(v == self.table_size for v in inflow.values())

    def index(self, cfg: DimerConfig) -> int:
        return self.keys.index(cfg.key())


def transition_matrix(
    lat: Lattice, ell: int, cap: int | None = None, table: ProposalTable | None = None
) -> ExactKernel:
    table = table if table is not None else build_proposals(lat, ell)
    configs = enumerate_matchings(lat, cap)
    keys = tuple(c.key() for c in configs)
    index = {k: i for i, k in enumerate(keys)}
    moves = []
    for cfg in configs:
        row: dict[int, int] = {}
        for cyc in table.cycles:
            partner = list(cfg.partner)
            if _try_switch(partner, cyc):
                j = index[key_of_partner(lat, partner)]
            else:
                j = index[cfg.key()]
            row[j] = row.get(j, 0) + 1
        moves.append(row)
    return ExactKernel(lat, ell, keys, len(table), tuple(moves))


def _tv(vec: list[int], den: int, members: Sequence[int]) -> Fraction:
    m = len(members)
    inside = set(members)
    total = Fraction(0)
    for i, x in enumerate(vec):
        target = Fraction(1, m) if i in inside else Fraction(0)
        total += abs(Fraction(x, den) - target)
    return total / 2


def tv_curve(
    kernel: ExactKernel, start: DimerConfig, t_max: int, support: str = "component",
    stop_below: Fraction | None = None,
) -> list[Fraction]:
    """Exact TV distances to uniform for ``t = 0..t_max``.

    ``support`` is ``"component"`` (uniform over the start's component) or
    ``"all"`` (uniform over every configuration).  With ``stop_below`` the
    curve ends at the first value not exceeding it.
    """
    if support not in SUPPORTS:
        raise DimerError(f"support must be one of {SUPPORTS}, got {support!r}")
    s = kernel.index(start)
    members = kernel.component(s) if support == "component" else range(kernel.num_states)
    vec = [0] * kernel.num_states
    vec[s] = 1
    den = 1
    out = [_tv(vec, den, members)]
    for _ in range(t_max):
        if stop_below is not None and out[-1] <= stop_below:
            break
        nxt = [0] * kernel.num_states
        for i, x in enumerate(vec):
            if x:
                for j, c in kernel.moves[i].items():
                    nxt[j] += x * c
        vec = nxt
        den *= kernel.table_size
        out.append(_tv(vec, den, members))
    return out


def tv_to_uniform(
    lat: Lattice, ell: int, t: int, start: DimerConfig, support: str = "component",
    kernel: ExactKernel | None = None,
) -> Fraction:
    kernel = kernel if kernel is not None else transition_matrix(lat, ell)
    return tv_curve(kernel, start, t, support)[-1]
