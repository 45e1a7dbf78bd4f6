"""Verification suites: exhaustive desk-scale checks of the main results.

Each suite returns :class:`Check` rows; bounds and observed values are
strings (rationals as ``p/q``) so reports serialise deterministically.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import asdict, dataclass
from fractions import Fraction
from typing import Callable

from .canonical import (
    apply_flip_sequence,
    canonicalize_hypercube,
    canonicalize_triangular,
    hypercube_canonical_config,
    triangular_canonical_config,
)
from .cycles import (
    all_simple_cycles,
    classify_vertices,
    cycle_near_authorised,
    dense_cube_cycle,
    enumerate_alternating_cycles,
)
from .dynamics import build_proposals, sample_configs, transition_matrix, tv_curve
from .errors import DimerError
from .fixtures import load
from .invariants import (
    boundary_oracle,
    diameter_lower_bound,
    even_boundary_oracle,
    expansion_sequences,
    harper_phi,
    pyramid,
    red_count,
)
from .lattice import Lattice, ball, build_hypercubic, build_triangular
from .matching import DimerConfig, is_alternating
from .statespace import (
    bfs_distances,
    build_flip_graph,
    components,
    count_matchings,
    diameter,
    enumerate_matchings,
    isolated_vertices,
    iter_matchings,
    min_degree,
)


def fmt(x) -> str:
    """Exact rendering: ``Fraction`` as ``p/q``, everything else via ``str``."""
    if isinstance(x, Fraction):
        return f"{x.numerator}/{x.denominator}" if x.denominator != 1 else str(x.numerator)
    if isinstance(x, float) and math.isinf(x):
        return "inf"
    return str(x)


@dataclass(frozen=True)
class Check:
    check_id: str
    anchor: str
    instance: str
    claimed: str
    observed: str
    passed: bool


@dataclass(frozen=True)
class VerificationReport:
    suite: str
    checks: tuple[Check, ...]

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def failures(self) -> list[Check]:
        return [c for c in self.checks if not c.passed]

    def to_dict(self) -> dict:
        return {
            "suite": self.suite,
            "status": "pass" if self.passed else "fail",
            "checks": [asdict(c) for c in self.checks],
        }


@dataclass(frozen=True)
class Caps:
    max_volume: int = 36          # 3-dimensional boxes in the exhaustive dense-cube scan
    samples: int = 10_000         # sampled configurations of Q^3_4
    max_dim: int = 4              # unit hypercubes Q^d, d <= max_dim
    max_tri: int = 16             # triangular boxes with mn <= max_tri
    node_cap: int = 100_000
    seed: int = 0


def _shape(lat: Lattice) -> str:
    if lat.kind == "triangular":
        return f"T_{{{lat.shape[0]},{lat.shape[1]}}}"
    return "Q_(" + ",".join(map(str, lat.shape)) + ")"


def _canonical_cube_config(lat: Lattice) -> DimerConfig:
    """Dimers along axis 1 paired as (1,2), (3,4), ... (needs an even first side)."""
    return DimerConfig.from_dimers(
        lat, [(v, v + 1) for v in range(lat.num_vertices) if lat.coords[v][0] % 2 == 1]
    )


def sampled_cube_configs(n: int, count: int, seed: int, ell: int = 3, thin: int = 50,
                         burn_in: int = 2_000) -> list[DimerConfig]:
    lat = build_hypercubic((n, n, n))
    table = build_proposals(lat, ell)
    return list(sample_configs(_canonical_cube_config(lat), table, count, thin, burn_in, seed))


# -- dense unit cube ----------------------------------------------------------

def three_dim_shapes(max_volume: int) -> list[tuple[int, int, int]]:
    """All ordered shapes ``(n1, n2, n3)``, ``n_i >= 2``, even volume at most ``max_volume``."""
    top = max_volume // 4
    return [
        s for s in itertools.product(range(2, top + 1), repeat=3)
        if s[0] * s[1] * s[2] <= max_volume and (s[0] * s[1] * s[2]) % 2 == 0
    ]


def _dense_stats(configs) -> tuple[int, int, int, int]:
    total, low, without, longest = 0, None, 0, 0
    for cfg in configs:
        _, count, cyc = dense_cube_cycle(cfg, 6)
        total += 1
        low = count if low is None else min(low, count)
        if cyc is None:
            without += 1
        else:
            longest = max(longest, len(cyc))
    return total, (low if low is not None else 0), without, longest


def suite_theorem1(caps: Caps) -> list[Check]:
    out = []
    shapes = three_dim_shapes(caps.max_volume)
    if not shapes:
        raise DimerError(f"volume cap {caps.max_volume} admits no 3-dimensional box")
    for shape in shapes:
        lat = build_hypercubic(shape)
        total, low, without, longest = _dense_stats(DimerConfig(lat, p) for p in iter_matchings(lat))
        out.append(Check(
            f"theorem1/exhaustive/{'x'.join(map(str, shape))}", "dense unit cube",
            f"{_shape(lat)}, all {total} configs",
            "min dense count >= 3; every dense cube holds an alternating cycle of length <= 6",
            f"min count {low}; configs without such a cycle {without}; longest shortest cycle {longest}",
            low >= 3 and without == 0,
        ))
    if caps.samples:
        configs = sampled_cube_configs(4, caps.samples, caps.seed)
        total, low, without, _ = _dense_stats(configs)
        out.append(Check(
            "theorem1/sampled/4x4x4", "dense unit cube",
            f"Q_(4,4,4), {total} configs sampled by flip dynamics (ell=3, seed {caps.seed})",
            "min dense count >= 3; alternating cycle of length <= 6 in the dense cube",
            f"min count {low}; without cycle {without}",
            low >= 3 and without == 0,
        ))
    fig = load("fig1a")
    anchor, count, cyc = dense_cube_cycle(fig)
    out.append(Check(
        "theorem1/fig1a", "dense unit cube", "fixture fig1a on Q_(3,3,2)",
        "dense count >= 3 and a cycle of length <= 6",
        f"anchor {list(anchor)} count {count} cycle length {len(cyc) if cyc else None}",
        count >= 3 and cyc is not None,
    ))
    return out


# -- isolated vertices and short cycles near authorised vertices --------------

def check_isolated(node_cap: int) -> list[Check]:
    lat = build_hypercubic((3, 3, 2))
    fig = load("fig1a")
    g2 = build_flip_graph(lat, 2, node_cap=node_cap)
    iso2 = isolated_vertices(g2)
    g3 = build_flip_graph(lat, 3, node_cap=node_cap)
    iso3 = isolated_vertices(g3)
    return [
        Check("degree/isolated-ell2", "isolated configurations under 4-cycle flips",
              "D_2(Q_(3,3,2))", ">= 1 isolated node, including fixture fig1a",
              f"{len(iso2)} isolated of {g2.num_nodes}; fig1a isolated: {fig.key() in iso2}",
              len(iso2) >= 1 and fig.key() in iso2),
        Check("degree/isolated-ell3", "no isolated configurations under 6-cycle flips",
              "D_3(Q_(3,3,2))", "0 isolated nodes",
              f"{len(iso3)} isolated; min (edge, cycle) degree {min_degree(g3)}",
              not iso3),
    ]


def _authorised_scan(configs, bound: int) -> tuple[int, int, int]:
    """(cycles checked, longest, violations) over every authorised vertex of every config."""
    checked, longest, bad = 0, 0, 0
    for cfg in configs:
        cls = classify_vertices(cfg)
        lat = cfg.lattice
        for w in cls.authorised_vertices():
            cyc = cycle_near_authorised(cfg, w, cls)
            near = ball(lat, w, 2)
            ok = is_alternating(cfg, cyc) and len(cyc) <= bound and all(v in near for v in cyc.vertices)
            checked += 1
            longest = max(longest, len(cyc))
            bad += not ok
    return checked, longest, bad


def check_authorised(max_dim: int) -> list[Check]:
    out = []
    lat = build_hypercubic((3, 3, 2))
    n, longest, bad = _authorised_scan(enumerate_matchings(lat), 4 * 3 - 2)
    out.append(Check("degree/authorised-332", "short cycle near an authorised vertex",
                     "Q_(3,3,2), all configs, all authorised vertices",
                     "alternating, length <= 10, inside the radius-2 ball",
                     f"{n} cycles, longest {longest}, violations {bad}", bad == 0 and n > 0))
    for d in range(2, max_dim + 1):
        # the unit-cube refinement 2d-2 is stated for d >= 3; at d = 2 the general 4d-2 applies
        bound = 2 * d - 2 if d >= 3 else 4 * d - 2
        lat = build_hypercubic((2,) * d)
        n, longest, bad = _authorised_scan(enumerate_matchings(lat), bound)
        out.append(Check(f"degree/authorised-Q{d}", "short cycle near an authorised vertex",
                         f"Q^{d}, all configs, all vertices",
                         f"alternating, length <= {bound}, inside the radius-2 ball",
                         f"{n} cycles, longest {longest}, violations {bad}", bad == 0 and n > 0))
    return out


def suite_degree(caps: Caps) -> list[Check]:
    return check_isolated(caps.node_cap) + check_authorised(caps.max_dim)


# -- unit hypercube ------------------------------------------------------------

def check_hypercube_ergodicity(max_dim: int, node_cap: int) -> list[Check]:
    out = []
    for d in range(2, max_dim + 1):
        lat = build_hypercubic((2,) * d)
        ell = 2 * d - 2
        g = build_flip_graph(lat, ell, node_cap=node_cap)
        oracle = count_matchings(lat)
        rep = diameter(g)
        bound = (d - 1) * 2 ** (d - 1)
        comps = components(g)
        out.append(Check(
            f"hypercube/ergodic-Q{d}", "hypercube ergodicity",
            f"D_{ell}(Q^{d})", f"connected, diameter <= {bound}, {oracle} configs by count oracle",
            f"{g.num_nodes} nodes, {len(comps)} component(s), diameter {fmt(rep.value)}",
            g.num_nodes == oracle and rep.connected and rep.value <= bound,
        ))
    return out


def check_hypercube_canonical(max_dim: int) -> list[Check]:
    out = []
    for d in range(2, max_dim + 1):
        lat = build_hypercubic((2,) * d)
        target = hypercube_canonical_config(lat).key()
        flips_bound, len_bound = (d - 1) * 2 ** (d - 2), 4 * d - 4
        most, longest, bad, total = 0, 0, 0, 0
        for cfg in enumerate_matchings(lat):
            seq = canonicalize_hypercube(cfg)
            final = apply_flip_sequence(cfg, seq)
            total += 1
            most = max(most, len(seq))
            longest = max(longest, seq.max_cycle_length)
            bad += final.key() != target or len(seq) > flips_bound or seq.max_cycle_length > len_bound
        out.append(Check(
            f"hypercube/canonicalize-Q{d}", "hypercube ergodicity (constructive)",
            f"Q^{d}, all {total} configs",
            f"<= {flips_bound} flips, cycles <= {len_bound}, ends axis-1 parallel",
            f"max flips {most}, longest cycle {longest}, failures {bad}",
            bad == 0,
        ))
    return out


def suite_hypercube(caps: Caps) -> list[Check]:
    return check_hypercube_ergodicity(caps.max_dim, caps.node_cap) + check_hypercube_canonical(caps.max_dim)


# -- diameter lower bound ------------------------------------------------------

def check_diameter_bound(node_cap: int, max_volume: int = 36) -> list[Check]:
    out = []
    for n, ell in ((4, 2), (4, 3), (6, 2), (6, 3)):
        if n * n > max_volume:
            continue
        lat = build_hypercubic((n, n))
        bound = diameter_lower_bound(2, n, ell)
        need = math.ceil(bound)
        g = build_flip_graph(lat, ell, node_cap=node_cap)
        rep = diameter(g)
        a, b = pyramid(2, n), pyramid(2, n, inverse=True)
        dist = bfs_distances(g, g.node_of(a)).get(g.node_of(b), math.inf)
        out.append(Check(
            f"diameter/Q2_{n}-ell{ell}", "diameter lower bound",
            f"D_{ell}(Q^2_{n})", f"diameter and d(pyramid, inverse) >= {fmt(bound)}, i.e. >= {need}",
            f"diameter {fmt(rep.value)}, d(pyramid, inverse) {fmt(dist)}",
            rep.value >= need and dist >= need,
        ))
    return out


def suite_diameter(caps: Caps) -> list[Check]:
    return check_diameter_bound(caps.node_cap, caps.max_volume)


# -- triangular boxes ----------------------------------------------------------

def triangular_shapes(max_area: int) -> list[tuple[int, int]]:
    return [
        (m, n) for m in range(1, max_area + 1) for n in range(1, max_area + 1)
        if m * n <= max_area and (m * n) % 2 == 0
    ]


def check_triangular(max_area: int, node_cap: int) -> list[Check]:
    out = []
    shapes = triangular_shapes(max_area)
    if not shapes:
        raise DimerError(f"area cap {max_area} admits no triangular box")
    for m, n in shapes:
        lat = build_triangular(m, n)
        target = triangular_canonical_config(lat).key()
        budget = 2 * m * n
        total, most, step_max, bad_len, bad = 0, 0, 0, 0, 0
        configs = enumerate_matchings(lat, cap=max(36, lat.num_vertices))
        for cfg in configs:
            seq = canonicalize_triangular(cfg)
            final = apply_flip_sequence(cfg, seq)
            total += 1
            most = max(most, len(seq))
            step_max = max([step_max, *seq.segments])
            bad_len += any(len(c) not in (4, 6) for c in seq.cycles)
            bad += final.key() != target or len(seq) > budget
        g = build_flip_graph(lat, 3, cap=max(36, lat.num_vertices), node_cap=node_cap)
        rep = diameter(g)
        out.append(Check(
            f"triangular/T{m}x{n}", "triangular ergodicity",
            f"T_{{{m},{n}}}, all {total} configs",
            f"cycles in {{4,6}}, <= 4 flips per bottom position, <= {budget} flips; "
            f"D_3 connected with diameter <= {budget}",
            f"max flips {most}, max per position {step_max}, bad lengths {bad_len}, "
            f"failures {bad}; D_3 components {len(components(g))}, diameter {fmt(rep.value)}",
            bad == 0 and bad_len == 0 and step_max <= 4 and rep.connected and rep.value <= budget,
        ))
    fig = load("fig1c")
    seq = canonicalize_triangular(fig)
    final = apply_flip_sequence(fig, seq)
    lengths = sorted({len(c) for c in seq.cycles})
    out.append(Check(
        "triangular/fig1c", "triangular ergodicity", "fixture fig1c on T_{4,3}",
        "cycles in {4,6}, <= 24 flips, reaches the canonical configuration",
        f"{len(seq)} flips, lengths {lengths}, per position {list(seq.segments)}",
        final.key() == triangular_canonical_config(fig.lattice).key()
        and len(seq) <= 24 and set(lengths) <= {4, 6} and max(seq.segments, default=0) <= 4,
    ))
    return out


def suite_triangular(caps: Caps) -> list[Check]:
    return check_triangular(caps.max_tri, caps.node_cap)


# -- Harper --------------------------------------------------------------------

def superadditivity_violations(d: int) -> int:
    top = 2 ** d
    phi = [harper_phi(d, a) for a in range(top + 1)]
    bad = 0
    for l1 in range(1, top + 1):
        for l2 in range(1, top + 1):
            l = l1 + l2
            rhs = phi[l] if l <= top else top + phi[l - top]
            bad += phi[l1] + phi[l2] < rhs
    return bad


def check_harper(max_dim: int, super_dim: int = 6) -> list[Check]:
    out = []
    for d in range(1, min(max_dim, 4) + 1):
        mism = [a for a in range(2 ** d + 1) if harper_phi(d, a) != boundary_oracle(d, a)]
        out.append(Check(f"harper/phi-oracle-d{d}", "Harper's vertex-isoperimetric theorem",
                         f"Q^{d}, a = 0..{2 ** d}", "phi_d(a) equals the exhaustive minimum",
                         f"mismatches {mism}", not mism))
    for d in range(1, super_dim + 1):
        bad = superadditivity_violations(d)
        out.append(Check(f"harper/superadditive-d{d}", "phi superadditivity lemma",
                         f"phi_{d}, all l1, l2 in [1, {2 ** d}]",
                         "phi(l1)+phi(l2) >= phi(l) or 2^d + phi(l-2^d)",
                         f"violations {bad}", bad == 0))
    for d in range(2, min(max_dim, 4) + 1):
        bad = [a for a in range(2 ** (d - 1) + 1) if even_boundary_oracle(d, a) < boundary_oracle(d - 1, a)]
        out.append(Check(f"harper/even-sets-d{d}", "even-set boundary lemma",
                         f"even subsets of Q^{d}", "min |dA| >= min |B u dB| in Q^(d-1)",
                         f"violations at sizes {bad}", not bad))
    for d in range(3, min(max_dim, 4) + 1):
        a, b = expansion_sequences(d)
        want = (2 ** (d - 2), 2 ** (d - 1))
        out.append(Check(f"harper/expansion-d{d}", "expansion corollary",
                         f"Q^{d}", f"a_(d-2) = {want[0]}, b_(d-2) = {want[1]}",
                         f"a = {list(a)}, b = {list(b)}", (a[-1], b[-1]) == want))
    return out


def suite_harper(caps: Caps) -> list[Check]:
    return check_harper(caps.max_dim)


# -- colouring -----------------------------------------------------------------

COLOUR_SHAPES = ((2, 2), (4, 4), (2, 2, 2), (3, 3, 2))


def check_colouring(samples: int, seed: int) -> list[Check]:
    out = []
    for shape in COLOUR_SHAPES:
        lat = build_hypercubic(shape)
        half = Fraction(lat.num_vertices, 2)
        reds = sorted({red_count(c) for c in enumerate_matchings(lat)})
        out.append(Check(
            f"colouring/count-{'x'.join(map(str, shape))}", "red count lemma",
            f"{_shape(lat)}, all configs", f"red count = {fmt(half)} for every config",
            f"red counts observed {reds}", reds == [half],
        ))
        out.append(Check(
            f"colouring/conserved-{'x'.join(map(str, shape))}", "red count conserved by switching",
            f"{_shape(lat)}, all configs", "one red count across the whole state space",
            f"distinct values {len(reds)}", len(reds) == 1,
        ))
    if samples:
        reds = sorted({red_count(c) for c in sampled_cube_configs(4, samples, seed)})
        out.append(Check(
            "colouring/count-sampled-4x4x4", "red count lemma",
            f"Q_(4,4,4), {samples} sampled configs", "red count = 32",
            f"red counts observed {reds}", reds == [32],
        ))
    return out


def suite_colouring(caps: Caps) -> list[Check]:
    return check_colouring(caps.samples, caps.seed)


# -- dynamics and cycle oracle (run under "all") -------------------------------

def check_dynamics(t_max: int = 1000, eps: Fraction = Fraction(1, 100)) -> list[Check]:
    lat = build_hypercubic((2, 2, 2))
    kernel = transition_matrix(lat, 4)
    start = hypercube_canonical_config(lat)
    curve = tv_curve(kernel, start, t_max, stop_below=eps)
    reached = curve[-1] <= eps
    rows = all(kernel.row_sum(i) == 1 for i in range(kernel.num_states))
    comp = kernel.component(kernel.index(start))
    return [
        Check("dynamics/mixing-Q3", "uniform stationarity of flip dynamics", "Q^3, ell=4",
              f"exact TV to uniform <= {fmt(eps)} for some t <= {t_max}",
              f"t = {len(curve) - 1}, TV = {fmt(curve[-1])}", reached),
        Check("dynamics/kernel-Q3", "uniform stationarity of flip dynamics", "Q^3, ell=4",
              "kernel symmetric, rows sum to 1, uniform fixed",
              f"symmetric {kernel.is_symmetric()}, rows {rows}, fixes uniform {kernel.fixes_uniform(comp)}",
              kernel.is_symmetric() and rows and kernel.fixes_uniform(comp)),
    ]


def brute_force_alternating(cfg: DimerConfig, ell: int) -> list[tuple[int, ...]]:
    """All simple cycles of length <= 2*ell, filtered for alternation."""
    return [c for c in all_simple_cycles(cfg.lattice, 2 * ell)
            if len(c) % 2 == 0 and is_alternating(cfg, c)]


def check_cycle_oracle() -> list[Check]:
    out = []
    for lat in (build_hypercubic((4, 4)), build_hypercubic((3, 3, 2)), build_triangular(4, 3)):
        configs = enumerate_matchings(lat)
        for ell in (2, 3, 4):
            bad = sum(
                [c.vertices for c in enumerate_alternating_cycles(cfg, ell)] != brute_force_alternating(cfg, ell)
                for cfg in configs
            )
            out.append(Check(f"cycles/oracle-{_shape(lat)}-ell{ell}", "bounded alternating cycles",
                             f"{_shape(lat)}, all {len(configs)} configs, ell={ell}",
                             "enumeration equals all-cycles-then-filter", f"mismatches {bad}", bad == 0))
    return out


SUITES: dict[str, Callable[[Caps], list[Check]]] = {
    "theorem1": suite_theorem1,
    "degree": suite_degree,
    "hypercube": suite_hypercube,
    "diameter": suite_diameter,
    "triangular": suite_triangular,
    "harper": suite_harper,
    "colouring": suite_colouring,
}


def run_suite(name: str, caps: Caps | None = None) -> VerificationReport:
    caps = caps or Caps()
    if name == "all":
        checks: list[Check] = []
        for fn in SUITES.values():
            checks.extend(fn(caps))
        checks.extend(check_dynamics())
        checks.extend(check_cycle_oracle())
        return VerificationReport(name, tuple(checks))
    if name not in SUITES:
        raise DimerError(f"unknown suite {name!r}; choose from {', '.join([*SUITES, 'all'])}")
    return VerificationReport(name, tuple(SUITES[name](caps)))
