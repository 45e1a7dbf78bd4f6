"""Command-line interface: ``dimerflip <subcommand> [options]``.

All output is JSON (sorted keys) on stdout or ``--out``; exact rationals are
printed as ``"p/q"`` strings.
"""
from __future__ import annotations

import argparse
import json
import math
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path
from typing import Any, Sequence

from . import canonical, cycles, dynamics, invariants, statespace, verify
from .errors import DimerError
from .lattice import Lattice, lattice_from_descriptor
from .matching import DimerConfig, config_from_dict

REPORTS = ("components", "diameter", "mindegree", "isolated")


def _load_json(arg: str) -> Any:
    text = arg if arg.lstrip().startswith(("{", "[")) else Path(arg).read_text()
    return json.loads(text)


def _lattice(args) -> Lattice:
    if args.lattice:
        return lattice_from_descriptor(_load_json(args.lattice))
    if args.config:
        return _config(args).lattice
    raise DimerError("this command needs --lattice or --config")


def _config(args, flag: str = "config") -> DimerConfig:
    raw = getattr(args, flag, None)
    if not raw:
        raise DimerError(f"this command needs --{flag}")
    obj = _load_json(raw)
    if "lattice" in obj:
        return config_from_dict(obj)
    if not args.lattice:
        raise DimerError("configuration JSON has no lattice; pass --lattice")
    return config_from_dict(obj, lattice_from_descriptor(_load_json(args.lattice)))


def _inf(x):
    return "inf" if isinstance(x, float) and math.isinf(x) else x


# -- subcommands --------------------------------------------------------------

def cmd_enumerate(args) -> tuple[dict, int]:
    lat = _lattice(args)
    configs = statespace.enumerate_matchings(lat, cap=args.cap)
    out: dict[str, Any] = {"lattice": lat.descriptor(), "count": len(configs)}
    if args.list:
        out["keys"] = [c.key().hex() for c in configs]
    return out, 0


def cmd_statespace(args) -> tuple[dict, int]:
    lat = _lattice(args)
    g = statespace.build_flip_graph(lat, args.ell, cap=args.cap, node_cap=args.node_cap)
    out: dict[str, Any] = {
        "lattice": lat.descriptor(), "ell": args.ell, "nodes": g.num_nodes, "edges": g.num_edges,
    }
    if args.report == "components":
        out["components"] = [{"size": s, "key": k.hex()} for s, k in statespace.components(g)]
    elif args.report == "diameter":
        rep = statespace.diameter(g)
        out["diameter"] = {
            "connected": rep.connected,
            "value": _inf(rep.value),
            "per_component": list(rep.per_component),
        }
    elif args.report == "mindegree":
        edge, cyc = statespace.min_degree(g)
        out["min_degree"] = {"edge": edge, "cycle": cyc}
    else:
        out["isolated"] = [k.hex() for k in statespace.isolated_vertices(g)]
    return out, 0


def cmd_cycles(args) -> tuple[dict, int]:
    cfg = _config(args)
    lat = cfg.lattice
    region = [lat.index(c) for c in json.loads(args.region)] if args.region else None
    found = cycles.enumerate_alternating_cycles(cfg, args.ell, region=region)
    return {"ell": args.ell, "count": len(found), "cycles": [c.coords(lat) for c in found]}, 0


def cmd_canonicalize(args) -> tuple[dict, int]:
    cfg = _config(args)
    seq = canonical.canonicalize(cfg)
    final = canonical.apply_flip_sequence(cfg, seq)
    out = seq.to_dict()
    out["final_key"] = final.key().hex()
    out["reached_canonical"] = final.key() == canonical.canonical_target(cfg.lattice).key()
    return out, 0 if out["reached_canonical"] else 1


def cmd_sample(args) -> tuple[dict, int]:
    if args.start:
        start = _config(args, "start")
    elif args.config:
        start = _config(args)
    else:
        start = canonical.canonical_target(_lattice(args))
    table = dynamics.build_proposals(start.lattice, args.ell)
    run = dynamics.run_chain(start, table, args.steps, seed=args.seed)
    out = run.to_dict()
    out.update({"ell": args.ell, "seed": args.seed, "proposals": len(table), "start_key": start.key().hex()})
    return out, 0


def cmd_bounds(args) -> tuple[dict, int]:
    out: dict[str, Any] = {}
    if args.diameter:
        d, n, ell = args.diameter
        out["diameter_lower_bound"] = verify.fmt(invariants.diameter_lower_bound(d, n, ell))
    if args.phi is not None:
        d = args.phi
        out["phi"] = {"d": d, "values": [invariants.harper_phi(d, a) for a in range(2**d + 1)]}
    if args.expansion is not None:
        a, b = invariants.expansion_sequences(args.expansion)
        out["expansion"] = {"d": args.expansion, "a": list(a), "b": list(b)}
    if not out:
        raise DimerError("bounds needs at least one of --diameter, --phi, --expansion")
    return out, 0


def _run_one(name: str, caps: verify.Caps) -> verify.VerificationReport:
    return verify.run_suite(name, caps)


def cmd_verify(args) -> tuple[dict, int]:
    caps = verify.Caps(
        max_volume=args.max_volume, samples=args.samples, max_dim=args.max_dim,
        max_tri=args.max_tri, node_cap=args.node_cap, seed=args.seed or 0,
    )
    names = list(verify.SUITES) if args.suite == "all" else [args.suite]
    if args.suite not in (*verify.SUITES, "all"):
        raise DimerError(f"unknown suite {args.suite!r}")
    threads = max(1, args.threads or 1)
    if threads > 1 and len(names) > 1:
        with ProcessPoolExecutor(max_workers=threads) as pool:
            reports = list(pool.map(_run_one, names, [caps] * len(names)))
    else:
        reports = [_run_one(n, caps) for n in names]
    checks = [c for r in reports for c in r.checks]
    if args.suite == "all":
        checks += verify.check_dynamics() + verify.check_cycle_oracle()
    report = verify.VerificationReport(args.suite, tuple(checks))
    return report.to_dict(), 0 if report.passed else 1


# -- parser -------------------------------------------------------------------

def _add_globals(p: argparse.ArgumentParser, suppress: bool) -> None:
    d = argparse.SUPPRESS if suppress else None
    p.add_argument("--lattice", default=d, help="lattice descriptor as JSON text or a file path")
    p.add_argument("--config", default=d, help="configuration as JSON text or a file path")
    p.add_argument("--out", default=d, help="write JSON here instead of stdout")
    p.add_argument("--threads", type=int, default=d, help="worker processes (verify all)")
    p.add_argument("--seed", type=int, default=d, help="random seed (unsigned 64-bit)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="dimerflip", description="Dimer flip dynamics toolkit.")
    _add_globals(parser, suppress=False)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("enumerate", help="count (and list) all dimer configurations")
    p.add_argument("--cap", type=int, default=None, help="vertex cap for enumeration")
    p.add_argument("--list", action="store_true", help="include every canonical key")
    p.set_defaults(func=cmd_enumerate)

    p = sub.add_parser("statespace", help="build D_ell and report on it")
    p.add_argument("--ell", type=int, required=True)
    p.add_argument("--report", choices=REPORTS, default="components")
    p.add_argument("--cap", type=int, default=None)
    p.add_argument("--node-cap", type=int, default=statespace.DEFAULT_NODE_CAP)
    p.set_defaults(func=cmd_statespace)

    p = sub.add_parser("cycles", help="alternating cycles of length <= 2*ell")
    p.add_argument("--ell", type=int, required=True)
    p.add_argument("--region", default=None, help="JSON list of vertex coordinates")
    p.set_defaults(func=cmd_cycles)

    p = sub.add_parser("canonicalize", help="flip sequence to the canonical configuration")
    p.set_defaults(func=cmd_canonicalize)

    p = sub.add_parser("sample", help="run the Metropolis flip chain")
    p.add_argument("--ell", type=int, default=2)
    p.add_argument("--steps", type=int, default=1000)
    p.add_argument("--start", default=None, help="start configuration (JSON text or file)")
    p.set_defaults(func=cmd_sample)

    p = sub.add_parser("bounds", help="exact bounds and isoperimetric tables")
    p.add_argument("--diameter", type=int, nargs=3, metavar=("D", "N", "ELL"))
    p.add_argument("--phi", type=int, metavar="D")
    p.add_argument("--expansion", type=int, metavar="D")
    p.set_defaults(func=cmd_bounds)

    p = sub.add_parser("verify", help="run a verification suite")
    p.add_argument("suite", choices=[*verify.SUITES, "all"])
    p.add_argument("--max-volume", type=int, default=verify.Caps.max_volume)
    p.add_argument("--samples", type=int, default=verify.Caps.samples)
    p.add_argument("--max-dim", type=int, default=verify.Caps.max_dim)
    p.add_argument("--max-tri", type=int, default=verify.Caps.max_tri)
    p.add_argument("--node-cap", type=int, default=verify.Caps.node_cap)
    p.set_defaults(func=cmd_verify)

    for sp in sub.choices.values():
        _add_globals(sp, suppress=True)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    if args.seed is not None and not 0 <= args.seed < 2**64:
        print("error: --seed must be an unsigned 64-bit integer", file=sys.stderr)
        return 2
    try:
        out, code = args.func(args)
    except (DimerError, json.JSONDecodeError, OSError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    text = json.dumps(out, sort_keys=True, indent=2) + "\n"
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    raise SystemExit(main())
