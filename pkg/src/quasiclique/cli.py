"""Command line entry point: ``quasiclique {solve,theory,sample,experiment}``."""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .gamma import as_gamma
from .graph import DimacsError, read_dimacs, write_dimacs
from .harness import CouplingViolation, load_config, run_experiment, write_report_csv
from .kernels import KernelError, load_kernel
from .sampler import sample, stream
from .solver import DEFAULT_BUDGET, DEFAULT_RESTARTS, exact_bb, heuristic, qc_number
from .theory import HypothesisViolation, estimates

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_AUDIT = 2
EXIT_HYPOTHESIS = 3


def _cmd_solve(args) -> int:
    g = read_dimacs(Path(args.graph).read_bytes())
    gamma = as_gamma(args.gamma)
    if args.heuristic_only:
        res = heuristic(g, gamma, restarts=args.restarts, rng=stream(args.seed))
    elif gamma == 0:
        res = qc_number(g, gamma)
    else:
        warm = heuristic(g, gamma, restarts=args.restarts, rng=stream(args.seed))
        res = exact_bb(g, gamma, budget=args.budget, warm_start=warm)
    print(f"omega_gamma={res.size} gamma={gamma} exact={str(res.exact).lower()} "
          f"witness_edges={res.witness_edges} nodes={res.nodes_explored} "
          f"time={res.wall_time:.3f}s")
    if args.json:
        print(json.dumps(res.to_dict()))
    return EXIT_OK


def _cmd_theory(args) -> int:
    est = estimates(args.n, args.gamma, args.pmax)
    lo, hi = est.window(args.epsilon)
    if args.header:
        print("kl,omega_tilde,refined,window_low,window_high")
    print(",".join(repr(v) for v in (est.kl, est.omega_tilde, est.refined, lo, hi)))
    return EXIT_OK


def _cmd_sample(args) -> int:
    kernel = load_kernel(args.kernel)
    s = sample(kernel, args.n, args.seed)
    prefix = Path(args.out)
    prefix.with_suffix(".dimacs").write_text(
        write_dimacs(s.graph, comment=f"G(n={args.n}, kernel {s.kernel_id}) seed {s.seed}"))
    prefix.with_suffix(".json").write_text(s.sidecar_json())
    print(f"wrote {prefix.with_suffix('.dimacs')} (n={s.graph.n}, m={s.graph.m})")
    return EXIT_OK


def _cmd_experiment(args) -> int:
    cfg = load_config(args.config)
    if args.mode:
        cfg = cfg.with_mode(args.mode)
    try:
        report = run_experiment(cfg, jobs=args.jobs)
    except CouplingViolation as exc:
        print(f"audit violation: {exc}", file=sys.stderr)
        return EXIT_AUDIT
    text = write_report_csv(report, timing=args.timing)
    if args.out:
        with open(args.out, "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="quasiclique", description=__doc__)
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("solve", help="quasi-clique number of a DIMACS graph")
    s.add_argument("--graph", required=True)
    s.add_argument("--gamma", required=True, help="density threshold, e.g. 7/10")
    s.add_argument("--budget", type=int, default=DEFAULT_BUDGET, help="search-node limit")
    s.add_argument("--restarts", type=int, default=DEFAULT_RESTARTS)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--json", action="store_true", help="also print a JSON result line")
    s.add_argument("--heuristic-only", action="store_true")
    s.set_defaults(func=_cmd_solve)

    t = sub.add_parser("theory", help="closed-form predictions")
    t.add_argument("--n", type=int, required=True)
    t.add_argument("--gamma", required=True)
    t.add_argument("--pmax", type=float, required=True)
    t.add_argument("--epsilon", type=float, default=0.5)
    t.add_argument("--header", action="store_true")
    t.set_defaults(func=_cmd_theory)

    g = sub.add_parser("sample", help="sample G(n, kappa) to DIMACS plus a JSON sidecar")
    g.add_argument("--kernel", required=True, help="kernel JSON file")
    g.add_argument("--n", type=int, required=True)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--out", required=True, help="output path prefix")
    g.set_defaults(func=_cmd_sample)

    e = sub.add_parser("experiment", help="Monte-Carlo experiment to CSV")
    e.add_argument("--config", required=True)
    e.add_argument("--out")
    e.add_argument("--mode", choices=["concentration", "coupling", "core"])
    e.add_argument("--jobs", type=int, default=1)
    e.add_argument("--timing", action="store_true", help="fill the elapsed_ms column")
    e.set_defaults(func=_cmd_experiment)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except HypothesisViolation as exc:
        print(f"hypothesis violation: {exc}", file=sys.stderr)
        return EXIT_HYPOTHESIS
    except (DimacsError, KernelError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
