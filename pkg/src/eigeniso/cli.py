"""Command-line frontend: check, bench, gen, and dump-cost subcommands.

Exit codes of ``check`` follow a scriptable protocol: 0 isomorphic,
1 not isomorphic, 2 inconclusive (backtrack cap hit), 3 and above for
errors (bad files, bad arguments).  The other subcommands use 0/3.
"""

from __future__ import annotations

import argparse
import json
import os
import re
import sys
import time
from dataclasses import asdict, dataclass

import numpy as np

from .assignment import count_zero_structure, solve_lap
from .generators import FAMILIES, GeneratorSpec, generate
from .graph import (
    Graph,
    GraphFormatError,
    apply_permutation,
    format_graph,
    is_exact_isomorphism,
    load_graph,
    perturb,
    random_permutation,
    save_graph,
)
from .solver import (
    INCONCLUSIVE,
    ISOMORPHIC,
    NOT_ISOMORPHIC,
    GroupStructureMismatch,
    SolverOptions,
    build_cost_matrix,
    is_isomorphic,
)
from .spectral import DEFAULT_EPS, eigendecompose, spectral_distance

EXIT_ISOMORPHIC = 0
EXIT_NOT_ISOMORPHIC = 1
EXIT_INCONCLUSIVE = 2
EXIT_ERROR = 3

EPS_ENV_VAR = "EIGENISO_EPS"


@dataclass
class BenchReport:
    """Aggregate of repeated self-isomorphism trials on one graph.

    nBT counts trials solved without backtracking, BT those that needed
    it, failures the trials that came back inconclusive or wrong; the
    three always sum to ``trials``.  avg_steps averages backtrack steps
    over the BT trials only.
    """

    name: str
    n: int
    trials: int
    nBT: int
    BT: int
    avg_steps: float
    avg_time_seconds: float
    failures: int


class _Parser(argparse.ArgumentParser):
    """argparse variant whose usage errors exit with the error code (3),
    keeping 2 reserved for the inconclusive outcome."""

    def error(self, message: str):
        self.print_usage(sys.stderr)
        self.exit(EXIT_ERROR, f"{self.prog}: error: {message}\n")


def _default_eps() -> float:
    raw = os.environ.get(EPS_ENV_VAR)
    if raw is None:
        return DEFAULT_EPS
    try:
        return float(raw)
    except ValueError:
        raise GraphFormatError(f"bad {EPS_ENV_VAR} value: {raw!r}")


def _add_solver_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument(
        "--eps",
        type=float,
        default=None,
        help=f"numerical tolerance (default 1e-6, or ${EPS_ENV_VAR})",
    )
    p.add_argument(
        "--max-backtrack",
        type=int,
        default=10**6,
        metavar="N",
        help="backtrack steps before giving up as inconclusive",
    )
    p.add_argument(
        "--no-skip-assigned",
        action="store_true",
        help="also scan candidate vertices that already carry a loop",
    )
    p.add_argument(
        "--no-early-exit",
        action="store_true",
        help="disable the unique-assignment early exit",
    )
    p.add_argument(
        "--weight-offset",
        type=int,
        default=0,
        metavar="W",
        help="add W to every perturbation weight (default 0)",
    )


def _options(args: argparse.Namespace) -> SolverOptions:
    return SolverOptions(
        eps=args.eps if args.eps is not None else _default_eps(),
        max_backtrack_steps=args.max_backtrack,
        skip_assigned=not args.no_skip_assigned,
        unique_early_exit=not args.no_early_exit,
        weight_offset=args.weight_offset,
    )


def _two_row(perm) -> str:
    width = len(str(len(perm)))
    top = " ".join(f"{i + 1:>{width}}" for i in range(len(perm)))
    bot = " ".join(f"{perm[i] + 1:>{width}}" for i in range(len(perm)))
    return f"  i : {top}\n  pi: {bot}"


def cmd_check(args: argparse.Namespace) -> int:
    a = load_graph(args.file_a)
    b = load_graph(args.file_b)
    report = is_isomorphic(a, b, _options(args))
    if report.outcome == ISOMORPHIC:
        print("isomorphic")
        print(_two_row(report.permutation))
        print(f"permutation: {report.permutation.to_line()}")
        if args.perm_out:
            with open(args.perm_out, "w", encoding="utf-8") as fh:
                fh.write(report.permutation.to_line() + "\n")
        print(
            f"stats: rounds={len(report.rounds)} "
            f"backtracks={report.backtrack_steps} "
            f"decompositions={report.decompositions} "
            f"lap_solves={report.lap_solves}"
        )
        return EXIT_ISOMORPHIC
    if report.outcome == NOT_ISOMORPHIC:
        print("not isomorphic")
        if a.n != b.n:
            print("certificate: vertex counts differ")
        elif report.spectral_rejection:
            print(f"certificate: spectra differ (distance {report.root_cost:.6g})")
        elif not report.heuristic_rejection:
            print(
                "certificate: no zero-cost assignment of eigenspace projector "
                f"rows exists (cost {report.root_cost:.6g})"
            )
        else:
            print("rejected by search exhaustion (heuristic, no certificate)")
        return EXIT_NOT_ISOMORPHIC
    print("inconclusive: backtrack cap reached")
    return EXIT_INCONCLUSIVE


_SPEC_RE = re.compile(r"^([a-z_]+)\s*\(?\s*(\d+)\s*\)?$")


def _bench_input(tokens: list[str], gen_seed: int) -> tuple[str, Graph]:
    """Resolve a bench target: an existing file path or a family spec
    written as 'paley 17', 'paley(17)' or 'lattice(4)'."""
    if len(tokens) == 1 and os.path.isfile(tokens[0]):
        return os.path.basename(tokens[0]), load_graph(tokens[0])
    joined = " ".join(tokens).strip().lower()
    m = _SPEC_RE.match(joined)
    if not m:
        raise GraphFormatError(
            f"not a file or family spec: {joined!r} (families: {', '.join(FAMILIES)})"
        )
    family, param = m.group(1), int(m.group(2))
    g = generate(GeneratorSpec(family, param, seed=gen_seed))
    return f"{family}({param})", g


def run_bench(
    name: str, g: Graph, trials: int, seed: int, opts: SolverOptions
) -> BenchReport:
    """Check g against `trials` random relabelings of itself and aggregate."""
    if trials < 1:
        raise ValueError("trials must be >= 1")
    n_bt = bt = failures = 0
    steps: list[int] = []
    elapsed = 0.0
    for t in range(trials):
        perm = random_permutation(g.n, seed + t)
        permuted = apply_permutation(g, perm)
        t0 = time.perf_counter()
        report = is_isomorphic(g, permuted, opts)
        elapsed += time.perf_counter() - t0
        ok = (
            report.outcome == ISOMORPHIC
            and report.permutation is not None
            and is_exact_isomorphism(g, permuted, report.permutation)
        )
        if not ok:
            failures += 1
        elif report.backtrack_steps == 0:
            n_bt += 1
        else:
            bt += 1
            steps.append(report.backtrack_steps)
    return BenchReport(
        name=name,
        n=g.n,
        trials=trials,
        nBT=n_bt,
        BT=bt,
        avg_steps=float(np.mean(steps)) if steps else 0.0,
        avg_time_seconds=elapsed / trials,
        failures=failures,
    )


def cmd_bench(args: argparse.Namespace) -> int:
    name, g = _bench_input(args.target, args.gen_seed)
    report = run_bench(name, g, args.trials, args.seed, _options(args))
    header = f"{'name':<18} {'n':>4} {'trials':>6} {'nBT':>5} {'BT':>4} {'steps':>7} {'time[s]':>9} {'fail':>5}"
    row = (
        f"{report.name:<18} {report.n:>4} {report.trials:>6} {report.nBT:>5} "
        f"{report.BT:>4} {report.avg_steps:>7.2f} {report.avg_time_seconds:>9.4f} "
        f"{report.failures:>5}"
    )
    print(header)
    print(row)
    print(json.dumps(asdict(report)))
    return 0 if report.failures == 0 else EXIT_ERROR


def cmd_gen(args: argparse.Namespace) -> int:
    spec = GeneratorSpec(args.family, args.parameter, seed=args.seed)
    g = generate(spec)
    comment = f"{args.family} {args.parameter}" + (
        f" seed={args.seed}" if args.family == "random_gnp" else ""
    )
    if args.out:
        save_graph(g, args.out, comment=comment)
    else:
        sys.stdout.write(format_graph(g, comment))
    return 0


def _write_mask(mask: np.ndarray, out_dir: str, round_index: int) -> None:
    base = os.path.join(out_dir, f"mask_round{round_index}")
    cells = mask.astype(int)
    with open(base + ".csv", "w", encoding="utf-8") as fh:
        for row in cells:
            fh.write(",".join(str(x) for x in row) + "\n")
    # Graymap with maxval 1: white (1) marks an assignable pair.
    with open(base + ".pgm", "w", encoding="utf-8") as fh:
        fh.write(f"P2\n{mask.shape[1]} {mask.shape[0]}\n1\n")
        for row in cells:
            fh.write(" ".join(str(x) for x in row) + "\n")


def cmd_dump_cost(args: argparse.Namespace) -> int:
    a = load_graph(args.file_a)
    b = load_graph(args.file_b)
    eps = args.eps if args.eps is not None else _default_eps()
    if a.n != b.n:
        raise GraphFormatError("graphs must have the same vertex count")
    da = eigendecompose(a, eps)
    db = eigendecompose(b, eps)
    if spectral_distance(da, db) > eps:
        raise GraphFormatError("graphs are not isospectral at the root; nothing to dump")
    try:
        cost = build_cost_matrix(da, db)
    except GroupStructureMismatch as exc:
        raise GraphFormatError(f"eigenvalue group structures differ: {exc}")
    os.makedirs(args.out, exist_ok=True)
    _write_mask(count_zero_structure(cost, eps), args.out, 0)
    written = 1

    # Forward-only replay of the search's accepting path, one mask per round.
    cur_b = b
    cur_a = a
    used = np.zeros(a.n, dtype=bool)
    for level in range(min(args.rounds, a.n)):
        w = float(level + 1)
        cur_a = perturb(cur_a, level, w)
        da_l = eigendecompose(cur_a, eps)
        accepted = False
        for j in range(a.n):
            if used[j]:
                continue
            b_try = perturb(cur_b, j, w)
            db_j = eigendecompose(b_try, eps)
            if spectral_distance(da_l, db_j) > eps:
                continue
            try:
                c = build_cost_matrix(da_l, db_j)
            except GroupStructureMismatch:
                continue
            lap = solve_lap(c, eps)
            if lap.cost < eps:
                cur_b = b_try
                used[j] = True
                _write_mask(count_zero_structure(c, eps), args.out, level + 1)
                written += 1
                accepted = True
                break
        if not accepted:
            print(
                f"warning: no accepting assignment at round {level + 1}; "
                f"wrote {written} mask(s)",
                file=sys.stderr,
            )
            break
    print(f"wrote {written} mask file pair(s) to {args.out}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="eigeniso", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p_check = sub.add_parser("check", help="test two graph files for isomorphism")
    p_check.add_argument("file_a")
    p_check.add_argument("file_b")
    p_check.add_argument(
        "--perm-out", metavar="PATH", help="write the found permutation to a file"
    )
    _add_solver_flags(p_check)
    p_check.set_defaults(func=cmd_check)

    p_bench = sub.add_parser(
        "bench", help="repeated self-isomorphism trials on a family or file"
    )
    p_bench.add_argument(
        "target",
        nargs="+",
        help="graph file, or family spec like 'paley 17' / 'lattice(4)'",
    )
    p_bench.add_argument("--trials", type=int, default=100)
    p_bench.add_argument("--seed", type=int, default=0)
    p_bench.add_argument(
        "--gen-seed", type=int, default=0, help="seed for the random_gnp family"
    )
    _add_solver_flags(p_bench)
    p_bench.set_defaults(func=cmd_bench)

    p_gen = sub.add_parser("gen", help="write a generated graph as a DIMACS-style file")
    p_gen.add_argument("family", choices=FAMILIES)
    p_gen.add_argument("parameter", type=int)
    p_gen.add_argument("--seed", type=int, default=0)
    p_gen.add_argument("-o", "--out", metavar="PATH")
    p_gen.set_defaults(func=cmd_gen)

    p_dump = sub.add_parser(
        "dump-cost", help="dump assignability masks per perturbation round"
    )
    p_dump.add_argument("file_a")
    p_dump.add_argument("file_b")
    p_dump.add_argument("--rounds", type=int, default=2)
    p_dump.add_argument("-o", "--out", required=True, metavar="DIR")
    p_dump.add_argument("--eps", type=float, default=None)
    p_dump.set_defaults(func=cmd_dump_cost)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (GraphFormatError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
