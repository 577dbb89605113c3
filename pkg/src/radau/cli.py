"""Command-line entry points.

radau bench    run a work-precision tolerance sweep, write CSV (and plot)
radau tableau  export a Butcher tableau as labeled decimal text
radau solve    integrate one problem and print the final state and stats

Exit codes: 0 success, 1 configuration error, 2 solver failure.
"""

from __future__ import annotations

import argparse
import sys

from .benchmark import SweepSpec, emit_csv, emit_plot, run_sweep
from .exceptions import RadauError, SolverFailure, TooFewPoints, UnknownProblem
from .linalg import DOUBLE_BITS
from .problems import get_problem, problem_registry
from .solver import ORDERS, SolverOptions, solve
from .tableau import export_text


class _ConfigError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # argparse exits with status 2 on bad arguments; remap to the
    # configuration-error code
    def error(self, message):
        self.print_usage(sys.stderr)
        raise _ConfigError(message)


def parse_exponent_range(text: str) -> tuple:
    """'-5..-12' -> (-5, -6, ..., -12); a single '-7' -> (-7,)."""
    if ".." in text:
        lo_s, hi_s = text.split("..", 1)
        lo, hi = int(lo_s), int(hi_s)
        step = 1 if hi >= lo else -1
        return tuple(range(lo, hi + step, step))
    return (int(text),)


def _build_parser() -> _Parser:
    p = _Parser(prog="radau",
                description="adaptive-order Radau IIA stiff ODE solver")
    sub = p.add_subparsers(dest="command", required=True)

    names = sorted(problem_registry())

    b = sub.add_parser("bench", parents=[], help="work-precision sweep")
    b.add_argument("--problem", required=True, choices=names)
    b.add_argument("--rtol-exps", default=None,
                   help="exponent range like -5..-12 (default: the "
                        "problem's standard protocol)")
    b.add_argument("--atol-offset", type=int, default=None)
    b.add_argument("--ref-tol", type=float, default=None)
    b.add_argument("--precision", type=int, default=DOUBLE_BITS)
    b.add_argument("--min-order", type=int, default=5, choices=ORDERS)
    b.add_argument("--max-order", type=int, default=25, choices=ORDERS)
    b.add_argument("--fixed-order", type=int, default=None, choices=ORDERS,
                   help="pin min and max order to one value")
    b.add_argument("--reps", type=int, default=3)
    b.add_argument("--out", required=True)
    b.add_argument("--plot", default=None)
    b.add_argument("--parallel-blocks", action="store_true")

    t = sub.add_parser("tableau", help="export a Butcher tableau")
    t.add_argument("--stages", type=int, required=True)
    t.add_argument("--precision", type=int, default=DOUBLE_BITS)
    t.add_argument("--out", default=None)

    s = sub.add_parser("solve", help="integrate one benchmark problem")
    s.add_argument("--problem", required=True, choices=names)
    s.add_argument("--rtol", type=float, required=True)
    s.add_argument("--atol", type=float, required=True)
    s.add_argument("--precision", type=int, default=DOUBLE_BITS)
    s.add_argument("--min-order", type=int, default=5, choices=ORDERS)
    s.add_argument("--max-order", type=int, default=25, choices=ORDERS)
    return p


def _cmd_bench(args) -> int:
    named = get_problem(args.problem)
    proto = named.protocol
    exps = (parse_exponent_range(args.rtol_exps)
            if args.rtol_exps is not None else proto.rtol_exponents)
    offset = (args.atol_offset if args.atol_offset is not None
              else proto.atol_offset)
    ref_tol = args.ref_tol if args.ref_tol is not None else proto.ref_tol
    min_order, max_order = args.min_order, args.max_order
    if args.fixed_order is not None:
        min_order = max_order = args.fixed_order
    spec = SweepSpec(problem=args.problem, rtol_exponents=tuple(exps),
                     atol_offset=offset, ref_tol=ref_tol,
                     precision_bits=args.precision,
                     min_order=min_order, max_order=max_order,
                     repetitions=args.reps,
                     parallel_blocks=args.parallel_blocks)
    records = run_sweep(spec)
    emit_csv(records, args.out)
    print(f"wrote {len(records)} records to {args.out}")
    if args.plot:
        emit_plot(records, args.plot)
        print(f"wrote plot to {args.plot}")
    if all(r.status == "failed" for r in records):
        print("all tolerance points failed", file=sys.stderr)
        return 2
    return 0


def _cmd_tableau(args) -> int:
    text = export_text(args.stages, args.precision)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
        print(f"wrote tableau to {args.out}")
    else:
        sys.stdout.write(text)
    return 0


def _cmd_solve(args) -> int:
    named = get_problem(args.problem, args.precision)
    opts = SolverOptions(rtol=args.rtol, atol=args.atol,
                         min_order=args.min_order, max_order=args.max_order,
                         precision_bits=args.precision)
    sol = solve(named.prob, opts)
    print(f"problem: {args.problem}")
    print(f"t_final: {float(sol.t_final)!r}")
    for i, v in enumerate(sol.y_final):
        print(f"y[{i}] = {v!r}")
    st = sol.stats
    print(f"steps={st.n_steps} rejected={st.n_rejected} "
          f"f_evals={st.n_f_evals} jac_evals={st.n_jac_evals} "
          f"lu={st.n_lu_factorizations} newton_iters={st.n_newton_iters}")
    if sol.orders:
        print(f"orders: min={min(sol.orders)} max={max(sol.orders)}")
    return 0


def _join_range_values(argv):
    # argparse rejects values like "-4..-6" as unknown options; splice them
    # onto their flag with "=" so they parse as ordinary values
    out = []
    it = iter(argv)
    for tok in it:
        if tok == "--rtol-exps":
            val = next(it, None)
            if val is None:
                out.append(tok)
            else:
                out.append(f"{tok}={val}")
        else:
            out.append(tok)
    return out


def main(argv=None) -> int:
    parser = _build_parser()
    if argv is None:
        argv = sys.argv[1:]
    argv = _join_range_values(argv)
    try:
        args = parser.parse_args(argv)
        if args.command == "bench":
            return _cmd_bench(args)
        if args.command == "tableau":
            return _cmd_tableau(args)
        return _cmd_solve(args)
    except (_ConfigError, UnknownProblem, TooFewPoints, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except SolverFailure as exc:
        print(f"solver failure: {exc}", file=sys.stderr)
        return 2
    except RadauError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    raise SystemExit(main())
