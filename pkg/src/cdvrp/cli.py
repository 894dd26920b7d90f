"""Command-line front end; a thin client over the solver package.

Exit codes: 0 success, 1 infeasible (or failed verification/validation),
2 usage or parse errors.
"""

from __future__ import annotations

import argparse
import sys

from . import fileio
from .errors import (
    CdvrpError,
    GenerationError,
    InfeasibleError,
    InstanceFormatError,
    InvalidInstanceError,
    ResourceLimitError,
)
from .metric import FleetSpec, VehicleClass, random_instance, validate_instance
from .oracle import OracleLimits, exact_min_tours, verify_solution
from .solvers import (
    balanced_paths_to_solution,
    reduce_dcvrp_to_bdcvrp,
    solve_bdcvrp,
    solve_min_nht,
    solve_min_nt,
)

EXIT_OK = 0
EXIT_INFEASIBLE = 1
EXIT_USAGE = 2


def _parse_fleet(spec: str) -> FleetSpec:
    """Parse ``Q:T[:mult],Q:T[:mult],...`` into a fleet."""
    classes = []
    for chunk in spec.split(","):
        parts = chunk.split(":")
        if len(parts) not in (2, 3):
            raise InstanceFormatError(f"fleet class must be Q:T[:mult], got {chunk!r}")
        mult = None
        if len(parts) == 3 and parts[2].lower() != "inf":
            mult = int(parts[2])
        classes.append(VehicleClass(float(parts[0]), float(parts[1]), mult))
    return FleetSpec(tuple(classes))


def _emit(text: str, out_path) -> None:
    if out_path:
        with open(out_path, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _cmd_gen(args) -> int:
    lo, hi = (float(x) for x in args.demands.split(":"))
    inst = random_instance(
        n=args.n,
        seed=args.seed,
        box=args.box,
        demand_range=(lo, hi),
        fleet=_parse_fleet(args.fleet),
    )
    _emit(fileio.format_instance(inst), args.output)
    return EXIT_OK


def _cmd_validate(args) -> int:
    inst = fileio.read_instance(args.instance, validate=False)
    report = validate_instance(inst)
    if report.ok:
        print(f"{inst.name}: ok ({inst.n} vertices)")
        return EXIT_OK
    for v in report.violations:
        print(f"violation: {v.kind} at {v.where} (magnitude {v.magnitude:g})")
    return EXIT_INFEASIBLE


def _cmd_solve(args) -> int:
    inst = fileio.read_instance(args.instance, validate=False)
    if args.alg == "min-nt":
        sol = solve_min_nt(inst)
    elif args.alg == "min-nht":
        if args.path_budget is None:
            print("error: --alg min-nht requires --lambda", file=sys.stderr)
            return EXIT_USAGE
        bp = solve_min_nht(inst, args.path_budget, pad=args.pad)
        sol = balanced_paths_to_solution(inst, bp)
    else:
        sol = solve_bdcvrp(inst, args.alpha)
    _emit(fileio.write_solution(sol, inst), args.output)
    return EXIT_OK


def _cmd_verify(args) -> int:
    inst = fileio.read_instance(args.instance, validate=False)
    with open(args.solution, "r", encoding="utf-8") as fh:
        doc = fileio.parse_solution(fh.read())
    sol = fileio.solution_from_doc(inst, doc)
    report = verify_solution(inst, sol, alpha_target=args.alpha)
    if report.ok:
        print(f"ok: {sol.pi} tours verified")
        return EXIT_OK
    for v in report.violations:
        where = f"tour {v.tour}" if v.tour >= 0 else "solution"
        print(f"violation: {v.kind} in {where} (magnitude {v.magnitude:g}) {v.note}")
    return EXIT_INFEASIBLE


def _cmd_oracle(args) -> int:
    inst = fileio.read_instance(args.instance, validate=False)
    sol = exact_min_tours(inst, OracleLimits(max_n=args.max_n))
    if sol is None:
        print("infeasible: no tour assignment satisfies the fleet", file=sys.stderr)
        return EXIT_INFEASIBLE
    _emit(fileio.write_solution(sol, inst), args.output)
    return EXIT_OK


def _cmd_reduce(args) -> int:
    inst = fileio.read_instance(args.instance, validate=False)
    with open(args.solution, "r", encoding="utf-8") as fh:
        doc = fileio.parse_solution(fh.read())
    sol = fileio.solution_from_doc(inst, doc)
    gadget = reduce_dcvrp_to_bdcvrp(inst, [rt.tour for rt in sol.tours], args.alpha)
    _emit(fileio.format_instance(gadget.instance), args.output)
    added = sum(len(r.vertices) for r in gadget.padding)
    print(
        f"padded {len(gadget.padding)} of {len(gadget.padded_tours)} tours "
        f"with {added} zero-demand vertices; all lengths now "
        f"{max(t.length for t in gadget.padded_tours):.12g}"
    )
    return EXIT_OK


def _cmd_compare(args) -> int:
    inst = fileio.read_instance(args.instance, validate=False)
    sol = solve_min_nt(inst)
    oracle_sol = exact_min_tours(inst, OracleLimits(max_n=args.max_n))
    if oracle_sol is None:
        print("oracle: infeasible", file=sys.stderr)
        return EXIT_INFEASIBLE
    ratio = sol.pi / oracle_sol.pi if oracle_sol.pi else 1.0
    print(f"instance   {inst.name} (n={inst.n})")
    print(f"heuristic  pi={sol.pi} alpha={sol.alpha:.6g}")
    print(f"oracle     pi={oracle_sol.pi} alpha={oracle_sol.alpha:.6g}")
    print(f"ratio      {ratio:.6g}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cdvrp",
        description="Capacity- and distance-constrained vehicle routing solvers.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", help="generate a random Euclidean instance")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--box", type=float, default=1.0)
    p.add_argument("--fleet", required=True, help="Q:T[:mult],... per class")
    p.add_argument("--demands", default="1:1", help="lo:hi uniform demand range")
    p.add_argument("-o", "--output", default=None)
    p.set_defaults(func=_cmd_gen)

    p = sub.add_parser("validate", help="check an instance file")
    p.add_argument("instance")
    p.set_defaults(func=_cmd_validate)

    p = sub.add_parser("solve", help="run a solver on an instance file")
    p.add_argument("instance")
    p.add_argument("--alg", choices=["min-nt", "min-nht", "bdcvrp"], required=True)
    p.add_argument("--lambda", dest="path_budget", type=float, default=None,
                   help="path length budget (min-nht)")
    p.add_argument("--alpha", type=float, default=0.5,
                   help="balance target in (0,1) (bdcvrp)")
    p.add_argument("--pad", action="store_true",
                   help="pad short paths by repeated traversal (min-nht)")
    p.add_argument("-o", "--output", default=None)
    p.set_defaults(func=_cmd_solve)

    p = sub.add_parser("verify", help="check a solution file against its instance")
    p.add_argument("instance")
    p.add_argument("solution")
    p.add_argument("--alpha", type=float, default=None)
    p.set_defaults(func=_cmd_verify)

    p = sub.add_parser("oracle", help="exact minimum tour count (small instances)")
    p.add_argument("instance")
    p.add_argument("--max-n", type=int, default=7)
    p.add_argument("-o", "--output", default=None)
    p.set_defaults(func=_cmd_oracle)

    p = sub.add_parser("reduce", help="pad a solution's tours to equal length")
    p.add_argument("instance")
    p.add_argument("solution")
    p.add_argument("--alpha", type=float, required=True)
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(func=_cmd_reduce)

    p = sub.add_parser("compare", help="heuristic vs exact tour count")
    p.add_argument("instance")
    p.add_argument("--max-n", type=int, default=7)
    p.set_defaults(func=_cmd_compare)

    return parser


def run_cli(argv) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        return args.func(args)
    except InstanceFormatError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (InfeasibleError, InvalidInstanceError, GenerationError, ResourceLimitError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE
    except (CdvrpError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


def main() -> None:
    sys.exit(run_cli(sys.argv[1:]))


if __name__ == "__main__":
    main()
