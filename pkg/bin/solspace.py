#! /usr/bin/env python
# -*- coding: utf-8 -*-

import os
import sys

# this script shares its name with the package: keep its own directory off
# the import path so that `import solspace` finds the package
_SCRIPT_DIR = os.path.dirname(os.path.abspath(__file__))
sys.path[:] = [p for p in sys.path if os.path.abspath(p or os.curdir) != _SCRIPT_DIR]

EXIT_OK = 0
EXIT_INVALID = 1
EXIT_FAILED = 2

# SAT competition conventions
EXIT_SAT = 10
EXIT_UNSAT = 20


def solve_competition(filename, budget=None):
    """ solves a DIMACS file and answers with s/v lines. Returns the exit code """
    from solspace.formulas import read_dimacs, DimacsParseError
    from solspace.solver import solve, DEFAULT_CONFLICT_BUDGET
    try:
        formula = read_dimacs(filename)
    except (IOError, DimacsParseError) as e:
        print("c %s" % e)
        return EXIT_INVALID

    result = solve(formula, conflict_budget=DEFAULT_CONFLICT_BUDGET if budget is None else budget)
    print("c conflicts %d" % result.stats["conflicts"])
    if result.is_sat:
        print("s SATISFIABLE")
        print("v " + " ".join(str(v+1 if b else -(v+1)) for v, b in enumerate(result.witness)) + " 0")
        return EXIT_SAT
    if result.is_unsat:
        print("s UNSATISFIABLE")
        return EXIT_UNSAT
    print("s UNKNOWN")
    return EXIT_OK

def get_parser():
    """ """
    import argparse
    from solspace.script.harness import FAMILIES, SOLVERS
    from solspace.drunkwalk import STRATEGIES
    from solspace.lineartest import FORMS
    from solspace.scaling import MODELS

    parser = argparse.ArgumentParser(
        description="""solspace: solution-space topology and search-geometry experiments
            """, formatter_class=argparse.RawTextHelpFormatter)
    subparsers = parser.add_subparsers(dest="command", required=True)

    # ------------ #
    #  Common      #
    # ------------ #
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument('--config', type=str, default=None,
                        help='JSON experiment config. Flags given on the command line override it.')
    common.add_argument('--family', type=str, default=None, choices=FAMILIES,
                        help='instance family')
    common.add_argument('--n', type=int, default=None, help='number of variables')
    common.add_argument('--alpha', type=float, default=None, help='clause density m/n')
    common.add_argument('--k', type=int, default=None, help='clause width (random-ksat)')
    common.add_argument('--m', type=int, default=None, help='Margulis side (tseitin)')
    common.add_argument('--parity', type=int, default=None, help='Tseitin total charge parity')
    common.add_argument('--seeds', type=int, default=None, help='number of instances (one per derived seed)')
    common.add_argument('--budget', type=int, default=None, help='conflict budget per solver call')
    common.add_argument('--seed', dest="master_seed", type=int, default=None, help='master seed')
    common.add_argument('--workers', type=int, default=None,
                        help='Number of workers. workers=1 means no multiprocessing.')
    common.add_argument('--output', dest="output_dir", type=str, default=None,
                        help='root of the run directories (default: $SOLSPACE_OUTPUT)')
    common.add_argument('--verbose', action="store_true", default=False, help='')

    probing = argparse.ArgumentParser(add_help=False)
    probing.add_argument('--fraction', type=float, default=None, help='fraction of variables fixed per probe')
    probing.add_argument('--probes', type=int, default=None, help='number of forced probes')
    probing.add_argument('--tau', type=int, default=None, help='linkage / hit distance threshold')

    # ------------ #
    #  Commands    #
    # ------------ #
    subparsers.add_parser("gen", parents=[common], help="generate instances (DIMACS files in the run directory)")

    solve = subparsers.add_parser("solve", parents=[common], help="solve instances")
    solve.add_argument('--dimacs', type=str, default=None, help='DIMACS file to solve instead of generated instances')
    solve.add_argument('--solver', type=str, default=None, choices=SOLVERS,
                       help='internal CDCL or the external solver given by $SOLSPACE_SOLVER')
    solve.add_argument('--solver-path', dest="solver_path", type=str, default=None,
                       help='external solver executable (default: $SOLSPACE_SOLVER)')
    solve.add_argument('--competition', type=str, default=None, metavar="FILE",
                       help='solve FILE and answer with s/v lines (exit 10 SAT, 20 UNSAT)')

    homology = subparsers.add_parser("homology", parents=[common], help="Betti numbers of solution-space complexes")
    homology.add_argument('--max-dim', dest="max_dim", type=int, default=None, help='highest dimension')

    subparsers.add_parser("shatter", parents=[common, probing], help="forced-probe shattering measurement")

    drunkwalk = subparsers.add_parser("drunkwalk", parents=[common, probing], help="walk strategies hit rates")
    drunkwalk.add_argument('--steps', type=int, default=None, help='steps per walk')
    drunkwalk.add_argument('--trials', type=int, default=None, help='walks per strategy')
    drunkwalk.add_argument('--strategies', type=str, default=None,
                           help='comma separated subset of %s' % ",".join(STRATEGIES))

    xortest = subparsers.add_parser("xortest", parents=[common, probing], help="XOR closure test")
    xortest.add_argument('--triples', type=int, default=None, help='combinations tested')
    xortest.add_argument('--form', type=str, default=None, choices=list(FORMS), help='')

    scaling = subparsers.add_parser("scaling", parents=[common], help="conflict scaling and fits")
    scaling.add_argument('--sizes', type=str, default=None,
                         help='comma separated ascending sizes (n, or Margulis sides for tseitin)')
    scaling.add_argument('--seeds-per-size', dest="seeds_per_size", type=int, default=None, help='')
    scaling.add_argument('--model', type=str, default=None, choices=list(MODELS), help='model drawn on the chart')
    scaling.add_argument('--payload-n', dest="payload_n", type=int, default=None,
                         help='also run the core conjoined with a satisfiable random 3-SAT payload of this size')
    scaling.add_argument('--payload-alpha', dest="payload_alpha", type=float, default=None, help='')

    report = subparsers.add_parser("report", help="re-render the chart of a run directory")
    report.add_argument('rundir', type=str, help='run directory')
    report.add_argument('--model', type=str, default=None, choices=list(MODELS), help='')
    return parser

def get_config(args):
    """ ExperimentConfig from --config and the command line flags """
    from dataclasses import fields
    from solspace.script.harness import ExperimentConfig, SCHEMA_VERSION

    record = {"schema_version": SCHEMA_VERSION, "experiment": args.command}
    if args.config is not None:
        with open(args.config) as f:
            record = ExperimentConfig.from_json(f.read()).to_dict()
        record["experiment"] = args.command

    for f in fields(ExperimentConfig):
        value = getattr(args, f.name, None)
        if value is None or f.name in ["experiment", "schema_version"]:
            continue
        if f.name == "strategies":
            value = value.split(",")
        elif f.name == "sizes":
            value = [int(s) for s in value.split(",")]
        record[f.name] = value
    # a solver path alone means the external solver
    if getattr(args, "solver_path", None) is not None and getattr(args, "solver", None) is None:
        record["solver"] = "external"
    return ExperimentConfig.from_dict(record)

def main(argv=None):
    """ """
    from solspace.script.harness import run, report

    args = get_parser().parse_args(argv)
    if args.command == "solve" and args.competition is not None:
        return solve_competition(args.competition, budget=args.budget)

    if args.command == "report":
        try:
            print(report(args.rundir, model=args.model))
        except (IOError, ValueError) as e:
            print("ERROR: %s" % e, file=sys.stderr)
            return EXIT_FAILED
        return EXIT_OK

    try:
        config = get_config(args)
        config.validate()
    except (IOError, ValueError) as e:
        print("ERROR: %s" % e, file=sys.stderr)
        return EXIT_INVALID

    try:
        record = run(config, verbose=args.verbose)
    except Exception as e:
        print("ERROR: %s: %s" % (type(e).__name__, e), file=sys.stderr)
        return EXIT_FAILED

    print(record.run_dir)
    if record.nerrors > 0:
        for error in record.errors:
            print("ERROR: item %s: %s" % (error["item"], error["error"]), file=sys.stderr)
        return EXIT_FAILED
    return EXIT_OK

#################################
#
#   MAIN
#
#################################
if  __name__ == "__main__":
    sys.exit(main())
