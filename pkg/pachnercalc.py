#!/usr/bin/env python3
"""
pachnercalc: exact verification of Pachner-move identities for Grassmann-algebra
weights, and invariants of triangulated 3-manifolds.

Subcommands verify the 3D and 4D move identities at exact rational sample
points, check the chain-complex property of triangulations read from JSON,
reproduce the lens-space tables and write triangulations for other tools.
Exit codes: 0 all checks passed, 1 a check failed, 2 invalid input.
"""

import argparse
import json
import logging
import sys
import traceback
from typing import Any, Callable, Dict, List, Optional

from modules.core.errors import (
    ConfigError,
    InconsistentAlphaError,
    MissingVertexError,
    PachnerCalcError,
    TriangulationError,
)
from modules.core.invariant3d import calibrate_lens_labelling, lens_table, table_entries
from modules.core.lens import build_lens, check_lens_parameters, lens_complement
from modules.core.moves import cluster_to_json, move_cluster
from modules.core.runner import (
    VERIFY_MOVES,
    CheckResult,
    CheckRunner,
    RunReport,
    affinity_checks,
    complex_checks,
    conjecture_checks,
    published_24_checks,
    verify_checks,
    zeta_inputs,
    zetas_for,
)
from modules.core.scalars import ZetaAssignment, to_scalar
from modules.core.triangulation import Triangulation, read_triangulation, write_triangulation
from modules.utils.config import lens_entries, load_settings
from modules.utils.export import lens_table_frame, table_csv, write_report, write_summary, write_table, zeta_cell
from modules.utils.file_utils import get_version, resolve_output_path, write_text
from modules.utils.logging_config import setup_logger

__version__ = get_version()

# bad input rather than a failed identity: exit code 2
USAGE_ERRORS = (ValueError, ConfigError, TriangulationError, InconsistentAlphaError, MissingVertexError)

def zeta_argument(text: str) -> ZetaAssignment:
    """argparse type for '1,2,3,4' (rationals allowed, pairwise distinct)."""
    try:
        return ZetaAssignment.parse(text)
    except ValueError as e:
        raise argparse.ArgumentTypeError(f"invalid zeta list {text!r}: {e}")


def positive_int(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text!r}")
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text!r}")
    return value


def _bounds(settings: Dict[str, Any]) -> Dict[str, int]:
    verification = settings['verification']
    return {'numerator_bound': verification['zeta_numerator_bound'],
            'denominator_bound': verification['zeta_denominator_bound']}


def _seed(args: argparse.Namespace, settings: Dict[str, Any]) -> int:
    return args.seed if args.seed is not None else settings['verification']['seed']


def _runner(args: argparse.Namespace, settings: Dict[str, Any], logger: logging.Logger) -> CheckRunner:
    workers = args.workers or settings['verification']['workers']
    return CheckRunner(max_workers=workers, logger=logger)


def _output_path(args: argparse.Namespace, settings: Dict[str, Any], path: str):
    return resolve_output_path(path, settings['output']['directory'])


# -- commands ---------------------------------------------------------------

def cmd_verify(args: argparse.Namespace, settings: Dict[str, Any], logger: logging.Logger) -> RunReport:
    """Run a move identity at the given or sampled zeta values."""
    seed = _seed(args, settings)
    samples = args.random or settings['verification']['random_samples']
    zetas = zeta_inputs(args.move, args.zeta, samples, seed, **_bounds(settings))
    alpha_random = 0
    if args.alpha_random:
        alpha_random = args.alpha_count or settings['verification']['alpha_systems']

    checks = verify_checks(args.move, zetas, args.alpha, alpha_random, seed, args.negative_controls)
    if args.published:
        if args.move != '2-4':
            raise ValueError("--published applies to --move 2-4")
        checks.extend(published_24_checks())
    if args.conjecture:
        if args.move not in ('3-3', '2-4'):
            raise ValueError("--conjecture applies to the 4D moves")
        checks.extend(conjecture_checks(zetas))
    if args.affinity:
        if args.move not in ('3-3', '2-4'):
            raise ValueError("--affinity applies to the 4D moves")
        checks.extend(affinity_checks(args.move, zetas, seed))

    inputs = {
        'move': args.move,
        'zeta': [z.to_text() for z in zetas],
        'seed': None if args.zeta is not None else seed,
        'alpha': 'random' if alpha_random else (args.alpha if args.alpha is not None else '0'),
        'alpha_systems': alpha_random,
        'negative_controls': args.negative_controls,
    }
    return _runner(args, settings, logger).run('verify', checks, inputs, args.timing)


def _table_lookup(settings: Dict[str, Any]) -> Dict[tuple, int]:
    return {(p, q, n, z): value for p, q, n, z, value in table_entries(lens_entries(settings))}


def _lens_check(p: int, q: int, n: int, z: ZetaAssignment, alpha: str, labelling: Dict[str, int],
                expected: Optional[int]) -> Callable[[], CheckResult]:
    def run() -> CheckResult:
        value = lens_table(p, q, n, z, alpha, labelling)
        details = {'p': p, 'q': q, 'n': n, 'zeta': zeta_cell(z), 'value': str(value)}
        if expected is not None:
            details['expected'] = expected
        return CheckResult(f"L({p},{q}) n={n} zeta={zeta_cell(z)}", expected is None or value == expected, details)
    return run


def cmd_lens(args: argparse.Namespace, settings: Dict[str, Any], logger: logging.Logger) -> RunReport:
    """|G| of one lens complement; compared with the table when the entry is listed and alpha is lens.alpha."""
    check_lens_parameters(args.p, args.q, args.n)
    labelling = settings['lens']['labelling']
    alpha = args.alpha if args.alpha is not None else str(settings['lens']['alpha'])
    expected = None
    if to_scalar(alpha) == to_scalar(settings['lens']['alpha']):
        expected = _table_lookup(settings).get((args.p, args.q, args.n, args.zeta))
    check = _lens_check(args.p, args.q, args.n, args.zeta, alpha, labelling, expected)
    inputs = {'p': args.p, 'q': args.q, 'n': args.n, 'zeta': zeta_cell(args.zeta), 'alpha': alpha}
    name = f"L({args.p},{args.q}) n={args.n} zeta={zeta_cell(args.zeta)}"
    report = _runner(args, settings, logger).run('lens', [(name, check)], inputs, args.timing)
    for result in report.checks:
        if 'value' in result.details:
            print(result.details['value'])
    return report


def cmd_tables(args: argparse.Namespace, settings: Dict[str, Any], logger: logging.Logger) -> RunReport:
    """Every configured table entry; the table goes to --output or to stdout as CSV."""
    labelling = settings['lens']['labelling']
    alpha = str(settings['lens']['alpha'])
    checks = []
    for p, q, n, z, expected in table_entries(lens_entries(settings)):
        checks.append((f"L({p},{q}) n={n} zeta={zeta_cell(z)}", _lens_check(p, q, n, z, alpha, labelling, expected)))
    report = _runner(args, settings, logger).run('tables', checks, {'entries': len(checks)}, args.timing)

    df = lens_table_frame(c.details for c in report.checks if 'value' in c.details)
    if args.output:
        write_table(df, _output_path(args, settings, args.output))
    else:
        sys.stdout.write(table_csv(df))
    return report


def cmd_check_complex(args: argparse.Namespace, settings: Dict[str, Any], logger: logging.Logger) -> RunReport:
    """Validate a triangulation file and check that consecutive chain maps compose to zero."""
    inputs: Dict[str, Any] = {'input': args.input}
    try:
        t = read_triangulation(args.input)
    except TriangulationError as e:
        if e.cell is None:
            raise
        # the file parsed but its gluing data is inconsistent
        logger.error(f"Triangulation rejected: {e}")
        failure = CheckResult('structure', False, {'cell': str(e.cell), 'slot': e.slot}, error=str(e))
        return RunReport('check-complex', inputs, [failure], 0.0, args.timing)

    seed = _seed(args, settings)
    zetas = zetas_for(t, args.zeta, args.random or 5, seed, **_bounds(settings))
    inputs.update({'dimension': t.dimension, 'cells': len(t), 'zeta': [z.to_text() for z in zetas]})
    checks = complex_checks(t, zetas, args.inner_only)
    return _runner(args, settings, logger).run('check-complex', checks, inputs, args.timing)


def _written(name: str, t: Triangulation) -> CheckResult:
    problems = t.validate()
    return CheckResult(name, not problems, {'cells': len(t), 'problems': problems} if problems else {'cells': len(t)})


def cmd_build_lens(args: argparse.Namespace, settings: Dict[str, Any], logger: logging.Logger) -> RunReport:
    """Serialize L(p, q), or its complement of a chain of two tetrahedra when --n is given."""
    labelling = settings['lens']['labelling']
    if args.n is None:
        t = build_lens(args.p, args.q, labelling)
    else:
        t = lens_complement(args.p, args.q, args.n, labelling)
    path = write_triangulation(t, _output_path(args, settings, args.output))
    logger.info(f"Triangulation with {len(t)} cells written to {path}")
    inputs = {'p': args.p, 'q': args.q, 'n': args.n, 'output': str(path)}
    return RunReport('build-lens', inputs, [_written('written', t)], 0.0, args.timing)


def cmd_move_cluster(args: argparse.Namespace, settings: Dict[str, Any], logger: logging.Logger) -> RunReport:
    """Write one side of a standard move configuration."""
    cluster = move_cluster(args.move)
    t = cluster.side(args.side)
    path = write_text(_output_path(args, settings, args.output), cluster_to_json(cluster, args.side))
    logger.info(f"{args.move} {args.side} with {len(t)} cells written to {path}")
    inputs = {'move': args.move, 'side': args.side, 'output': str(path)}
    return RunReport('move-cluster', inputs, [_written('written', t)], 0.0, args.timing)


def cmd_calibrate_lens(args: argparse.Namespace, settings: Dict[str, Any], logger: logging.Logger) -> RunReport:
    """Diagnostic: search the lens labellings, at lens.alpha and at -2, for one that reproduces the table."""
    entries = lens_entries(settings)
    alphas = list(dict.fromkeys([to_scalar(settings['lens']['alpha']), to_scalar(-2)]))
    calibration = calibrate_lens_labelling(entries, alphas)
    inputs = {'entries': len(entries)}
    if calibration is None:
        return RunReport('calibrate-lens', inputs, [CheckResult('calibration', False)], 0.0, args.timing)
    details = {'labelling': calibration.labelling, 'alpha': str(calibration.alpha), 'matched': calibration.matched}
    print(json.dumps({'labelling': calibration.labelling, 'alpha': str(calibration.alpha)}, indent=4))
    return RunReport('calibrate-lens', inputs, [CheckResult('calibration', True, details)], 0.0, args.timing)


# -- argument parsing -------------------------------------------------------

def process_command_line(argv: Optional[List[str]] = None) -> argparse.Namespace:
    """
    Process command line arguments.

    Returns:
        argparse.Namespace: Parsed command line arguments
    """
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument('-v', '--verbose', action='store_true', help='Enable verbose logging')
    common.add_argument('--log-file', help='Also write the log to this file')
    common.add_argument('--config', help='Settings file (default: config/settings.json)')
    common.add_argument('--report', help='Write the JSON run report to this file')
    common.add_argument('--summary', help='Write a plain-text summary to this file')
    common.add_argument('--timing', action='store_true', help='Record elapsed times in reports')
    common.add_argument('--workers', type=positive_int, help='Worker threads (default: from settings)')

    parser = argparse.ArgumentParser(
        description='pachnercalc: exact checks of Pachner-move identities and 3-manifold invariants',
        epilog='Bare output file names are placed in the output directory from the settings (default: results/).'
    )
    parser.add_argument('--version', action='version', version=f'pachnercalc {__version__}')
    sub = parser.add_subparsers(dest='command', required=True)

    verify = sub.add_parser('verify', parents=[common], help='Verify a move identity')
    verify.add_argument('--move', required=True, choices=VERIFY_MOVES)
    source = verify.add_mutually_exclusive_group()
    source.add_argument('--zeta', type=zeta_argument, help='Explicit zeta values, e.g. 0,1,3,8,17,21')
    source.add_argument('--random', type=positive_int, metavar='N', help='Number of random zeta samples')
    verify.add_argument('--seed', type=int, help='Seed for random samples (default: from settings)')
    alpha = verify.add_mutually_exclusive_group()
    alpha.add_argument('--alpha', help="Constant alpha, cell=value list, or 'ones' / 'zeta' (4D)")
    alpha.add_argument('--alpha-random', action='store_true', help='Random consistent alpha systems')
    verify.add_argument('--alpha-count', type=positive_int, metavar='K', help='Random alpha systems per zeta')
    verify.add_argument('--negative-controls', action='store_true', help='Add perturbed checks that must fail')
    verify.add_argument('--published', action='store_true', help='2-4: add the published sample point and weight')
    verify.add_argument('--conjecture', action='store_true', help='4D: compare the conjectured invariant')
    verify.add_argument('--affinity', action='store_true', help='4D: check that both sides are affine in alpha')
    verify.set_defaults(handler=cmd_verify)

    lens = sub.add_parser('lens', parents=[common], help='|G| of a lens space minus a chain of two tetrahedra')
    lens.add_argument('--p', type=int, required=True)
    lens.add_argument('--q', type=int, required=True)
    lens.add_argument('--n', type=int, required=True)
    lens.add_argument('--zeta', type=zeta_argument, default=ZetaAssignment.parse('1,2,3,4'))
    lens.add_argument('--alpha', help='Constant alpha (default: lens.alpha from the settings)')
    lens.set_defaults(handler=cmd_lens)

    tables = sub.add_parser('tables', parents=[common], help='Reproduce the lens-space tables')
    tables.add_argument('--output', help='Write the table to a .csv or .xlsx file instead of stdout')
    tables.set_defaults(handler=cmd_tables)

    check = sub.add_parser('check-complex', parents=[common], help='Validate a triangulation file')
    check.add_argument('--input', required=True, help='Triangulation JSON file')
    check.add_argument('--zeta', type=zeta_argument)
    check.add_argument('--random', type=positive_int, metavar='N', help='Random zeta samples (default: 5)')
    check.add_argument('--seed', type=int)
    check.add_argument('--inner-only', action='store_true', help='4D: restrict to inner 3-faces')
    check.set_defaults(handler=cmd_check_complex)

    build = sub.add_parser('build-lens', parents=[common], help='Write a lens-space triangulation')
    build.add_argument('--p', type=int, required=True)
    build.add_argument('--q', type=int, required=True)
    build.add_argument('--n', type=int, help='Excise the chain at n and double the remaining cells')
    build.add_argument('--output', required=True)
    build.set_defaults(handler=cmd_build_lens)

    cluster = sub.add_parser('move-cluster', parents=[common], help='Write one side of a move configuration')
    cluster.add_argument('--move', required=True, choices=('2-3', '3-2', '1-4', '4-1', '3-3', '2-4', '4-2'))
    cluster.add_argument('--side', required=True, choices=('lhs', 'rhs'))
    cluster.add_argument('--output', required=True)
    cluster.set_defaults(handler=cmd_move_cluster)

    calibrate = sub.add_parser('calibrate-lens', parents=[common], help='Find a lens labelling matching the table')
    calibrate.set_defaults(handler=cmd_calibrate_lens)

    return parser.parse_args(argv)


def main(argv: Optional[List[str]] = None) -> int:
    """
    Main entry point for the application.

    Returns:
        int: Exit code (0 pass, 1 failure, 2 invalid input)
    """
    args = process_command_line(argv)

    log_level = logging.DEBUG if args.verbose else logging.INFO
    logger = setup_logger('pachnercalc', log_level, args.log_file)
    logger.debug(f"pachnercalc v{__version__} starting...")

    try:
        settings = load_settings(args.config)
        report = args.handler(args, settings, logger)
        if args.report:
            write_report(report, _output_path(args, settings, args.report))
        if args.summary:
            write_summary(report, _output_path(args, settings, args.summary))
    except USAGE_ERRORS as e:
        logger.error(f"Invalid input: {e}")
        if args.verbose:
            logger.debug(traceback.format_exc())
        return 2
    except PachnerCalcError as e:
        logger.error(f"Error running {args.command}: {e}")
        if args.verbose:
            logger.debug(traceback.format_exc())
        return 1

    if not report.passed:
        logger.error(f"{report.failed_count} of {len(report.checks)} checks failed")
        return 1
    return 0


if __name__ == '__main__':
    sys.exit(main())
