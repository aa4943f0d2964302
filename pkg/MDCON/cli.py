"""MDCON command line interface

This module contains the ``mdcon`` command::

    mdcon generate --kind active_linear --out al.json
    mdcon solve --instance al.json --algorithm partial --epsilon 0.1 --trace trace.csv
    mdcon verify --instance al.json --algorithm adaptive --epsilon 0.1
    mdcon bench --instance al.json --algorithm partial --epsilon-list 0.2,0.1,0.05 --out rates

Exit codes are 0 on success, 1 when a mathematical check fails or a run
contradicts the convergence theory, and 2 on usage, I/O or parse errors.
The log level is read from the ``MD_LOG`` environment variable.
"""
from typing import List
import argparse
import json
import logging
import os
import sys
import time
import numpy as np
import yaml
from astropy.table import Table, MaskedColumn

from MDCON import config
from MDCON.helpers import format_real, parse_real_list, write_table, get_output_paths, wrap_iterator
from MDCON.instances import (
    ProblemInstance, load_instance, save_instance,
    generate_max_quadratic, generate_strongly_convex, make_known_solution_instance
)
from MDCON.params import RunConfig
from MDCON.solvers import (
    InvariantViolation, run_adaptive, run_partial_adaptive, run_restarted,
    iteration_bound_adaptive, iteration_bound_partial
)
from MDCON.reference import run_checks, reference_solve

logger = logging.getLogger(config.LOGGER_NAME)

LOG_LEVELS = {
    'quiet': logging.WARNING,
    'info': logging.INFO,
    'debug': logging.DEBUG,
}

TRACE_FORMATS = {name: '%.17g' for name in ('h', 'f', 'g', 'grad_dual_norm', 'vf_if_known')}
RESTART_FORMATS = {name: '%.17g' for name in ('R_p_sq', 'eps_p', 'inner_accuracy', 'dist_sq_if_known')}
BENCH_FORMATS = {name: '%.17g' for name in ('epsilon', 'f_gap', 'g_violation')}


def configure_logging() -> bool:
    """
    Attach a stderr handler to the package logger at the level named by
    ``MD_LOG``.

    Returns
    -------
    bool
        ``True`` unless the level is ``quiet``. Progress bars are shown
        only in that case.
    """
    name = os.environ.get(config.LOG_ENV_VAR, 'info').strip().lower()
    level = LOG_LEVELS.get(name)
    for handler in list(logger.handlers):
        if getattr(handler, '_mdcon_cli', False):
            logger.removeHandler(handler)
    handler = logging.StreamHandler(sys.stderr)
    handler._mdcon_cli = True
    handler.setFormatter(logging.Formatter('%(levelname)s %(name)s: %(message)s'))
    logger.addHandler(handler)
    logger.setLevel(logging.INFO if level is None else level)
    if level is None:
        logger.warning('Unknown %s=%s, using info', config.LOG_ENV_VAR, name)
        name = 'info'
    return name != 'quiet'


def build_parser() -> argparse.ArgumentParser:
    """
    The argument parser of ``mdcon``.

    Every option defaults to ``None`` so that only explicit flags
    override values from ``--config`` and ``--preset``.
    """
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument('--config', type=str, help='YAML file with run settings')
    common.add_argument('--preset', type=str, help='named run settings from the preset file')
    common.add_argument('--seed', type=int, help='seed of every random generator')
    common.add_argument('--out', type=str, help='output file or stem')

    solve_opts = argparse.ArgumentParser(add_help=False)
    solve_opts.add_argument('--instance', dest='instance_path', type=str, help='instance JSON file')
    solve_opts.add_argument('--algorithm', choices=('adaptive', 'partial', 'restart'))
    solve_opts.add_argument('--cap-multiplier', dest='cap_multiplier', type=float)
    solve_opts.add_argument('--r0-sq', dest='r0_sq', type=float)
    solve_opts.add_argument('--inner-accuracy', dest='inner_accuracy', choices=('phi', 'scaled'))

    parser = argparse.ArgumentParser(
        prog='mdcon',
        description='Mirror descent for convex problems with functional constraints'
    )
    sub = parser.add_subparsers(dest='command', required=True)

    gen = sub.add_parser('generate', parents=[common], help='write an instance file')
    gen.add_argument('--kind', type=str)
    gen.add_argument('--dim', type=int)
    gen.add_argument('--pieces', type=int)
    gen.add_argument('--mu', type=float)

    solve = sub.add_parser('solve', parents=[common, solve_opts], help='run a solver')
    solve.add_argument('--epsilon', type=float)
    solve.add_argument('--trace', type=str, help='trace CSV (per-restart CSV for restarts)')

    verify = sub.add_parser('verify', parents=[common, solve_opts], help='run a solver and check its guarantees')
    verify.add_argument('--epsilon', type=float)

    bench = sub.add_parser('bench', parents=[common, solve_opts], help='sweep the accuracy')
    bench.add_argument('--epsilon-list', dest='epsilon_list', type=parse_real_list)
    return parser


def make_config(args: argparse.Namespace) -> RunConfig:
    """
    Merge the preset, the ``--config`` file and the explicit flags, in
    increasing priority.
    """
    d = {}
    if args.config is not None:
        with open(args.config, 'r', encoding='UTF-8') as file:
            d.update(yaml.safe_load(file) or {})
    if args.preset is not None:
        d['preset'] = args.preset
    for key, value in vars(args).items():
        if key not in ('config', 'preset') and value is not None:
            d[key] = value
    return RunConfig.from_dict(d)


def _run(inst: ProblemInstance, cfg: RunConfig, eps: float, verbose: bool = False):
    match cfg.algorithm:
        case 'adaptive':
            return run_adaptive(inst, eps, cap_multiplier=cfg.cap_multiplier)
        case 'partial':
            return run_partial_adaptive(inst, eps)
        case 'restart':
            return run_restarted(
                inst, eps, R0_sq=cfg.r0_sq, inner_accuracy=cfg.inner_accuracy,
                seed=cfg.seed, verbose=verbose
            )
        case _:
            raise NotImplementedError(f'Algorithm {cfg.algorithm} not implemented.')


def cmd_generate(cfg: RunConfig, verbose: bool = False) -> int:
    """
    Write an instance file.
    """
    match cfg.kind:
        case 'max_quadratic':
            inst = generate_max_quadratic(cfg.dim, cfg.pieces, cfg.seed)
        case 'strongly_convex':
            inst = generate_strongly_convex(cfg.dim, cfg.pieces, cfg.seed, cfg.mu)
        case kind:
            inst = make_known_solution_instance(kind)
    save_instance(inst, cfg.out)
    logger.info('wrote %s (dim=%d) to %s', inst.name, inst.dim, cfg.out)
    return config.EXIT_OK


def cmd_solve(cfg: RunConfig, verbose: bool = False) -> int:
    """
    Run the selected algorithm, write the trace and print a summary line.
    """
    inst = load_instance(cfg.instance_path)
    start = time.perf_counter()
    result = _run(inst, cfg, cfg.epsilon, verbose)
    elapsed = time.perf_counter() - start
    if cfg.algorithm == 'restart':
        x_bar = result.final_point
        if cfg.trace is not None:
            write_table(result.to_table(), cfg.trace, formats=RESTART_FORMATS)
        summary = {
            'algorithm': 'restart',
            'eps': cfg.epsilon,
            'p_hat': result.p_hat,
            'N': result.total_inner_iterations,
            'iteration_bound': result.iteration_bound_total,
        }
        counts = f'p_hat={result.p_hat} N={result.total_inner_iterations}'
    else:
        x_bar = result.output_point
        if cfg.trace is not None:
            write_table(result.to_table(), cfg.trace, formats=TRACE_FORMATS)
        summary = result.summary()
        counts = (f'N={result.n_iterations} |I|={result.productive_count} '
                  f'|J|={result.nonproductive_count} stop={result.stop_reason}')
    f_bar = inst.objective.value(x_bar)
    g_bar = inst.constraint.value(x_bar)
    print(f'{counts} f(x_bar)={format_real(f_bar)} g(x_bar)={format_real(g_bar)} time={elapsed:.3f}s')
    if cfg.out is not None:
        summary.update({'f_output': f_bar, 'g_output': g_bar, 'output_point': x_bar})
        encoded = {
            key: ([format_real(v) for v in value] if isinstance(value, np.ndarray)
                  else format_real(value) if isinstance(value, float) else value)
            for key, value in summary.items()
        }
        cfg.out.write_text(json.dumps(encoded, indent=2) + '\n', encoding='UTF-8', newline='\n')
    return config.EXIT_OK


def checks_table(reports) -> Table:
    """
    The pass/fail table printed by ``verify``.
    """
    return Table(
        [
            [r.name for r in reports],
            [r.status for r in reports],
            np.array([r.lhs for r in reports], dtype=float),
            np.array([r.rhs for r in reports], dtype=float),
            np.array([r.margin for r in reports], dtype=float),
            [r.details for r in reports],
        ],
        names=('check', 'status', 'lhs', 'rhs', 'margin', 'details')
    )


def cmd_verify(cfg: RunConfig, verbose: bool = False) -> int:
    """
    Run the selected algorithm and every check that applies to it.
    """
    inst = load_instance(cfg.instance_path)
    result = _run(inst, cfg, cfg.epsilon, verbose)
    if cfg.algorithm == 'restart':
        reports = run_checks(inst, report=result, verbose=verbose)
    else:
        reports = run_checks(inst, trace=result, verbose=verbose)
    table = checks_table(reports)
    for name in ('lhs', 'rhs', 'margin'):
        table[name].format = '.6g'
    print('\n'.join(table.pformat(max_lines=-1, max_width=-1)))
    failed = [r for r in reports if not r.ok]
    for r in failed:
        logger.error('check %s failed: lhs=%s rhs=%s (%s)', r.name, format_real(r.lhs), format_real(r.rhs), r.details)
    return config.EXIT_CHECK_FAILED if failed else config.EXIT_OK


def _reference_value(inst: ProblemInstance) -> float:
    if inst.known_value is not None:
        return inst.known_value
    if inst.dim <= config.REFERENCE_MAX_DIM:
        return reference_solve(inst)[1]
    return None


def cmd_bench(cfg: RunConfig, verbose: bool = False) -> int:
    """
    Sweep the accuracy and write ``<out>.csv`` and ``<out>.dat``.

    Rows are ordered by decreasing accuracy parameter. ``f_gap`` is
    :math:`\\max\\{0, f(\\bar x) - f_*\\}` and ``g_violation`` is
    :math:`\\max\\{0, g(\\bar x)\\}`.
    """
    inst = load_instance(cfg.instance_path)
    f_star = _reference_value(inst)
    epsilons = sorted(cfg.epsilon_list, reverse=True)
    rows = []
    for eps in wrap_iterator(epsilons, verbose, desc='Bench', total=len(epsilons)):
        start = time.perf_counter()
        result = _run(inst, cfg, eps)
        elapsed = time.perf_counter() - start
        if cfg.algorithm == 'restart':
            x_bar = result.final_point
            theory = result.iteration_bound_total
            actual = result.total_inner_iterations
        else:
            x_bar = result.output_point
            bound = iteration_bound_adaptive if cfg.algorithm == 'adaptive' else iteration_bound_partial
            theory = bound(inst.M_g, inst.theta0_sq, eps)
            actual = result.n_iterations
        f_gap = np.nan if f_star is None else max(0.0, inst.objective.value(x_bar) - f_star)
        rows.append((eps, theory, actual, f_gap, max(0.0, inst.constraint.value(x_bar)), elapsed))
    table = Table(
        rows=rows,
        names=('epsilon', 'N_theory', 'N_actual', 'f_gap', 'g_violation', 'time'),
        dtype=(float, int, int, float, float, float)
    )
    table['f_gap'] = MaskedColumn(table['f_gap'], mask=np.isnan(table['f_gap']))
    csv_path, dat_path = get_output_paths(cfg.out, 'csv', 'dat')
    formats = dict(BENCH_FORMATS, time='%.6f')
    write_table(table, csv_path, formats=formats)
    write_table(table, dat_path, fmt='commented_header', formats=formats)
    print('\n'.join(table.pformat(max_lines=-1, max_width=-1)))
    logger.info('wrote %s and %s', csv_path, dat_path)
    return config.EXIT_OK


COMMAND_FUNCTIONS = {
    'generate': cmd_generate,
    'solve': cmd_solve,
    'verify': cmd_verify,
    'bench': cmd_bench,
}


def main(argv: List[str] = None) -> int:
    """
    Entry point of ``mdcon``.

    Parameters
    ----------
    argv : list of str, optional
        The arguments. Defaults to ``sys.argv[1:]``.

    Returns
    -------
    int
        The exit code.
    """
    verbose = configure_logging()
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:
        return config.EXIT_USAGE if exc.code else config.EXIT_OK
    try:
        cfg = make_config(args)
        cfg.validate()
        return COMMAND_FUNCTIONS[cfg.command](cfg, verbose)
    except InvariantViolation as exc:
        logger.error('%s', exc)
        return config.EXIT_CHECK_FAILED
    except (ValueError, OSError, KeyError, TypeError, NotImplementedError, yaml.YAMLError) as exc:
        logger.error('%s: %s', type(exc).__name__, exc)
        return config.EXIT_USAGE


if __name__ == '__main__':
    sys.exit(main())
