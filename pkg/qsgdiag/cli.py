# -*- coding: utf-8 -*-
"""Command line interface: ``qsgdiag diagonalize`` and ``qsgdiag basis``."""

import argparse
import contextlib
import json
import sys
from concurrent.futures import ThreadPoolExecutor

from .errors import ConvergenceError
from .multipoles import spinsystem, build_basis, basis_to_dict
from .pipeline import load_matrix, diagonalize_quantum, emit_report

EXIT_COMPLETE = 0
EXIT_ERROR = 1
EXIT_INCOMPLETE = 2


def _shots(value):
    if value == 'exact':
        return 0
    try:
        shots = int(value)
    except ValueError:
        raise argparse.ArgumentTypeError("expected an integer or 'exact'")
    if shots < 0:
        raise argparse.ArgumentTypeError("must be non-negative")
    return shots


def build_parser():
    parser = argparse.ArgumentParser(
        prog='qsgdiag',
        description="Diagonalize hermitean matrices by simulated "
                    "Stern-Gerlach measurements.")
    sub = parser.add_subparsers(dest='command', required=True)

    diag = sub.add_parser('diagonalize', help="Run the five-step procedure")
    diag.add_argument('--input', required=True,
                      help="Matrix file or inline JSON")
    diag.add_argument('--seed', type=int, default=None,
                      help="Master seed, falls back to $QSGDIAG_SEED")
    diag.add_argument('--epsilon', type=float, default=1e-6)
    diag.add_argument('--max-runs', type=int, default=10**6)
    diag.add_argument('--shots', type=_shots, default=0,
                      help="Shots per multipole, or 'exact'")
    diag.add_argument('--noise-sigma', type=float, default=0.0)
    diag.add_argument('--cluster-tol', type=float, default=0.0)
    diag.add_argument('--format', choices=['text', 'json'], default='text')
    diag.add_argument('--output', default=None)
    diag.add_argument('--check-maxwell', action='store_true')
    diag.add_argument('--tomography', choices=['experiment', 'calculate'],
                      default='experiment')
    diag.add_argument('--workers', type=int, default=1,
                      help="Threads for measurement and tomography")
    diag.add_argument('--verbose', action='store_true',
                      help="Progress messages on stderr")

    basis = sub.add_parser('basis', help="Dump the multipole basis")
    basis.add_argument('--spin', required=True, help="Spin, e.g. 1/2 or 3/2")
    basis.add_argument('--format', choices=['json'], default='json')
    basis.add_argument('--output', default=None)
    return parser


def _diagonalize(args):
    A = load_matrix(args.input)
    config = {'seed': args.seed,
              'epsilon': args.epsilon,
              'max_runs': args.max_runs,
              'shots': args.shots,
              'noise_sigma': args.noise_sigma,
              'cluster_tol': args.cluster_tol,
              'check_maxwell': args.check_maxwell,
              'tomography': args.tomography,
              'verbose': args.verbose}
    if args.workers < 1:
        raise ValueError("`--workers` must be positive.")
    with contextlib.redirect_stdout(sys.stderr):
        if args.workers > 1:
            with ThreadPoolExecutor(max_workers=args.workers) as pool:
                report = diagonalize_quantum(A, config, pool=pool)
        else:
            report = diagonalize_quantum(A, config)
    emit_report(report, args.format, args.output)
    return EXIT_COMPLETE if report['complete'] else EXIT_INCOMPLETE


def _basis(args):
    basis = build_basis(spinsystem(s=args.spin))
    text = json.dumps(basis_to_dict(basis), sort_keys=True, indent=2) + "\n"
    if args.output is None:
        sys.stdout.write(text)
    else:
        with open(args.output, 'w') as f:
            f.write(text)
    return EXIT_COMPLETE


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        if args.command == 'diagonalize':
            return _diagonalize(args)
        return _basis(args)
    except (ValueError, OSError, ConvergenceError) as err:
        print("qsgdiag: error: {}".format(err), file=sys.stderr)
        return EXIT_ERROR


if __name__ == '__main__':
    sys.exit(main())
