"""
Command-line interface for the indefinite OGA experiments.
"""

import argparse
import json
import logging
import sys

from indefinite_oga.errors import OGAError
from indefinite_oga.experiments import emit_table, list_shipped_configs, load_config, run_experiment
from indefinite_oga.experiments.settings import OUTPUT_FORMATS


def run_command(args):
    """
    Run one experiment and print its convergence table.
    """
    overrides = list(args.override or [])
    if args.out:
        overrides.append(f"output_dir={json.dumps(args.out)}")
    if args.format:
        overrides.append(f"format={json.dumps(args.format)}")
    if args.verify_grid is not None:
        overrides.append(f"verify_grid={args.verify_grid}")

    cfg = load_config(args.config, overrides)
    result = run_experiment(cfg, progress=not args.quiet)

    table_format = 'markdown' if cfg.format == 'markdown' else 'csv'
    print(emit_table(result.rows, table_format), end='')


def list_command(args):
    """
    List the experiment files shipped with the package.
    """
    paths = list_shipped_configs()
    if not paths:
        print("No experiment files found.")
        return

    for path in paths:
        with open(path, encoding='utf-8') as handle:
            data = json.load(handle)
        print(f"{path.stem:<24} preset={data.get('preset')} parameter={data.get('parameter')}")


def init_parser():
    """
    Initialize argument parser.
    """
    parser = argparse.ArgumentParser(
        description='Indefinite OGA - orthogonal greedy ReLU^k solver for indefinite elliptic problems'
    )
    parser.add_argument('--log-level', default='WARNING',
                        choices=['DEBUG', 'INFO', 'WARNING', 'ERROR'], help='Library log level')
    subparsers = parser.add_subparsers(dest='command', help='Command to execute')

    # run command
    run_parser = subparsers.add_parser('run', help='Run an experiment')
    run_parser.add_argument('--config', required=True,
                            help='Path to an experiment JSON file or the name of a shipped one')
    run_parser.add_argument('--override', action='append', metavar='KEY=VALUE',
                            help='Override a config key (repeatable)')
    run_parser.add_argument('--out', help='Output directory')
    run_parser.add_argument('--format', choices=OUTPUT_FORMATS, help='Table format')
    run_parser.add_argument('--verify-grid', type=int, help='Cell refinement factor for error norms')
    run_parser.add_argument('--quiet', action='store_true', help='Hide the progress bar')

    # list command
    subparsers.add_parser('list', help='List shipped experiment files')

    return parser


def main(argv=None):
    """
    Main entry point for the command-line interface.

    Returns:
        Process exit code
    """
    parser = init_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=getattr(logging, args.log_level),
                        format='%(asctime)s %(levelname)s %(name)s: %(message)s')

    try:
        if args.command == 'run':
            run_command(args)
        elif args.command == 'list':
            list_command(args)
        else:
            parser.print_help()
    except OGAError as exc:
        print(f"Error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == '__main__':
    sys.exit(main())
