"""
DenseCode Lab - Main Entry Point
Command-line harness for the dense coding simulator and capacity analytics
"""

import argparse
import logging
import sys
from pathlib import Path

# Ensure the src directory is in the Python path
src_dir = Path(__file__).parent
if str(src_dir) not in sys.path:
    sys.path.insert(0, str(src_dir))

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_TOLERANCE = 3


class UsageError(Exception):
    """Bad command line"""


class ArgumentParser(argparse.ArgumentParser):
    """argparse without the print-and-exit on errors"""

    def error(self, message):
        raise UsageError(message)


def check_dependencies():
    """Check if all required dependencies are installed"""
    missing = []

    try:
        import numpy  # noqa: F401
    except ImportError:
        missing.append("numpy")

    try:
        import scipy  # noqa: F401
    except ImportError:
        missing.append("scipy")

    try:
        import yaml  # noqa: F401
    except ImportError:
        missing.append("pyyaml")

    try:
        import toml  # noqa: F401
    except ImportError:
        missing.append("toml")

    if missing:
        print("=" * 60, file=sys.stderr)
        print("MISSING DEPENDENCIES", file=sys.stderr)
        print("=" * 60, file=sys.stderr)
        print("\nThe following required packages are not installed:", file=sys.stderr)
        for pkg in missing:
            print(f"  - {pkg}", file=sys.stderr)
        print("\nPlease install them using:", file=sys.stderr)
        print("  pip install -r requirements.txt", file=sys.stderr)
        print("=" * 60, file=sys.stderr)
        return False
    return True


def _common_options() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument('--out', metavar='FILE', help="output file (default: stdout)")
    common.add_argument('--format', choices=('json', 'csv', 'text'), default='json')
    common.add_argument('--units', choices=('nats', 'bits'), default='nats')
    common.add_argument('--verbose', action='store_true', help="log progress to stderr")
    common.add_argument('--debug', action='store_true', help="debug logging")
    common.add_argument('--log-file', metavar='FILE', help="also log to this file")
    return common


def build_parser() -> ArgumentParser:
    """Argument parser for all subcommands"""
    from core.dense_protocol import DEFAULT_CHUNK_SIZE

    common = _common_options()
    parser = ArgumentParser(
        prog='densecode',
        description="Continuous-variable dense coding simulator and capacity analytics",
    )
    sub = parser.add_subparsers(dest='command', metavar='COMMAND', parser_class=ArgumentParser)
    sub.required = True

    capacity = sub.add_parser('capacity', parents=[common],
                              help="capacities of all schemes at one photon budget")
    capacity.add_argument('--nbar', type=float, required=True)

    optimize = sub.add_parser('optimize', parents=[common],
                              help="optimal squeezing/modulation split")
    optimize.add_argument('--nbar', type=float, required=True)

    sub.add_parser('breakeven', parents=[common],
                   help="break-even squeezing vs number and squeezed states")

    simulate = sub.add_parser('simulate', parents=[common],
                              help="Monte Carlo run of the protocol")
    simulate.add_argument('--r', type=float, help="two-mode squeezing parameter")
    budget = simulate.add_mutually_exclusive_group()
    budget.add_argument('--sigma2', type=float, help="modulation variance")
    budget.add_argument('--nbar', type=float, help="photon budget (uses the optimal split)")
    simulate.add_argument('--trials', type=int)
    simulate.add_argument('--seed', type=int, help="uint64 seed (default 0)")
    simulate.add_argument('--tolerance', type=float,
                          help="exit 3 if |estimate - analytic| exceeds this")
    simulate.add_argument('--workers', type=int, default=1)
    simulate.add_argument('--chunk-size', type=int, default=DEFAULT_CHUNK_SIZE)
    simulate.add_argument('--dump-trials', metavar='FILE', help="write every trial as CSV")
    simulate.add_argument('--preset', help="named preset")
    simulate.add_argument('--config', metavar='FILE', help="preset file (.yaml, .toml, .json)")

    sweep = sub.add_parser('sweep', parents=[common], help="capacity curves over nbar")
    sweep.add_argument('--nbar-min', type=float, required=True)
    sweep.add_argument('--nbar-max', type=float, required=True)
    sweep.add_argument('--points', type=int, required=True)
    sweep.add_argument('--scale', choices=('linear', 'log'), default='linear')

    return parser


def _log_level(args) -> int:
    if args.debug:
        return logging.DEBUG
    if args.verbose:
        return logging.INFO
    return logging.WARNING


def main(argv=None) -> int:
    """Main application entry point"""

    # Check dependencies first
    if not check_dependencies():
        return EXIT_USAGE

    # Import after dependency check
    from cli.commands import COMMANDS, check_tolerance
    from cli.output_writer import OutputWriter
    from core.errors import DenseCodingError, ToleranceExceeded
    from core.logger import setup_logging

    try:
        args = build_parser().parse_args(argv)
    except UsageError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE

    logger = setup_logging(_log_level(args), args.log_file)

    try:
        envelope = COMMANDS[args.command](args)
        OutputWriter.write(envelope, args.format, args.out)
        check_tolerance(envelope, getattr(args, 'tolerance', None))
    except ToleranceExceeded as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_TOLERANCE
    except DenseCodingError as e:
        logger.debug("Command %s failed", args.command, exc_info=True)
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except (OverflowError, FloatingPointError) as e:
        logger.debug("Command %s failed", args.command, exc_info=True)
        print(f"error: numeric overflow ({e})", file=sys.stderr)
        return EXIT_USAGE
    except OSError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE

    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
