"""
Command-line entry point: ``python -m mmad <solve|bench|sweep|verify> ...``.
"""
import argparse
import logging
import shlex
import sys
from typing import List, Optional

from mmad.cli import bench, solve, sweep, verify
from mmad.core.config import LOG_DIR, LOG_LEVEL, PROJECT_NAME, VERSION
from mmad.core.errors import ConfigError, MMADError, SolverError
from mmad.core.logging import setup_logger

logger = logging.getLogger(__name__)


class ArgumentParser(argparse.ArgumentParser):
    """Usage errors become ConfigError instead of exiting."""

    def error(self, message: str):
        raise ConfigError(f"{self.prog}: {message}")


def build_parser() -> ArgumentParser:
    parser = ArgumentParser(prog="mmad", description=f"{PROJECT_NAME} {VERSION}")
    parser.add_argument("--log-dir", default=LOG_DIR, help="directory for mmad.log and error.log")
    parser.add_argument("--no-log-file", action="store_true", help="log to the console only")
    parser.add_argument("--log-level", default=LOG_LEVEL, choices=["DEBUG", "INFO", "WARNING", "ERROR"])
    parser.add_argument("--version", action="version", version=f"%(prog)s {VERSION}")
    subparsers = parser.add_subparsers(dest="command", required=True, parser_class=ArgumentParser)

    # Register subcommands
    solve.register(subparsers)
    bench.register(subparsers)
    sweep.register(subparsers)
    verify.register(subparsers)
    return parser


def _report(error: MMADError) -> int:
    print(error.to_line(), file=sys.stderr)
    return error.exit_code


def run(argv: Optional[List[str]] = None) -> int:
    """
    Parse and dispatch; returns the process exit code (0 ok, 1 config
    error, 2 solver failure, 3 verification failure).
    """
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except ConfigError as e:
        return _report(e)
    except SystemExit as e:
        return int(e.code or 0)

    setup_logger(None if args.no_log_file else args.log_dir, args.log_level)
    args.command_line = shlex.join(argv)
    try:
        return args.handler(args)
    except MMADError as e:
        logger.error(f"{args.command} failed: {e.detail}")
        return _report(e)
    except Exception as e:
        logger.exception(f"Unexpected error in {args.command}")
        return _report(SolverError(f"{type(e).__name__}: {str(e)}"))


def main() -> None:
    sys.exit(run())
