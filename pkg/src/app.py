#pylint: disable=missing-docstring, line-too-long, trailing-whitespace
import argparse
import logging
import pathlib as pl
import sys
from typing import List, Optional

from backend.errors import SolverError
from backend.settings import SETTINGS
from commands import registry


log = logging.getLogger('app')


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog='app', description="Guaranteed-precision Godunov solver for symmetric hyperbolic systems.")
    verbosity = parser.add_mutually_exclusive_group()
    verbosity.add_argument('-v', '--verbose', action='store_true', help="debug logging")
    verbosity.add_argument('-q', '--quiet', action='store_true', help="errors only")
    parser.add_argument('--config', type=pl.Path, default=None, help="alternative config.hjson")
    sub = parser.add_subparsers(dest='command', required=True, metavar='command')
    for name in registry.compile_registry()['name']:
        entry = registry.get_entry(name)
        command_parser = sub.add_parser(name, help=entry['help'], description=entry['help'])
        entry['configure'](command_parser)
    return parser


def configure_logging(verbose:bool=False, quiet:bool=False):
    level = logging.DEBUG if verbose else logging.ERROR if quiet else getattr(logging, str(SETTINGS.logging['level']).upper(), logging.WARNING)
    logging.basicConfig(level=level, format="%(asctime)s %(levelname)s %(name)s: %(message)s", stream=sys.stderr, force=True)


def main(argv:Optional[List[str]]=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.config is not None:
            SETTINGS.reload_config(args.config)
        configure_logging(args.verbose, args.quiet)
        log.debug(f"main({args.command=})")
        return registry.get_entry(args.command)['run'](args)
    except SolverError as e:
        log.debug("command failed", exc_info=True)
        print(f"error: {e}", file=sys.stderr)
        return e.exit_code
    except OSError as e:
        print(f"error: {e}", file=sys.stderr)
        return 3


if __name__ == '__main__':
    sys.exit(main())
