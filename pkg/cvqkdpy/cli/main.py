import argparse
import logging
import sys
from typing import List, Optional

from ..errors import CVQKDError
from ..utils.serialize import FORMATS
from .commands import COMMANDS, EXIT_ERROR
from .config import load_run_config
from .presets import PRESETS

logger = logging.getLogger(__name__)

DESCRIPTIONS = {
    "keyrate": "evaluate one key rate",
    "sweep": "sweep distance, noise, T_PS or photon number (figure presets)",
    "optimize-tps": "optimal subtraction transmittance at one distance",
    "noise": "tolerable excess noise at one distance or over a distance grid",
    "max-distance": "largest distance with a rate above the cutoff",
    "compare": "no subtraction against subtraction at Alice, Bob and both",
    "oracle-check": "verify the subtracted covariance against the Fock and integral oracles",
}


class ArgumentParser(argparse.ArgumentParser):
    """Usage errors exit with 1; 2 is reserved for runs without a positive key"""

    def error(self, message: str):
        self.print_usage(sys.stderr)
        self.exit(EXIT_ERROR, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    common = ArgumentParser(add_help=False)
    common.add_argument("--config", help="YAML or JSON run configuration")
    common.add_argument("--preset", choices=sorted(PRESETS), help="figure preset")
    common.add_argument(
        "--set", dest="overrides", action="append", default=[], metavar="SECTION.KEY=VALUE",
        help="override one config value (repeatable)",
    )
    common.add_argument("--out", help="output file (default: standard output)")
    common.add_argument("--format", choices=FORMATS, help="output format")
    common.add_argument("--threads", type=int, help="worker threads for sweeps")
    verbosity = common.add_mutually_exclusive_group()
    verbosity.add_argument("-v", "--verbose", action="store_true", help="debug logging")
    verbosity.add_argument("-q", "--quiet", action="store_true", help="warnings and errors only")

    parser = ArgumentParser(
        prog="cvqkd", description="Two-way CV-QKD key rates with virtual photon subtraction"
    )
    sub = parser.add_subparsers(dest="command", metavar="COMMAND")
    sub.required = True
    for name in COMMANDS:
        sub.add_parser(name, parents=[common], help=DESCRIPTIONS[name], description=DESCRIPTIONS[name])
    return parser


def setup_logging(verbose: bool = False, quiet: bool = False):
    level = logging.DEBUG if verbose else logging.WARNING if quiet else logging.INFO
    logging.basicConfig(level=level, format="%(asctime)s - %(levelname)s - %(message)s", stream=sys.stderr)


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    setup_logging(args.verbose, args.quiet)

    output = {
        key: value
        for key, value in (("path", args.out), ("format", args.format), ("threads", args.threads))
        if value is not None
    }

    try:
        run = load_run_config(args.config, args.preset, args.overrides, output)
        return COMMANDS[args.command](run)
    except CVQKDError as exc:
        logger.error("%s", exc)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
