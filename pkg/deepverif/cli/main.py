"""Entry point of the ``deepverif`` command."""
import argparse
import logging
import sys
from dataclasses import fields

from deepverif import __version__
from deepverif.cli.commands import (cmd_ensemble, cmd_score,
                                    cmd_stations_validate, cmd_train)
from deepverif.cli.config import RunConfig, load_config
from deepverif.cli.report import cmd_report
from deepverif.exceptions import DeepverifError

logger = logging.getLogger(__name__)

COMMANDS = {
    "score": (cmd_score, "score forecast files against truth"),
    "ensemble": (cmd_ensemble, "run and score a perturbation ensemble"),
    "train": (cmd_train, "fit the toy forecaster"),
    "stations-validate": (cmd_stations_validate,
                          "check a station observation file"),
}


def _config_flags():
    """Parent parser with one --flag per RunConfig field."""
    parser = argparse.ArgumentParser(add_help=False)
    parser.add_argument("--config", default=argparse.SUPPRESS,
                        help="JSON run configuration")
    parser.add_argument("--verbose", "-v", action="store_true",
                        default=argparse.SUPPRESS, help="debug logging")
    for item in fields(RunConfig):
        kwargs = dict(item.metadata)
        flag = "--" + item.name.replace("_", "-")
        parser.add_argument(flag, dest=item.name, default=argparse.SUPPRESS,
                            **kwargs)
    return parser


def build_parser():
    parents = [_config_flags()]
    # config flags are accepted before and after the subcommand
    parser = argparse.ArgumentParser(
        prog="deepverif", parents=parents,
        description="Verification of gridded weather forecasts.")
    parser.add_argument("--version", action="version",
                        version="%(prog)s {}".format(__version__))
    sub = parser.add_subparsers(dest="command", required=True)
    for name, (_, help_text) in COMMANDS.items():
        sub.add_parser(name, parents=parents, help=help_text)

    report = sub.add_parser("report", parents=parents,
                            help="plot-ready series from score files")
    report.add_argument("scores", nargs="+", help="score files to compare")
    report.add_argument("--baseline", help="baseline score file")
    return parser


def main(argv=None):
    """
    Runs one subcommand.

    :return: exit status, 0 on success and 1 on any deepverif error or
        invalid configuration
    """
    args = build_parser().parse_args(argv)
    verbose = getattr(args, "verbose", False)
    logging.basicConfig(
        level=logging.DEBUG if verbose else logging.INFO,
        format="%(levelname)s %(name)s: %(message)s")

    overrides = {name: getattr(args, name)
                 for name in RunConfig.field_names() if hasattr(args, name)}
    try:
        config = load_config(getattr(args, "config", None), overrides)
        if args.command == "report":
            cmd_report(args.scores, config.out, args.baseline)
        else:
            COMMANDS[args.command][0](config)
    except (DeepverifError, ValueError, OSError) as error:
        print("deepverif {}: error: {}".format(args.command, error),
              file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
