import argparse

from .arguments import CLI


class ArgumentParser(argparse.ArgumentParser):
    """Top-level parser carrying the logging flags shared by every subcommand."""

    def __init__(self, *args, **kwargs):
        kwargs.setdefault("prog", "chatwatch")
        kwargs.setdefault(
            "description", "Toxic span detection and moderation reports for in-game chat."
        )
        super().__init__(*args, **kwargs)
        self.add_argument(
            "-v", "--verbose", action="store_true", help="Log at DEBUG level."
        )
        self.add_argument(
            "--log-file",
            action="store_true",
            help="Also log to ~/.chatwatch/logs/<MM-YYYY>.log.",
        )


def new_parser() -> ArgumentParser:
    parser = ArgumentParser()
    # subcommands use the plain parser so the logging flags stay top-level
    _parsers = parser.add_subparsers(title="subcommands", parser_class=argparse.ArgumentParser)

    for sc in CLI:
        sc.add_to(_parsers)

    return parser
