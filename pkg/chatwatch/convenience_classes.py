from abc import ABC, abstractmethod
from argparse import ArgumentParser, _ActionsContainer, _SubParsersAction
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, List


class ArgumentWrapper(ABC):
    """Declarative CLI element that can attach itself to a parser."""

    @abstractmethod
    def add_to(self, parser: Any) -> None:
        raise NotImplementedError("Implement this method.")


@dataclass
class Argument(ArgumentWrapper):
    flags: List[str]
    kwargs: Dict[str, Any] = field(default_factory=dict)

    def add_to(self, parser: _ActionsContainer) -> None:
        if not isinstance(parser, _ActionsContainer):
            raise TypeError(
                f"Argument {self.flags} expected an argument container, received {type(parser)}."
            )
        parser.add_argument(*self.flags, **self.kwargs)


@dataclass
class ExclusiveArgGroup(ArgumentWrapper):
    args: List[Argument]
    required: bool = False

    def add_to(self, parser: ArgumentParser) -> None:
        group = parser.add_mutually_exclusive_group(required=self.required)
        for arg in self.args:
            arg.add_to(group)


@dataclass
class Subcommand(ArgumentWrapper):
    """
    A subcommand bound to the function that runs it. The function receives
    the parsed arguments as a dict and returns an exit code.
    """

    func: Callable[[Dict[str, Any]], int]
    name: str
    argsets: List[ArgumentWrapper]
    kwargs: Dict[str, Any] = field(default_factory=dict)

    def add_to(self, subparsers: _SubParsersAction) -> ArgumentParser:
        if not isinstance(subparsers, _SubParsersAction):
            raise TypeError(
                f"Subcommand {self.name} expected type _SubParsersAction, "
                f"received {type(subparsers)}."
            )
        subparser = subparsers.add_parser(self.name, **self.kwargs)
        for argset in self.argsets:
            argset.add_to(subparser)
        subparser.set_defaults(func=self.func)
        return subparser
