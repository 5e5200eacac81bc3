from .parser_factory import new_parser
from .parsing import process_command

__all__ = [
    "new_parser",
    "process_command",
]
