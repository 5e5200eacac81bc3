"""argparse ``type=`` converters."""

from argparse import ArgumentTypeError
from pathlib import Path
from typing import Tuple

from chatwatch.modules.context import Scope


def _items(string: str) -> Tuple[str, ...]:
    items = tuple(s.strip() for s in string.split(",") if s.strip())
    if not items:
        raise ArgumentTypeError("expected a comma-separated list")
    return items


def seed_list(string: str) -> Tuple[int, ...]:
    """``"1,2"`` -> ``(1, 2)``"""
    try:
        seeds = tuple(int(s) for s in _items(string))
    except ValueError:
        raise ArgumentTypeError(f"invalid seed list: {string!r}") from None
    if any(s < 0 for s in seeds):
        raise ArgumentTypeError("seeds must be non-negative")
    return seeds


def precision_list(string: str) -> Tuple[float, ...]:
    """``"0.90,0.99,0.999"`` -> ``(0.9, 0.99, 0.999)``; each in (0, 1]."""
    try:
        values = tuple(float(s) for s in _items(string))
    except ValueError:
        raise ArgumentTypeError(f"invalid precision list: {string!r}") from None
    for p in values:
        if not 0.0 < p <= 1.0:
            raise ArgumentTypeError(f"precision {p} outside (0, 1]")
    return values


def threshold_list(string: str) -> Tuple[float, ...]:
    try:
        values = tuple(float(s) for s in _items(string))
    except ValueError:
        raise ArgumentTypeError(f"invalid threshold list: {string!r}") from None
    for t in values:
        if not 0.0 <= t <= 1.0:
            raise ArgumentTypeError(f"threshold {t} outside [0, 1]")
    return values


def named_path(string: str) -> Tuple[str, Path]:
    """``"shooter=runs/shooter/model.pt"`` -> ``("shooter", Path(...))``"""
    name, sep, path = string.partition("=")
    if not sep or not name.strip() or not path.strip():
        raise ArgumentTypeError(f"expected NAME=PATH, got {string!r}")
    return name.strip(), Path(path.strip()).expanduser()


def positive_int(string: str) -> int:
    try:
        value = int(string)
    except ValueError:
        raise ArgumentTypeError(f"invalid integer: {string!r}") from None
    if value < 1:
        raise ArgumentTypeError(f"expected a positive integer, got {value}")
    return value


def scope(string: str) -> Scope:
    try:
        return Scope.parse(string)
    except ValueError as e:
        raise ArgumentTypeError(str(e)) from None


def name_list(string: str) -> Tuple[str, ...]:
    return tuple(s.lower() for s in _items(string))
