"""
The closed toxic-class taxonomy, ordered by severity (most severe first), and
the label spaces a classification head can be trained over.
"""

from enum import Enum
from typing import Dict, Iterable, Sequence, Tuple

from .chat_errors import EmptyLineError


class ToxicClass(Enum):
    """Toxic classes in descending severity; declaration order is the rank."""

    HATE_HARASSMENT = "hate_harassment"
    THREATS = "threats"
    MINOR_ENDANGERMENT = "minor_endangerment"
    EXTREMISM = "extremism"
    SCAMS_ADS = "scams_ads"
    INSULTS_FLAMING = "insults_flaming"
    SPAM = "spam"
    OTHER_OFFENSIVE = "other_offensive"
    NON_TOXIC = "non_toxic"

    @property
    def severity_rank(self) -> int:
        return _RANKS[self]

    @property
    def is_toxic(self) -> bool:
        return self is not ToxicClass.NON_TOXIC

    @classmethod
    def parse(cls, name: str) -> "ToxicClass":
        """Accept snake_case values as well as enum member names."""
        try:
            return cls(name)
        except ValueError:
            try:
                return cls[name.upper()]
            except KeyError:
                raise ValueError(f"Unknown toxic class: {name!r}") from None


_RANKS: Dict[ToxicClass, int] = {c: i for i, c in enumerate(ToxicClass)}


def severity_rank(c: ToxicClass) -> int:
    return c.severity_rank


def most_severe(classes: Iterable[ToxicClass]) -> ToxicClass:
    return min(classes, key=severity_rank)


def line_class_from_tokens(labels: Sequence[ToxicClass]) -> ToxicClass:
    """
    Collapse token labels into the line label: the most severe class present.

    Parameters
    ----------
    labels : Sequence[ToxicClass]
        One class per token of the line.

    Returns
    -------
    ToxicClass
        NonToxic only when every token is NonToxic.

    Raises
    ------
    EmptyLineError
        If ``labels`` is empty.
    """
    if len(labels) == 0:
        raise EmptyLineError()
    return most_severe(labels)


class LabelSpace:
    """
    An ordered subset of :class:`ToxicClass` used as the output classes of a
    model head. NonToxic is always a member.

    Parameters
    ----------
    name : str
        Short name stored in checkpoints and configs.
    classes : Sequence[ToxicClass]
        Head classes; the index of a class is its output unit.
    """

    def __init__(self, name: str, classes: Sequence[ToxicClass]):
        if ToxicClass.NON_TOXIC not in classes:
            raise ValueError(f"Label space {name} must contain non_toxic")
        if len(set(classes)) != len(classes):
            raise ValueError(f"Label space {name} repeats a class")
        self.name = name
        self.classes: Tuple[ToxicClass, ...] = tuple(
            sorted(classes, key=severity_rank)
        )
        self._index = {c: i for i, c in enumerate(self.classes)}

    def __len__(self) -> int:
        return len(self.classes)

    def __contains__(self, c: object) -> bool:
        return c in self._index

    def __eq__(self, other: object) -> bool:
        return isinstance(other, LabelSpace) and self.classes == other.classes

    def __hash__(self) -> int:
        return hash(self.classes)

    def __repr__(self) -> str:
        return f"LabelSpace({self.name}, {[c.value for c in self.classes]})"

    @property
    def non_toxic_index(self) -> int:
        return self._index[ToxicClass.NON_TOXIC]

    def index(self, c: ToxicClass) -> int:
        try:
            return self._index[c]
        except KeyError:
            raise ValueError(f"{c.value} is not in label space {self.name}") from None

    def project(self, c: ToxicClass) -> ToxicClass:
        """Map any taxonomy class into this space (toxic classes outside it
        fall back to the least severe toxic member)."""
        if c in self._index:
            return c
        if not c.is_toxic:
            return ToxicClass.NON_TOXIC
        toxic = [k for k in self.classes if k.is_toxic]
        return toxic[-1]


FULL = LabelSpace("full", list(ToxicClass))
DOTA = LabelSpace(
    "dota",
    [ToxicClass.INSULTS_FLAMING, ToxicClass.OTHER_OFFENSIVE, ToxicClass.NON_TOXIC],
)
BINARY = LabelSpace("binary", [ToxicClass.OTHER_OFFENSIVE, ToxicClass.NON_TOXIC])

LABEL_SPACES: Dict[str, LabelSpace] = {s.name: s for s in (FULL, DOTA, BINARY)}


def get_label_space(name: str) -> LabelSpace:
    try:
        return LABEL_SPACES[name]
    except KeyError:
        options = ", ".join(LABEL_SPACES)
        raise ValueError(f"Unknown label space {name!r}, choose from: {options}")
