import math
from dataclasses import dataclass
from typing import List, Sequence, Tuple

import numpy as np

from chatwatch.modules.chat import MatchSession

from .adapter_errors import SplitError


@dataclass(frozen=True)
class CorpusSplit:
    train: List[MatchSession]
    validation: List[MatchSession]
    test: List[MatchSession]

    @property
    def sizes(self) -> Tuple[int, int, int]:
        return (len(self.train), len(self.validation), len(self.test))


def part_sizes(n: int, ratios: Sequence[float]) -> List[int]:
    """
    Largest-remainder allocation of ``n`` items, with at least one item per
    part.
    """
    if n < len(ratios):
        raise SplitError(f"{n} matches cannot fill {len(ratios)} parts", n)
    exact = [round(n * r, 9) for r in ratios]
    sizes = [math.floor(x) for x in exact]
    by_remainder = sorted(range(len(ratios)), key=lambda i: (-(exact[i] - sizes[i]), i))
    for i in by_remainder[: n - sum(sizes)]:
        sizes[i] += 1
    for i in range(len(sizes)):
        while sizes[i] == 0:
            donor = max(range(len(sizes)), key=lambda j: sizes[j])
            sizes[donor] -= 1
            sizes[i] += 1
    return sizes


def split_corpus(
    corpus: Sequence[MatchSession],
    ratios: Sequence[float] = (0.6, 0.2, 0.2),
    seed: int = 0,
) -> CorpusSplit:
    """
    Partition whole matches into train/validation/test. Each part keeps
    corpus order.

    Raises
    ------
    SplitError
        If the ratios are invalid or there are fewer matches than parts.
    """
    if len(ratios) != 3 or any(r <= 0 for r in ratios):
        raise SplitError(f"need three positive ratios, got {list(ratios)}")
    if abs(sum(ratios) - 1.0) > 1e-9:
        raise SplitError(f"ratios must sum to 1, got {sum(ratios)}")
    ids = [s.match_id for s in corpus]
    if len(set(ids)) != len(ids):
        raise SplitError("match ids are not unique")

    sizes = part_sizes(len(corpus), ratios)
    order = np.random.default_rng(seed).permutation(len(corpus))
    bounds = np.cumsum([0] + sizes)
    parts = [
        [corpus[i] for i in sorted(order[bounds[k] : bounds[k + 1]])] for k in range(3)
    ]
    return CorpusSplit(*parts)
