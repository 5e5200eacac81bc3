from typing import List, Sequence, Tuple, TypeVar

T = TypeVar("T")


def truncate_pair(
    history_tokens: Sequence[T], current_tokens: Sequence[T], max_tokens: int
) -> Tuple[List[T], List[T]]:
    """
    Fit history + current line into ``max_tokens``: drop the oldest history
    tokens first, and cut the current line on the right only once no history
    is left.

    Parameters
    ----------
    history_tokens : Sequence[T]
        History, oldest first.
    current_tokens : Sequence[T]
        The current line.
    max_tokens : int
        Budget for both regions together (separators added by the caller
        count against it only if they are included in the sequences).

    Returns
    -------
    Tuple[List[T], List[T]]
        A suffix of the history and a prefix of the current line.
    """
    if max_tokens < 1:
        raise ValueError(f"max_tokens must be >= 1, got {max_tokens}")

    history, current = list(history_tokens), list(current_tokens)
    if len(history) + len(current) <= max_tokens:
        return history, current

    room = max_tokens - len(current)
    if room > 0:
        return history[len(history) - room :], current
    return [], current[:max_tokens]
