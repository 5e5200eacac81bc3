import re
from collections import Counter
from pathlib import Path
from typing import Dict, Iterable, List, Optional, Sequence, Union

PAD, UNK, CLS, SEP = "[PAD]", "[UNK]", "[CLS]", "[SEP]"
SPECIAL_TOKENS = (PAD, UNK, CLS, SEP)
TOKEN_PATTERN = re.compile(r"\w+|[^\w\s]", re.UNICODE)


def marker_tokens(n_players: int = 10, n_teams: int = 2) -> List[str]:
    """In-line metadata markers: ``[p0]..``, ``[t0]..``, ``[team]``, ``[all]``."""
    return (
        [f"[p{i}]" for i in range(n_players)]
        + [f"[t{i}]" for i in range(n_teams)]
        + ["[team]", "[all]"]
    )


class Tokenizer:
    """
    Lowercasing word/punctuation tokenizer over a fixed vocabulary.

    The vocabulary starts with ``[PAD] [UNK] [CLS] [SEP]`` followed by the
    in-line markers and then corpus words by descending frequency. A vocab
    file holds one token per line, id = line number, so any word-level vocab
    can be dropped in.
    """

    def __init__(self, vocab: Sequence[str], lowercase: bool = True):
        if tuple(vocab[: len(SPECIAL_TOKENS)]) != SPECIAL_TOKENS:
            raise ValueError(f"Vocabulary must start with {list(SPECIAL_TOKENS)}")
        if len(set(vocab)) != len(vocab):
            raise ValueError("Vocabulary contains duplicate tokens")
        self.vocab: List[str] = list(vocab)
        self.lowercase = lowercase
        self.token_to_id: Dict[str, int] = {t: i for i, t in enumerate(self.vocab)}
        self.pad_id = self.token_to_id[PAD]
        self.unk_id = self.token_to_id[UNK]
        self.cls_id = self.token_to_id[CLS]
        self.sep_id = self.token_to_id[SEP]

    @classmethod
    def build(
        cls,
        texts: Iterable[str],
        n_players: int = 10,
        n_teams: int = 2,
        min_frequency: int = 1,
        max_size: Optional[int] = None,
        lowercase: bool = True,
    ) -> "Tokenizer":
        counts: Counter = Counter()
        for text in texts:
            counts.update(_split(text, lowercase))
        reserved = list(SPECIAL_TOKENS) + marker_tokens(n_players, n_teams)
        words = [
            w
            for w, n in sorted(counts.items(), key=lambda kv: (-kv[1], kv[0]))
            if n >= min_frequency and w not in reserved
        ]
        if max_size is not None:
            words = words[: max(0, max_size - len(reserved))]
        return cls(reserved + words, lowercase=lowercase)

    def __len__(self) -> int:
        return len(self.vocab)

    @property
    def vocab_size(self) -> int:
        return len(self.vocab)

    def tokenize(self, text: str) -> List[str]:
        return _split(text, self.lowercase)

    def convert_tokens_to_ids(self, tokens: Iterable[str]) -> List[int]:
        return [self.token_to_id.get(t, self.unk_id) for t in tokens]

    def convert_ids_to_tokens(self, ids: Iterable[int]) -> List[str]:
        return [self.vocab[i] for i in ids]

    def encode(self, text: str) -> List[int]:
        return self.convert_tokens_to_ids(self.tokenize(text))

    def count(self, text: str) -> int:
        return len(self.tokenize(text))

    def marker_id(self, marker: str) -> int:
        try:
            return self.token_to_id[marker]
        except KeyError:
            raise KeyError(f"Marker {marker} is not in the vocabulary") from None

    def save(self, path: Union[str, Path]) -> None:
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text("\n".join(self.vocab) + "\n", encoding="utf-8")

    @classmethod
    def load(cls, path: Union[str, Path], lowercase: bool = True) -> "Tokenizer":
        lines = Path(path).read_text(encoding="utf-8").splitlines()
        return cls([ln for ln in lines if ln], lowercase=lowercase)


def _split(text: str, lowercase: bool) -> List[str]:
    if lowercase:
        text = text.lower()
    return TOKEN_PATTERN.findall(text)
