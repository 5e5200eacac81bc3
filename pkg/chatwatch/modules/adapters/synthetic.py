"""
Seeded synthetic chat corpora with planted toxicity rules.

``keyword``
    Keyword tokens are toxic wherever they appear.
``context``
    Some matches get a trigger line in their first half. A context word in
    the second half is toxic only when a trigger line is visible to the
    speaker under the global scope.
``speaker``
    A taunt word is toxic only when the last line visible to the speaker
    under the global scope came from the other team.
"""

import re
from dataclasses import dataclass, field, fields
from typing import Any, Dict, List, Mapping, Optional, Sequence, Tuple

import numpy as np

from chatwatch.cwlogger import logger
from chatwatch.modules.chat import ChatLine, ChatType, MatchSession, ToxicClass
from chatwatch.modules.context import Scope, select_history

from .adapter_errors import SyntheticConfigError

RULES = ("keyword", "context", "speaker")
WORD = re.compile(r"^[a-z0-9_]+$")

FILLER_WORDS = (
    "push", "mid", "top", "bot", "rotate", "defend", "attack", "wait", "go",
    "now", "here", "there", "site", "left", "right", "back", "nice", "shot",
    "reload", "heal", "need", "ammo", "plant", "defuse", "watch", "flank",
    "drone", "camera", "roof", "window", "door", "stairs", "ok", "yes", "no",
    "lol", "wp", "gl", "hf", "one", "two", "low", "help", "me", "you", "they",
)
DEFAULT_KEYWORDS = (
    ("noob", "insults_flaming"),
    ("idiot", "insults_flaming"),
    ("loser", "insults_flaming"),
    ("kys", "threats"),
    ("freegold", "scams_ads"),
    ("spamlink", "spam"),
)


@dataclass(frozen=True)
class SyntheticConfig:
    n_matches: int = 40
    min_lines: int = 12
    max_lines: int = 24
    min_words: int = 2
    max_words: int = 6
    team_size: int = 5
    num_teams: int = 2
    rules: Tuple[str, ...] = ("keyword",)
    keywords: Tuple[Tuple[str, str], ...] = DEFAULT_KEYWORDS
    context_words: Tuple[str, ...] = ("rekt", "owned", "destroyed")
    trigger_words: Tuple[str, ...] = ("surrender",)
    taunt_words: Tuple[str, ...] = ("ez", "sit")
    filler_words: Tuple[str, ...] = FILLER_WORDS
    keyword_rate: float = 0.25
    context_rate: float = 0.5
    trigger_probability: float = 0.5
    all_chat_rate: float = 0.3
    match_prefix: str = "syn"
    context_class: str = "insults_flaming"

    def __post_init__(self):
        unknown = set(self.rules) - set(RULES)
        if not self.rules or unknown:
            raise SyntheticConfigError("rules", f"choose from {list(RULES)}, got {list(self.rules)}")
        for name in ("n_matches", "min_words", "team_size", "num_teams"):
            if getattr(self, name) < 1:
                raise SyntheticConfigError(name, "must be positive")
        if self.min_lines < 2 or self.max_lines < self.min_lines:
            raise SyntheticConfigError("min_lines", "need 2 <= min_lines <= max_lines")
        if self.max_words < self.min_words:
            raise SyntheticConfigError("max_words", "must be >= min_words")
        for name in ("keyword_rate", "context_rate", "trigger_probability", "all_chat_rate"):
            if not 0.0 <= getattr(self, name) <= 1.0:
                raise SyntheticConfigError(name, "must be in [0, 1]")
        if not self.filler_words:
            raise SyntheticConfigError("filler_words", "must not be empty")

        groups = {
            "keywords": [w for w, _ in self.keywords],
            "context_words": list(self.context_words),
            "trigger_words": list(self.trigger_words),
            "taunt_words": list(self.taunt_words),
            "filler_words": list(self.filler_words),
        }
        seen: Dict[str, str] = {}
        for group, words in groups.items():
            for w in words:
                if not WORD.match(w):
                    raise SyntheticConfigError(group, f"{w!r} is not a single lowercase word")
                if seen.get(w, group) != group:
                    raise SyntheticConfigError(group, f"{w!r} also appears in {seen[w]}")
                seen[w] = group
        for w, c in self.keywords:
            try:
                toxic = ToxicClass.parse(c).is_toxic
            except ValueError as e:
                raise SyntheticConfigError("keywords", str(e)) from None
            if not toxic:
                raise SyntheticConfigError("keywords", f"{w!r} mapped to non_toxic")
        for rule, group in (("keyword", "keywords"), ("context", "context_words"), ("speaker", "taunt_words")):
            if rule in self.rules and not groups[group]:
                raise SyntheticConfigError(group, f"rule {rule} needs at least one word")
        if "context" in self.rules and not self.trigger_words:
            raise SyntheticConfigError("trigger_words", "rule context needs a trigger")

    @property
    def keyword_classes(self) -> Dict[str, ToxicClass]:
        return {w: ToxicClass.parse(c) for w, c in self.keywords}

    @classmethod
    def from_dict(cls, values: Optional[Mapping[str, Any]] = None) -> "SyntheticConfig":
        values = dict(values or {})
        known = {f.name for f in fields(cls)}
        unknown = set(values) - known
        if unknown:
            raise SyntheticConfigError(sorted(unknown)[0], "unknown key")
        if "keywords" in values and isinstance(values["keywords"], Mapping):
            values["keywords"] = tuple(values["keywords"].items())
        for name, value in list(values.items()):
            if isinstance(value, list):
                values[name] = tuple(tuple(v) if isinstance(v, list) else v for v in value)
        return cls(**values)


@dataclass
class _Draft:
    player: int
    team: int
    chat_type: ChatType
    words: List[str] = field(default_factory=list)


def _insert(rng: np.random.Generator, words: List[str], word: str) -> None:
    words.insert(int(rng.integers(0, len(words) + 1)), word)


def _draft_match(config: SyntheticConfig, rng: np.random.Generator) -> List[_Draft]:
    n_players = config.team_size * config.num_teams
    n_lines = int(rng.integers(config.min_lines, config.max_lines + 1))
    half = n_lines // 2
    trigger_at = -1
    if "context" in config.rules and rng.random() < config.trigger_probability:
        trigger_at = int(rng.integers(0, half))

    drafts = []
    for i in range(n_lines):
        player = int(rng.integers(0, n_players))
        chat_type = ChatType.ALL if rng.random() < config.all_chat_rate else ChatType.TEAM
        n_words = int(rng.integers(config.min_words, config.max_words + 1))
        draft = _Draft(
            player=player,
            team=player // config.team_size,
            chat_type=chat_type,
            words=[str(w) for w in rng.choice(config.filler_words, size=n_words)],
        )
        if "keyword" in config.rules and rng.random() < config.keyword_rate:
            word, _ = config.keywords[int(rng.integers(0, len(config.keywords)))]
            _insert(rng, draft.words, word)
        if i == trigger_at:
            _insert(rng, draft.words, str(rng.choice(config.trigger_words)))
        if "context" in config.rules and i >= half and rng.random() < config.context_rate:
            _insert(rng, draft.words, str(rng.choice(config.context_words)))
        if "speaker" in config.rules and i > 0 and rng.random() < config.context_rate:
            _insert(rng, draft.words, str(rng.choice(config.taunt_words)))
        drafts.append(draft)
    return drafts


def _label_line(
    config: SyntheticConfig, s: MatchSession, target: int
) -> Tuple[ToxicClass, ...]:
    line = s.lines[target]
    words = line.text.split()
    visible = select_history(s, target, Scope.GLOBAL)
    triggered = any(w in config.trigger_words for h in visible for w in h.text.split())
    opponent_last = bool(visible) and visible[-1].team_key != line.team_key
    keyword_classes = config.keyword_classes
    context_class = ToxicClass.parse(config.context_class)

    labels = []
    for w in words:
        if "keyword" in config.rules and w in keyword_classes:
            labels.append(keyword_classes[w])
        elif "context" in config.rules and w in config.context_words and triggered:
            labels.append(context_class)
        elif "speaker" in config.rules and w in config.taunt_words and opponent_last:
            labels.append(context_class)
        else:
            labels.append(ToxicClass.NON_TOXIC)
    return tuple(labels)


def generate_synthetic(config: SyntheticConfig, seed: int = 0) -> List[MatchSession]:
    """Generate ``config.n_matches`` labeled sessions; identical for a given seed."""
    rng = np.random.default_rng(seed)
    sessions = []
    width = len(str(config.n_matches - 1))
    for m in range(config.n_matches):
        match_id = f"{config.match_prefix}-{seed}-{m:0{width}d}"
        lines = tuple(
            ChatLine(
                match_id=match_id,
                line_index=i,
                player_key=f"{match_id}-p{d.player}",
                team_key=f"{match_id}-t{d.team}",
                chat_type=d.chat_type,
                text=" ".join(d.words),
            )
            for i, d in enumerate(_draft_match(config, rng))
        )
        s = MatchSession(match_id, lines, config.team_size, config.num_teams)
        labeled = tuple(
            line.with_labels(_label_line(config, s, i)) for i, line in enumerate(lines)
        )
        sessions.append(MatchSession(match_id, labeled, config.team_size, config.num_teams))
    logger.info(
        f"Generated {len(sessions)} synthetic matches (rules: {', '.join(config.rules)}, seed {seed})"
    )
    return sessions
