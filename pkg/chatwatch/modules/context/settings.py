from dataclasses import dataclass
from typing import Any, Dict, Optional

from .builder import DEFAULT_MAX_TOKENS, MAX_TOKEN_CHOICES, MetadataMode, TrackSizes
from .scopes import Scope


@dataclass(frozen=True)
class ContextConfig:
    """
    How model inputs are assembled for a corpus.

    Parameters
    ----------
    scope : Scope
        History visibility, by default ``Scope.GLOBAL``.
    max_tokens : int
        Sequence length bound, one of ``MAX_TOKEN_CHOICES``, by default 512.
    metadata_mode : MetadataMode
        Speaker metadata encoding, by default speaker segmentation.
    team_size : int
        Players per team, by default 5.
    num_teams : int
        Teams per match, by default 2.
    """

    scope: Scope = Scope.GLOBAL
    max_tokens: int = DEFAULT_MAX_TOKENS
    metadata_mode: MetadataMode = MetadataMode.SPEAKER_SEGMENTATION
    team_size: int = 5
    num_teams: int = 2

    def __post_init__(self):
        if self.max_tokens not in MAX_TOKEN_CHOICES:
            raise ValueError(
                f"max_tokens must be one of {MAX_TOKEN_CHOICES}, got {self.max_tokens}"
            )
        if self.team_size < 1 or self.num_teams < 1:
            raise ValueError(
                f"team_size and num_teams must be positive: "
                f"{self.team_size}, {self.num_teams}"
            )

    @property
    def track_sizes(self) -> TrackSizes:
        return TrackSizes(n_teams=self.num_teams, n_players=self.num_teams * self.team_size)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "scope": self.scope.value,
            "max_tokens": self.max_tokens,
            "metadata_mode": self.metadata_mode.value,
            "team_size": self.team_size,
            "num_teams": self.num_teams,
        }

    @classmethod
    def from_dict(cls, values: Optional[Dict[str, Any]] = None) -> "ContextConfig":
        values = dict(values or {})
        if "scope" in values:
            values["scope"] = Scope.parse(str(values["scope"]))
        if "metadata_mode" in values:
            values["metadata_mode"] = MetadataMode.parse(values["metadata_mode"])
        return cls(**values)
