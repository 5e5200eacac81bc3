from dataclasses import asdict, dataclass
from typing import Any, Dict, Optional, Tuple

from chatwatch.modules.context import TrackSizes


@dataclass(frozen=True)
class ModelConfig:
    """
    Encoder hyperparameters. Defaults are desk scale: trainable on a CPU in
    minutes.

    The three ``*_vocab`` sizes include the neutral index of each metadata
    track.
    """

    vocab_size: int = 0
    n_classes: int = 9
    d_model: int = 64
    n_layers: int = 2
    n_heads: int = 2
    d_ff: int = 256
    dropout: float = 0.1
    max_tokens: int = 512
    team_vocab: int = 3
    chat_type_vocab: int = 3
    player_vocab: int = 11
    pad_id: int = 0
    init_std: float = 0.02

    def __post_init__(self):
        if self.d_model % self.n_heads:
            raise ValueError(
                f"d_model ({self.d_model}) must be divisible by n_heads ({self.n_heads})"
            )
        if not 0.0 <= self.dropout < 1.0:
            raise ValueError(f"dropout must be in [0, 1), got {self.dropout}")
        for name in ("d_model", "n_layers", "n_heads", "d_ff", "n_classes", "max_tokens"):
            if getattr(self, name) < 1:
                raise ValueError(f"{name} must be positive")

    @property
    def track_sizes(self) -> TrackSizes:
        return TrackSizes(n_teams=self.team_vocab - 1, n_players=self.player_vocab - 1)

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)

    @classmethod
    def from_dict(cls, values: Dict[str, Any]) -> "ModelConfig":
        return cls(**values)


@dataclass(frozen=True)
class TrainConfig:
    """
    Optimisation settings: AdamW with linear decay after a warmup, early
    stopping on validation weighted F1, and a per-seed 60/20/20 re-split.
    """

    learning_rate: float = 1e-5
    weight_decay: float = 0.01
    warmup_ratio: float = 0.05
    max_epochs: int = 100
    patience: int = 5
    batch_size: int = 16
    split: Tuple[float, float, float] = (0.6, 0.2, 0.2)
    seeds: Tuple[int, ...] = (0, 1, 2, 3, 4)
    init_checkpoint: Optional[str] = None
    train_fraction: float = 1.0
    min_frequency: int = 1
    label_space: str = "full"
    grad_clip: float = 1.0
    eval_level: str = "token"

    def __post_init__(self):
        if abs(sum(self.split) - 1.0) > 1e-9:
            raise ValueError(f"split ratios must sum to 1, got {self.split}")
        if self.patience < 1:
            raise ValueError("patience must be >= 1")
        if not 0.0 < self.train_fraction <= 1.0:
            raise ValueError("train_fraction must be in (0, 1]")
        if not 0.0 <= self.warmup_ratio < 1.0:
            raise ValueError("warmup_ratio must be in [0, 1)")
        if self.eval_level not in ("token", "line"):
            raise ValueError("eval_level must be 'token' or 'line'")
