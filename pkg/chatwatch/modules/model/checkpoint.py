from dataclasses import dataclass, replace
from pathlib import Path
from typing import Any, Dict, List, Union

import torch

from chatwatch.cwlogger import logger
from chatwatch.modules.chat import LabelSpace, ToxicClass
from chatwatch.modules.context import ContextConfig

from .configs import ModelConfig
from .encoder import ChatEncoder
from .model_errors import CheckpointError
from .tokenizer import Tokenizer

FORMAT_VERSION = 1


def fit_model_config(
    base: ModelConfig,
    context: ContextConfig,
    tokenizer: Tokenizer,
    label_space: LabelSpace,
) -> ModelConfig:
    """Fill the data-dependent sizes of ``base`` from the corpus settings."""
    sizes = context.track_sizes
    return replace(
        base,
        vocab_size=tokenizer.vocab_size,
        n_classes=len(label_space),
        max_tokens=context.max_tokens,
        team_vocab=sizes.team_vocab,
        chat_type_vocab=sizes.chat_type_vocab,
        player_vocab=sizes.player_vocab,
        pad_id=tokenizer.pad_id,
    )


@dataclass
class Checkpoint:
    """
    Everything needed to rebuild a trained model: its configuration, the
    context settings it was trained with, the label space, the vocabulary and
    the float32 weights.
    """

    model_config: ModelConfig
    context: ContextConfig
    label_space: LabelSpace
    vocab: List[str]
    state_dict: Dict[str, torch.Tensor]
    lowercase: bool = True
    format_version: int = FORMAT_VERSION

    @classmethod
    def from_model(
        cls,
        model: ChatEncoder,
        context: ContextConfig,
        label_space: LabelSpace,
        tokenizer: Tokenizer,
    ) -> "Checkpoint":
        state = {k: v.detach().to(torch.float32).clone() for k, v in model.state_dict().items()}
        return cls(
            model_config=model.config,
            context=context,
            label_space=label_space,
            vocab=list(tokenizer.vocab),
            state_dict=state,
            lowercase=tokenizer.lowercase,
        )

    @property
    def tokenizer(self) -> Tokenizer:
        return Tokenizer(self.vocab, lowercase=self.lowercase)

    def build_model(self) -> ChatEncoder:
        model = ChatEncoder(self.model_config)
        model.load_state_dict(self.state_dict)
        model.eval()
        return model

    def to_container(self) -> Dict[str, Any]:
        return {
            "format_version": self.format_version,
            "model_config": self.model_config.to_dict(),
            "context": self.context.to_dict(),
            "label_space": {
                "name": self.label_space.name,
                "classes": [c.value for c in self.label_space.classes],
            },
            "vocab": list(self.vocab),
            "lowercase": self.lowercase,
            "state_dict": self.state_dict,
        }

    def save(self, path: Union[str, Path]) -> Path:
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        torch.save(self.to_container(), path)
        logger.debug(f"Saved checkpoint to {path}")
        return path

    @classmethod
    def load(cls, path: Union[str, Path]) -> "Checkpoint":
        path = Path(path)
        try:
            container = torch.load(path, map_location="cpu", weights_only=True)
        except FileNotFoundError:
            raise
        except Exception as e:
            raise CheckpointError(path, f"unreadable ({e})") from e

        version = container.get("format_version")
        if version != FORMAT_VERSION:
            raise CheckpointError(path, f"unsupported format version {version}")
        try:
            space = container["label_space"]
            return cls(
                model_config=ModelConfig.from_dict(container["model_config"]),
                context=ContextConfig.from_dict(container["context"]),
                label_space=LabelSpace(
                    space["name"], [ToxicClass(c) for c in space["classes"]]
                ),
                vocab=list(container["vocab"]),
                state_dict=container["state_dict"],
                lowercase=bool(container.get("lowercase", True)),
                format_version=version,
            )
        except (KeyError, TypeError, ValueError) as e:
            raise CheckpointError(path, f"malformed container ({e})") from e
