"""
Token-classification transformer encoder whose input embedding is the sum of
token, position, team, chat-type and player embeddings.
"""

from dataclasses import dataclass
from typing import Dict, Optional, Sequence

import torch
import torch.nn as nn
import torch.nn.functional as F

from chatwatch.modules.context import EncodedSequence, TrackSizes

from .configs import ModelConfig
from .model_errors import EmbeddingRangeError, ShapeMismatchError

IGNORE_INDEX = -100


@dataclass
class EncodedBatch:
    """Padded tensors for a batch of :class:`EncodedSequence`."""

    token_ids: torch.Tensor
    positions: torch.Tensor
    team_track: torch.Tensor
    chat_type_track: torch.Tensor
    player_track: torch.Tensor
    attention_mask: torch.Tensor
    labels: Optional[torch.Tensor] = None

    def __len__(self) -> int:
        return self.token_ids.shape[0]

    @property
    def tracks(self) -> Dict[str, torch.Tensor]:
        return {
            "token": self.token_ids,
            "position": self.positions,
            "team": self.team_track,
            "chat_type": self.chat_type_track,
            "player": self.player_track,
        }


def collate(
    sequences: Sequence[EncodedSequence],
    pad_id: int,
    track_sizes: TrackSizes,
    labels: Optional[Sequence[Sequence[int]]] = None,
    pad_to: Optional[int] = None,
) -> EncodedBatch:
    """
    Right-pad sequences into a batch. ``labels[i]`` holds the class index of
    each kept current-line text token of ``sequences[i]``; every other
    position is ignored by the loss.
    """
    if not sequences:
        raise ValueError("Cannot collate an empty batch")
    length = max(len(s) for s in sequences)
    if pad_to is not None:
        length = max(length, pad_to)
    n = len(sequences)

    def filled(value: int) -> torch.Tensor:
        return torch.full((n, length), value, dtype=torch.long)

    token_ids = filled(pad_id)
    positions = filled(0)
    team = filled(track_sizes.team_neutral)
    chat_type = filled(track_sizes.chat_type_neutral)
    player = filled(track_sizes.player_neutral)
    mask = torch.zeros((n, length), dtype=torch.bool)
    target = filled(IGNORE_INDEX) if labels is not None else None

    for i, seq in enumerate(sequences):
        k = len(seq)
        token_ids[i, :k] = torch.tensor(seq.token_ids)
        positions[i, :k] = torch.tensor(seq.positions)
        team[i, :k] = torch.tensor(seq.team_track)
        chat_type[i, :k] = torch.tensor(seq.chat_type_track)
        player[i, :k] = torch.tensor(seq.player_track)
        mask[i, :k] = True
        if target is not None and labels is not None:
            start, end = seq.current_line_span
            line_labels = list(labels[i])[: end - start]
            if len(line_labels) != end - start:
                raise ShapeMismatchError(
                    f"{len(line_labels)} labels for a current-line span of {end - start}"
                )
            if line_labels:
                target[i, start:end] = torch.tensor(line_labels)

    return EncodedBatch(token_ids, positions, team, chat_type, player, mask, target)


class ChatEncoder(nn.Module):
    """
    Pre-norm transformer encoder with a per-token linear classifier.

    The neutral index of each metadata table (its last row) and the
    ``[PAD]`` token row are padding rows: zero and never updated.
    """

    def __init__(self, config: ModelConfig):
        super().__init__()
        self.config = config
        d = config.d_model
        self.token_embedding = nn.Embedding(config.vocab_size, d, padding_idx=config.pad_id)
        self.position_embedding = nn.Embedding(config.max_tokens, d)
        self.team_embedding = nn.Embedding(
            config.team_vocab, d, padding_idx=config.team_vocab - 1
        )
        self.chat_type_embedding = nn.Embedding(
            config.chat_type_vocab, d, padding_idx=config.chat_type_vocab - 1
        )
        self.player_embedding = nn.Embedding(
            config.player_vocab, d, padding_idx=config.player_vocab - 1
        )
        self.embedding_dropout = nn.Dropout(config.dropout)

        layer = nn.TransformerEncoderLayer(
            d_model=d,
            nhead=config.n_heads,
            dim_feedforward=config.d_ff,
            dropout=config.dropout,
            activation="gelu",
            batch_first=True,
            norm_first=True,
        )
        self.encoder = nn.TransformerEncoder(
            layer,
            num_layers=config.n_layers,
            norm=nn.LayerNorm(d),
            enable_nested_tensor=False,
        )
        self.classifier = nn.Linear(d, config.n_classes)
        self.reset_parameters()

    @property
    def embedding_tables(self) -> Dict[str, nn.Embedding]:
        return {
            "token": self.token_embedding,
            "position": self.position_embedding,
            "team": self.team_embedding,
            "chat_type": self.chat_type_embedding,
            "player": self.player_embedding,
        }

    def reset_parameters(self) -> None:
        std = self.config.init_std
        for module in self.modules():
            if isinstance(module, (nn.Linear, nn.Embedding)):
                nn.init.normal_(module.weight, mean=0.0, std=std)
                if isinstance(module, nn.Linear) and module.bias is not None:
                    nn.init.zeros_(module.bias)
            elif isinstance(module, nn.MultiheadAttention):
                nn.init.normal_(module.in_proj_weight, mean=0.0, std=std)
                nn.init.zeros_(module.in_proj_bias)
        with torch.no_grad():
            for table in self.embedding_tables.values():
                if table.padding_idx is not None:
                    table.weight[table.padding_idx].zero_()

    def check_ranges(self, batch: EncodedBatch) -> None:
        for name, table in self.embedding_tables.items():
            values = batch.tracks[name]
            if values.numel() == 0:
                continue
            low, high = int(values.min()), int(values.max())
            if low < 0:
                raise EmbeddingRangeError(name, low, table.num_embeddings)
            if high >= table.num_embeddings:
                raise EmbeddingRangeError(name, high, table.num_embeddings)

    def embed(self, batch: EncodedBatch) -> torch.Tensor:
        """Sum of the five embedding lookups, ``[batch, length, d_model]``."""
        self.check_ranges(batch)
        return (
            self.token_embedding(batch.token_ids)
            + self.position_embedding(batch.positions)
            + self.team_embedding(batch.team_track)
            + self.chat_type_embedding(batch.chat_type_track)
            + self.player_embedding(batch.player_track)
        )

    def forward(self, batch: EncodedBatch) -> torch.Tensor:
        """Per-token class logits, ``[batch, length, n_classes]``."""
        hidden = self.embedding_dropout(self.embed(batch))
        hidden = self.encoder(hidden, src_key_padding_mask=~batch.attention_mask)
        return self.classifier(hidden)

    def distributions(self, batch: EncodedBatch) -> torch.Tensor:
        return F.softmax(self.forward(batch), dim=-1)


def masked_cross_entropy(logits: torch.Tensor, labels: torch.Tensor) -> torch.Tensor:
    """Mean cross-entropy over supervised (current-line) positions only."""
    return F.cross_entropy(
        logits.reshape(-1, logits.shape[-1]),
        labels.reshape(-1),
        ignore_index=IGNORE_INDEX,
    )


def _single(seq: EncodedSequence, model: ChatEncoder) -> EncodedBatch:
    if len(seq) > model.config.max_tokens:
        raise ShapeMismatchError(
            f"sequence of {len(seq)} tokens exceeds max_tokens={model.config.max_tokens}"
        )
    return collate([seq], model.config.pad_id, model.config.track_sizes)


def embed_sequence(seq: EncodedSequence, model: ChatEncoder) -> torch.Tensor:
    """Embedding matrix ``[len(seq), d_model]`` of one sequence."""
    return model.embed(_single(seq, model))[0]


def forward(seq: EncodedSequence, model: ChatEncoder) -> torch.Tensor:
    """Per-token class distributions ``[len(seq), n_classes]`` of one sequence."""
    with torch.no_grad():
        return model.distributions(_single(seq, model))[0]
