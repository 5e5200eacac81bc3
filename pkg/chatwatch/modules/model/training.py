import copy
import math
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
import torch
from torch.optim import AdamW
from torch.optim.lr_scheduler import LambdaLR

from chatwatch.cwlogger import logger
from chatwatch.modules.adapters.splitting import CorpusSplit
from chatwatch.modules.chat import (
    FULL,
    LabelSpace,
    MatchSession,
    ToxicClass,
    line_class_from_tokens,
)
from chatwatch.modules.context import ContextConfig, EncodedSequence, TrackSizes, build_input
from chatwatch.modules.evaluation.metrics import MetricsReport, weighted_prf

from .checkpoint import Checkpoint, fit_model_config
from .configs import ModelConfig, TrainConfig
from .encoder import ChatEncoder, EncodedBatch, collate, masked_cross_entropy
from .model_errors import EmptySplitError, EmptySupervisionError, TokenLabelMismatch
from .tokenizer import Tokenizer


@dataclass(frozen=True)
class LabeledExample:
    """One supervised line: its model input and the class index of every kept
    current-line text token."""

    match_id: str
    line_index: int
    sequence: EncodedSequence
    labels: Tuple[int, ...]


@dataclass(frozen=True)
class EpochRecord:
    epoch: int
    train_loss: float
    val_precision: float
    val_recall: float
    val_f1: float
    learning_rate: float


@dataclass
class TrainResult:
    checkpoint: Checkpoint
    history: List[EpochRecord] = field(default_factory=list)
    best_epoch: int = 0
    seed: int = 0

    @property
    def best_val_f1(self) -> float:
        return max((r.val_f1 for r in self.history), default=0.0)


def build_tokenizer(
    sessions: Sequence[MatchSession], context: ContextConfig, min_frequency: int = 1
) -> Tokenizer:
    sizes = context.track_sizes
    return Tokenizer.build(
        (line.text for s in sessions for line in s.lines),
        n_players=sizes.n_players,
        n_teams=sizes.n_teams,
        min_frequency=min_frequency,
    )


def encode_examples(
    sessions: Sequence[MatchSession],
    tokenizer: Tokenizer,
    context: ContextConfig,
    label_space: LabelSpace = FULL,
    track_sizes: Optional[TrackSizes] = None,
) -> List[LabeledExample]:
    """
    Build a training example for every labeled line. Labels of current-line
    tokens cut off by truncation are dropped with the tokens, and lines left
    with no supervised token are skipped.
    """
    track_sizes = track_sizes or context.track_sizes
    examples: List[LabeledExample] = []
    for s in sessions:
        for target, line in enumerate(s.lines):
            if not line.is_labeled:
                continue
            n_tokens = tokenizer.count(line.text)
            if len(line.token_labels) != n_tokens:
                raise TokenLabelMismatch(
                    line.match_id, line.line_index, len(line.token_labels), n_tokens
                )
            seq = build_input(
                s,
                target,
                context.scope,
                tokenizer,
                max_tokens=context.max_tokens,
                metadata_mode=context.metadata_mode,
                track_sizes=track_sizes,
            )
            kept = seq.kept_text_tokens
            if kept == 0:
                logger.debug(f"Skipping {line.match_id}#{line.line_index}: no tokens kept")
                continue
            labels = tuple(
                label_space.index(label_space.project(c)) for c in line.token_labels[:kept]
            )
            examples.append(LabeledExample(line.match_id, line.line_index, seq, labels))
    return examples


def make_batch(examples: Sequence[LabeledExample], config: ModelConfig) -> EncodedBatch:
    return collate(
        [e.sequence for e in examples],
        config.pad_id,
        config.track_sizes,
        labels=[e.labels for e in examples],
    )


def loss_and_grad(
    model: ChatEncoder, batch: EncodedBatch
) -> Tuple[float, Dict[str, torch.Tensor]]:
    """
    Masked mean cross-entropy of ``batch`` and the gradient of every
    parameter (the metadata embedding tables included).

    Raises
    ------
    EmptySupervisionError
        If no position of the batch is supervised.
    """
    if batch.labels is None or not bool((batch.labels >= 0).any()):
        raise EmptySupervisionError()
    model.zero_grad(set_to_none=True)
    loss = masked_cross_entropy(model(batch), batch.labels)
    loss.backward()
    grads = {
        name: (p.grad.detach().clone() if p.grad is not None else torch.zeros_like(p))
        for name, p in model.named_parameters()
    }
    return float(loss.detach()), grads


def _predict_examples(
    model: ChatEncoder, examples: Sequence[LabeledExample], batch_size: int
) -> List[List[int]]:
    model.eval()
    predicted: List[List[int]] = []
    with torch.no_grad():
        for i in range(0, len(examples), batch_size):
            chunk = examples[i : i + batch_size]
            batch = make_batch(chunk, model.config)
            argmax = model(batch).argmax(dim=-1)
            for row, example in zip(argmax, chunk):
                start, end = example.sequence.current_line_span
                predicted.append(row[start:end].tolist())
    return predicted


def evaluate_examples(
    model: ChatEncoder,
    examples: Sequence[LabeledExample],
    label_space: LabelSpace,
    level: str = "token",
    batch_size: int = 32,
) -> MetricsReport:
    """Weighted P/R/F1 of the model on supervised tokens or on whole lines."""
    predicted = _predict_examples(model, examples, batch_size)
    classes = label_space.classes
    preds: List[ToxicClass] = []
    golds: List[ToxicClass] = []
    for pred_ids, example in zip(predicted, examples):
        pred_classes = [classes[k] for k in pred_ids]
        gold_classes = [classes[k] for k in example.labels]
        if level == "line":
            preds.append(line_class_from_tokens(pred_classes))
            golds.append(line_class_from_tokens(gold_classes))
        else:
            preds.extend(pred_classes)
            golds.extend(gold_classes)
    return weighted_prf(preds, golds, level)


def _optimizer(model: ChatEncoder, config: TrainConfig) -> AdamW:
    decay, no_decay = [], []
    for name, p in model.named_parameters():
        if p.ndim < 2 or "embedding" in name or "norm" in name:
            no_decay.append(p)
        else:
            decay.append(p)
    return AdamW(
        [
            {"params": decay, "weight_decay": config.weight_decay},
            {"params": no_decay, "weight_decay": 0.0},
        ],
        lr=config.learning_rate,
    )


def linear_schedule(total_steps: int, warmup_ratio: float):
    warmup = max(1, math.ceil(total_steps * warmup_ratio)) if warmup_ratio > 0 else 0

    def factor(step: int) -> float:
        if warmup and step < warmup:
            return (step + 1) / warmup
        return max(0.0, (total_steps - step) / max(1, total_steps - warmup))

    return factor


def subsample_matches(
    sessions: Sequence[MatchSession], fraction: float, seed: int
) -> List[MatchSession]:
    if fraction >= 1.0:
        return list(sessions)
    keep = max(1, int(round(len(sessions) * fraction)))
    order = np.random.default_rng(seed).permutation(len(sessions))[:keep]
    return [sessions[i] for i in sorted(order)]


def train(
    corpus: CorpusSplit,
    model_config: ModelConfig,
    train_config: TrainConfig,
    context: ContextConfig,
    seed: int = 0,
    label_space: LabelSpace = FULL,
    init_checkpoint: Optional[Checkpoint] = None,
    tokenizer: Optional[Tokenizer] = None,
) -> TrainResult:
    """
    Train an encoder on ``corpus.train`` and keep the weights of the epoch
    with the best validation weighted F1.

    Parameters
    ----------
    corpus : CorpusSplit
        Match-level train/validation/test split.
    model_config : ModelConfig
        Architecture; vocabulary, class and track sizes are filled in from
        the data.
    train_config : TrainConfig
        Optimisation and early-stopping settings.
    context : ContextConfig
        Input assembly settings, stored in the checkpoint.
    seed : int, optional
        Controls initialisation, dropout and batch order, by default 0.
    label_space : LabelSpace, optional
        Output classes, by default all nine.
    init_checkpoint : Optional[Checkpoint], optional
        Warm start; its vocabulary and architecture are reused.
    tokenizer : Optional[Tokenizer], optional
        Fixed vocabulary, by default built from the training split.

    Returns
    -------
    TrainResult
        Best checkpoint plus per-epoch metrics.

    Raises
    ------
    EmptySplitError
        If the train or validation split has no labeled line.
    """
    torch.manual_seed(seed)
    generator = torch.Generator().manual_seed(seed)

    train_sessions = subsample_matches(corpus.train, train_config.train_fraction, seed)
    if init_checkpoint is not None:
        tokenizer = init_checkpoint.tokenizer
        config = init_checkpoint.model_config
        if init_checkpoint.label_space != label_space:
            raise ValueError(
                f"Checkpoint label space {init_checkpoint.label_space.name} does not "
                f"match {label_space.name}"
            )
    else:
        if tokenizer is None:
            tokenizer = build_tokenizer(train_sessions, context, train_config.min_frequency)
        config = fit_model_config(model_config, context, tokenizer, label_space)

    train_examples = encode_examples(
        train_sessions, tokenizer, context, label_space, config.track_sizes
    )
    val_examples = encode_examples(
        corpus.validation, tokenizer, context, label_space, config.track_sizes
    )
    if not train_examples:
        raise EmptySplitError("train")
    if not val_examples:
        raise EmptySplitError("validation")

    model = ChatEncoder(config)
    if init_checkpoint is not None:
        model.load_state_dict(init_checkpoint.state_dict)

    batch_size = train_config.batch_size
    steps_per_epoch = math.ceil(len(train_examples) / batch_size)
    optimizer = _optimizer(model, train_config)
    scheduler = LambdaLR(
        optimizer,
        linear_schedule(steps_per_epoch * train_config.max_epochs, train_config.warmup_ratio),
    )

    logger.info(
        f"Training seed {seed}: {len(train_examples)} train / {len(val_examples)} "
        f"validation lines, vocab {tokenizer.vocab_size}, scope {context.scope.value}, "
        f"metadata {context.metadata_mode.value}"
    )

    history: List[EpochRecord] = []
    best_f1, best_epoch = -1.0, 0
    best_state = copy.deepcopy(model.state_dict())

    for epoch in range(1, train_config.max_epochs + 1):
        model.train()
        order = torch.randperm(len(train_examples), generator=generator).tolist()
        total, batches = 0.0, 0
        for i in range(0, len(order), batch_size):
            batch = make_batch([train_examples[k] for k in order[i : i + batch_size]], config)
            loss = masked_cross_entropy(model(batch), batch.labels)
            optimizer.zero_grad(set_to_none=True)
            loss.backward()
            if train_config.grad_clip > 0:
                torch.nn.utils.clip_grad_norm_(model.parameters(), train_config.grad_clip)
            optimizer.step()
            scheduler.step()
            total += float(loss.detach())
            batches += 1

        report = evaluate_examples(
            model, val_examples, label_space, train_config.eval_level, batch_size
        )
        record = EpochRecord(
            epoch=epoch,
            train_loss=total / max(batches, 1),
            val_precision=report.precision,
            val_recall=report.recall,
            val_f1=report.f1,
            learning_rate=scheduler.get_last_lr()[0],
        )
        history.append(record)
        logger.info(
            f"seed {seed} epoch {epoch}: loss {record.train_loss:.4f}, "
            f"val F1 {record.val_f1:.4f}"
        )

        if report.f1 > best_f1:
            best_f1, best_epoch = report.f1, epoch
            best_state = copy.deepcopy(model.state_dict())
        elif epoch - best_epoch >= train_config.patience:
            logger.info(f"Early stop at epoch {epoch} (best epoch {best_epoch})")
            break

    model.load_state_dict(best_state)
    model.eval()
    checkpoint = Checkpoint.from_model(model, context, label_space, tokenizer)
    return TrainResult(checkpoint=checkpoint, history=history, best_epoch=best_epoch, seed=seed)
