"""Central finite-difference check of :func:`loss_and_grad`."""

import copy
from dataclasses import dataclass
from typing import Dict, List, Optional

import numpy as np
import torch

from .encoder import ChatEncoder, EncodedBatch, masked_cross_entropy
from .training import loss_and_grad


@dataclass(frozen=True)
class GradCheckResult:
    parameter: str
    checked: int
    max_abs_error: float
    max_rel_error: float
    passed: bool


def _padding_rows(model: ChatEncoder) -> Dict[str, int]:
    rows = {}
    for name, module in model.named_modules():
        if isinstance(module, torch.nn.Embedding) and module.padding_idx is not None:
            rows[f"{name}.weight"] = module.padding_idx
    return rows


def _entries(param: torch.Tensor, skip_row: Optional[int], limit: Optional[int], rng):
    indices = [
        idx
        for idx in np.ndindex(*param.shape)
        if skip_row is None or idx[0] != skip_row
    ]
    if limit is not None and len(indices) > limit:
        picked = rng.choice(len(indices), size=limit, replace=False)
        indices = [indices[i] for i in sorted(picked)]
    return indices


def check_gradients(
    model: ChatEncoder,
    batch: EncodedBatch,
    eps: float = 1e-4,
    rtol: float = 1e-3,
    atol: float = 1e-7,
    max_entries: Optional[int] = None,
    seed: int = 0,
) -> List[GradCheckResult]:
    """
    Compare the analytic gradient of every parameter with central
    differences ``(L(w + eps) - L(w - eps)) / 2 eps``.

    A float64 copy of the model is checked, so ``model`` is left as it is;
    its dropout must be 0. Rows held at zero by ``padding_idx`` are skipped.
    ``max_entries`` samples that many entries per parameter.
    """
    if model.config.dropout != 0.0:
        raise ValueError("Gradient check needs a model built with dropout=0")
    model = copy.deepcopy(model).double()
    model.train()
    _, grads = loss_and_grad(model, batch)
    padding = _padding_rows(model)
    rng = np.random.default_rng(seed)

    results = []
    with torch.no_grad():
        for name, param in model.named_parameters():
            analytic = grads[name]
            worst_abs, worst_rel, ok = 0.0, 0.0, True
            entries = _entries(param, padding.get(name), max_entries, rng)
            for idx in entries:
                original = float(param[idx])
                param[idx] = original + eps
                plus = float(masked_cross_entropy(model(batch), batch.labels))
                param[idx] = original - eps
                minus = float(masked_cross_entropy(model(batch), batch.labels))
                param[idx] = original
                numeric = (plus - minus) / (2 * eps)
                a = float(analytic[idx])
                diff = abs(a - numeric)
                rel = diff / max(abs(a), abs(numeric), 1e-12)
                worst_abs = max(worst_abs, diff)
                if diff > atol:
                    worst_rel = max(worst_rel, rel)
                if diff > rtol * max(abs(a), abs(numeric)) + atol:
                    ok = False
            results.append(GradCheckResult(name, len(entries), worst_abs, worst_rel, ok))
    return results
