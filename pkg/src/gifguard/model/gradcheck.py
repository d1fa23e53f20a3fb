"""Finite-difference verification of head gradients.

Backbone features are cached once (they carry no gradient when the base is
frozen), then the cross-entropy loss is treated as a function of the head
parameters alone. Autograd gradients are compared against central
differences on a random sample of coordinates in float64.
"""

from __future__ import annotations

import numpy as np
import torch
import torch.nn.functional as F

from ..seeding import derive_seed
from .classifier import GifClassifier


def _head_loss(feats: torch.Tensor, labels: torch.Tensor, params: dict) -> torch.Tensor:
    hidden = F.relu(feats @ params["fc1.weight"].T + params["fc1.bias"])
    logits = hidden @ params["fc2.weight"].T + params["fc2.bias"]
    return F.cross_entropy(logits, labels)


def head_gradient_check(model: GifClassifier, images: np.ndarray, labels: np.ndarray,
                        coords_per_param: int = 40, eps: float = 1e-5,
                        seed: int = 0) -> float:
    """Return the worst relative error between autograd and central
    finite differences over sampled head coordinates."""
    batch = torch.from_numpy(
        np.ascontiguousarray(np.asarray(images, dtype=np.float32).transpose(0, 3, 1, 2))
    )
    with torch.no_grad():
        feats = model.forward_features(batch).double()
    y = torch.from_numpy(np.asarray(labels, dtype=np.int64))

    params = {k: v.double().clone().requires_grad_(True) for k, v in model.head_state().items()}
    loss = _head_loss(feats, y, params)
    grads = torch.autograd.grad(loss, list(params.values()))
    grads = dict(zip(params.keys(), grads))

    rng = np.random.default_rng(derive_seed(seed, "gradcheck"))
    worst = 0.0
    for name, param in params.items():
        flat = param.detach().reshape(-1)
        grad_flat = grads[name].reshape(-1)
        count = min(coords_per_param, flat.numel())
        for idx in rng.choice(flat.numel(), size=count, replace=False):
            idx = int(idx)
            orig = flat[idx].item()
            with torch.no_grad():
                flat[idx] = orig + eps
                hi = _head_loss(feats, y, params).item()
                flat[idx] = orig - eps
                lo = _head_loss(feats, y, params).item()
                flat[idx] = orig
            fd = (hi - lo) / (2.0 * eps)
            analytic = grad_flat[idx].item()
            denom = max(abs(analytic), abs(fd), 1e-8)
            worst = max(worst, abs(analytic - fd) / denom)
    return worst
