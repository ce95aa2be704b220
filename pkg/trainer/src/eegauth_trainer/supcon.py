"""Supervised contrastive loss.

For each anchor with at least one same-label positive in the batch, the
loss averages -log p over its positives, where p is the temperature-
scaled softmax of the anchor-positive similarity against all other
batch members. Anchors without positives are excluded from the average
and counted.
"""

from __future__ import annotations

import warnings

import torch


def supcon_loss(embeddings: torch.Tensor, labels: torch.Tensor,
                temperature: float = 0.1) -> tuple[torch.Tensor, int]:
    """Returns (loss, n_skipped_anchors).

    embeddings: (B, D), expected unit-norm (cosine similarity = dot
    product); labels: (B,) integer class ids. With no valid anchors the
    loss is a defined zero that still participates in autograd.
    """
    if embeddings.ndim != 2:
        raise ValueError(f"embeddings must be (batch, dim), got {tuple(embeddings.shape)}")
    b = embeddings.shape[0]
    labels = labels.view(-1)
    if labels.shape[0] != b:
        raise ValueError("labels and embeddings disagree on batch size")

    sim = embeddings @ embeddings.T / temperature
    eye = torch.eye(b, dtype=torch.bool, device=sim.device)
    # log-softmax over all other batch members (self excluded)
    sim_masked = sim.masked_fill(eye, float("-inf"))
    log_prob = sim_masked - torch.logsumexp(sim_masked, dim=1, keepdim=True)

    pos_mask = (labels[:, None] == labels[None, :]) & ~eye
    n_pos = pos_mask.sum(dim=1)
    valid = n_pos > 0
    n_skipped = int((~valid).sum())
    if not bool(valid.any()):
        warnings.warn("supcon_loss: no anchor has a positive; returning defined-zero loss",
                      stacklevel=2)
        return embeddings.sum() * 0.0, n_skipped
    per_anchor = -(log_prob.masked_fill(~pos_mask, 0.0).sum(dim=1)[valid]
                   / n_pos[valid].to(embeddings.dtype))
    return per_anchor.mean(), n_skipped


def supcon_loss_bruteforce(embeddings, labels, temperature: float = 0.1) -> float:
    """Direct pairwise summation oracle (slow, test reference)."""
    import math
    z = [[float(v) for v in row] for row in embeddings]
    y = [int(v) for v in labels]
    b = len(z)

    def dot(u, v):
        return sum(a * c for a, c in zip(u, v))

    total, n_anchors = 0.0, 0
    for i in range(b):
        positives = [p for p in range(b) if p != i and y[p] == y[i]]
        if not positives:
            continue
        n_anchors += 1
        denom = sum(math.exp(dot(z[i], z[a]) / temperature) for a in range(b) if a != i)
        inner = 0.0
        for p in positives:
            inner += -math.log(math.exp(dot(z[i], z[p]) / temperature) / denom)
        total += inner / len(positives)
    return total / n_anchors if n_anchors else 0.0
