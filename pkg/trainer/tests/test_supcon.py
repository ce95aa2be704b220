import numpy as np
import pytest
import torch

from eegauth_trainer import supcon_loss, supcon_loss_bruteforce


def _unit_batch(rng, b, d):
    z = torch.tensor(rng.normal(size=(b, d)))
    return torch.nn.functional.normalize(z, dim=1)


def test_matches_bruteforce_on_random_batches():
    rng = np.random.default_rng(0)
    for _ in range(20):
        b = int(rng.integers(4, 14))
        z = _unit_batch(rng, b, 8)
        y = torch.tensor(rng.integers(0, 3, size=b))
        fast, _ = supcon_loss(z, y, 0.2)
        slow = supcon_loss_bruteforce(z, y, 0.2)
        assert float(fast) == pytest.approx(slow, rel=1e-10)


def test_orthogonal_two_cluster_value():
    a, b = torch.tensor([1.0, 0.0]).double(), torch.tensor([0.0, 1.0]).double()
    z = torch.stack([a, a, b, b])
    y = torch.tensor([0, 0, 1, 1])
    fast, skipped = supcon_loss(z, y, 0.05)
    slow = supcon_loss_bruteforce(z, y, 0.05)
    assert skipped == 0
    assert float(fast) == pytest.approx(slow, rel=0.05)
    # two tight clusters at orthogonal directions: loss is tiny
    assert float(fast) < 1e-6


def test_all_distinct_labels_zero_loss_all_skipped():
    rng = np.random.default_rng(1)
    z = _unit_batch(rng, 6, 8)
    y = torch.arange(6)
    with pytest.warns(UserWarning, match="no anchor"):
        loss, skipped = supcon_loss(z, y)
    assert float(loss) == 0.0
    assert skipped == 6


def test_singleton_label_excluded_and_counted():
    rng = np.random.default_rng(2)
    z = _unit_batch(rng, 5, 8)
    y = torch.tensor([0, 0, 1, 1, 2])  # label 2 has no positive
    loss, skipped = supcon_loss(z, y)
    assert skipped == 1
    assert torch.isfinite(loss)


def test_batch_permutation_invariance():
    rng = np.random.default_rng(3)
    z = _unit_batch(rng, 10, 6)
    y = torch.tensor(rng.integers(0, 3, size=10))
    base, _ = supcon_loss(z, y, 0.1)
    perm = torch.tensor(rng.permutation(10))
    permuted, _ = supcon_loss(z[perm], y[perm], 0.1)
    assert float(base) == pytest.approx(float(permuted), rel=1e-12)


def test_orthogonal_rotation_invariance():
    rng = np.random.default_rng(4)
    z = _unit_batch(rng, 8, 6)
    y = torch.tensor(rng.integers(0, 2, size=8))
    q, _ = np.linalg.qr(rng.normal(size=(6, 6)))
    zq = z @ torch.tensor(q)
    a, _ = supcon_loss(z, y, 0.1)
    b, _ = supcon_loss(zq, y, 0.1)
    assert float(a) == pytest.approx(float(b), rel=1e-10)


def test_gradient_matches_central_differences():
    rng = np.random.default_rng(5)
    for _ in range(5):
        b = int(rng.integers(4, 9))
        d = int(rng.integers(4, 17))
        z0 = rng.normal(size=(b, d))
        y = torch.tensor(rng.integers(0, max(2, b // 2), size=b))

        z = torch.tensor(z0, requires_grad=True)
        loss, _ = supcon_loss(z, y, 0.2)
        loss.backward()
        grad = z.grad.numpy()

        h = 1e-6
        fd = np.zeros_like(z0)
        for i in range(b):
            for j in range(d):
                zp, zm = z0.copy(), z0.copy()
                zp[i, j] += h
                zm[i, j] -= h
                lp, _ = supcon_loss(torch.tensor(zp), y, 0.2)
                lm, _ = supcon_loss(torch.tensor(zm), y, 0.2)
                fd[i, j] = (float(lp) - float(lm)) / (2 * h)
        rel = np.linalg.norm(grad - fd) / max(np.linalg.norm(fd), 1e-12)
        assert rel < 1e-4
