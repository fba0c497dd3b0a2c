"""Shared test utilities: full-network gradient checks and synthetic matchup data."""

import numpy as np

from ncaa_forecast.nn import get_loss, grad_check


def network_grad_error(net, X, y, loss="bce", eps=1e-5):
    loss_fn = get_loss(loss)
    p = net.forward(X, training=False)
    _, dp = loss_fn(p, y)
    net.backward(dp)
    grads = {k: v.copy() for k, v in net.grads.items()}
    return grad_check(lambda: loss_fn(net.forward(X, training=False), y)[0], net.params, grads, eps)


WEIGHTS = np.array([1.0, -0.5, 0.8, 0.3])


def separable(n, d=4, seed=0):
    """Labels follow a fixed linear rule on the team-row difference."""
    rng = np.random.default_rng(seed)
    X = rng.normal(size=(n, 2, d))
    y = ((X[:, 0] - X[:, 1]) @ WEIGHTS[:d] > 0).astype(int)
    return X, y


def no_signal(n, d=4, seed=0):
    rng = np.random.default_rng(seed)
    return rng.normal(size=(n, 2, d)), rng.integers(0, 2, n)
