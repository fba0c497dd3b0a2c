from __future__ import annotations

import numpy as np


def numerical_gradient(loss_fn, w, eps=1e-5):
    """Central differences of ``loss_fn()`` with respect to array ``w`` (perturbed in place)."""
    g = np.zeros_like(w)
    flat = w.reshape(-1)
    gflat = g.reshape(-1)
    for i in range(flat.size):
        old = flat[i]
        flat[i] = old + eps
        up = loss_fn()
        flat[i] = old - eps
        down = loss_fn()
        flat[i] = old
        if not (np.isfinite(up) and np.isfinite(down)):
            raise FloatingPointError(f"non-finite loss while perturbing coordinate {i}")
        gflat[i] = (up - down) / (2.0 * eps)
    return g


def relative_error(analytic, numeric):
    a = np.asarray(analytic)
    n = np.asarray(numeric)
    return np.abs(a - n) / np.maximum(1.0, np.maximum(np.abs(a), np.abs(n)))


def grad_check(loss_fn, params, grads, eps=1e-5):
    """Max relative error between analytic ``grads`` and central differences over ``params``.

    ``loss_fn`` must be deterministic and read the arrays in ``params``
    directly (they are perturbed in place and restored).
    """
    base = loss_fn()
    if not np.isfinite(base):
        raise FloatingPointError("loss is not finite")
    worst = 0.0
    for name, w in params.items():
        num = numerical_gradient(loss_fn, w, eps)
        err = relative_error(grads[name], num)
        if err.size:
            worst = max(worst, float(err.max()))
    return worst
