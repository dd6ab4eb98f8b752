import os
from pkgutil import iter_modules

import numpy as np
import torch

__all__ = ["reduce", "getenv_defaults", "num_threads", "as_float64", "chunks"]


def reduce(x, reduction=None):
    r"""Collapses a tensor of per-element losses.

    Args:
        x (torch.Tensor): Per-element values.
        reduction (str, optional): ``mean`` or ``sum``; anything else returns ``x`` untouched.
    """
    if reduction == "mean":
        return torch.mean(x)
    elif reduction == "sum":
        return torch.sum(x)
    else:
        return x


def getenv_defaults(module_name):
    r"""``1`` if ``module_name`` is importable, else ``0``. Used as an environment default."""
    return int(module_name in (name for loader, name, ispkg in iter_modules()))


def num_threads():
    r"""Number of workers allowed by the ``UVT_THREADS`` environment variable.

    Returns:
        A positive integer, ``1`` when the variable is unset or malformed.
    """
    try:
        return max(1, int(os.getenv("UVT_THREADS", "1")))
    except ValueError:
        return 1


def as_float64(x):
    r"""Converts arrays, lists and tensors to a detached ``float64`` CPU tensor."""
    if isinstance(x, torch.Tensor):
        return x.detach().to(device="cpu", dtype=torch.float64)
    return torch.as_tensor(np.asarray(x, dtype=np.float64))


def chunks(n, parts):
    r"""Splits ``range(n)`` into at most ``parts`` contiguous ``(start, stop)`` blocks.

    The split only depends on ``n`` and ``parts`` so results assembled from the blocks are
    identical whatever the number of workers used to compute them.
    """
    if n <= 0:
        return [(0, 0)]
    parts = max(1, min(parts, n))
    bounds = np.linspace(0, n, parts + 1).astype(np.int64)
    return [
        (int(bounds[i]), int(bounds[i + 1]))
        for i in range(parts)
        if bounds[i + 1] > bounds[i]
    ]
