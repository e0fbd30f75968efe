"""Near-duplicate detection for points in R^d under the max-norm."""

import numpy as np


class ToleranceIndex:
    """Buckets vectors by a fixed random 1-D projection.

    Two vectors within ``tol`` in max-norm have projections within
    ``tol * |w|_1``, which is the bucket width, so only the neighbouring
    buckets ever need an exact comparison.
    """

    def __init__(self, dim, tol, seed=0x5EED):
        self.tol = float(tol)
        self._w = np.random.default_rng(seed).standard_normal(dim)
        self._width = self.tol * float(np.abs(self._w).sum())
        self._buckets: dict[int, list[int]] = {}
        self._items: list[np.ndarray] = []

    def __len__(self):
        return len(self._items)

    def find(self, v):
        key = float(self._w @ v) / self._width
        b = int(np.floor(key))
        for bb in (b - 1, b, b + 1):
            for idx in self._buckets.get(bb, ()):
                if np.max(np.abs(self._items[idx] - v)) < self.tol:
                    return idx, b
        return None, b

    def add(self, v):
        """Insert ``v`` unless a near-duplicate exists; returns (index, is_new)."""
        v = np.asarray(v, dtype=float)
        idx, b = self.find(v)
        if idx is not None:
            return idx, False
        self._items.append(v)
        self._buckets.setdefault(b, []).append(len(self._items) - 1)
        return len(self._items) - 1, True
