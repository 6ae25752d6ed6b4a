"""Pure-numpy implementations of the hot kernels."""

from __future__ import annotations

import numpy as np

_SQRT5 = np.sqrt(5.0)
_EPA_C = 3.0 / (4.0 * _SQRT5)

# Cap on the size of the temporary (points x samples) block.
_BLOCK = 4_000_000


def confusion_counts(sim: np.ndarray, obs: np.ndarray) -> tuple[int, int, int, int]:
    """Tally (tp, fp, fn, tn) over cells non-excluded (>= 0) in both rasters."""
    live = (sim >= 0) & (obs >= 0)
    s = sim[live] == 1
    o = obs[live] == 1
    tp = int(np.count_nonzero(s & o))
    fp = int(np.count_nonzero(s & ~o))
    fn = int(np.count_nonzero(~s & o))
    tn = int(np.count_nonzero(~s & ~o))
    return tp, fp, fn, tn


def epanechnikov_density(x: np.ndarray, samples: np.ndarray, h: float) -> np.ndarray:
    """Kernel density estimate at points `x` using the Epanechnikov kernel.

    f(x) = (1 / (N h)) * sum_i K((x - X_i) / h), K supported on [-sqrt(5), sqrt(5)].
    """
    x = np.ascontiguousarray(x, dtype=np.float64)
    samples = np.ascontiguousarray(samples, dtype=np.float64)
    n = samples.size
    out = np.zeros(x.shape, dtype=np.float64)
    if n == 0:
        return out
    step = max(1, _BLOCK // n)
    for i in range(0, x.size, step):
        z = (x[i : i + step, None] - samples[None, :]) / h
        k = _EPA_C * np.clip(1.0 - z * z / 5.0, 0.0, None)
        out[i : i + step] = k.sum(axis=1)
    return out / (n * h)
