"""Hot numeric kernels: batch L1 distances and the retention math.

Every kernel has a numba @njit implementation and a pure-numpy fallback with
identical semantics. The numpy path is selected by setting HOMELEARN_PURE_NUMPY
(or automatically when numba is unavailable). Compare both with
`homelearn bench`.

Retention model: for events at ages t_j = max(now - event_j, t_floor), the
recency-weighted age is T = sum(t_j^(1-u)) / sum(t_j^(-u)), and the retention
multiplier is min(T^-alpha, 1) — fading never amplifies a weight.
"""

from __future__ import annotations

import os

import numpy as np

ENV_PURE_NUMPY = "HOMELEARN_PURE_NUMPY"


def _env_wants_numpy() -> bool:
    return os.environ.get(ENV_PURE_NUMPY, "").strip().lower() in {"1", "true", "yes", "on"}


# ---------------------------------------------------------------- numpy path


def _l1_distances_numpy(centroids: np.ndarray, x: np.ndarray) -> np.ndarray:
    return np.abs(centroids - x).sum(axis=1)


def _masked_l1_distances_numpy(centroids: np.ndarray, x: np.ndarray, mask: np.ndarray) -> np.ndarray:
    return np.abs(centroids[:, mask] - x[mask]).sum(axis=1)


def _model_times_numpy(events: np.ndarray, counts: np.ndarray, now: float, u: float, t_floor: float) -> np.ndarray:
    # events is (n, m) right-padded; counts holds the valid prefix lengths.
    m = events.shape[1]
    valid = np.arange(m)[None, :] < counts[:, None]
    ages = np.maximum(now - events, t_floor)
    w = np.where(valid, ages ** (-u), 0.0)
    return (w * ages).sum(axis=1) / w.sum(axis=1)


def _retention_numpy(times: np.ndarray, alpha: float) -> np.ndarray:
    return np.minimum(times ** (-alpha), 1.0)


def _activations_numpy(distances: np.ndarray, weights: np.ndarray) -> np.ndarray:
    return np.exp(-distances / weights)


# ---------------------------------------------------------------- numba path

try:
    from numba import njit

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - environment without numba
    HAVE_NUMBA = False

if HAVE_NUMBA:

    @njit(cache=True)
    def _l1_distances_numba(centroids, x):
        n, d = centroids.shape
        out = np.empty(n)
        for i in range(n):
            s = 0.0
            for j in range(d):
                diff = centroids[i, j] - x[j]
                s += diff if diff >= 0.0 else -diff
            out[i] = s
        return out

    @njit(cache=True)
    def _masked_l1_distances_numba(centroids, x, mask):
        n, d = centroids.shape
        out = np.empty(n)
        for i in range(n):
            s = 0.0
            for j in range(d):
                if mask[j]:
                    diff = centroids[i, j] - x[j]
                    s += diff if diff >= 0.0 else -diff
            out[i] = s
        return out

    @njit(cache=True)
    def _model_times_numba(events, counts, now, u, t_floor):
        n = events.shape[0]
        out = np.empty(n)
        for i in range(n):
            num = 0.0
            den = 0.0
            for j in range(counts[i]):
                t = now - events[i, j]
                if t < t_floor:
                    t = t_floor
                h = t ** (-u)
                den += h
                num += h * t
            out[i] = num / den
        return out

    @njit(cache=True)
    def _retention_numba(times, alpha):
        n = times.shape[0]
        out = np.empty(n)
        for i in range(n):
            r = times[i] ** (-alpha)
            out[i] = r if r < 1.0 else 1.0
        return out

    @njit(cache=True)
    def _activations_numba(distances, weights):
        n = distances.shape[0]
        out = np.empty(n)
        for i in range(n):
            out[i] = np.exp(-distances[i] / weights[i])
        return out


NUMPY_BACKEND = {
    "l1_distances": _l1_distances_numpy,
    "masked_l1_distances": _masked_l1_distances_numpy,
    "model_times": _model_times_numpy,
    "retention": _retention_numpy,
    "activations": _activations_numpy,
}

NUMBA_BACKEND = (
    {
        "l1_distances": _l1_distances_numba,
        "masked_l1_distances": _masked_l1_distances_numba,
        "model_times": _model_times_numba,
        "retention": _retention_numba,
        "activations": _activations_numba,
    }
    if HAVE_NUMBA
    else None
)

USING_NUMBA = HAVE_NUMBA and not _env_wants_numpy()
_ACTIVE = NUMBA_BACKEND if USING_NUMBA else NUMPY_BACKEND

l1_distances = _ACTIVE["l1_distances"]
masked_l1_distances = _ACTIVE["masked_l1_distances"]
model_times = _ACTIVE["model_times"]
retention = _ACTIVE["retention"]
activations = _ACTIVE["activations"]


def backends() -> dict[str, dict]:
    """Available kernel backends, keyed by name."""
    out = {"numpy": NUMPY_BACKEND}
    if NUMBA_BACKEND is not None:
        out["numba"] = NUMBA_BACKEND
    return out


def warmup() -> None:
    """Trigger JIT compilation so first-use latency stays out of hot paths."""
    c = np.zeros((2, 4))
    x = np.zeros(4)
    mask = np.ones(4, dtype=np.bool_)
    ev = np.zeros((2, 3))
    cnt = np.ones(2, dtype=np.int64)
    for backend in backends().values():
        backend["l1_distances"](c, x)
        backend["masked_l1_distances"](c, x, mask)
        t = backend["model_times"](ev, cnt, 1.0, 0.6, 1.0 / 24.0)
        backend["retention"](t, 0.2)
        backend["activations"](x[:2] + 1.0, x[:2] + 1.0)
