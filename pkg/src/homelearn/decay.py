"""Retention math shared by long- and short-term memory.

A weight's effective value is raw^eta * min(T^-alpha, 1), where T is the
recency-weighted age of the weight's activation events:

    t_j = max(now - event_j, t_floor)
    h_j = t_j^-u / sum_k t_k^-u          (h_j sum to 1)
    T   = sum_j h_j * t_j

Higher u puts more weight on recent events. The multiplier is capped at 1 so
that fading can only lose strength, never amplify it; without the cap the
T -> 0 divergence would let very fresh traces dominate competition.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import kernels


@dataclass(frozen=True)
class DecayConfig:
    eta: float = 1.0
    alpha: float = 0.2
    u: float = 0.6
    max_events: int = 50
    t_floor: float = 1.0 / 24.0

    def __post_init__(self):
        if self.alpha < 0:
            raise ValueError("alpha must be >= 0")
        if self.u < 0:
            raise ValueError("u must be >= 0")
        if self.max_events < 1:
            raise ValueError("max_events must be >= 1")
        if self.t_floor <= 0:
            raise ValueError("t_floor must be > 0")


LTM_DECAY = DecayConfig(alpha=0.2)
STM_DECAY = DecayConfig(alpha=15.0)


def _as_event_array(events) -> np.ndarray:
    arr = np.asarray(events, dtype=np.float64)
    if arr.ndim != 1 or arr.shape[0] == 0:
        raise ValueError("events must be a non-empty 1-d sequence")
    return arr


def model_time(events, now: float, cfg: DecayConfig) -> float:
    """Recency-weighted age of an event list at `now`, in days."""
    arr = _as_event_array(events)
    if float(arr.max()) > now:
        raise ValueError("event after now")
    counts = np.array([arr.shape[0]], dtype=np.int64)
    return float(kernels.model_times(arr[None, :], counts, now, cfg.u, cfg.t_floor)[0])


def effective_weight(raw: float, events, now: float, cfg: DecayConfig) -> float:
    """Faded value of a raw weight given its activation history."""
    if raw < 0:
        raise ValueError("raw weight must be >= 0")
    t = model_time(events, now, cfg)
    mult = float(kernels.retention(np.array([t]), cfg.alpha)[0])
    return raw**cfg.eta * mult


def batch_effective_weights(
    raws: np.ndarray, event_lists: list[np.ndarray], now: float, cfg: DecayConfig
) -> np.ndarray:
    """Vectorized effective weights for many ragged event lists."""
    n = len(event_lists)
    if n == 0:
        return np.empty(0)
    counts = np.array([ev.shape[0] for ev in event_lists], dtype=np.int64)
    padded = np.zeros((n, int(counts.max())), dtype=np.float64)
    for i, ev in enumerate(event_lists):
        padded[i, : ev.shape[0]] = ev
    times = kernels.model_times(padded, counts, now, cfg.u, cfg.t_floor)
    return raws**cfg.eta * kernels.retention(times, cfg.alpha)


def append_event(events: np.ndarray, now: float, cfg: DecayConfig) -> np.ndarray:
    """Event list with `now` appended, oldest entries dropped past the cap."""
    out = np.append(events, now)
    if out.shape[0] > cfg.max_events:
        out = out[-cfg.max_events :]
    return out
