"""Dual-memory store: two cluster networks (LTM) plus an instance buffer (STM).

LTM fades slowly (alpha = 0.2 by default), STM fades fast (alpha = 15) — a
two-day-old STM trace is effectively gone. Repeated encounters reinforce an
STM entry's weight; crossing the consolidation threshold gamma promotes the
entry into the matching LTM network, which refreshes that memory.

Decay is lazy: nothing ticks in the background. Effective weights are
computed from stored event lists at read time, so a snapshot plus a clock
advance reproduces the exact decayed state of the original process.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import kernels
from .clusters import (
    TAU_CONTEXTS,
    TAU_OBJECTS,
    CategoryNetwork,
    LearnOutcome,
    NetworkConfig,
)
from .decay import DecayConfig, append_event, effective_weight

OBJECT_KIND = "object"
CONTEXT_KIND = "context"


@dataclass
class StmEntry:
    feature: np.ndarray
    label: str
    kind: str  # "object" or "context"
    weight: float  # encounter weight, >= 1 at rest
    events: np.ndarray
    layout: tuple[int, int] | None = None  # (C, L) for context vectors


@dataclass
class StmOutcome:
    kind: str  # "buffered" | "reinforced" | "consolidated"
    entry: StmEntry
    learn: LearnOutcome | None = None


@dataclass
class MemoryConfig:
    gamma: float = 3.0
    ltm_decay: DecayConfig = field(default_factory=lambda: DecayConfig(alpha=0.2))
    stm_decay: DecayConfig = field(default_factory=lambda: DecayConfig(alpha=15.0))
    stm_evict_floor: float = 1e-4
    ltm_prune_floor: float = 0.0  # 0 disables pruning
    # Entries match when the new observation lies within this L1 radius.
    # ~1.25x the expected view-to-view spread at D=64, sigma=0.05.
    stm_match_radius: float = 4.5

    def __post_init__(self):
        if self.gamma <= 1:
            raise ValueError("gamma must be > 1")
        if self.stm_evict_floor < 0 or self.ltm_prune_floor < 0:
            raise ValueError("floors must be >= 0")
        if self.stm_match_radius < 0:
            raise ValueError("stm_match_radius must be >= 0")


class MemoryStore:
    """Single-writer store holding both networks, the STM buffer and the clock."""

    def __init__(
        self,
        dim: int,
        config: MemoryConfig | None = None,
        object_config: NetworkConfig | None = None,
        context_config: NetworkConfig | None = None,
    ):
        self.config = config or MemoryConfig()
        self.object_net = CategoryNetwork(object_config or NetworkConfig(tau=TAU_OBJECTS), dim=dim)
        self.context_net = CategoryNetwork(context_config or NetworkConfig(tau=TAU_CONTEXTS))
        self.stm: list[StmEntry] = []
        self.clock: float = 0.0
        self.dim = dim

    # ----------------------------------------------------------------- time

    def advance_clock(self, delta_days: float) -> float:
        if delta_days <= 0:
            raise ValueError("delta_days must be > 0")
        self.clock += delta_days
        return self.clock

    def _now(self, now: float | None) -> float:
        return self.clock if now is None else now

    # ------------------------------------------------------------------ STM

    def stm_observe(self, feature, label: str, kind: str, now: float | None = None) -> StmOutcome:
        if kind not in (OBJECT_KIND, CONTEXT_KIND):
            raise ValueError(f"unknown STM kind {kind!r}")
        now = self._now(now)
        feature = np.asarray(feature, dtype=np.float64)
        if kind == OBJECT_KIND and feature.shape != (self.dim,):
            raise ValueError(f"dimension mismatch: expected ({self.dim},), got {feature.shape}")

        entry = self._nearest_entry(feature, kind)
        if entry is None:
            entry = StmEntry(
                feature=feature.copy(),
                label=label,
                kind=kind,
                weight=1.0,
                events=np.array([now], dtype=np.float64),
                layout=self.context_net.layout if kind == CONTEXT_KIND else None,
            )
            self.stm.append(entry)
            return StmOutcome("buffered", entry)

        faded = effective_weight(entry.weight, entry.events, now, self.config.stm_decay)
        entry.weight = faded + 1.0
        entry.events = append_event(entry.events, now, self.config.stm_decay)
        entry.label = label
        if entry.weight > self.config.gamma:
            net = self.object_net if entry.kind == OBJECT_KIND else self.context_net
            learn = net.learn_one(entry.label, entry.feature, now, self.config.ltm_decay)
            self.stm = [e for e in self.stm if e is not entry]
            return StmOutcome("consolidated", entry, learn)
        return StmOutcome("reinforced", entry)

    def _nearest_entry(self, feature: np.ndarray, kind: str) -> StmEntry | None:
        cands = [e for e in self.stm if e.kind == kind and e.feature.shape == feature.shape]
        if not cands:
            return None
        dists = kernels.l1_distances(np.stack([e.feature for e in cands]), feature)
        best = int(np.argmin(dists))
        if float(dists[best]) <= self.config.stm_match_radius:
            return cands[best]
        return None

    def stm_sweep(self, now: float | None = None) -> int:
        now = self._now(now)
        keep: list[StmEntry] = []
        evicted = 0
        for e in self.stm:
            w = effective_weight(e.weight, e.events, now, self.config.stm_decay)
            if w < self.config.stm_evict_floor:
                evicted += 1
            else:
                keep.append(e)
        self.stm = keep
        return evicted

    # ------------------------------------------------------------------ LTM

    def prune_ltm(self, now: float | None = None) -> int:
        if self.config.ltm_prune_floor <= 0:
            return 0
        now = self._now(now)
        removed = self.object_net.prune(now, self.config.ltm_decay, self.config.ltm_prune_floor)
        removed += self.context_net.prune(now, self.config.ltm_decay, self.config.ltm_prune_floor)
        return removed

    # ------------------------------------------------- conceptual-space sync

    def sync_context_layout(self, categories: int, locations: int) -> None:
        """Grow context vectors to the (categories, locations) layout, keeping
        existing dimensions in place and zero-filling the new ones."""
        new_layout = (categories, locations)
        old = self.context_net.layout
        if old == new_layout:
            return
        if old is not None:
            if old[0] > categories or old[1] > locations:
                raise ValueError(f"layout can only grow: {old} -> {new_layout}")
            for cluster in self.context_net.clusters:
                cluster.centroid = _migrate_vector(cluster.centroid, old, new_layout)
        for entry in self.stm:
            if entry.kind == CONTEXT_KIND and entry.layout not in (None, new_layout):
                entry.feature = _migrate_vector(entry.feature, entry.layout, new_layout)
                entry.layout = new_layout
        self.context_net.layout = new_layout
        self.context_net.dim = categories + locations

    # -------------------------------------------------------- serialization

    def to_document(self) -> dict:
        cfg = self.config
        return {
            "version": 1,
            "dim": self.dim,
            "clock": self.clock,
            "config": {
                "gamma": cfg.gamma,
                "ltm_decay": _decay_doc(cfg.ltm_decay),
                "stm_decay": _decay_doc(cfg.stm_decay),
                "stm_evict_floor": cfg.stm_evict_floor,
                "ltm_prune_floor": cfg.ltm_prune_floor,
                "stm_match_radius": cfg.stm_match_radius,
            },
            "object_net": self.object_net.to_document(),
            "context_net": self.context_net.to_document(),
            "stm": [
                {
                    "feature": e.feature.tolist(),
                    "label": e.label,
                    "kind": e.kind,
                    "weight": e.weight,
                    "events": e.events.tolist(),
                    "layout": list(e.layout) if e.layout else None,
                }
                for e in self.stm
            ],
        }

    @classmethod
    def from_document(cls, doc: dict) -> "MemoryStore":
        if doc.get("version") != 1:
            raise ValueError(f"unsupported memory snapshot version {doc.get('version')!r}")
        cfg = doc["config"]
        config = MemoryConfig(
            gamma=cfg["gamma"],
            ltm_decay=DecayConfig(**cfg["ltm_decay"]),
            stm_decay=DecayConfig(**cfg["stm_decay"]),
            stm_evict_floor=cfg["stm_evict_floor"],
            ltm_prune_floor=cfg["ltm_prune_floor"],
            stm_match_radius=cfg["stm_match_radius"],
        )
        store = cls(dim=doc["dim"], config=config)
        store.clock = doc["clock"]
        store.object_net = CategoryNetwork.from_document(doc["object_net"])
        store.context_net = CategoryNetwork.from_document(doc["context_net"])
        store.stm = [
            StmEntry(
                feature=np.array(row["feature"], dtype=np.float64),
                label=row["label"],
                kind=row["kind"],
                weight=row["weight"],
                events=np.array(row["events"], dtype=np.float64),
                layout=tuple(row["layout"]) if row.get("layout") else None,
            )
            for row in doc["stm"]
        ]
        return store

    def save(self, path: str | Path) -> None:
        Path(path).write_text(json.dumps(self.to_document()), encoding="utf-8")

    @classmethod
    def load(cls, path: str | Path) -> "MemoryStore":
        return cls.from_document(json.loads(Path(path).read_text(encoding="utf-8")))


def _decay_doc(cfg: DecayConfig) -> dict:
    return {
        "eta": cfg.eta,
        "alpha": cfg.alpha,
        "u": cfg.u,
        "max_events": cfg.max_events,
        "t_floor": cfg.t_floor,
    }


def _migrate_vector(vec: np.ndarray, old: tuple[int, int], new: tuple[int, int]) -> np.ndarray:
    c0, l0 = old
    c1, l1 = new
    out = np.zeros(c1 + l1, dtype=np.float64)
    out[:c0] = vec[:c0]
    out[c1 : c1 + l0] = vec[c0 : c0 + l0]
    return out
