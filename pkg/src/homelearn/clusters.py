"""Label-partitioned cluster networks: the single-pass continual learner.

Each cluster holds a centroid, a raw weight (number of absorbed samples) and
its activation-event history. Scoring a sample:

    H_act = exp(-d / w)      d: L1 distance, w: faded effective weight
    H_out = (H_win^beta / sum_s H_s^beta) * H_win

A sample either updates the winning cluster (weighted running mean, weight
refreshed) or recruits a new cluster when the winner's inhibited output falls
below the recruitment threshold tau. Learning competes within the taught
label by default; classification always competes across every label.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .decay import DecayConfig, batch_effective_weights

TAU_OBJECTS = 0.0003
TAU_CONTEXTS = 0.13

WITHIN_LABEL = "within-label"
ALL_LABELS = "all-labels"


class EmptyNetworkError(ValueError):
    pass


class TimeRegressionError(ValueError):
    pass


@dataclass
class NetworkConfig:
    tau: float
    beta: float = 1.0
    distance_scope: str = WITHIN_LABEL
    event_refresh: str = "reset"  # "reset" or "append"

    def __post_init__(self):
        if not 0 < self.tau <= 1:
            raise ValueError("tau must be in (0, 1]")
        if self.beta <= 0:
            raise ValueError("beta must be > 0")
        if self.distance_scope not in (WITHIN_LABEL, ALL_LABELS):
            raise ValueError(f"unknown distance_scope {self.distance_scope!r}")
        if self.event_refresh not in ("reset", "append"):
            raise ValueError(f"unknown event_refresh {self.event_refresh!r}")


@dataclass
class Cluster:
    id: int
    label: str
    centroid: np.ndarray
    raw_weight: float
    events: np.ndarray  # activation timestamps in days, non-decreasing


@dataclass
class ActivationReport:
    cluster_ids: list[int]
    labels: list[str]
    distances: np.ndarray
    effective_weights: np.ndarray
    activations: np.ndarray
    winner_id: int
    winner_output: float

    @property
    def winner_index(self) -> int:
        return self.cluster_ids.index(self.winner_id)


@dataclass
class LearnOutcome:
    kind: str  # "recruited" or "updated"
    cluster_id: int
    report: ActivationReport | None = None

    @property
    def recruited(self) -> bool:
        return self.kind == "recruited"


def activation(centroid: np.ndarray, effective_weight: float, x: np.ndarray) -> float:
    """exp(-d/w) for one cluster; 1.0 exactly when the sample sits on the centroid."""
    if effective_weight <= 0:
        raise ValueError("effective weight must be > 0")
    centroid = np.asarray(centroid, dtype=np.float64)
    x = np.asarray(x, dtype=np.float64)
    if centroid.shape != x.shape:
        raise ValueError(f"dimension mismatch: {centroid.shape} vs {x.shape}")
    d = float(np.abs(centroid - x).sum())
    return float(np.exp(-d / effective_weight))


def winner_output(activations: np.ndarray, beta: float) -> tuple[int, float]:
    """Winner index (first max wins ties) and its inhibition-regulated output."""
    acts = np.asarray(activations, dtype=np.float64)
    if acts.shape[0] == 0:
        raise ValueError("no activations to compete")
    powered = acts**beta
    w = int(np.argmax(acts))
    return w, float(powered[w] / powered.sum() * acts[w])


class CategoryNetwork:
    """Mutable set of clusters for one learner (objects or contexts)."""

    def __init__(self, config: NetworkConfig, dim: int | None = None):
        self.config = config
        self.dim = dim
        self.clusters: list[Cluster] = []  # kept in id order (ids are insertion-ordered)
        self.layout: tuple[int, int] | None = None  # (C, L) for conceptual-space nets
        self._next_id = 0
        self._last_event = -np.inf

    # ------------------------------------------------------------ inspection

    @property
    def labels(self) -> set[str]:
        return {c.label for c in self.clusters}

    def clusters_for(self, label: str) -> list[Cluster]:
        return [c for c in self.clusters if c.label == label]

    def __len__(self) -> int:
        return len(self.clusters)

    def effective_weights(self, now: float, decay: DecayConfig) -> dict[int, float]:
        if not self.clusters:
            return {}
        weights = self._batch_weights(self.clusters, now, decay)
        return {c.id: float(w) for c, w in zip(self.clusters, weights)}

    # --------------------------------------------------------------- scoring

    @staticmethod
    def _batch_weights(cands: list[Cluster], now: float, decay: DecayConfig) -> np.ndarray:
        raws = np.array([c.raw_weight for c in cands], dtype=np.float64)
        return batch_effective_weights(raws, [c.events for c in cands], now, decay)

    def _score(
        self,
        cands: list[Cluster],
        x: np.ndarray,
        now: float,
        decay: DecayConfig,
        mask: np.ndarray | None = None,
    ) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        centroids = np.stack([c.centroid for c in cands])
        if mask is None:
            dists = kernels.l1_distances(centroids, x)
        else:
            dists = kernels.masked_l1_distances(centroids, x, mask)
        weights = self._batch_weights(cands, now, decay)
        acts = kernels.activations(dists, weights)
        return dists, weights, acts

    def _validate_input(self, x, now: float) -> np.ndarray:
        x = np.asarray(x, dtype=np.float64)
        if self.dim is not None and x.shape != (self.dim,):
            raise ValueError(f"dimension mismatch: expected ({self.dim},), got {x.shape}")
        if not np.all(np.isfinite(x)):
            raise ValueError("sample contains non-finite entries")
        if now < self._last_event:
            raise TimeRegressionError(f"now={now} precedes last event {self._last_event}")
        return x

    def _report(self, cands: list[Cluster], dists, weights, acts, beta: float) -> ActivationReport:
        win_idx, h_out = winner_output(acts, beta)
        return ActivationReport(
            cluster_ids=[c.id for c in cands],
            labels=[c.label for c in cands],
            distances=dists,
            effective_weights=weights,
            activations=acts,
            winner_id=cands[win_idx].id,
            winner_output=h_out,
        )

    # -------------------------------------------------------------- learning

    def _recruit(self, label: str, x: np.ndarray, now: float) -> Cluster:
        if self.dim is None:
            self.dim = x.shape[0]
        cluster = Cluster(
            id=self._next_id,
            label=label,
            centroid=x.copy(),
            raw_weight=1.0,
            events=np.array([now], dtype=np.float64),
        )
        self._next_id += 1
        self.clusters.append(cluster)
        return cluster

    def learn_one(self, label: str, x, now: float, decay: DecayConfig) -> LearnOutcome:
        """Absorb one labeled sample: update the winner or recruit a cluster."""
        if not label:
            raise ValueError("label must be non-empty")
        x = self._validate_input(x, now)
        self._last_event = max(self._last_event, now)

        if self.config.distance_scope == WITHIN_LABEL:
            cands = self.clusters_for(label)
        else:
            cands = self.clusters
        if not cands:
            cluster = self._recruit(label, x, now)
            return LearnOutcome("recruited", cluster.id)

        dists, weights, acts = self._score(cands, x, now, decay)
        report = self._report(cands, dists, weights, acts, self.config.beta)
        win_idx = report.winner_index
        winner = cands[win_idx]
        # in all-labels scope a foreign-label winner must not absorb the sample
        if report.winner_output < self.config.tau or winner.label != label:
            cluster = self._recruit(label, x, now)
            return LearnOutcome("recruited", cluster.id, report)

        w_eff = float(weights[win_idx])
        winner.centroid = (w_eff * winner.centroid + x) / (w_eff + 1.0)
        winner.raw_weight = w_eff + 1.0
        if self.config.event_refresh == "reset":
            winner.events = np.array([now], dtype=np.float64)
        else:
            from .decay import append_event

            winner.events = append_event(winner.events, now, decay)
        return LearnOutcome("updated", winner.id, report)

    # ----------------------------------------------------------- prediction

    def classify(
        self, x, now: float, decay: DecayConfig, mask: np.ndarray | None = None
    ) -> tuple[str, ActivationReport]:
        """Winning label across all clusters; read-only. `mask` restricts the
        distance to a dimension subset (conceptual-space queries)."""
        if not self.clusters:
            raise EmptyNetworkError("network has no clusters")
        x = np.asarray(x, dtype=np.float64)
        if self.dim is not None and x.shape != (self.dim,):
            raise ValueError(f"dimension mismatch: expected ({self.dim},), got {x.shape}")
        cands = self.clusters  # id order; argmax tie falls to the lowest id
        dists, weights, acts = self._score(cands, x, now, decay, mask=mask)
        report = self._report(cands, dists, weights, acts, self.config.beta)
        return cands[report.winner_index].label, report

    # -------------------------------------------------------------- hygiene

    def prune(self, now: float, decay: DecayConfig, floor: float) -> int:
        """Drop clusters whose effective weight fell below `floor`, keeping at
        least one cluster per label (the strongest survivor)."""
        if floor < 0:
            raise ValueError("floor must be >= 0")
        if not self.clusters:
            return 0
        weights = self._batch_weights(self.clusters, now, decay)
        doomed = {c.id for c, w in zip(self.clusters, weights) if w < floor}
        by_label: dict[str, list[tuple[float, int]]] = {}
        for c, w in zip(self.clusters, weights):
            by_label.setdefault(c.label, []).append((float(w), c.id))
        for label, rows in by_label.items():
            if all(cid in doomed for _, cid in rows):
                keep = max(rows, key=lambda r: (r[0], -r[1]))[1]
                doomed.discard(keep)
        if not doomed:
            return 0
        self.clusters = [c for c in self.clusters if c.id not in doomed]
        return len(doomed)

    # -------------------------------------------------------- serialization

    def to_document(self) -> dict:
        return {
            "version": 1,
            "config": {
                "tau": self.config.tau,
                "beta": self.config.beta,
                "distance_scope": self.config.distance_scope,
                "event_refresh": self.config.event_refresh,
            },
            "dim": self.dim,
            "layout": list(self.layout) if self.layout else None,
            "next_id": self._next_id,
            "last_event": None if self._last_event == -np.inf else self._last_event,
            "clusters": [
                {
                    "id": c.id,
                    "label": c.label,
                    "centroid": c.centroid.tolist(),
                    "raw_weight": c.raw_weight,
                    "events": c.events.tolist(),
                }
                for c in self.clusters
            ],
        }

    @classmethod
    def from_document(cls, doc: dict) -> "CategoryNetwork":
        if doc.get("version") != 1:
            raise ValueError(f"unsupported network snapshot version {doc.get('version')!r}")
        net = cls(NetworkConfig(**doc["config"]), dim=doc.get("dim"))
        net.layout = tuple(doc["layout"]) if doc.get("layout") else None
        net._next_id = doc["next_id"]
        net._last_event = doc["last_event"] if doc.get("last_event") is not None else -np.inf
        for row in doc["clusters"]:
            net.clusters.append(
                Cluster(
                    id=row["id"],
                    label=row["label"],
                    centroid=np.array(row["centroid"], dtype=np.float64),
                    raw_weight=row["raw_weight"],
                    events=np.array(row["events"], dtype=np.float64),
                )
            )
        net.clusters.sort(key=lambda c: c.id)
        return net
