"""Conceptual-space maps: context scenes as object-presence + location vectors.

A context view is encoded by classifying each scene feature through the
object network and setting the matching category dimension (binary presence
by default), plus a one-hot location block scaled by `location_scale`. The
context network is trained on these maps with the same learner as objects.

Fetch queries mask everything except the requested category dimension, so
the answer comes purely from which context cluster best explains "this
object is here" — the location is then read off the winning centroid.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .clusters import ActivationReport, CategoryNetwork, EmptyNetworkError, LearnOutcome
from .decay import DecayConfig
from .memory import MemoryStore


class UnknownLabelError(KeyError):
    pass


class LabelIndex:
    """Append-only mapping of category labels and location ids to dimensions.

    Indices are stable once assigned; growth bumps `version` so stored
    vectors can be migrated to the wider layout.
    """

    def __init__(self):
        self._categories: dict[str, int] = {}
        self._locations: dict[int, int] = {}
        self.version = 0

    # ------------------------------------------------------------ categories

    def register_category(self, label: str) -> int:
        if not label:
            raise ValueError("label must be non-empty")
        if label not in self._categories:
            self._categories[label] = len(self._categories)
            self.version += 1
        return self._categories[label]

    def category_dim(self, label: str) -> int:
        try:
            return self._categories[label]
        except KeyError:
            raise UnknownLabelError(f"unknown object label {label!r}") from None

    def has_category(self, label: str) -> bool:
        return label in self._categories

    @property
    def category_count(self) -> int:
        return len(self._categories)

    def categories(self) -> list[str]:
        return list(self._categories)

    # ------------------------------------------------------------- locations

    def register_location(self, location_id: int) -> int:
        if location_id not in self._locations:
            self._locations[location_id] = len(self._locations)
            self.version += 1
        return self._locations[location_id]

    def location_dim(self, location_id: int) -> int:
        try:
            return self._locations[location_id]
        except KeyError:
            raise UnknownLabelError(f"unknown location {location_id!r}") from None

    def location_for_dim(self, dim: int) -> int:
        for loc, d in self._locations.items():
            if d == dim:
                return loc
        raise UnknownLabelError(f"no location at dimension {dim}")

    @property
    def location_count(self) -> int:
        return len(self._locations)

    # -------------------------------------------------------- serialization

    def to_document(self) -> dict:
        return {
            "version": self.version,
            "categories": list(self._categories),
            "locations": list(self._locations),
        }

    @classmethod
    def from_document(cls, doc: dict) -> "LabelIndex":
        idx = cls()
        for label in doc["categories"]:
            idx._categories[label] = len(idx._categories)
        for loc in doc["locations"]:
            idx._locations[loc] = len(idx._locations)
        idx.version = doc["version"]
        return idx


@dataclass
class ConceptualMap:
    category_dims: np.ndarray
    location_dims: np.ndarray
    mask: np.ndarray  # bool over the concatenated vector

    def vector(self) -> np.ndarray:
        return np.concatenate([self.category_dims, self.location_dims])

    @property
    def fully_masked(self) -> bool:
        return bool(self.mask.all())

    @property
    def layout(self) -> tuple[int, int]:
        return (self.category_dims.shape[0], self.location_dims.shape[0])


def build_context_map(
    scene_features: list[np.ndarray],
    location: int,
    object_net: CategoryNetwork,
    index: LabelIndex,
    now: float,
    decay: DecayConfig,
    *,
    presence: str = "binary",
    location_scale: float = 1.0,
) -> tuple[ConceptualMap, list[str]]:
    """Encode a scene: classify every feature, mark categories and location.

    The predicted labels are returned alongside the map so misclassified
    scene objects stay observable to the caller.
    """
    if presence not in ("binary", "counts"):
        raise ValueError(f"unknown presence mode {presence!r}")
    if len(object_net) == 0:
        raise EmptyNetworkError("cannot encode a context before any object is taught")
    index.location_dim(location)  # location must be registered

    predicted: list[str] = []
    for feat in scene_features:
        label, _ = object_net.classify(feat, now, decay)
        predicted.append(label)
        index.register_category(label)

    c, l = index.category_count, index.location_count
    cat = np.zeros(c, dtype=np.float64)
    for label in predicted:
        d = index.category_dim(label)
        if presence == "binary":
            cat[d] = 1.0
        else:
            cat[d] += 1.0
    loc = np.zeros(l, dtype=np.float64)
    loc[index.location_dim(location)] = location_scale
    return ConceptualMap(cat, loc, np.ones(c + l, dtype=bool)), predicted


def teach_context(store: MemoryStore, name: str, cmap: ConceptualMap, now: float | None = None) -> LearnOutcome:
    """Train the context network on a fully-masked conceptual map."""
    if not cmap.fully_masked:
        raise ValueError("teaching requires a fully-masked map")
    now = store.clock if now is None else now
    c, l = cmap.layout
    store.sync_context_layout(c, l)
    return store.context_net.learn_one(name, cmap.vector(), now, store.config.ltm_decay)


@dataclass
class FetchPrediction:
    context: str
    location: int
    report: ActivationReport
    # distinct candidate locations in preference order: (context, location, activation)
    ranked: list[tuple[str, int, float]]


def masked_fetch_query(
    store: MemoryStore, object_label: str, index: LabelIndex, now: float | None = None
) -> FetchPrediction:
    """Most probable context and location for an object, from category evidence only.

    Scores every context cluster on the masked distance over the requested
    category dimension alone; location dimensions are masked out because the
    location is the unknown being predicted.
    """
    if not index.has_category(object_label):
        raise UnknownLabelError(f"object label {object_label!r} has no category dimension")
    if len(store.context_net) == 0:
        raise EmptyNetworkError("context network is empty")
    if index.location_count == 0:
        raise EmptyNetworkError("no locations registered")
    now = store.clock if now is None else now
    c, l = index.category_count, index.location_count
    store.sync_context_layout(c, l)

    query = np.zeros(c + l, dtype=np.float64)
    dim = index.category_dim(object_label)
    query[dim] = 1.0
    mask = np.zeros(c + l, dtype=bool)
    mask[dim] = True

    context_name, report = store.context_net.classify(query, now, store.config.ltm_decay, mask=mask)
    clusters = {cl.id: cl for cl in store.context_net.clusters}

    def decode(cluster_id: int) -> int:
        centroid = clusters[cluster_id].centroid
        return index.location_for_dim(int(np.argmax(centroid[c : c + l])))

    order = sorted(
        range(len(report.cluster_ids)),
        key=lambda i: (-report.activations[i], report.cluster_ids[i]),
    )
    ranked: list[tuple[str, int, float]] = []
    seen: set[int] = set()
    for i in order:
        loc = decode(report.cluster_ids[i])
        if loc not in seen:
            seen.add(loc)
            ranked.append((report.labels[i], loc, float(report.activations[i])))
    return FetchPrediction(
        context=context_name,
        location=decode(report.winner_id),
        report=report,
        ranked=ranked,
    )
