"""Simulated home: locations, object placements, and the fetch pipeline.

A fetch runs query -> navigate -> perceive -> pick -> navigate back -> place.
Perception, manipulation and navigation can each fail with configured
probabilities drawn from the world's seeded generator, so identical seeds and
command sequences replay bit-identically. Execution time is the sum of the
attempted legs' times; a failed fetch stops at the failing leg and the robot
pose persists wherever the pipeline stopped.

Every perceived view is pushed into short-term memory with its predicted
label — repeated sightings during testing are what drive consolidation.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field

import numpy as np

from .context import LabelIndex, UnknownLabelError, masked_fetch_query
from .clusters import EmptyNetworkError
from .features import SyntheticCategoryModel, make_category_model, sample_view
from .memory import OBJECT_KIND, MemoryStore


@dataclass
class ErrorProbs:
    detect_fail: float = 0.05
    manip_fail: float = 0.08
    nav_fail: float = 0.02

    def __post_init__(self):
        for name in ("detect_fail", "manip_fail", "nav_fail"):
            p = getattr(self, name)
            if not 0.0 <= p <= 1.0:
                raise ValueError(f"{name} must be in [0, 1]")


@dataclass
class TimeModel:
    sec_per_meter: float = 4.0
    sec_perceive: float = 5.0
    sec_manip: float = 15.0
    sec_fixed: float = 10.0


@dataclass
class Location:
    id: int
    name: str
    xy: tuple[float, float]


@dataclass
class ObjectInstance:
    id: str
    label: str
    model: SyntheticCategoryModel


@dataclass
class Leg:
    kind: str  # query | navigate | perceive | pick | place
    ok: bool
    seconds: float
    note: str = ""


@dataclass
class Observation:
    instance_id: str
    predicted: str
    feature: np.ndarray


FAILURE_KINDS = (
    "none",
    "wrong_context",
    "misclassified",
    "detect_fail",
    "manip_fail",
    "nav_fail",
    "absent",
)


@dataclass
class FetchResult:
    requested: str
    predicted_context: tuple[str, int] | None
    legs: list[Leg]
    success: bool
    failure_kind: str
    execution_time: float
    observations: list[Observation] = field(default_factory=list)
    picked_instance: str | None = None
    detect_misses: int = 0


class CallTimer:
    """Accumulates wall time over repeated calls (learn/classify accounting)."""

    def __init__(self):
        self.seconds = 0.0
        self.calls = 0

    def add(self, seconds: float) -> None:
        self.seconds += seconds
        self.calls += 1

    @property
    def mean_ms(self) -> float:
        return 1000.0 * self.seconds / self.calls if self.calls else 0.0


class WorldState:
    def __init__(
        self,
        seed: int = 0,
        dim: int = 64,
        sigma: float = 0.05,
        model_seed: int = 11,
        error_probs: ErrorProbs | None = None,
        time_model: TimeModel | None = None,
        multi_location_fallback: bool = False,
        staged_introduction: bool = False,
    ):
        self.locations: dict[int, Location] = {}
        self.instances: dict[str, ObjectInstance] = {}
        self.placements: dict[str, int] = {}
        # with staged introduction, instances wait here until their label is taught
        self.pending_placements: dict[str, int] = {}
        self.base_station: int | None = None
        self.robot_pose: int | None = None
        self.error_probs = error_probs or ErrorProbs()
        self.time_model = time_model or TimeModel()
        self.multi_location_fallback = multi_location_fallback
        self.staged_introduction = staged_introduction
        self.dim = dim
        self.sigma = sigma
        self.model_seed = model_seed
        self.rng = np.random.default_rng(np.random.SeedSequence([seed & (2**64 - 1), 0xB0B]))
        self._models: dict[str, SyntheticCategoryModel] = {}
        self._view_seq: dict[str, int] = {}

    # ----------------------------------------------------------------- setup

    def add_location(self, location_id: int, name: str, xy: tuple[float, float]) -> None:
        if location_id in self.locations:
            raise ValueError(f"duplicate location id {location_id}")
        self.locations[location_id] = Location(location_id, name, (float(xy[0]), float(xy[1])))

    def set_base_station(self, location_id: int) -> None:
        self._require_location(location_id)
        self.base_station = location_id
        if self.robot_pose is None:
            self.robot_pose = location_id

    def model_for_label(self, label: str) -> SyntheticCategoryModel:
        if label not in self._models:
            self._models[label] = make_category_model(label, self.model_seed, self.sigma, self.dim)
        return self._models[label]

    def add_instance(self, instance_id: str, label: str, location_id: int, pending: bool = False) -> None:
        if instance_id in self.instances:
            raise ValueError(f"duplicate instance id {instance_id!r}")
        self._require_location(location_id)
        self.instances[instance_id] = ObjectInstance(instance_id, label, self.model_for_label(label))
        if pending:
            self.pending_placements[instance_id] = location_id
        else:
            self.placements[instance_id] = location_id

    def introduce(self, label: str) -> None:
        """Place every pending instance of `label` at its home location
        (objects enter the home when the user first teaches them)."""
        for iid in [i for i, _ in self.pending_placements.items() if self.instances[i].label == label]:
            self.placements[iid] = self.pending_placements.pop(iid)

    @classmethod
    def from_definition(cls, definition: dict, seed: int = 0, multi_location_fallback: bool = False) -> "WorldState":
        feature = definition.get("feature", {})
        world = cls(
            seed=seed,
            dim=int(feature.get("dim", 64)),
            sigma=float(feature.get("sigma", 0.05)),
            model_seed=int(feature.get("model_seed", 11)),
            error_probs=ErrorProbs(**definition.get("error_probs", {})),
            time_model=TimeModel(**definition.get("time_model", {})),
            multi_location_fallback=multi_location_fallback,
            staged_introduction=bool(definition.get("staged_introduction", False)),
        )
        for loc in definition["locations"]:
            world.add_location(int(loc["id"]), loc["name"], tuple(loc["xy"]))
        world.set_base_station(int(definition["base_station"]))
        for inst in definition["instances"]:
            world.add_instance(inst["id"], inst["label"], int(inst["location"]), pending=world.staged_introduction)
        return world

    # ------------------------------------------------------------- mutations

    def move_instance(self, instance_id: str, location_id: int) -> None:
        self._require_instance(instance_id)
        self._require_location(location_id)
        if instance_id in self.pending_placements:
            self.pending_placements[instance_id] = location_id
        else:
            self.placements[instance_id] = location_id

    def remove_instance(self, instance_id: str) -> None:
        self._require_instance(instance_id)
        self.placements.pop(instance_id, None)
        self.pending_placements.pop(instance_id, None)
        del self.instances[instance_id]

    def mutate(self, op: dict) -> None:
        """Apply one world edit: {"op": "move"|"remove"|"add", ...}. No learning
        side effects — the robot has to re-observe or be re-taught."""
        kind = op.get("op")
        if kind == "move":
            self.move_instance(op["instance"], int(op["location"]))
        elif kind == "remove":
            self.remove_instance(op["instance"])
        elif kind == "add":
            self.add_instance(op["instance"], op["label"], int(op["location"]))
        else:
            raise ValueError(f"unknown world op {kind!r}")

    # ------------------------------------------------------------ perception

    def next_view_index(self, label: str) -> int:
        idx = self._view_seq.get(label, 0)
        self._view_seq[label] = idx + 1
        return idx

    def sample_teaching_view(self, label: str) -> np.ndarray:
        model = self.model_for_label(label)
        return sample_view(model, self.next_view_index(label))

    def instances_at(self, location_id: int) -> list[ObjectInstance]:
        self._require_location(location_id)
        ids = sorted(iid for iid, loc in self.placements.items() if loc == location_id)
        return [self.instances[iid] for iid in ids]

    def perceive(self, location_id: int) -> list[tuple[str, np.ndarray]]:
        detections, _ = self._perceive(location_id)
        return detections

    def _perceive(self, location_id: int) -> tuple[list[tuple[str, np.ndarray]], list[str]]:
        detections: list[tuple[str, np.ndarray]] = []
        missed: list[str] = []
        for inst in self.instances_at(location_id):
            if self.rng.random() < self.error_probs.detect_fail:
                missed.append(inst.id)
            else:
                view = sample_view(inst.model, self.next_view_index(inst.label))
                detections.append((inst.id, view))
        return detections, missed

    # --------------------------------------------------------------- helpers

    def distance(self, a: int, b: int) -> float:
        xa, ya = self.locations[a].xy
        xb, yb = self.locations[b].xy
        return math.hypot(xa - xb, ya - yb)

    def _require_location(self, location_id: int) -> None:
        if location_id not in self.locations:
            raise ValueError(f"unknown location {location_id}")

    def _require_instance(self, instance_id: str) -> None:
        if instance_id not in self.instances:
            raise ValueError(f"unknown instance {instance_id!r}")


def execute_fetch(
    world: WorldState,
    store: MemoryStore,
    index: LabelIndex,
    label: str,
    now: float | None = None,
    classify_timer: CallTimer | None = None,
) -> FetchResult:
    """Run the full fetch pipeline for one requested object label."""
    now = store.clock if now is None else now
    tm = world.time_model
    legs: list[Leg] = []
    observations: list[Observation] = []
    detect_misses = 0

    def finish(success: bool, failure: str, predicted=None, picked=None) -> FetchResult:
        return FetchResult(
            requested=label,
            predicted_context=predicted,
            legs=legs,
            success=success,
            failure_kind=failure,
            execution_time=sum(l.seconds for l in legs),
            observations=observations,
            picked_instance=picked,
            detect_misses=detect_misses,
        )

    if label not in store.object_net.labels:
        return finish(False, "absent")

    try:
        prediction = masked_fetch_query(store, label, index, now)
    except (UnknownLabelError, EmptyNetworkError) as exc:
        legs.append(Leg("query", False, tm.sec_fixed, str(exc)))
        return finish(False, "wrong_context")
    predicted = (prediction.context, prediction.location)
    legs.append(Leg("query", True, tm.sec_fixed, f"{prediction.context}@{prediction.location}"))

    def navigate(target: int) -> bool:
        dist = world.distance(world.robot_pose, target)
        ok = world.rng.random() >= world.error_probs.nav_fail
        legs.append(Leg("navigate", ok, dist * tm.sec_per_meter, f"{world.robot_pose}->{target}"))
        if ok:
            world.robot_pose = target
        return ok

    def survey(location: int) -> tuple[str | None, str | None]:
        """Perceive + classify at `location`; returns (pickable instance id,
        local diagnosis when the requested object was not found here)."""
        nonlocal detect_misses
        detections, missed = world._perceive(location)
        detect_misses += len(missed)
        legs.append(Leg("perceive", True, tm.sec_perceive, f"{len(detections)} detected"))
        candidate = None
        for iid, view in detections:
            t0 = time.perf_counter()
            pred, _ = store.object_net.classify(view, now, store.config.ltm_decay)
            if classify_timer is not None:
                classify_timer.add(time.perf_counter() - t0)
            observations.append(Observation(iid, pred, view))
            store.stm_observe(view, pred, OBJECT_KIND, now)
            if pred == label and candidate is None:
                candidate = iid
        if candidate is not None:
            return candidate, None
        here = [i.id for i in world.instances_at(location) if i.label == label]
        if not here:
            return None, None
        if all(iid in missed for iid in here):
            return None, "detect_fail"
        return None, "misclassified"

    # candidate locations: the prediction first, then fallback ranks if enabled
    plan = [prediction.location]
    if world.multi_location_fallback:
        plan += [loc for _, loc, _ in prediction.ranked if loc != prediction.location]

    picked = None
    diagnosis: str | None = None
    for target in plan:
        if not navigate(target):
            return finish(False, "nav_fail", predicted)
        candidate, local = survey(target)
        if candidate is not None:
            picked = candidate
            break
        if local is not None and diagnosis is None:
            diagnosis = local
    if picked is None:
        return finish(False, diagnosis or "wrong_context", predicted)

    if world.rng.random() < world.error_probs.manip_fail:
        legs.append(Leg("pick", False, tm.sec_manip, picked))
        return finish(False, "manip_fail", predicted, picked)
    legs.append(Leg("pick", True, tm.sec_manip, picked))

    if not navigate(world.base_station):
        return finish(False, "nav_fail", predicted, picked)

    if world.rng.random() < world.error_probs.manip_fail:
        legs.append(Leg("place", False, tm.sec_manip, picked))
        return finish(False, "manip_fail", predicted, picked)
    legs.append(Leg("place", True, tm.sec_manip, picked))

    if world.instances[picked].label == label:
        return finish(True, "none", predicted, picked)
    return finish(False, "misclassified", predicted, picked)
