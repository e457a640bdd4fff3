"""Scenario-driven experiment runner.

A scenario is a JSON document (schema 1): a world definition plus an ordered
list of increments, each advancing the clock, teaching objects/contexts,
mutating the world, and running fetch tests. Scenarios are validated strictly
(unknown fields are rejected, errors carry the offending path).

Each run uses a fresh store and world with a seeded relabeling of object
categories, so teaching order varies across runs while every structural
constraint (objects taught before their context scenes) is preserved.
Metrics per increment: object classification accuracy over perceived views,
context (location) prediction accuracy for requested objects, task success,
failure counts by kind, and execution time over successful fetches.

The joint-training baseline collapses all teaching into clock zero against
the initial world and runs the final increment's fetch tests cycled to 15
tasks.
"""

from __future__ import annotations

import csv
import io
import json
import time
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .clusters import NetworkConfig
from .context import LabelIndex, build_context_map, teach_context
from .decay import DecayConfig, effective_weight
from .features import sample_view
from .memory import MemoryConfig, MemoryStore
from .world import CallTimer, WorldState, execute_fetch


class ScenarioError(ValueError):
    def __init__(self, path: str, message: str):
        super().__init__(f"{path}: {message}")
        self.path = path


# --------------------------------------------------------------- scenario IR


@dataclass
class TeachObjectSpec:
    label: str
    views: int


@dataclass
class TeachContextSpec:
    name: str
    location: int
    scene: list[str]


@dataclass
class Increment:
    clock_advance: float = 0.0
    teach_objects: list[TeachObjectSpec] = field(default_factory=list)
    teach_contexts: list[TeachContextSpec] = field(default_factory=list)
    world_ops: list[dict] = field(default_factory=list)
    fetch_tests: list[str] = field(default_factory=list)


@dataclass
class ScenarioScript:
    seed: int
    runs: int
    world: dict
    increments: list[Increment]

    @classmethod
    def parse(cls, doc: dict) -> "ScenarioScript":
        return _validate_scenario(doc)

    def to_document(self) -> dict:
        return {
            "schema": 1,
            "seed": self.seed,
            "runs": self.runs,
            "world": self.world,
            "increments": [
                {
                    "clock_advance": inc.clock_advance,
                    "teach_objects": [{"label": t.label, "views": t.views} for t in inc.teach_objects],
                    "teach_contexts": [
                        {"name": t.name, "location": t.location, "scene": list(t.scene)}
                        for t in inc.teach_contexts
                    ],
                    "world_ops": [dict(op) for op in inc.world_ops],
                    "fetch_tests": list(inc.fetch_tests),
                }
                for inc in self.increments
            ],
        }


def load_scenario(path: str | Path) -> ScenarioScript:
    try:
        doc = json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise ScenarioError("$", f"not valid JSON ({exc})") from None
    return ScenarioScript.parse(doc)


# ---------------------------------------------------------------- validation


def _check_keys(obj: dict, path: str, required: dict, optional: dict) -> None:
    if not isinstance(obj, dict):
        raise ScenarioError(path, f"expected an object, got {type(obj).__name__}")
    for key in obj:
        if key not in required and key not in optional:
            raise ScenarioError(f"{path}.{key}", "unknown field")
    for key, kind in required.items():
        if key not in obj:
            raise ScenarioError(f"{path}.{key}", "missing required field")
        _check_type(obj[key], kind, f"{path}.{key}")
    for key, kind in optional.items():
        if key in obj:
            _check_type(obj[key], kind, f"{path}.{key}")


def _check_type(value, kind, path: str) -> None:
    if kind == "bool" and not isinstance(value, bool):
        raise ScenarioError(path, "expected a boolean")
    if kind == "int" and not (isinstance(value, int) and not isinstance(value, bool)):
        raise ScenarioError(path, "expected an integer")
    if kind == "num" and not (isinstance(value, (int, float)) and not isinstance(value, bool)):
        raise ScenarioError(path, "expected a number")
    if kind == "str" and not isinstance(value, str):
        raise ScenarioError(path, "expected a string")
    if kind == "list" and not isinstance(value, list):
        raise ScenarioError(path, "expected a list")
    if kind == "dict" and not isinstance(value, dict):
        raise ScenarioError(path, "expected an object")


def _validate_scenario(doc: dict) -> ScenarioScript:
    _check_keys(
        doc,
        "$",
        required={"schema": "int", "seed": "int", "world": "dict", "increments": "list"},
        optional={"runs": "int"},
    )
    if doc["schema"] != 1:
        raise ScenarioError("$.schema", f"unsupported schema {doc['schema']}")
    runs = doc.get("runs", 5)
    if runs < 1:
        raise ScenarioError("$.runs", "must be >= 1")

    world = doc["world"]
    _check_keys(
        world,
        "$.world",
        required={"locations": "list", "base_station": "int", "instances": "list"},
        optional={"error_probs": "dict", "time_model": "dict", "feature": "dict",
                  "staged_introduction": "bool"},
    )
    if not world["locations"]:
        raise ScenarioError("$.world.locations", "must be non-empty")
    loc_ids: set[int] = set()
    for i, loc in enumerate(world["locations"]):
        p = f"$.world.locations[{i}]"
        _check_keys(loc, p, required={"id": "int", "name": "str", "xy": "list"}, optional={})
        if len(loc["xy"]) != 2:
            raise ScenarioError(f"{p}.xy", "expected [x, y]")
        if loc["id"] in loc_ids:
            raise ScenarioError(f"{p}.id", f"duplicate location id {loc['id']}")
        loc_ids.add(loc["id"])
    if world["base_station"] not in loc_ids:
        raise ScenarioError("$.world.base_station", f"unknown location {world['base_station']}")
    if "error_probs" in world:
        _check_keys(world["error_probs"], "$.world.error_probs", required={},
                    optional={"detect_fail": "num", "manip_fail": "num", "nav_fail": "num"})
    if "time_model" in world:
        _check_keys(world["time_model"], "$.world.time_model", required={},
                    optional={"sec_per_meter": "num", "sec_perceive": "num",
                              "sec_manip": "num", "sec_fixed": "num"})
    if "feature" in world:
        _check_keys(world["feature"], "$.world.feature", required={},
                    optional={"dim": "int", "sigma": "num", "model_seed": "int"})

    instance_ids: set[str] = set()
    labels: set[str] = set()
    for i, inst in enumerate(world["instances"]):
        p = f"$.world.instances[{i}]"
        _check_keys(inst, p, required={"id": "str", "label": "str", "location": "int"}, optional={})
        if not inst["id"] or not inst["label"]:
            raise ScenarioError(p, "id and label must be non-empty")
        if inst["id"] in instance_ids:
            raise ScenarioError(f"{p}.id", f"duplicate instance id {inst['id']!r}")
        if inst["location"] not in loc_ids:
            raise ScenarioError(f"{p}.location", f"unknown location {inst['location']}")
        instance_ids.add(inst["id"])
        labels.add(inst["label"])

    if not doc["increments"]:
        raise ScenarioError("$.increments", "must be non-empty")
    increments: list[Increment] = []
    known_instances = set(instance_ids)
    known_labels = set(labels)
    for k, raw in enumerate(doc["increments"]):
        p = f"$.increments[{k}]"
        _check_keys(
            raw,
            p,
            required={},
            optional={"clock_advance": "num", "teach_objects": "list", "teach_contexts": "list",
                      "world_ops": "list", "fetch_tests": "list"},
        )
        inc = Increment(clock_advance=float(raw.get("clock_advance", 0.0)))
        if inc.clock_advance < 0:
            raise ScenarioError(f"{p}.clock_advance", "must be >= 0")
        for j, t in enumerate(raw.get("teach_objects", [])):
            tp = f"{p}.teach_objects[{j}]"
            _check_keys(t, tp, required={"label": "str", "views": "int"}, optional={})
            if t["views"] < 1:
                raise ScenarioError(f"{tp}.views", "must be >= 1")
            if t["label"] not in known_labels:
                raise ScenarioError(f"{tp}.label", f"label {t['label']!r} not defined in world")
            inc.teach_objects.append(TeachObjectSpec(t["label"], t["views"]))
        for j, t in enumerate(raw.get("teach_contexts", [])):
            tp = f"{p}.teach_contexts[{j}]"
            _check_keys(t, tp, required={"name": "str", "location": "int", "scene": "list"}, optional={})
            if t["location"] not in loc_ids:
                raise ScenarioError(f"{tp}.location", f"unknown location {t['location']}")
            for s, iid in enumerate(t["scene"]):
                if iid not in known_instances:
                    raise ScenarioError(f"{tp}.scene[{s}]", f"unknown instance {iid!r}")
            inc.teach_contexts.append(TeachContextSpec(t["name"], t["location"], list(t["scene"])))
        for j, op in enumerate(raw.get("world_ops", [])):
            op_path = f"{p}.world_ops[{j}]"
            if not isinstance(op, dict) or "op" not in op:
                raise ScenarioError(op_path, "expected an object with an 'op' field")
            kind = op["op"]
            if kind == "move":
                _check_keys(op, op_path, required={"op": "str", "instance": "str", "location": "int"}, optional={})
                if op["instance"] not in known_instances:
                    raise ScenarioError(f"{op_path}.instance", f"unknown instance {op['instance']!r}")
                if op["location"] not in loc_ids:
                    raise ScenarioError(f"{op_path}.location", f"unknown location {op['location']}")
            elif kind == "remove":
                _check_keys(op, op_path, required={"op": "str", "instance": "str"}, optional={})
                if op["instance"] not in known_instances:
                    raise ScenarioError(f"{op_path}.instance", f"unknown instance {op['instance']!r}")
                known_instances.discard(op["instance"])
            elif kind == "add":
                _check_keys(op, op_path, required={"op": "str", "instance": "str", "label": "str", "location": "int"}, optional={})
                if op["instance"] in known_instances:
                    raise ScenarioError(f"{op_path}.instance", f"duplicate instance {op['instance']!r}")
                if op["location"] not in loc_ids:
                    raise ScenarioError(f"{op_path}.location", f"unknown location {op['location']}")
                known_instances.add(op["instance"])
                known_labels.add(op["label"])
            else:
                raise ScenarioError(f"{op_path}.op", f"unknown op {kind!r}")
            inc.world_ops.append(dict(op))
        for j, label in enumerate(raw.get("fetch_tests", [])):
            if not isinstance(label, str) or label not in known_labels:
                raise ScenarioError(f"{p}.fetch_tests[{j}]", f"label {label!r} not defined in world")
            inc.fetch_tests.append(label)
        increments.append(inc)
    return ScenarioScript(seed=doc["seed"], runs=runs, world=world, increments=increments)


# ------------------------------------------------------------- label shuffle


def permute_labels(script: ScenarioScript, mapping: dict[str, str]) -> ScenarioScript:
    """Relabel every category reference through `mapping` (a bijection).

    Instance ids and scene lists are untouched, so objects keep being taught
    before the scenes that contain them under any relabeling.
    """

    def remap(label: str) -> str:
        return mapping.get(label, label)

    world = json.loads(json.dumps(script.world))  # deep copy
    for inst in world["instances"]:
        inst["label"] = remap(inst["label"])
    increments = []
    for inc in script.increments:
        increments.append(
            Increment(
                clock_advance=inc.clock_advance,
                teach_objects=[TeachObjectSpec(remap(t.label), t.views) for t in inc.teach_objects],
                teach_contexts=[TeachContextSpec(t.name, t.location, list(t.scene)) for t in inc.teach_contexts],
                world_ops=[
                    {**op, "label": remap(op["label"])} if op.get("op") == "add" else dict(op)
                    for op in inc.world_ops
                ],
                fetch_tests=[remap(l) for l in inc.fetch_tests],
            )
        )
    return ScenarioScript(seed=script.seed, runs=script.runs, world=world, increments=increments)


# -------------------------------------------------------------------- metrics


@dataclass
class IncrementMetrics:
    increment: int
    object_seen: int = 0
    object_correct: int = 0
    context_evaluable: int = 0
    context_correct: int = 0
    task_total: int = 0
    task_success: int = 0
    manip_errors: int = 0
    percept_errors: int = 0
    nav_errors: int = 0
    wrong_context_failures: int = 0
    misclassified_failures: int = 0
    absent_failures: int = 0
    exec_time_sum: float = 0.0
    exec_time_count: int = 0
    learn_seconds: float = 0.0
    learn_calls: int = 0
    classify_seconds: float = 0.0
    classify_calls: int = 0

    @property
    def object_acc(self) -> float | None:
        return 100.0 * self.object_correct / self.object_seen if self.object_seen else None

    @property
    def context_acc(self) -> float | None:
        return 100.0 * self.context_correct / self.context_evaluable if self.context_evaluable else None

    @property
    def task_acc(self) -> float | None:
        return 100.0 * self.task_success / self.task_total if self.task_total else None

    @property
    def mean_exec_time(self) -> float | None:
        return self.exec_time_sum / self.exec_time_count if self.exec_time_count else None

    @property
    def mean_learn_ms(self) -> float | None:
        return 1000.0 * self.learn_seconds / self.learn_calls if self.learn_calls else None

    @property
    def mean_classify_ms(self) -> float | None:
        return 1000.0 * self.classify_seconds / self.classify_calls if self.classify_calls else None


_AGG_FIELDS = [
    ("objects", "object_acc"),
    ("contexts", "context_acc"),
    ("tasks", "task_acc"),
    ("time", "mean_exec_time"),
    ("manip", "manip_errors"),
    ("percept", "percept_errors"),
    ("nav", "nav_errors"),
    ("learn_ms", "mean_learn_ms"),
    ("classify_ms", "mean_classify_ms"),
]

# wall-clock columns stay out of emitted reports so identical (scenario, seed)
# pairs produce byte-identical output; timings remain on the report object
_REPORT_FIELDS = _AGG_FIELDS[:7]


@dataclass
class RunReport:
    seed: int
    per_run: list[list[IncrementMetrics]]

    @property
    def runs(self) -> int:
        return len(self.per_run)

    def aggregate(self) -> list[dict]:
        """Per-increment mean/std over runs (population std; one run gives 0)."""
        if not self.per_run:
            return []
        n_inc = len(self.per_run[0])
        rows: list[dict] = []
        for k in range(n_inc):
            row: dict = {"increment": k + 1}
            for name, attr in _AGG_FIELDS:
                values = []
                for run in self.per_run:
                    v = getattr(run[k], attr)
                    if isinstance(v, (int, float)) and v is not None:
                        values.append(float(v))
                if values:
                    row[f"{name}_mean"] = float(np.mean(values))
                    row[f"{name}_std"] = float(np.std(values))
                else:
                    row[f"{name}_mean"] = None
                    row[f"{name}_std"] = None
            rows.append(row)
        return rows


def _fmt(value: float | None) -> str:
    return "" if value is None else f"{value:.4f}"


def emit_report(report: RunReport, fmt: str = "table") -> str:
    """Render the aggregate as an aligned table or RFC-4180 CSV."""
    rows = report.aggregate()
    columns = ["increment"]
    for name, _ in _REPORT_FIELDS:
        columns += [f"{name}_mean", f"{name}_std"]
    if fmt == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf)
        writer.writerow(columns)
        for row in rows:
            writer.writerow([row["increment"]] + [_fmt(row[c]) for c in columns[1:]])
        return buf.getvalue()
    if fmt != "table":
        raise ValueError(f"unknown format {fmt!r}")
    header = ["inc"] + [f"{name}" for name, _ in _REPORT_FIELDS]
    lines = ["  ".join(f"{h:>16}" for h in header)]
    for row in rows:
        cells = [f"{row['increment']:>16}"]
        for name, _ in _REPORT_FIELDS:
            m, s = row[f"{name}_mean"], row[f"{name}_std"]
            cells.append(f"{'':>16}" if m is None else f"{m:10.2f} ± {s:<5.2f}"[:16].rjust(16))
        lines.append("  ".join(cells))
    return "\n".join(lines) + "\n"


# --------------------------------------------------------------------- runner


def _derive_seed(*parts: int) -> int:
    return int(np.random.SeedSequence(list(parts)).generate_state(1)[0])


def _build_engine(
    script: ScenarioScript,
    run: int,
    memory_config: MemoryConfig | None,
    object_config: NetworkConfig | None,
    context_config: NetworkConfig | None,
    fallback: bool,
) -> tuple[WorldState, MemoryStore, LabelIndex, ScenarioScript]:
    labels = sorted({inst["label"] for inst in script.world["instances"]})
    rng = np.random.default_rng(np.random.SeedSequence([script.seed, run, 2]))
    mapping = dict(zip(labels, [labels[i] for i in rng.permutation(len(labels))]))
    permuted = permute_labels(script, mapping)
    world = WorldState.from_definition(
        permuted.world, seed=_derive_seed(script.seed, run, 1), multi_location_fallback=fallback
    )
    store = MemoryStore(
        dim=world.dim,
        config=memory_config,
        object_config=object_config,
        context_config=context_config,
    )
    index = LabelIndex()
    for loc_id in sorted(world.locations):
        index.register_location(loc_id)
    return world, store, index, permuted


def _teach_increment(
    inc: Increment,
    world: WorldState,
    store: MemoryStore,
    index: LabelIndex,
    metrics: IncrementMetrics,
) -> None:
    for spec in inc.teach_objects:
        index.register_category(spec.label)
        world.introduce(spec.label)
        for _ in range(spec.views):
            view = world.sample_teaching_view(spec.label)
            t0 = time.perf_counter()
            store.object_net.learn_one(spec.label, view, store.clock, store.config.ltm_decay)
            metrics.learn_seconds += time.perf_counter() - t0
            metrics.learn_calls += 1
    for spec in inc.teach_contexts:
        scene = []
        for iid in spec.scene:
            inst = world.instances[iid]
            scene.append(sample_view(inst.model, world.next_view_index(inst.label)))
        cmap, _ = build_context_map(
            scene, spec.location, store.object_net, index, store.clock, store.config.ltm_decay
        )
        t0 = time.perf_counter()
        teach_context(store, spec.name, cmap)
        metrics.learn_seconds += time.perf_counter() - t0
        metrics.learn_calls += 1


def _run_fetch_tests(
    tests: list[str],
    world: WorldState,
    store: MemoryStore,
    index: LabelIndex,
    metrics: IncrementMetrics,
) -> None:
    for label in tests:
        true_locations = {
            world.placements[iid]
            for iid, inst in world.instances.items()
            if inst.label == label and iid in world.placements
        }
        timer = CallTimer()
        result = execute_fetch(world, store, index, label, classify_timer=timer)
        metrics.classify_seconds += timer.seconds
        metrics.classify_calls += timer.calls

        metrics.task_total += 1
        if result.success:
            metrics.task_success += 1
            metrics.exec_time_sum += result.execution_time
            metrics.exec_time_count += 1
        if result.failure_kind == "manip_fail":
            metrics.manip_errors += 1
        elif result.failure_kind == "detect_fail":
            metrics.percept_errors += 1
        elif result.failure_kind == "nav_fail":
            metrics.nav_errors += 1
        elif result.failure_kind == "wrong_context":
            metrics.wrong_context_failures += 1
        elif result.failure_kind == "misclassified":
            metrics.misclassified_failures += 1
        elif result.failure_kind == "absent":
            metrics.absent_failures += 1
        for obs in result.observations:
            metrics.object_seen += 1
            if obs.instance_id in world.instances and world.instances[obs.instance_id].label == obs.predicted:
                metrics.object_correct += 1
        if true_locations:
            metrics.context_evaluable += 1
            if result.predicted_context is not None and result.predicted_context[1] in true_locations:
                metrics.context_correct += 1


def run_scenario(
    script: ScenarioScript,
    *,
    memory_config: MemoryConfig | None = None,
    object_config: NetworkConfig | None = None,
    context_config: NetworkConfig | None = None,
    fallback: bool = False,
) -> RunReport:
    """Execute every increment for every run; returns per-run, per-increment metrics."""
    per_run: list[list[IncrementMetrics]] = []
    for run in range(script.runs):
        world, store, index, permuted = _build_engine(
            script, run, memory_config, object_config, context_config, fallback
        )
        rows: list[IncrementMetrics] = []
        for k, inc in enumerate(permuted.increments):
            metrics = IncrementMetrics(increment=k + 1)
            if inc.clock_advance > 0:
                store.advance_clock(inc.clock_advance)
                store.stm_sweep()
            _teach_increment(inc, world, store, index, metrics)
            for op in inc.world_ops:
                world.mutate(op)
            _run_fetch_tests(inc.fetch_tests, world, store, index, metrics)
            store.prune_ltm()
            rows.append(metrics)
        per_run.append(rows)
    return RunReport(seed=script.seed, per_run=per_run)


def run_joint_baseline(
    script: ScenarioScript,
    *,
    memory_config: MemoryConfig | None = None,
    object_config: NetworkConfig | None = None,
    context_config: NetworkConfig | None = None,
    fallback: bool = False,
    n_tasks: int = 15,
) -> RunReport:
    """All teaching at clock zero against the initial world, then the final
    increment's fetch tests cycled to `n_tasks` tasks."""
    per_run: list[list[IncrementMetrics]] = []
    for run in range(script.runs):
        world, store, index, permuted = _build_engine(
            script, run, memory_config, object_config, context_config, fallback
        )
        metrics = IncrementMetrics(increment=1)
        for inc in permuted.increments:
            _teach_increment(inc, world, store, index, metrics)
        final_tests = permuted.increments[-1].fetch_tests
        if not final_tests:
            raise ScenarioError("$.increments[-1].fetch_tests", "joint baseline needs final fetch tests")
        tests = [final_tests[i % len(final_tests)] for i in range(n_tasks)]
        _run_fetch_tests(tests, world, store, index, metrics)
        per_run.append([metrics])
    return RunReport(seed=script.seed, per_run=per_run)


# ---------------------------------------------------------------- decay curve


def decay_curve(alpha: float, u: float, days: list[float], raw: float = 1.0) -> list[tuple[float, float]]:
    """Effective weight of a single event aged over `days` (half-life calibration aid)."""
    cfg = DecayConfig(alpha=alpha, u=u)
    return [(d, effective_weight(raw, np.array([0.0]), d, cfg)) for d in days]


# ------------------------------------------------------------ default scenario

KITCHEN_LABELS = [
    "cup", "plate", "fork", "spoon", "knife", "bowl", "mug",
    "pan", "kettle", "glass", "jar", "bottle", "sponge",
]
OFFICE_LABELS = ["book", "pen", "stapler", "notebook", "mouse", "keyboard", "scissors"]

DINING, KITCHEN, OFFICE = 1, 2, 3


def default_scenario(
    seed: int = 7,
    runs: int = 5,
    sigma: float = 0.05,
    dim: int = 64,
    error_probs: dict | None = None,
) -> ScenarioScript:
    """The shipped 16-increment protocol: 20 objects (13 kitchen / 7 office)
    taught two per increment over the first 10 increments with both contexts
    re-shown every increment, then six increments of world changes and context
    updates only. Fetch tests: 5 per increment for 1-10, 7 for 11-16, sampled
    from settled objects (taught at least one increment earlier when possible,
    never an object moved or removed during increments 11-16).
    """
    rng = np.random.default_rng(np.random.SeedSequence([seed, 99]))
    world = {
        "locations": [
            {"id": DINING, "name": "dining", "xy": [0.0, 0.0]},
            {"id": KITCHEN, "name": "kitchen", "xy": [6.0, 0.0]},
            {"id": OFFICE, "name": "office", "xy": [0.0, 7.0]},
        ],
        "base_station": DINING,
        "instances": (
            [{"id": f"{l}-1", "label": l, "location": KITCHEN} for l in KITCHEN_LABELS]
            + [{"id": f"{l}-1", "label": l, "location": OFFICE} for l in OFFICE_LABELS]
        ),
        # objects enter the home as they are taught; scripted world_ops stay in 11-16
        "staged_introduction": True,
        "error_probs": error_probs or {"detect_fail": 0.05, "manip_fail": 0.08, "nav_fail": 0.02},
        "time_model": {"sec_per_meter": 4.0, "sec_perceive": 5.0, "sec_manip": 15.0, "sec_fixed": 10.0},
        "feature": {"dim": dim, "sigma": sigma, "model_seed": seed},
    }

    # interleave kitchen/office so both contexts hold taught objects from day one
    order: list[str] = []
    for i in range(7):
        order += [KITCHEN_LABELS[i], OFFICE_LABELS[i]]
    order += KITCHEN_LABELS[7:]
    teach_slots = [order[2 * k : 2 * k + 2] for k in range(10)]

    placements = {inst["id"]: inst["location"] for inst in world["instances"]}
    context_names = {KITCHEN: "kitchen", OFFICE: "office"}

    moved_or_removed = {"sponge", "scissors", "jar", "bottle"}
    mutations = {
        11: [{"op": "move", "instance": "sponge-1", "location": OFFICE}],
        12: [{"op": "remove", "instance": "jar-1"}],
        13: [{"op": "move", "instance": "scissors-1", "location": KITCHEN}],
        15: [{"op": "move", "instance": "bottle-1", "location": OFFICE}],
    }

    # two increments sharing a day, both in the teaching phase and the update phase
    advances = [0.0] + [1.0] * 15
    advances[6] = advances[7] = 0.5
    advances[11] = advances[12] = 0.5

    taught: list[str] = []
    previously_taught: set[str] = set()
    increments: list[Increment] = []
    for k in range(16):
        inc = Increment(clock_advance=advances[k])
        if k < 10:
            for label in teach_slots[k]:
                inc.teach_objects.append(TeachObjectSpec(label, int(rng.integers(5, 11))))
            previously_taught = set(taught)
            taught += teach_slots[k]
        else:
            previously_taught = set(taught)
        for op in mutations.get(k + 1, []):
            inc.world_ops.append(op)
            if op["op"] == "move":
                placements[op["instance"]] = op["location"]
            else:
                placements.pop(op["instance"], None)
        # full current scene of every taught object placed at each context
        for loc in (KITCHEN, OFFICE):
            scene = sorted(
                iid for iid, where in placements.items()
                if where == loc and iid.rsplit("-", 1)[0] in taught
            )
            if scene:
                for _ in range(2):
                    inc.teach_contexts.append(TeachContextSpec(context_names[loc], loc, scene))
        n_tests = 5 if k < 10 else 7
        settled = [
            l for l in taught
            if l not in moved_or_removed and (l in previously_taught or k >= 10)
        ]
        pool = settled or [l for l in taught if l not in moved_or_removed]
        picks = rng.choice(len(pool), size=n_tests, replace=len(pool) < n_tests)
        inc.fetch_tests = [pool[int(i)] for i in picks]
        increments.append(inc)

    return ScenarioScript(seed=seed, runs=runs, world=world, increments=increments)
