"""Interactive teaching service: one session of store + world behind HTTP.

Endpoints mirror the teaching loop: teach an object by showing views of an
instance, teach a context by naming a scene at a location, request a fetch,
advance the simulated clock, edit the world, and inspect state. All mutations
funnel through one lock and are appended to an event log; replaying the log
against a fresh session reproduces the same state summary (simulated time
only moves by explicit request, so there are no hidden timers).
"""

from __future__ import annotations

import threading
import time
from dataclasses import dataclass, field as dc_field

import numpy as np
from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse
from pydantic import BaseModel, Field

from .clusters import NetworkConfig, TAU_CONTEXTS, TAU_OBJECTS
from .context import LabelIndex, build_context_map, teach_context
from .decay import DecayConfig
from .features import sample_view
from .harness import default_scenario
from .memory import MemoryConfig, MemoryStore
from .world import WorldState, execute_fetch


class NotFoundError(ValueError):
    pass


class ConflictError(ValueError):
    pass


@dataclass
class ServiceSettings:
    seed: int = 7
    dim: int = 64
    sigma: float = 0.05
    world: dict | None = None  # world definition; the default scenario's world when None
    tau_objects: float = TAU_OBJECTS
    tau_contexts: float = TAU_CONTEXTS
    ltm_alpha: float = 0.2
    stm_alpha: float = 15.0
    decay_u: float = 0.6
    gamma: float = 3.0
    fallback: bool = False
    error_probs: dict | None = None


class Session:
    """Single teaching session; one per process."""

    def __init__(self, settings: ServiceSettings | None = None):
        self.settings = settings or ServiceSettings()
        s = self.settings
        definition = s.world or default_scenario(seed=s.seed, sigma=s.sigma, dim=s.dim).world
        if s.error_probs:
            merged = {**definition.get("error_probs", {}), **s.error_probs}
            definition = {**definition, "error_probs": merged}
        self.world = WorldState.from_definition(definition, seed=s.seed, multi_location_fallback=s.fallback)
        self.store = MemoryStore(
            dim=self.world.dim,
            config=MemoryConfig(
                gamma=s.gamma,
                ltm_decay=DecayConfig(alpha=s.ltm_alpha, u=s.decay_u),
                stm_decay=DecayConfig(alpha=s.stm_alpha, u=s.decay_u),
            ),
            object_config=NetworkConfig(tau=s.tau_objects),
            context_config=NetworkConfig(tau=s.tau_contexts),
        )
        self.index = LabelIndex()
        for loc_id in sorted(self.world.locations):
            self.index.register_location(loc_id)
        self.log: list[dict] = []
        self.lock = threading.Lock()

    # ------------------------------------------------------------ operations

    def _record(self, op: str, request: dict) -> None:
        self.log.append({"seq": len(self.log), "clock": self.store.clock, "op": op, "request": request})

    def teach_object(self, label: str, instance_id: str, n_views: int) -> dict:
        with self.lock:
            if instance_id not in self.world.instances:
                raise NotFoundError(f"unknown instance {instance_id!r}")
            if n_views < 1:
                raise ValueError("n_views must be >= 1")
            instance = self.world.instances[instance_id]
            self.index.register_category(label)
            self.world.introduce(instance.label)
            recruited = []
            for _ in range(n_views):
                view = sample_view(instance.model, self.world.next_view_index(instance.label))
                outcome = self.store.object_net.learn_one(
                    label, view, self.store.clock, self.store.config.ltm_decay
                )
                recruited.append(outcome.recruited)
            self._record("teach_object", {"label": label, "instance_id": instance_id, "n_views": n_views})
            return {
                "clock": self.store.clock,
                "views_used": n_views,
                "clusters_after": len(self.store.object_net.clusters_for(label)),
                "recruited": recruited,
            }

    def teach_context_scene(self, name: str, location_id: int, scene: list[str]) -> dict:
        with self.lock:
            if len(self.store.object_net) == 0:
                raise ConflictError("teach objects before contexts")
            if location_id not in self.world.locations:
                raise NotFoundError(f"unknown location {location_id}")
            for iid in scene:
                if iid not in self.world.instances:
                    raise NotFoundError(f"unknown instance {iid!r}")
            views = [
                sample_view(self.world.instances[iid].model,
                            self.world.next_view_index(self.world.instances[iid].label))
                for iid in scene
            ]
            cmap, predicted = build_context_map(
                views, location_id, self.store.object_net, self.index,
                self.store.clock, self.store.config.ltm_decay,
            )
            outcome = teach_context(self.store, name, cmap)
            self._record("teach_context", {"name": name, "location_id": location_id, "scene": scene})
            return {
                "clock": self.store.clock,
                "predicted_objects": predicted,
                "outcome": outcome.kind,
                "cluster_id": outcome.cluster_id,
            }

    def fetch(self, label: str) -> dict:
        with self.lock:
            if label not in self.store.object_net.labels:
                raise NotFoundError(f"label {label!r} has not been taught")
            result = execute_fetch(self.world, self.store, self.index, label)
            self._record("fetch", {"label": label})
            return {
                "clock": self.store.clock,
                "requested": result.requested,
                "predicted_context": (
                    None
                    if result.predicted_context is None
                    else {"name": result.predicted_context[0], "location": result.predicted_context[1]}
                ),
                "success": result.success,
                "failure_kind": result.failure_kind,
                "execution_time": result.execution_time,
                "picked_instance": result.picked_instance,
                "detect_misses": result.detect_misses,
                "legs": [
                    {"kind": l.kind, "ok": l.ok, "seconds": l.seconds, "note": l.note}
                    for l in result.legs
                ],
                "observations": [
                    {"instance_id": o.instance_id, "predicted": o.predicted}
                    for o in result.observations
                ],
            }

    def advance_clock(self, days: float) -> dict:
        with self.lock:
            clock = self.store.advance_clock(days)
            self.store.stm_sweep()
            self._record("advance_clock", {"days": days})
            return {"clock": clock}

    def mutate_world(self, op: dict) -> dict:
        with self.lock:
            try:
                self.world.mutate(op)
            except ValueError as exc:
                if "duplicate" in str(exc):
                    raise ConflictError(str(exc)) from None
                raise NotFoundError(str(exc)) from None
            self._record("mutate_world", {"op": op})
            return {"clock": self.store.clock, "placements": dict(self.world.placements)}

    # ---------------------------------------------------------------- reads

    def state_summary(self) -> dict:
        with self.lock:
            now = self.store.clock
            obj_net, ctx_net = self.store.object_net, self.store.context_net
            obj_weights = obj_net.effective_weights(now, self.store.config.ltm_decay)
            labels = {}
            for label in sorted(obj_net.labels):
                ids = [c.id for c in obj_net.clusters_for(label)]
                labels[label] = {
                    "clusters": len(ids),
                    "raw_weight": sum(c.raw_weight for c in obj_net.clusters_for(label)),
                    "mean_effective_weight": float(np.mean([obj_weights[i] for i in ids])),
                }
            hist, edges = np.histogram(list(obj_weights.values()) or [0.0], bins=8)
            return {
                "clock": now,
                "object_labels": len(obj_net.labels),
                "object_clusters": len(obj_net),
                "context_labels": len(ctx_net.labels),
                "context_clusters": len(ctx_net),
                "stm_size": len(self.store.stm),
                "labels": labels,
                "effective_weight_histogram": {
                    "counts": hist.tolist(),
                    "edges": [float(e) for e in edges],
                },
                "placements": dict(self.world.placements),
                "pending_placements": dict(self.world.pending_placements),
                "instances": {
                    iid: inst.label for iid, inst in sorted(self.world.instances.items())
                },
                "locations": {
                    str(loc.id): {"name": loc.name, "xy": list(loc.xy)}
                    for loc in self.world.locations.values()
                },
                "robot_pose": self.world.robot_pose,
                "base_station": self.world.base_station,
            }

    def event_log(self) -> list[dict]:
        with self.lock:
            return list(self.log)

    # --------------------------------------------------------------- replay

    @classmethod
    def replay(cls, settings: ServiceSettings, log: list[dict]) -> "Session":
        """Rebuild a session by re-running a logged operation sequence."""
        session = cls(settings)
        dispatch = {
            "teach_object": lambda r: session.teach_object(r["label"], r["instance_id"], r["n_views"]),
            "teach_context": lambda r: session.teach_context_scene(r["name"], r["location_id"], r["scene"]),
            "fetch": lambda r: session.fetch(r["label"]),
            "advance_clock": lambda r: session.advance_clock(r["days"]),
            "mutate_world": lambda r: session.mutate_world(r["op"]),
        }
        for entry in log:
            dispatch[entry["op"]](entry["request"])
        return session


# ------------------------------------------------------------------ HTTP app


class TeachObjectBody(BaseModel):
    label: str = Field(min_length=1)
    instance_id: str
    n_views: int = Field(ge=1)


class TeachContextBody(BaseModel):
    name: str = Field(min_length=1)
    location_id: int
    scene: list[str]


class FetchBody(BaseModel):
    label: str = Field(min_length=1)


class AdvanceBody(BaseModel):
    days: float = Field(gt=0)


class MutateBody(BaseModel):
    op: dict


def create_app(session: Session | None = None) -> FastAPI:
    session = session or Session()
    app = FastAPI(title="homelearn teaching service")
    app.state.session = session
    from fastapi.middleware.cors import CORSMiddleware

    # the browser console is served from a different local port
    app.add_middleware(
        CORSMiddleware, allow_origins=["*"], allow_methods=["*"], allow_headers=["*"]
    )

    @app.exception_handler(NotFoundError)
    async def _not_found(request: Request, exc: NotFoundError):
        return JSONResponse(status_code=404, content={"detail": str(exc), "clock": session.store.clock})

    @app.exception_handler(ConflictError)
    async def _conflict(request: Request, exc: ConflictError):
        return JSONResponse(status_code=409, content={"detail": str(exc), "clock": session.store.clock})

    @app.exception_handler(ValueError)
    async def _bad_value(request: Request, exc: ValueError):
        return JSONResponse(status_code=422, content={"detail": str(exc), "clock": session.store.clock})

    @app.post("/teach/object")
    def teach_object(body: TeachObjectBody):
        return session.teach_object(body.label, body.instance_id, body.n_views)

    @app.post("/teach/context")
    def teach_context_endpoint(body: TeachContextBody):
        return session.teach_context_scene(body.name, body.location_id, body.scene)

    @app.post("/fetch")
    def fetch(body: FetchBody):
        return session.fetch(body.label)

    @app.post("/clock/advance")
    def advance(body: AdvanceBody):
        return session.advance_clock(body.days)

    @app.post("/world/mutate")
    def mutate(body: MutateBody):
        return session.mutate_world(body.op)

    @app.get("/state")
    def state():
        return session.state_summary()

    @app.get("/log")
    def log():
        return {"clock": session.store.clock, "events": session.event_log()}

    return app


def serve(settings: ServiceSettings, host: str = "127.0.0.1", port: int = 8520) -> None:
    import uvicorn

    uvicorn.run(create_app(Session(settings)), host=host, port=port, log_level="info")
