// Typed client for the teaching service. Every console action maps to exactly
// one endpoint here; the UI holds no simulation logic of its own.

export interface TeachObjectResult {
    clock: number;
    views_used: number;
    clusters_after: number;
    recruited: boolean[];
}

export interface TeachContextResult {
    clock: number;
    predicted_objects: string[];
    outcome: string;
    cluster_id: number;
}

export interface FetchLeg {
    kind: string;
    ok: boolean;
    seconds: number;
    note: string;
}

export interface FetchOutcome {
    clock: number;
    requested: string;
    predicted_context: { name: string; location: number } | null;
    success: boolean;
    failure_kind: string;
    execution_time: number;
    picked_instance: string | null;
    detect_misses: number;
    legs: FetchLeg[];
    observations: { instance_id: string; predicted: string }[];
}

export interface LabelStats {
    clusters: number;
    raw_weight: number;
    mean_effective_weight: number;
}

export interface StateSummary {
    clock: number;
    object_labels: number;
    object_clusters: number;
    context_labels: number;
    context_clusters: number;
    stm_size: number;
    labels: Record<string, LabelStats>;
    effective_weight_histogram: { counts: number[]; edges: number[] };
    placements: Record<string, number>;
    pending_placements: Record<string, number>;
    instances: Record<string, string>;
    locations: Record<string, { name: string; xy: [number, number] }>;
    robot_pose: number;
    base_station: number;
}

export interface LogEntry {
    seq: number;
    clock: number;
    op: string;
    request: Record<string, unknown>;
}

export type WorldOp =
    | { op: "move"; instance: string; location: number }
    | { op: "remove"; instance: string }
    | { op: "add"; instance: string; label: string; location: number };

export class ApiError extends Error {
    constructor(public status: number, public detail: string) {
        super(`HTTP ${status}: ${detail}`);
    }
}

async function parseError(response: Response): Promise<ApiError> {
    let detail = response.statusText;
    try {
        const body = await response.json();
        if (typeof body.detail === "string") detail = body.detail;
        else if (body.detail) detail = JSON.stringify(body.detail);
    } catch {
        // non-JSON error body; keep the status text
    }
    return new ApiError(response.status, detail);
}

export class HomelearnClient {
    constructor(public baseUrl: string = "http://127.0.0.1:8520") {}

    private async request<T>(method: string, path: string, body?: unknown): Promise<T> {
        const response = await fetch(this.baseUrl + path, {
            method,
            headers: body === undefined ? undefined : { "content-type": "application/json" },
            body: body === undefined ? undefined : JSON.stringify(body),
        });
        if (!response.ok) throw await parseError(response);
        return (await response.json()) as T;
    }

    teachObject(label: string, instanceId: string, nViews: number): Promise<TeachObjectResult> {
        return this.request("POST", "/teach/object", {
            label,
            instance_id: instanceId,
            n_views: nViews,
        });
    }

    teachContext(name: string, locationId: number, scene: string[]): Promise<TeachContextResult> {
        return this.request("POST", "/teach/context", {
            name,
            location_id: locationId,
            scene,
        });
    }

    fetchObject(label: string): Promise<FetchOutcome> {
        return this.request("POST", "/fetch", { label });
    }

    advanceClock(days: number): Promise<{ clock: number }> {
        return this.request("POST", "/clock/advance", { days });
    }

    mutateWorld(op: WorldOp): Promise<{ clock: number; placements: Record<string, number> }> {
        return this.request("POST", "/world/mutate", { op });
    }

    state(): Promise<StateSummary> {
        return this.request("GET", "/state");
    }

    log(): Promise<{ clock: number; events: LogEntry[] }> {
        return this.request("GET", "/log");
    }
}
