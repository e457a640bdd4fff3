// DOM wiring for the console: forms dispatch one service call each, then the
// whole view re-renders from /state and /log.

import { ApiError, HomelearnClient, WorldOp } from "./api.js";
import {
    escapeHtml,
    renderError,
    renderEventFeed,
    renderLabelList,
    renderStatus,
    renderTeachOutcome,
    renderTimeline,
    renderWorld,
} from "./render.js";

const params = new URLSearchParams(window.location.search);
const client = new HomelearnClient(params.get("service") ?? "http://127.0.0.1:8520");

function el<T extends HTMLElement>(id: string): T {
    const node = document.getElementById(id);
    if (!node) throw new Error(`missing element #${id}`);
    return node as T;
}

function setPanel(id: string, html: string): void {
    el(id).innerHTML = html;
}

async function refresh(): Promise<void> {
    const [state, log] = await Promise.all([client.state(), client.log()]);
    setPanel("status", renderStatus(state));
    setPanel("world", renderWorld(state));
    setPanel("labels", renderLabelList(state));
    setPanel("feed", renderEventFeed(log.events));

    const instanceSelect = el<HTMLSelectElement>("teach-instance");
    const known = Object.entries(state.instances).sort();
    instanceSelect.innerHTML = known
        .map(([iid, label]) => `<option value="${escapeHtml(iid)}">${escapeHtml(iid)} (${escapeHtml(label)})</option>`)
        .join("");
    const locationOptions = Object.entries(state.locations)
        .map(([id, loc]) => `<option value="${escapeHtml(id)}">${escapeHtml(loc.name)} #${escapeHtml(id)}</option>`)
        .join("");
    el<HTMLSelectElement>("context-location").innerHTML = locationOptions;
    el<HTMLSelectElement>("move-location").innerHTML = locationOptions;
    el<HTMLSelectElement>("move-instance").innerHTML = instanceSelect.innerHTML;
    const sceneSelect = el<HTMLSelectElement>("context-scene");
    const placed = Object.keys(state.placements).sort();
    sceneSelect.innerHTML = placed
        .map((iid) => `<option value="${escapeHtml(iid)}">${escapeHtml(iid)}</option>`)
        .join("");
}

function showResult(html: string): void {
    setPanel("result", html);
}

async function action(run: () => Promise<string>): Promise<void> {
    try {
        showResult(await run());
    } catch (err) {
        if (err instanceof ApiError) showResult(renderError(err.status, err.detail));
        else showResult(renderError(0, String(err)));
    }
    try {
        await refresh();
    } catch {
        // service went away; keep the last rendered result visible
    }
}

function bind(): void {
    el<HTMLFormElement>("teach-form").addEventListener("submit", (e) => {
        e.preventDefault();
        const label = el<HTMLInputElement>("teach-label").value.trim();
        const instance = el<HTMLSelectElement>("teach-instance").value;
        const views = Number(el<HTMLInputElement>("teach-views").value);
        void action(async () => renderTeachOutcome(await client.teachObject(label, instance, views)));
    });

    el<HTMLFormElement>("context-form").addEventListener("submit", (e) => {
        e.preventDefault();
        const name = el<HTMLInputElement>("context-name").value.trim();
        const location = Number(el<HTMLSelectElement>("context-location").value);
        const scene = Array.from(el<HTMLSelectElement>("context-scene").selectedOptions).map((o) => o.value);
        void action(async () => {
            const r = await client.teachContext(name, location, scene);
            return `<p>${escapeHtml(r.outcome)}: saw ${r.predicted_objects.map(escapeHtml).join(", ") || "nothing"}</p>`;
        });
    });

    el<HTMLFormElement>("fetch-form").addEventListener("submit", (e) => {
        e.preventDefault();
        const label = el<HTMLInputElement>("fetch-label").value.trim();
        void action(async () => renderTimeline(await client.fetchObject(label)));
    });

    el<HTMLButtonElement>("next-day").addEventListener("click", () => {
        void action(async () => {
            const r = await client.advanceClock(1.0);
            return `<p>advanced to day ${r.clock.toFixed(2)}</p>`;
        });
    });

    el<HTMLFormElement>("move-form").addEventListener("submit", (e) => {
        e.preventDefault();
        const op: WorldOp = {
            op: "move",
            instance: el<HTMLSelectElement>("move-instance").value,
            location: Number(el<HTMLSelectElement>("move-location").value),
        };
        void action(async () => {
            await client.mutateWorld(op);
            return `<p>moved ${escapeHtml(op.instance)} to location ${op.location}</p>`;
        });
    });
}

bind();
void refresh().catch(() => showResult(renderError(0, `service unreachable at ${client.baseUrl}`)));
