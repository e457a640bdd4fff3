// Pure HTML-string renderers: everything on screen derives from the service's
// /state and /log plus the last action's response, so a refresh rebuilds the
// identical view.

import type { FetchOutcome, LogEntry, StateSummary, TeachObjectResult } from "./api.js";

export function escapeHtml(value: unknown): string {
    return String(value)
        .replaceAll("&", "&amp;")
        .replaceAll("<", "&lt;")
        .replaceAll(">", "&gt;")
        .replaceAll('"', "&quot;")
        .replaceAll("'", "&#39;");
}

export function fmtSeconds(s: number): string {
    return `${s.toFixed(1)} s`;
}

export function fmtDays(d: number): string {
    return `day ${d.toFixed(2)}`;
}

/** Fraction of a label's raw weight still effective after fading, in [0, 1]. */
export function retentionRatio(stats: { clusters: number; raw_weight: number; mean_effective_weight: number }): number {
    if (stats.raw_weight <= 0 || stats.clusters <= 0) return 0;
    const meanRaw = stats.raw_weight / stats.clusters;
    return Math.max(0, Math.min(1, stats.mean_effective_weight / meanRaw));
}

export function renderWeightBar(ratio: number): string {
    const pct = Math.round(ratio * 100);
    return (
        `<span class="bar" title="${pct}% retained">` +
        `<span class="bar-fill" style="width:${pct}%"></span></span>` +
        `<span class="bar-label">${pct}%</span>`
    );
}

export function renderLabelList(state: StateSummary): string {
    const labels = Object.keys(state.labels).sort();
    if (labels.length === 0) return `<p class="empty">No objects taught yet.</p>`;
    const rows = labels.map((label) => {
        const stats = state.labels[label];
        return (
            `<tr><td>${escapeHtml(label)}</td><td>${stats.clusters}</td>` +
            `<td>${renderWeightBar(retentionRatio(stats))}</td></tr>`
        );
    });
    return (
        `<table><thead><tr><th>label</th><th>clusters</th><th>memory strength</th></tr></thead>` +
        `<tbody>${rows.join("")}</tbody></table>`
    );
}

export function renderWorld(state: StateSummary): string {
    const byLocation = new Map<string, string[]>();
    for (const [iid, loc] of Object.entries(state.placements)) {
        const key = String(loc);
        if (!byLocation.has(key)) byLocation.set(key, []);
        byLocation.get(key)!.push(iid);
    }
    const blocks = Object.entries(state.locations).map(([id, loc]) => {
        const here = (byLocation.get(id) ?? []).sort();
        const tags = [
            Number(id) === state.robot_pose ? "robot" : "",
            Number(id) === state.base_station ? "base" : "",
        ].filter(Boolean);
        const suffix = tags.length ? ` <em>(${tags.join(", ")})</em>` : "";
        const items = here.length
            ? `<ul>${here.map((i) => `<li>${escapeHtml(i)}</li>`).join("")}</ul>`
            : `<p class="empty">empty</p>`;
        return `<div class="location"><h4>${escapeHtml(loc.name)} #${escapeHtml(id)}${suffix}</h4>${items}</div>`;
    });
    const pending = Object.keys(state.pending_placements).sort();
    const pendingBlock = pending.length
        ? `<div class="location"><h4>not yet introduced</h4><ul>` +
          pending.map((i) => `<li>${escapeHtml(i)}</li>`).join("") +
          `</ul></div>`
        : "";
    return blocks.join("") + pendingBlock;
}

export function renderStatus(state: StateSummary): string {
    return (
        `<span class="clock">${fmtDays(state.clock)}</span> · ` +
        `${state.object_labels} labels / ${state.object_clusters} clusters · ` +
        `${state.context_labels} contexts / ${state.context_clusters} clusters · ` +
        `STM ${state.stm_size}`
    );
}

export function renderTeachOutcome(result: TeachObjectResult): string {
    const marks = result.recruited
        .map((r) => `<span class="${r ? "recruited" : "updated"}">${r ? "recruited" : "updated"}</span>`)
        .join(" ");
    return `<p>${result.views_used} views → ${marks} (${result.clusters_after} cluster(s))</p>`;
}

const LEG_TITLES: Record<string, string> = {
    query: "plan (context query)",
    navigate: "navigate",
    perceive: "perceive",
    pick: "pick",
    place: "place",
};

export function renderTimeline(outcome: FetchOutcome): string {
    const target = outcome.predicted_context
        ? `${escapeHtml(outcome.predicted_context.name)} @ location ${outcome.predicted_context.location}`
        : "no prediction";
    const legs = outcome.legs.map((leg) => {
        const title = LEG_TITLES[leg.kind] ?? leg.kind;
        return (
            `<li class="${leg.ok ? "ok" : "failed"}">` +
            `<span class="leg-kind">${escapeHtml(title)}</span>` +
            `<span class="leg-note">${escapeHtml(leg.note)}</span>` +
            `<span class="leg-time">${fmtSeconds(leg.seconds)}</span>` +
            `${leg.ok ? "" : " ✗"}</li>`
        );
    });
    const verdict = outcome.success
        ? `<p class="ok">fetched <strong>${escapeHtml(outcome.requested)}</strong>` +
          (outcome.picked_instance ? ` (${escapeHtml(outcome.picked_instance)})` : "") +
          ` in ${fmtSeconds(outcome.execution_time)}</p>`
        : `<p class="failed">failed: <strong>${escapeHtml(outcome.failure_kind)}</strong>` +
          ` after ${fmtSeconds(outcome.execution_time)}</p>`;
    return `<p>target: ${target}</p><ol class="timeline">${legs.join("")}</ol>${verdict}`;
}

export function renderError(status: number, detail: string): string {
    return `<p class="error">HTTP ${status}: ${escapeHtml(detail)}</p>`;
}

export function renderEventFeed(events: LogEntry[], limit = 12): string {
    if (events.length === 0) return `<p class="empty">No activity yet.</p>`;
    const recent = events.slice(-limit).reverse();
    const rows = recent.map(
        (e) =>
            `<li><span class="seq">#${e.seq}</span> <span class="clock">${fmtDays(e.clock)}</span> ` +
            `<strong>${escapeHtml(e.op)}</strong> ${escapeHtml(JSON.stringify(e.request))}</li>`
    );
    return `<ul class="feed">${rows.join("")}</ul>`;
}
