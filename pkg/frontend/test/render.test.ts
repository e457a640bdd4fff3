import { describe, expect, it } from "vitest";

import type { FetchOutcome, StateSummary } from "../src/api.js";
import {
    escapeHtml,
    renderError,
    renderEventFeed,
    renderLabelList,
    renderTimeline,
    renderWeightBar,
    renderWorld,
    retentionRatio,
} from "../src/render.js";

const successfulFetch: FetchOutcome = {
    clock: 1.0,
    requested: "cup",
    predicted_context: { name: "kitchen", location: 2 },
    success: true,
    failure_kind: "none",
    execution_time: 93.0,
    picked_instance: "cup-1",
    detect_misses: 0,
    legs: [
        { kind: "query", ok: true, seconds: 10, note: "kitchen@2" },
        { kind: "navigate", ok: true, seconds: 24, note: "1->2" },
        { kind: "perceive", ok: true, seconds: 5, note: "2 detected" },
        { kind: "pick", ok: true, seconds: 15, note: "cup-1" },
        { kind: "navigate", ok: true, seconds: 24, note: "2->1" },
        { kind: "place", ok: true, seconds: 15, note: "cup-1" },
    ],
    observations: [{ instance_id: "cup-1", predicted: "cup" }],
};

function state(overrides: Partial<StateSummary> = {}): StateSummary {
    return {
        clock: 0,
        object_labels: 0,
        object_clusters: 0,
        context_labels: 0,
        context_clusters: 0,
        stm_size: 0,
        labels: {},
        effective_weight_histogram: { counts: [], edges: [] },
        placements: {},
        pending_placements: {},
        instances: {},
        locations: {
            "1": { name: "dining", xy: [0, 0] },
            "2": { name: "kitchen", xy: [6, 0] },
        },
        robot_pose: 1,
        base_station: 1,
        ...overrides,
    };
}

describe("fetch timeline", () => {
    it("renders every pipeline leg with its time", () => {
        const html = renderTimeline(successfulFetch);
        for (const title of ["plan (context query)", "navigate", "perceive", "pick", "place"]) {
            expect(html).toContain(title);
        }
        expect(html).toContain("93.0 s");
        expect(html).toContain("kitchen @ location 2");
        expect(html).toContain("fetched");
    });

    it("marks a failed leg and names the failure kind", () => {
        const failed: FetchOutcome = {
            ...successfulFetch,
            success: false,
            failure_kind: "wrong_context",
            legs: successfulFetch.legs.slice(0, 3),
            picked_instance: null,
        };
        const html = renderTimeline(failed);
        expect(html).toContain("wrong_context");
        expect(html).toContain("failed");
        expect(html).not.toContain("pick");
    });
});

describe("error rendering", () => {
    it("shows a 409 with its explanation inline", () => {
        const html = renderError(409, "teach objects before contexts");
        expect(html).toContain("409");
        expect(html).toContain("teach objects before contexts");
        expect(html).toContain("error");
    });

    it("escapes markup in error details", () => {
        expect(renderError(422, "<script>alert(1)</script>")).not.toContain("<script>");
    });
});

describe("memory view", () => {
    it("drops weight bars toward 50% after a month of fading", () => {
        const fresh = renderWeightBar(retentionRatio({ clusters: 1, raw_weight: 6, mean_effective_weight: 6 }));
        const faded = renderWeightBar(
            retentionRatio({ clusters: 1, raw_weight: 6, mean_effective_weight: 6 * Math.pow(30, -0.2) })
        );
        expect(fresh).toContain("width:100%");
        expect(faded).toContain("width:51%");
    });

    it("lists taught labels with cluster counts", () => {
        const html = renderLabelList(
            state({ labels: { cup: { clusters: 2, raw_weight: 10, mean_effective_weight: 5 } } })
        );
        expect(html).toContain("cup");
        expect(html).toContain("<td>2</td>");
    });
});

describe("world view", () => {
    it("groups placements by location and flags robot/base", () => {
        const html = renderWorld(state({ placements: { "cup-1": 2, "plate-1": 2 } }));
        expect(html).toContain("kitchen");
        expect(html).toContain("cup-1");
        expect(html).toContain("plate-1");
        expect(html).toContain("robot");
        expect(html).toContain("base");
    });

    it("shows pending objects separately", () => {
        const html = renderWorld(state({ pending_placements: { "book-1": 2 } }));
        expect(html).toContain("not yet introduced");
        expect(html).toContain("book-1");
    });
});

describe("event feed", () => {
    it("renders newest first with op names", () => {
        const html = renderEventFeed([
            { seq: 0, clock: 0, op: "teach_object", request: { label: "cup" } },
            { seq: 1, clock: 1, op: "fetch", request: { label: "cup" } },
        ]);
        expect(html.indexOf("fetch")).toBeLessThan(html.indexOf("teach_object"));
    });
});

describe("escapeHtml", () => {
    it("escapes the usual suspects", () => {
        expect(escapeHtml(`<a href="x">&'</a>`)).toBe("&lt;a href=&quot;x&quot;&gt;&amp;&#39;&lt;/a&gt;");
    });
});
