import { afterEach, describe, expect, it, vi } from "vitest";

import { ApiError, HomelearnClient } from "../src/api.js";

interface Recorded {
    url: string;
    method: string;
    body: unknown;
}

function mockFetch(status = 200, payload: unknown = { clock: 0 }): Recorded[] {
    const calls: Recorded[] = [];
    vi.stubGlobal(
        "fetch",
        vi.fn(async (url: string, init?: RequestInit) => {
            calls.push({
                url: String(url),
                method: init?.method ?? "GET",
                body: init?.body ? JSON.parse(String(init.body)) : undefined,
            });
            return new Response(JSON.stringify(payload), {
                status,
                headers: { "content-type": "application/json" },
            });
        })
    );
    return calls;
}

afterEach(() => {
    vi.unstubAllGlobals();
});

describe("client call mapping", () => {
    it("maps every action to exactly one documented endpoint", async () => {
        const calls = mockFetch();
        const client = new HomelearnClient("http://svc");
        await client.teachObject("cup", "cup-1", 5);
        await client.teachContext("kitchen", 2, ["cup-1"]);
        await client.fetchObject("cup");
        await client.advanceClock(1);
        await client.mutateWorld({ op: "move", instance: "cup-1", location: 3 });
        await client.state();
        await client.log();
        expect(calls.map((c) => `${c.method} ${c.url}`)).toEqual([
            "POST http://svc/teach/object",
            "POST http://svc/teach/context",
            "POST http://svc/fetch",
            "POST http://svc/clock/advance",
            "POST http://svc/world/mutate",
            "GET http://svc/state",
            "GET http://svc/log",
        ]);
    });

    it("sends the service's field names", async () => {
        const calls = mockFetch();
        const client = new HomelearnClient("http://svc");
        await client.teachObject("cup", "cup-1", 5);
        expect(calls[0].body).toEqual({ label: "cup", instance_id: "cup-1", n_views: 5 });
        await client.teachContext("kitchen", 2, ["a", "b"]);
        expect(calls[1].body).toEqual({ name: "kitchen", location_id: 2, scene: ["a", "b"] });
    });
});

describe("error handling", () => {
    it("raises ApiError carrying status and detail", async () => {
        mockFetch(409, { detail: "teach objects before contexts" });
        const client = new HomelearnClient("http://svc");
        const err = await client.teachContext("kitchen", 2, []).catch((e) => e);
        expect(err).toBeInstanceOf(ApiError);
        expect(err.status).toBe(409);
        expect(err.detail).toBe("teach objects before contexts");
    });
});
