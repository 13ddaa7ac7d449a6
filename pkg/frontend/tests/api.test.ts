import { describe, expect, it } from "vitest";

import { ApiClient, ApiError, NetworkError, TOKEN_HEADER } from "../src/api";
import { FakeServer, makeItem } from "./helpers";

describe("ApiClient", () => {
  it("sends the token header on every request", async () => {
    let seen: string | null = null;
    const client = new ApiClient({
      token: "secret",
      fetchImpl: async (_input, init) => {
        seen = (init?.headers as Record<string, string>)[TOKEN_HEADER] ?? null;
        return new Response(JSON.stringify({ item: null, remaining: 0 }), { status: 200 });
      },
    });
    await client.nextItem("ann1");
    expect(seen).toBe("secret");
  });

  it("omits the header when no token is configured", async () => {
    let headers: Record<string, string> = {};
    const client = new ApiClient({
      fetchImpl: async (_input, init) => {
        headers = (init?.headers as Record<string, string>) ?? {};
        return new Response(JSON.stringify({ item: null, remaining: 0 }), { status: 200 });
      },
    });
    await client.nextItem("ann1");
    expect(TOKEN_HEADER in headers).toBe(false);
  });

  it("parses the queue response", async () => {
    const server = new FakeServer([makeItem({ key: "k1" }), makeItem({ key: "k2" })]);
    const { item, remaining } = await server.client().nextItem("ann1");
    expect(item?.key).toBe("k1");
    expect(remaining).toBe(2);
  });

  it("raises ApiError with status and detail on HTTP failures", async () => {
    const server = new FakeServer([]);
    await expect(
      server.client().submitLabel({ annotator: "ann1", key: "ghost", label: 1 }),
    ).rejects.toMatchObject({ name: "ApiError", status: 404 });
  });

  it("maps fetch rejections to NetworkError", async () => {
    const server = new FakeServer([makeItem({ key: "k1" })]);
    server.offline = true;
    await expect(server.client().nextItem("ann1")).rejects.toBeInstanceOf(NetworkError);
  });

  it("rejects malformed payloads instead of rendering them", async () => {
    const client = new ApiClient({
      fetchImpl: async () =>
        new Response(JSON.stringify({ item: { key: 5 }, remaining: "lots" }), { status: 200 }),
    });
    await expect(client.nextItem("ann1")).rejects.toThrow();
  });

  it("never calls undocumented endpoints during a full flow", async () => {
    const server = new FakeServer([makeItem({ key: "k1" })]);
    const client = server.client();
    await client.nextItem("ann1");
    await client.submitLabel({ annotator: "ann1", key: "k1", label: 1 });
    await client.iaa();
    await client.adjudicationQueue();
    await client.exportGold();
    const documented = new Set([
      "/api/queue/next",
      "/api/labels",
      "/api/iaa",
      "/api/adjudication",
      "/api/export/gold",
    ]);
    for (const request of server.requests) {
      expect(
        documented.has(request.path) || request.path.startsWith("/api/items/"),
      ).toBe(true);
    }
  });

  it("passes ApiError through untouched for bad tokens", async () => {
    const client = new ApiClient({
      token: "wrong",
      fetchImpl: async () =>
        new Response(JSON.stringify({ detail: "missing or bad token" }), { status: 401 }),
    });
    try {
      await client.iaa();
      expect.unreachable("should have thrown");
    } catch (err) {
      expect(err).toBeInstanceOf(ApiError);
      expect((err as ApiError).status).toBe(401);
    }
  });
});
