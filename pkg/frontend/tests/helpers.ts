/**
 * In-memory stand-in for the annotation service, faithful to the server's
 * documented semantics (queue ordering, last-write-wins labels, terminal
 * adjudication, agreement report passthrough). Used to drive the
 * controllers without a network.
 */

import { ApiClient, FetchLike, NetworkError } from "../src/api";
import { GoldItem, LabelSubmission } from "../src/types";

export function makeItem(overrides: Partial<GoldItem> & { key: string }): GoldItem {
  return {
    mode: "self",
    doc1_chunk: "The filing deadline is March thirty first for all units.",
    doc2_chunk: "The filing deadline is June thirty first for all units.",
    context1: "",
    context2: "",
    sources: ["nli", "hybrid"],
    human_label: null,
    adjudicated: false,
    ...overrides,
  };
}

export class FakeServer {
  items = new Map<string, GoldItem>();
  labels = new Map<string, Map<string, number>>(); // key -> annotator -> label
  adjudications = new Map<string, number>();
  offline = false;
  requests: Array<{ method: string; path: string }> = [];

  constructor(items: GoldItem[]) {
    for (const item of items) {
      this.items.set(item.key, item);
      this.labels.set(item.key, new Map());
    }
  }

  private sortedKeys(): string[] {
    return [...this.items.keys()].sort();
  }

  nextFor(annotator: string): { item: GoldItem | null; remaining: number } {
    const unlabeled = this.sortedKeys().filter(
      (key) => !this.labels.get(key)?.has(annotator),
    );
    if (unlabeled.length === 0) return { item: null, remaining: 0 };
    return { item: this.items.get(unlabeled[0]) ?? null, remaining: unlabeled.length };
  }

  submitLabel(s: LabelSubmission): void {
    this.labels.get(s.key)?.set(s.annotator, s.label);
  }

  consolidated(key: string): GoldItem {
    const item = this.items.get(key);
    if (item === undefined) throw new Error(`no item ${key}`);
    const adj = this.adjudications.get(key);
    if (adj !== undefined) return { ...item, human_label: adj, adjudicated: true };
    const values = new Set(this.labels.get(key)?.values() ?? []);
    if (values.size === 1) return { ...item, human_label: [...values][0] };
    return { ...item };
  }

  adjudicationQueue(): GoldItem[] {
    return this.sortedKeys()
      .filter((key) => {
        if (this.adjudications.has(key)) return false;
        const perItem = [...(this.labels.get(key)?.values() ?? [])];
        return perItem.length >= 2 && new Set(perItem).size > 1;
      })
      .map((key) => this.consolidated(key));
  }

  iaaReport = {
    percent_agreement: 0.75 as number | null,
    cohen_kappa: 0.5 as number | null,
    kripp_alpha: 0.5333333333333333 as number | null,
    n_items: 4,
    n_annotators: 2,
    reasons: {} as Record<string, string>,
  };

  fetch: FetchLike = async (input, init) => {
    if (this.offline) throw new TypeError("failed to fetch");
    const method = init?.method ?? "GET";
    const url = new URL(input, "http://test");
    const path = url.pathname;
    this.requests.push({ method, path });
    const json = (body: unknown, status = 200) =>
      new Response(JSON.stringify(body), {
        status,
        headers: { "content-type": "application/json" },
      });
    if (path === "/api/queue/next") {
      return json(this.nextFor(url.searchParams.get("annotator") ?? ""));
    }
    if (path === "/api/labels" && method === "POST") {
      const body = JSON.parse(String(init?.body)) as LabelSubmission;
      if (!this.items.has(body.key)) return json({ detail: "unknown item" }, 404);
      this.submitLabel(body);
      return json({ ok: true });
    }
    if (path.startsWith("/api/items/")) {
      const key = decodeURIComponent(path.slice("/api/items/".length));
      if (!this.items.has(key)) return json({ detail: "unknown item" }, 404);
      const labels = Object.fromEntries(this.labels.get(key) ?? []);
      return json({ ...this.consolidated(key), labels, agreement: null });
    }
    if (path === "/api/iaa") {
      return json(this.iaaReport);
    }
    if (path === "/api/adjudication" && method === "GET") {
      return json({ items: this.adjudicationQueue() });
    }
    if (path === "/api/adjudication" && method === "POST") {
      const body = JSON.parse(String(init?.body)) as { key: string; label: number };
      if (!this.items.has(body.key)) return json({ detail: "unknown item" }, 404);
      this.adjudications.set(body.key, body.label);
      return json({ ok: true });
    }
    if (path === "/api/export/gold") {
      return json({ items: this.sortedKeys().map((key) => this.consolidated(key)) });
    }
    return json({ detail: "not found" }, 404);
  };

  client(token = ""): ApiClient {
    return new ApiClient({ token, fetchImpl: this.fetch });
  }
}

/** A client whose submissions fail with a network error until restored. */
export function flakySubmit(): {
  calls: LabelSubmission[];
  offline: { value: boolean };
  submit: (s: LabelSubmission) => Promise<void>;
} {
  const calls: LabelSubmission[] = [];
  const offline = { value: false };
  return {
    calls,
    offline,
    submit: async (s) => {
      if (offline.value) throw new NetworkError("offline");
      calls.push(s);
    },
  };
}
