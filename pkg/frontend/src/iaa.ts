/**
 * IAA dashboard: read-only polling of GET /api/iaa (plus the adjudication
 * queue depth), with display formatting. Values are shown exactly as the
 * server reports them; the client never recomputes agreement.
 */

import { ApiClient, NetworkError } from "./api";
import { AgreementReport, Mode } from "./types";

export interface IaaSnapshot {
  status: "ok" | "empty" | "unreachable";
  report: AgreementReport | null;
  adjudicationDepth: number;
  message: string;
}

/** 2-decimal display, or the server's stated reason when undefined. */
export function formatMetric(
  value: number | null,
  metric: string,
  reasons: Record<string, string>,
): string {
  if (value !== null) return value.toFixed(2);
  return `undefined (${reasons[metric] ?? "not computable"})`;
}

export class IaaPoller {
  private timer: ReturnType<typeof setInterval> | null = null;
  private snapshot: IaaSnapshot = {
    status: "empty",
    report: null,
    adjudicationDepth: 0,
    message: "",
  };
  private listeners: Array<(s: IaaSnapshot) => void> = [];

  constructor(
    private readonly client: ApiClient,
    private readonly mode?: Mode,
    private readonly intervalMs: number = 5000,
  ) {}

  getSnapshot(): IaaSnapshot {
    return { ...this.snapshot };
  }

  subscribe(listener: (s: IaaSnapshot) => void): () => void {
    this.listeners.push(listener);
    return () => {
      this.listeners = this.listeners.filter((l) => l !== listener);
    };
  }

  async poll(): Promise<IaaSnapshot> {
    try {
      const [report, queue] = await Promise.all([
        this.client.iaa(this.mode),
        this.client.adjudicationQueue(),
      ]);
      if (report.n_items === 0) {
        this.snapshot = {
          status: "empty",
          report,
          adjudicationDepth: queue.length,
          message: "no co-labeled items",
        };
      } else {
        this.snapshot = {
          status: "ok",
          report,
          adjudicationDepth: queue.length,
          message: "",
        };
      }
    } catch (err) {
      this.snapshot = {
        ...this.snapshot,
        status: err instanceof NetworkError ? "unreachable" : this.snapshot.status,
        message: String(err),
      };
    }
    for (const listener of this.listeners) listener(this.getSnapshot());
    return this.getSnapshot();
  }

  start(): void {
    if (this.timer !== null) return;
    void this.poll();
    this.timer = setInterval(() => void this.poll(), this.intervalMs);
  }

  stop(): void {
    if (this.timer !== null) {
      clearInterval(this.timer);
      this.timer = null;
    }
  }
}
