/**
 * SME adjudication workspace: the queue of low-agreement items with every
 * annotator's label visible, and a terminal decision control. The decision
 * POSTs to /api/adjudication and the item leaves the queue on refresh.
 */

import { ApiClient, ApiError } from "./api";
import { GoldItem } from "./types";

export interface AdjudicationEntry {
  item: GoldItem;
  labels: Record<string, number>;
}

export interface AdjudicationState {
  phase: "loading" | "ready" | "empty" | "forbidden" | "error";
  entries: AdjudicationEntry[];
  message: string;
}

export class AdjudicationController {
  private state: AdjudicationState = { phase: "loading", entries: [], message: "" };

  constructor(
    private readonly client: ApiClient,
    private readonly sme: string,
  ) {}

  getState(): AdjudicationState {
    return { ...this.state, entries: [...this.state.entries] };
  }

  async refresh(): Promise<AdjudicationState> {
    try {
      const items = await this.client.adjudicationQueue();
      const entries: AdjudicationEntry[] = [];
      for (const item of items) {
        const detail = await this.client.getItem(item.key);
        entries.push({ item, labels: detail.labels });
      }
      this.state =
        entries.length === 0
          ? { phase: "empty", entries: [], message: "adjudication queue is empty" }
          : { phase: "ready", entries, message: "" };
    } catch (err) {
      if (err instanceof ApiError && (err.status === 401 || err.status === 403)) {
        this.state = { phase: "forbidden", entries: [], message: "not authorized" };
      } else {
        this.state = { phase: "error", entries: [], message: String(err) };
      }
    }
    return this.getState();
  }

  /** Terminal SME decision; refreshes the queue afterward. */
  async decide(key: string, label: 0 | 1): Promise<AdjudicationState> {
    try {
      await this.client.submitAdjudication({ sme: this.sme, key, label });
    } catch (err) {
      if (err instanceof ApiError && (err.status === 401 || err.status === 403)) {
        this.state = { phase: "forbidden", entries: [], message: "not authorized" };
        return this.getState();
      }
      throw err;
    }
    return this.refresh();
  }
}
