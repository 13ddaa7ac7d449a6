/**
 * Queue view state machine.
 *
 * Serves one gold item at a time with both chunks and their contexts.
 * Source badges (nli / llm / hybrid / injected) stay hidden until the
 * annotator has submitted a label, so detector provenance cannot bias the
 * judgment. Keyboard shortcuts: "1" labels contradiction, "0" labels not.
 */

import { ApiClient } from "./api";
import { RetryBuffer } from "./retryBuffer";
import { GoldItem } from "./types";

export type QueuePhase = "loading" | "labeling" | "revealed" | "done" | "error";

export interface QueueState {
  phase: QueuePhase;
  item: GoldItem | null;
  remaining: number;
  /** Sources of the just-labeled item, shown only in the revealed phase. */
  revealedSources: string[];
  submittedLabel: 0 | 1 | null;
  buffered: number;
  message: string;
}

export class QueueController {
  private state: QueueState = {
    phase: "loading",
    item: null,
    remaining: 0,
    revealedSources: [],
    submittedLabel: null,
    buffered: 0,
    message: "",
  };
  private listeners: Array<(s: QueueState) => void> = [];
  readonly buffer: RetryBuffer;

  constructor(
    private readonly client: ApiClient,
    private readonly annotator: string,
  ) {
    this.buffer = new RetryBuffer((s) => this.client.submitLabel(s));
  }

  getState(): QueueState {
    return { ...this.state, revealedSources: [...this.state.revealedSources] };
  }

  subscribe(listener: (s: QueueState) => void): () => void {
    this.listeners.push(listener);
    return () => {
      this.listeners = this.listeners.filter((l) => l !== listener);
    };
  }

  private set(partial: Partial<QueueState>): void {
    this.state = { ...this.state, ...partial, buffered: this.buffer.size };
    for (const listener of this.listeners) listener(this.getState());
  }

  /** Sources visible to the annotator right now: none until after submit. */
  visibleSources(): string[] {
    return this.state.phase === "revealed" ? this.state.revealedSources : [];
  }

  async load(): Promise<void> {
    this.set({ phase: "loading", message: "" });
    try {
      const { item, remaining } = await this.client.nextItem(this.annotator);
      if (item === null) {
        this.set({ phase: "done", item: null, remaining: 0, submittedLabel: null });
        return;
      }
      this.set({
        phase: "labeling",
        item,
        remaining,
        revealedSources: [],
        submittedLabel: null,
      });
    } catch (err) {
      this.set({ phase: "error", message: String(err) });
    }
  }

  /** Submit a label for the current item; reveals its source badges. */
  async label(value: 0 | 1): Promise<void> {
    const item = this.state.item;
    if (this.state.phase !== "labeling" || item === null) return;
    const outcome = await this.buffer.push({
      annotator: this.annotator,
      key: item.key,
      label: value,
    });
    this.set({
      phase: "revealed",
      revealedSources: [...item.sources],
      submittedLabel: value,
      message: outcome === "buffered" ? "offline: label saved locally, will retry" : "",
    });
  }

  /** Advance past the reveal screen to the next queue item. */
  async next(): Promise<void> {
    if (this.state.phase !== "revealed") return;
    await this.buffer.flush().catch(() => {
      // flush failures keep their entries buffered; surfaced via count
    });
    await this.load();
  }

  /**
   * Keyboard shortcuts. While labeling, "1"/"0" submit; on the reveal
   * screen any of the same keys (or Enter/space) advance.
   */
  async onKey(key: string): Promise<void> {
    if (this.state.phase === "labeling") {
      if (key === "1") await this.label(1);
      else if (key === "0") await this.label(0);
    } else if (this.state.phase === "revealed") {
      if (key === "1" || key === "0" || key === "Enter" || key === " ") {
        await this.next();
      }
    }
  }
}
