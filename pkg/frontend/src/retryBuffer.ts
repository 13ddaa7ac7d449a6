/**
 * Retry buffer for label submissions.
 *
 * A label captured while the service is unreachable is retained locally and
 * retried, never dropped. The buffer is keyed by annotator + pair key, so a
 * re-labeled item overwrites its pending entry and a retried submission is
 * idempotent from the server's point of view (last write wins there too).
 */

import { NetworkError } from "./api";
import { LabelSubmission } from "./types";

export type SubmitFn = (submission: LabelSubmission) => Promise<void>;

export class RetryBuffer {
  private pending = new Map<string, LabelSubmission>();
  private flushing = false;

  constructor(private readonly submit: SubmitFn) {}

  private static keyOf(s: LabelSubmission): string {
    return `${s.annotator}${s.key}`;
  }

  get size(): number {
    return this.pending.size;
  }

  snapshot(): LabelSubmission[] {
    return [...this.pending.values()];
  }

  /**
   * Submit now; on network failure the label is buffered for later.
   * HTTP-level errors (bad token, unknown item) are not retriable and
   * propagate to the caller.
   */
  async push(submission: LabelSubmission): Promise<"sent" | "buffered"> {
    try {
      await this.submit(submission);
      return "sent";
    } catch (err) {
      if (err instanceof NetworkError) {
        this.pending.set(RetryBuffer.keyOf(submission), submission);
        return "buffered";
      }
      throw err;
    }
  }

  /**
   * Retry everything pending, in insertion order. Stops at the first
   * network failure (the rest stay buffered); non-network errors drop the
   * offending entry and propagate, since retrying them cannot succeed.
   */
  async flush(): Promise<number> {
    if (this.flushing) return 0;
    this.flushing = true;
    let sent = 0;
    try {
      for (const [key, submission] of [...this.pending]) {
        try {
          await this.submit(submission);
        } catch (err) {
          if (err instanceof NetworkError) return sent;
          this.pending.delete(key);
          throw err;
        }
        this.pending.delete(key);
        sent += 1;
      }
      return sent;
    } finally {
      this.flushing = false;
    }
  }
}
