/**
 * Thin typed client over the annotation service HTTP API.
 *
 * Every call goes through the documented endpoints; the client never
 * consolidates labels itself (the server is authoritative). The token rides
 * in the x-contraforge-token header on every request.
 */

import {
  AdjudicationQueueSchema,
  AdjudicationSubmission,
  AgreementReport,
  AgreementReportSchema,
  GoldExportSchema,
  GoldItem,
  ItemDetail,
  ItemDetailSchema,
  LabelSubmission,
  Mode,
  QueueResponse,
  QueueResponseSchema,
} from "./types";

export const TOKEN_HEADER = "x-contraforge-token";

export type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

export class ApiError extends Error {
  constructor(
    message: string,
    readonly status: number,
  ) {
    super(message);
    this.name = "ApiError";
  }
}

/** Network-level failure (server unreachable), as opposed to an HTTP error. */
export class NetworkError extends Error {
  constructor(message: string) {
    super(message);
    this.name = "NetworkError";
  }
}

export interface ApiClientOptions {
  baseUrl?: string;
  token?: string;
  fetchImpl?: FetchLike;
}

export class ApiClient {
  private readonly baseUrl: string;
  private readonly token: string;
  private readonly fetchImpl: FetchLike;

  constructor(options: ApiClientOptions = {}) {
    this.baseUrl = (options.baseUrl ?? "").replace(/\/+$/, "");
    this.token = options.token ?? "";
    this.fetchImpl = options.fetchImpl ?? ((input, init) => fetch(input, init));
  }

  private async request(method: string, path: string, body?: unknown): Promise<unknown> {
    const headers: Record<string, string> = {};
    if (this.token) headers[TOKEN_HEADER] = this.token;
    if (body !== undefined) headers["content-type"] = "application/json";
    let response: Response;
    try {
      response = await this.fetchImpl(this.baseUrl + path, {
        method,
        headers,
        body: body === undefined ? undefined : JSON.stringify(body),
      });
    } catch (err) {
      throw new NetworkError(`service unreachable: ${String(err)}`);
    }
    if (!response.ok) {
      let detail = response.statusText;
      try {
        const parsed = (await response.json()) as { detail?: unknown };
        if (parsed && parsed.detail !== undefined) detail = JSON.stringify(parsed.detail);
      } catch {
        // non-JSON error body; keep the status text
      }
      throw new ApiError(detail, response.status);
    }
    return response.json();
  }

  async nextItem(annotator: string): Promise<QueueResponse> {
    const raw = await this.request(
      "GET",
      `/api/queue/next?annotator=${encodeURIComponent(annotator)}`,
    );
    return QueueResponseSchema.parse(raw);
  }

  async submitLabel(submission: LabelSubmission): Promise<void> {
    await this.request("POST", "/api/labels", submission);
  }

  async getItem(key: string): Promise<ItemDetail> {
    const raw = await this.request("GET", `/api/items/${encodeURIComponent(key)}`);
    return ItemDetailSchema.parse(raw);
  }

  async iaa(mode?: Mode): Promise<AgreementReport> {
    const suffix = mode ? `?mode=${mode}` : "";
    const raw = await this.request("GET", `/api/iaa${suffix}`);
    return AgreementReportSchema.parse(raw);
  }

  async adjudicationQueue(): Promise<GoldItem[]> {
    const raw = await this.request("GET", "/api/adjudication");
    return AdjudicationQueueSchema.parse(raw).items;
  }

  async submitAdjudication(submission: AdjudicationSubmission): Promise<void> {
    await this.request("POST", "/api/adjudication", submission);
  }

  async exportGold(): Promise<GoldItem[]> {
    const raw = await this.request("GET", "/api/export/gold");
    return GoldExportSchema.parse(raw).items;
  }
}
