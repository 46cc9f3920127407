import type {
  LagBlock,
  RadarPayload,
  RunConfig,
  RunDocument,
  RunSummary,
} from "./types.js";

// Narrow view of fetch so tests can swap in a fixture service without
// pulling in DOM types.  window.fetch satisfies it structurally.
export interface FetchResponseLike {
  ok: boolean;
  status: number;
  json(): Promise<unknown>;
}

export type FetchLike = (
  url: string,
  init?: { method?: string; headers?: Record<string, string>; body?: string },
) => Promise<FetchResponseLike>;

export class ApiError extends Error {
  constructor(
    readonly status: number,
    message: string,
  ) {
    super(message);
    this.name = "ApiError";
  }
}

export interface SubmitReceipt {
  run_id: string;
  created: boolean;
}

export type SubgroupsPayload = LagBlock & { run_id: string };

// Thin typed client for the discovery service.  Every method maps to one
// endpoint; service errors are rethrown as ApiError with the message the
// service produced, verbatim.
export class ExplorerClient {
  constructor(
    private readonly baseUrl: string,
    private readonly fetchImpl: FetchLike,
  ) {}

  private async request(path: string, init?: Parameters<FetchLike>[1]): Promise<unknown> {
    const res = await this.fetchImpl(this.baseUrl + path, init);
    const body = await res.json().catch(() => ({}));
    if (!res.ok) {
      const message =
        typeof body === "object" && body !== null && "error" in body
          ? String((body as { error: unknown }).error)
          : `HTTP ${res.status}`;
      throw new ApiError(res.status, message);
    }
    return body;
  }

  async health(): Promise<void> {
    await this.request("/api/health");
  }

  async listRuns(): Promise<RunSummary[]> {
    const body = (await this.request("/api/runs")) as { runs: RunSummary[] };
    return body.runs;
  }

  async getRun(runId: string): Promise<RunDocument> {
    return (await this.request(`/api/runs/${runId}`)) as RunDocument;
  }

  async submitRun(config: RunConfig): Promise<SubmitReceipt> {
    return (await this.request("/api/runs", {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify(config),
    })) as SubmitReceipt;
  }

  async getSubgroups(runId: string, lag: number): Promise<SubgroupsPayload> {
    return (await this.request(`/api/runs/${runId}/subgroups?lag=${lag}`)) as SubgroupsPayload;
  }

  async getRadar(runId: string, lag: number): Promise<RadarPayload> {
    return (await this.request(`/api/runs/${runId}/radar?lag=${lag}`)) as RadarPayload;
  }
}
