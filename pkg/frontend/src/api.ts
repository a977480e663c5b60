import type {
  ApiError,
  EmbeddingDoc,
  PlaceResponse,
  RankRequest,
  RankResponse,
  Schema,
  SymbolInfo,
  SymbolMetrics,
} from "./types.js";
import { isApiError } from "./types.js";

export type FetchLike = (
  input: string,
  init?: { method?: string; headers?: Record<string, string>; body?: string },
) => Promise<{ ok: boolean; status: number; json(): Promise<unknown> }>;

/** Server error objects are thrown verbatim so the UI can show them as-is. */
export class ApiRequestError extends Error {
  constructor(
    readonly status: number,
    readonly error: ApiError,
  ) {
    super(error.message);
  }
}

export class ApiClient {
  constructor(
    private readonly baseUrl: string,
    private readonly fetchFn: FetchLike = (...args) =>
      fetch(...(args as Parameters<typeof fetch>)),
  ) {}

  private async request<T>(path: string, init?: Parameters<FetchLike>[1]): Promise<T> {
    const res = await this.fetchFn(this.baseUrl + path, init);
    const body = await res.json();
    if (!res.ok) {
      const err: ApiError = isApiError(body)
        ? body
        : { error_code: "http_error", message: `status ${res.status}`, detail: body };
      throw new ApiRequestError(res.status, err);
    }
    return body as T;
  }

  private post<T>(path: string, payload: unknown): Promise<T> {
    return this.request<T>(path, {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify(payload),
    });
  }

  schema(): Promise<Schema> {
    return this.request("/schema");
  }

  symbols(params?: { kind?: string; category?: string }): Promise<SymbolInfo[]> {
    const q = new URLSearchParams();
    if (params?.kind) q.set("kind", params.kind);
    if (params?.category) q.set("category", params.category);
    const qs = q.toString();
    return this.request(`/symbols${qs ? "?" + qs : ""}`);
  }

  rank(req: RankRequest): Promise<RankResponse> {
    return this.post("/rank", req);
  }

  place(answers: Record<string, string>): Promise<PlaceResponse> {
    return this.post("/place", { answers });
  }

  embedding(dim = 2): Promise<EmbeddingDoc> {
    return this.request(`/embedding?dim=${dim}`);
  }

  metrics(id: string): Promise<SymbolMetrics> {
    return this.request(`/metrics/${encodeURIComponent(id)}`);
  }
}
