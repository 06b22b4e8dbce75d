// Thin typed client for the inference service.

import {
  HealthDoc,
  PredictRequest,
  PredictResponse,
  RangesDoc,
} from "./types.js";

export class ServiceError extends Error {
  constructor(
    public kind: "unreachable" | "http",
    message: string,
    public status?: number,
  ) {
    super(message);
  }
}

type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

export class ServiceClient {
  constructor(
    private base: string,
    private fetchFn: FetchLike = (...a) => fetch(...a),
  ) {}

  private async request<T>(path: string, init?: RequestInit): Promise<T> {
    let res: Response;
    try {
      res = await this.fetchFn(this.base + path, init);
    } catch (e) {
      throw new ServiceError("unreachable", `service unreachable: ${e}`);
    }
    if (!res.ok) {
      // service errors are {"error": "...", "details": [...]}
      let message = res.statusText || `HTTP ${res.status}`;
      try {
        const body = await res.json();
        if (body && typeof body.error === "string") message = body.error;
      } catch {
        // keep the status text
      }
      throw new ServiceError("http", message, res.status);
    }
    return res.json() as Promise<T>;
  }

  health(): Promise<HealthDoc> {
    return this.request<HealthDoc>("/health");
  }

  ranges(): Promise<RangesDoc> {
    return this.request<RangesDoc>("/ranges");
  }

  predict(body: PredictRequest): Promise<PredictResponse> {
    return this.request<PredictResponse>("/predict", {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify(body),
    });
  }
}
