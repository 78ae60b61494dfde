/** Typed client for the scenario service.
 *
 * Every response body is recorded before it is handed to the caller; the
 * test harness uses the record to prove that each number the UI renders
 * is traceable to a service response (the UI never computes optimization
 * results locally).
 */

import type {
  ModelCatalog,
  ParamPage,
  ScenarioErrorBody,
  ScenarioResponse,
  SolutionPayload,
} from "./types.js";

export class ApiError extends Error {
  constructor(
    public status: number,
    public body: ScenarioErrorBody,
  ) {
    super(body.error ?? `HTTP ${status}`);
  }
}

export class ApiClient {
  readonly recorded: { method: string; path: string; body: unknown }[] = [];

  constructor(private baseUrl: string) {}

  private record(method: string, path: string, body: unknown): void {
    this.recorded.push({ method, path, body });
  }

  private async get<T>(path: string): Promise<T> {
    const response = await fetch(this.baseUrl + path);
    const body = await response.json();
    this.record("GET", path, body);
    if (!response.ok) throw new ApiError(response.status, body);
    return body as T;
  }

  getModel(): Promise<ModelCatalog> {
    return this.get<ModelCatalog>("/model");
  }

  getParamPage(name: string, page = 1, pageSize = 100): Promise<ParamPage> {
    return this.get<ParamPage>(
      `/model/param/${encodeURIComponent(name)}?page=${page}&page_size=${pageSize}`,
    );
  }

  getSolution(): Promise<SolutionPayload> {
    return this.get<SolutionPayload>("/solution");
  }

  getScenarioSolution(id: string): Promise<SolutionPayload> {
    return this.get<SolutionPayload>(
      `/scenario/${encodeURIComponent(id)}/solution`,
    );
  }

  async postScenario(
    patches: Record<string, unknown>[],
    id?: string,
  ): Promise<ScenarioResponse> {
    const response = await fetch(this.baseUrl + "/scenario", {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify(id === undefined ? { patches } : { id, patches }),
    });
    const body = await response.json();
    this.record("POST", "/scenario", body);
    if (!response.ok) throw new ApiError(response.status, body);
    return body as ScenarioResponse;
  }

  async deleteScenario(id: string): Promise<boolean> {
    const response = await fetch(
      this.baseUrl + `/scenario/${encodeURIComponent(id)}`,
      { method: "DELETE" },
    );
    const body = await response.json().catch(() => ({}));
    this.record("DELETE", `/scenario/${id}`, body);
    return response.ok;
  }

  /** True when `value` appeared somewhere in a recorded response. */
  sawNumber(value: number): boolean {
    const seen = (node: unknown): boolean => {
      if (typeof node === "number") return node === value;
      if (Array.isArray(node)) return node.some(seen);
      if (node && typeof node === "object")
        return Object.values(node).some(seen);
      return false;
    };
    return this.recorded.some((entry) => seen(entry.body));
  }
}
