/**
 * api.ts — typed client for the classification service JSON API.
 *
 * The UI talks to the server exclusively through this module: two reads
 * (summary, unit detail) and two writes (classify, delete).
 */

export interface Category {
  id: string;
  description: string;
  inverse_id: string | null;
}

export interface UnitStatus {
  id: string;
  classified_pair_count: number;
  total_pair_count: number;
}

export interface Summary {
  unit_count: number;
  classified_pair_count: number;
  total_pair_count: number;
  categories: Category[];
  units: UnitStatus[];
  revision: number;
}

export interface Reading {
  id: string;
  text: string;
  witnesses: string[];
}

export interface Pair {
  active: string;
  passive: string;
  classification?: string;
  description?: string;
  responsibility?: string;
}

export interface UnitDetail {
  id: string;
  context: string;
  readings: Reading[];
  pairs: Pair[];
  revision: number;
  prev_id?: string;
  next_id?: string;
}

export interface WrittenRelation {
  unit_id: string;
  active: string;
  passive: string;
  category_id: string;
  description: string | null;
  responsibility: string;
}

export interface WriteResult {
  written: WrittenRelation[];
  reciprocal_written: boolean;
  revision: number;
}

export interface DeleteResult {
  removed: number;
  revision: number;
}

/** status 0 means the request never reached the server. */
export class ApiError extends Error {
  constructor(
    public readonly status: number,
    message: string,
  ) {
    super(message);
    this.name = "ApiError";
  }
}

export class ApiClient {
  constructor(private readonly baseUrl: string = "") {}

  private async request<T>(path: string, init?: RequestInit): Promise<T> {
    let response: Response;
    try {
      response = await fetch(this.baseUrl + path, init);
    } catch (err) {
      throw new ApiError(0, `network failure: ${String(err)}`);
    }
    if (!response.ok) {
      let detail = `HTTP ${response.status}`;
      try {
        const body = (await response.json()) as { detail?: unknown };
        if (typeof body.detail === "string") {
          detail = body.detail;
        } else if (body.detail !== undefined) {
          detail = JSON.stringify(body.detail);
        }
      } catch {
        // non-JSON error body; keep the status line
      }
      throw new ApiError(response.status, detail);
    }
    return (await response.json()) as T;
  }

  summary(): Promise<Summary> {
    return this.request<Summary>("/api/summary");
  }

  unit(unitId: string): Promise<UnitDetail> {
    return this.request<UnitDetail>(`/api/units/${encodeURIComponent(unitId)}`);
  }

  classify(body: {
    unit_id: string;
    active: string;
    passive: string;
    category_id: string;
    description?: string;
  }): Promise<WriteResult> {
    return this.request<WriteResult>("/api/classifications", {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify(body),
    });
  }

  remove(unitId: string, active: string, passive: string): Promise<DeleteResult> {
    const query = new URLSearchParams({ unit_id: unitId, active, passive });
    return this.request<DeleteResult>(`/api/classifications?${query}`, {
      method: "DELETE",
    });
  }
}
