/**
 * Typed client for the catalog HTTP API.
 *
 * Every number shown anywhere in the UI comes out of these response bodies;
 * nothing is recomputed client-side.
 */

export interface ReleaseInfo {
  year: number;
  period: string;
}

export interface SubjectInfo {
  subject_id: string;
  name: string;
  slug: string;
  table_count: number;
}

export interface ColumnInfo {
  display_name: string;
  column_id: string;
  moe_column_id: string;
}

export interface TableInfo {
  dataset_id: string;
  release: ReleaseInfo;
  subject_id: string;
  subject_name: string;
  subject_slug: string;
  table_id: string;
  title: string;
  slug: string;
  universe: string;
  sequence: number;
  start_position: number;
  cell_count: number;
  columns: Record<string, ColumnInfo>;
}

export interface RowsPage {
  total: number;
  page: number;
  page_size: number;
  rows: Record<string, string>[];
}

export interface DescriptiveStats {
  count: number;
  nulls: number;
  mean: number | null;
  median: number | null;
  stddev: number | null;
  min: number | null;
  max: number | null;
}

export interface MoeStats {
  estimate: number;
  moe: number;
  standard_error: number;
  cv_percent: number | null;
  ci_low: number;
  ci_high: number;
}

export interface StatsPayload {
  dataset_id: string;
  column: string;
  moe_column: string;
  total_rows: number;
  descriptive: DescriptiveStats;
  moe: MoeStats | null;
}

export interface SearchHit {
  dataset_id: string;
  matched_field: string;
  snippet: string;
}

export interface RowFilters {
  sumlevel?: string;
  stusab?: string;
  geoid?: string;
}

/** A non-2xx response; the service always answers with {error, detail}. */
export class ApiError extends Error {
  constructor(
    readonly status: number,
    readonly error: string,
    readonly detail: string,
  ) {
    super(`${error}: ${detail}`);
    this.name = "ApiError";
  }
}

type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

type QueryParams = Record<string, string | number | undefined>;

export class CatalogClient {
  private readonly fetchFn: FetchLike;

  constructor(
    readonly baseUrl: string = "",
    fetchFn?: FetchLike,
  ) {
    this.fetchFn = fetchFn ?? ((input, init) => fetch(input, init));
  }

  url(path: string, params?: QueryParams): string {
    const search = new URLSearchParams();
    for (const [key, value] of Object.entries(params ?? {})) {
      if (value !== undefined && value !== "") {
        search.set(key, String(value));
      }
    }
    const query = search.toString();
    return this.baseUrl + path + (query ? `?${query}` : "");
  }

  private async getJson<T>(
    path: string,
    params?: QueryParams,
    signal?: AbortSignal,
  ): Promise<T> {
    const response = await this.fetchFn(this.url(path, params), { signal });
    if (!response.ok) {
      let error = "http_error";
      let detail = `status ${response.status}`;
      try {
        const body = (await response.json()) as { error?: string; detail?: string };
        error = body.error ?? error;
        detail = body.detail ?? detail;
      } catch {
        // non-JSON error body; keep the status-derived message
      }
      throw new ApiError(response.status, error, detail);
    }
    return response.json() as Promise<T>;
  }

  releases(signal?: AbortSignal): Promise<ReleaseInfo[]> {
    return this.getJson("/releases", undefined, signal);
  }

  subjects(year: number, period: string, signal?: AbortSignal): Promise<SubjectInfo[]> {
    return this.getJson(`/releases/${year}/${period}/subjects`, undefined, signal);
  }

  table(datasetId: string, signal?: AbortSignal): Promise<TableInfo> {
    return this.getJson(`/tables/${datasetId}`, undefined, signal);
  }

  rows(
    datasetId: string,
    options: RowFilters & { page?: number; page_size?: number } = {},
    signal?: AbortSignal,
  ): Promise<RowsPage> {
    return this.getJson(`/tables/${datasetId}/rows`, { ...options }, signal);
  }

  stats(
    datasetId: string,
    column: string,
    filters: RowFilters = {},
    signal?: AbortSignal,
  ): Promise<StatsPayload> {
    return this.getJson(`/tables/${datasetId}/stats/${column}`, { ...filters }, signal);
  }

  search(query: string, signal?: AbortSignal): Promise<SearchHit[]> {
    return this.getJson("/search", { q: query }, signal);
  }

  /** Download URL for the export endpoint; the browser streams it directly. */
  exportUrl(datasetId: string, filters: RowFilters = {}): string {
    return this.url(`/tables/${datasetId}/export`, { ...filters });
  }
}

/** The surface the app needs; tests substitute a scripted implementation. */
export type CatalogApi = Pick<
  CatalogClient,
  "releases" | "subjects" | "table" | "rows" | "stats" | "search" | "exportUrl"
>;

/**
 * Latest-wins request slot: starting a new request aborts the previous one,
 * so a panel can never render a stale response over a fresh one.
 */
export class RequestSlot {
  private controller: AbortController | null = null;

  begin(): AbortSignal {
    this.controller?.abort();
    this.controller = new AbortController();
    return this.controller.signal;
  }
}

/** True for errors raised by aborted fetches; those are never user-visible. */
export function isAbort(err: unknown): boolean {
  return err instanceof DOMException && err.name === "AbortError";
}
