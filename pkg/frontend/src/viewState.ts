/**
 * The whole view as a URL: encoding a ViewState into the location and
 * decoding it back must round-trip, so a reload (or a shared link)
 * restores the identical view.
 */

export interface ViewState {
  year?: number;
  period?: string;
  subject?: string;
  query?: string;
  datasetId?: string;
  sumlevel?: string;
  stusab?: string;
  geoid?: string;
  page: number;
  column?: string;
}

export const DEFAULT_VIEW: ViewState = { page: 1 };

const STRING_KEYS = [
  ["period", "period"],
  ["subject", "subject"],
  ["query", "q"],
  ["datasetId", "id"],
  ["sumlevel", "sumlevel"],
  ["stusab", "stusab"],
  ["geoid", "geoid"],
  ["column", "column"],
] as const;

/** Query string (no leading "?"); empty when the state is the default view. */
export function encodeViewState(state: ViewState): string {
  const params = new URLSearchParams();
  if (state.year !== undefined) params.set("year", String(state.year));
  for (const [field, key] of STRING_KEYS) {
    const value = state[field];
    if (value !== undefined && value !== "") params.set(key, value);
  }
  if (state.page > 1) params.set("page", String(state.page));
  return params.toString();
}

export function decodeViewState(search: string): ViewState {
  const params = new URLSearchParams(search.startsWith("?") ? search.slice(1) : search);
  const state: ViewState = { page: 1 };

  const year = Number(params.get("year"));
  if (params.has("year") && Number.isInteger(year)) state.year = year;
  for (const [field, key] of STRING_KEYS) {
    const value = params.get(key);
    if (value !== null && value !== "") state[field] = value;
  }
  const page = Number(params.get("page"));
  if (Number.isInteger(page) && page > 1) state.page = page;
  return state;
}

export function statesEqual(a: ViewState, b: ViewState): boolean {
  return encodeViewState(a) === encodeViewState(b);
}
