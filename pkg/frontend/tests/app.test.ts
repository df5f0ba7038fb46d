import { afterEach, describe, expect, it, vi } from "vitest";

import { ApiError } from "../src/api.js";
import type {
  CatalogApi,
  RowFilters,
  RowsPage,
  SearchHit,
  StatsPayload,
  TableInfo,
} from "../src/api.js";
import { ExplorerApp } from "../src/app.js";

const MEDIAN_AGE_ID = "us.gov.census.acs.2014.5yr.age-sex.median-age-by-sex";
const PLANTED_ID =
  "us.gov.census.acs.2014.5yr.journey-to-work.means-of-transportation-to-work";
const STALE_ID = "us.gov.census.acs.2014.5yr.nope.nope";

// Response bodies as served by the catalog service for the seed-42 fixture.
const RELEASES = [{ year: 2014, period: "5yr" }];

const SUBJECTS = [
  { subject_id: "01", name: "Age and Sex", slug: "age-sex", table_count: 5 },
  { subject_id: "08", name: "Journey to Work", slug: "journey-to-work", table_count: 5 },
];

const MEDIAN_AGE_HITS: SearchHit[] = [
  { dataset_id: MEDIAN_AGE_ID, matched_field: "table_title", snippet: "Median Age by Sex" },
];

const PLANTED_HITS: SearchHit[] = [
  {
    dataset_id: PLANTED_ID,
    matched_field: "table_title",
    snippet: "Means of Transportation to Work",
  },
];

const TABLE: TableInfo = {
  dataset_id: PLANTED_ID,
  release: { year: 2014, period: "5yr" },
  subject_id: "08",
  subject_name: "Journey to Work",
  subject_slug: "journey-to-work",
  table_id: "B08001",
  title: "Means of Transportation to Work",
  slug: "means-of-transportation-to-work",
  universe: "Workers 16 years and over",
  sequence: 2,
  start_position: 667,
  cell_count: 4,
  columns: {
    "001": { display_name: "Total:", column_id: "b08001_001", moe_column_id: "b08001_001_moe" },
    "002": { display_name: "Male:", column_id: "b08001_002", moe_column_id: "b08001_002_moe" },
    "003": { display_name: "Female:", column_id: "b08001_003", moe_column_id: "b08001_003_moe" },
    "004": { display_name: "Category 4:", column_id: "b08001_004", moe_column_id: "b08001_004_moe" },
  },
};

const ROWS: RowsPage = {
  total: 3,
  page: 1,
  page_size: 10,
  rows: [
    {
      name: "State AA",
      geoid: "04000US01",
      stusab: "AA",
      sumlevel: "040",
      b08001_001: "1200",
      b08001_001_moe: "100",
      b08001_002: "",
      b08001_002_moe: "",
      b08001_003: "590",
      b08001_003_moe: "55",
      b08001_004: "60",
      b08001_004_moe: "48",
    },
    {
      name: "State BB",
      geoid: "04000US02",
      stusab: "BB",
      sumlevel: "040",
      b08001_001: "900",
      b08001_001_moe: "80",
      b08001_002: "410",
      b08001_002_moe: "33",
      b08001_003: "490",
      b08001_003_moe: "41",
      b08001_004: "77",
      b08001_004_moe: "12",
    },
    {
      name: "State CC",
      geoid: "04000US03",
      stusab: "CC",
      sumlevel: "040",
      b08001_001: "1500",
      b08001_001_moe: "95",
      b08001_002: "700",
      b08001_002_moe: "60",
      b08001_003: "800",
      b08001_003_moe: "64",
      b08001_004: "101",
      b08001_004_moe: "20",
    },
  ],
};

const EMPTY_ROWS: RowsPage = { total: 0, page: 1, page_size: 10, rows: [] };

const STATS: StatsPayload = {
  dataset_id: PLANTED_ID,
  column: "b08001_004",
  moe_column: "b08001_004_moe",
  total_rows: 1,
  descriptive: {
    count: 1,
    nulls: 0,
    mean: 60.0,
    median: 60.0,
    stddev: null,
    min: 60.0,
    max: 60.0,
  },
  moe: {
    estimate: 60.0,
    moe: 48.0,
    standard_error: 29.179331306990882,
    cv_percent: 48.6322188449848,
    ci_low: 12.0,
    ci_high: 108.0,
  },
};

function scriptedApi(overrides: Partial<CatalogApi> = {}): CatalogApi {
  const base: CatalogApi = {
    releases: async () => RELEASES,
    subjects: async () => SUBJECTS,
    table: async datasetId => {
      if (datasetId === PLANTED_ID) return TABLE;
      throw new ApiError(404, "unknown_dataset", `unknown dataset id '${datasetId}'`);
    },
    rows: async (_datasetId, options = {}) =>
      options.stusab === "ZZ" ? EMPTY_ROWS : ROWS,
    stats: async (_datasetId, column) => {
      if (column === "b08001_004") return STATS;
      throw new ApiError(400, "unknown_column", `table B08001 has no column '${column}'`);
    },
    search: async query => {
      if (query.includes("median age")) return MEDIAN_AGE_HITS;
      if (query.toLowerCase().includes("journey")) return PLANTED_HITS;
      return [];
    },
    exportUrl: (datasetId, filters: RowFilters = {}) => {
      const params = new URLSearchParams();
      for (const [key, value] of Object.entries(filters)) {
        if (value) params.set(key, value);
      }
      const query = params.toString();
      return `/tables/${datasetId}/export${query ? `?${query}` : ""}`;
    },
  };
  return { ...base, ...overrides };
}

function mount(api: CatalogApi): { app: ExplorerApp; root: HTMLElement } {
  const root = document.createElement("div");
  document.body.appendChild(root);
  return { app: new ExplorerApp(root, api), root };
}

function text(root: HTMLElement, selector: string): string {
  return root.querySelector(selector)?.textContent ?? "";
}

afterEach(() => {
  document.body.innerHTML = "";
});

describe("browse flow", () => {
  it("mirrors the releases and subjects payloads, counts included", async () => {
    const { app, root } = mount(scriptedApi());
    await app.start();
    const releases = Array.from(root.querySelectorAll(".release-list li"));
    expect(releases.map(li => li.textContent)).toEqual(["2014 5yr"]);
    expect(releases[0]?.classList.contains("active")).toBe(true);
    const subjects = Array.from(root.querySelectorAll(".subject-list li"));
    expect(subjects.map(li => li.textContent)).toEqual([
      "Age and Sex (5 tables)",
      "Journey to Work (5 tables)",
    ]);
  });

  it("shows an empty state for an empty catalog", async () => {
    const { app, root } = mount(scriptedApi({ releases: async () => [] }));
    await app.start();
    expect(text(root, ".release-list .empty-state")).toBe("The catalog is empty.");
    expect(root.querySelectorAll(".subject-list li")).toHaveLength(0);
  });

  it("raises the banner when the service is unreachable and shows no stale data", async () => {
    const { app, root } = mount(
      scriptedApi({
        releases: async () => {
          throw new TypeError("fetch failed");
        },
      }),
    );
    await app.start();
    const banner = root.querySelector<HTMLElement>(".banner");
    expect(banner?.hidden).toBe(false);
    expect(banner?.textContent).toContain("fetch failed");
    expect(root.querySelectorAll(".release-list li")).toHaveLength(0);
    expect(root.querySelectorAll(".subject-list li")).toHaveLength(0);
  });

  it("browsing a subject searches by the subject's name", async () => {
    const { app, root } = mount(scriptedApi());
    await app.start();
    const subject = root.querySelector<HTMLElement>('[data-subject-id="08"]');
    subject?.click();
    await vi.waitFor(() => {
      expect(root.querySelectorAll(".hit-list li")).toHaveLength(1);
    });
    const input = root.querySelector<HTMLInputElement>(".search-form input[name=q]");
    expect(input?.value).toBe("Journey to Work");
    expect(text(root, ".hit-list li")).toContain(PLANTED_ID);
  });
});

describe("search flow", () => {
  it("renders hits exactly as returned, in order", async () => {
    const hits: SearchHit[] = [
      { dataset_id: "a.b.c.one", matched_field: "table_title", snippet: "One" },
      { dataset_id: "a.b.c.two", matched_field: "universe", snippet: "Two" },
      { dataset_id: "a.b.c.three", matched_field: "column", snippet: "Three" },
    ];
    const { app, root } = mount(scriptedApi({ search: async () => hits }));
    await app.runSearch("anything");
    const items = Array.from(root.querySelectorAll<HTMLElement>(".hit-list li"));
    expect(items.map(li => li.dataset.datasetId)).toEqual([
      "a.b.c.one",
      "a.b.c.two",
      "a.b.c.three",
    ]);
    expect(items[1]?.textContent).toBe("a.b.c.two — Two (universe)");
  });

  it("finds the median-age table for 'median age'", async () => {
    const { app, root } = mount(scriptedApi());
    await app.runSearch("median age");
    const item = root.querySelector<HTMLElement>(".hit-list li");
    expect(item?.dataset.datasetId).toBe(MEDIAN_AGE_ID);
    expect(item?.textContent).toContain("Median Age by Sex");
    expect(item?.textContent).toContain("table_title");
  });

  it("shows 'no results' for a query that matches nothing", async () => {
    const { app, root } = mount(scriptedApi());
    await app.runSearch("zzzqqq");
    expect(text(root, ".hit-list .empty-state")).toBe("no results");
  });

  it("clears the hit list when the query is cleared", async () => {
    const { app, root } = mount(scriptedApi());
    await app.runSearch("median age");
    expect(root.querySelectorAll(".hit-list li")).toHaveLength(1);
    await app.runSearch("");
    expect(root.querySelectorAll(".hit-list li")).toHaveLength(0);
  });

  it("shows a 400 from the service as an inline message, not a banner", async () => {
    const { app, root } = mount(
      scriptedApi({
        search: async () => {
          throw new ApiError(400, "empty_query", "query must not be blank");
        },
      }),
    );
    await app.runSearch("   ?");
    expect(text(root, ".search-message")).toBe("query must not be blank");
    expect(root.querySelector<HTMLElement>(".banner")?.hidden).toBe(true);
  });

  it("renders only the latest result when responses arrive out of order", async () => {
    const pending: Array<{ resolve: (hits: SearchHit[]) => void }> = [];
    const { app, root } = mount(
      scriptedApi({
        search: (_query, signal) =>
          new Promise<SearchHit[]>((resolve, reject) => {
            signal?.addEventListener("abort", () =>
              reject(new DOMException("aborted", "AbortError")),
            );
            pending.push({ resolve });
          }),
      }),
    );
    const slow = app.runSearch("slow");
    const fast = app.runSearch("median age");
    pending[1]?.resolve(MEDIAN_AGE_HITS);
    await fast;
    pending[0]?.resolve([
      { dataset_id: "stale.result", matched_field: "table_title", snippet: "Stale" },
    ]);
    await slow;
    const items = Array.from(root.querySelectorAll<HTMLElement>(".hit-list li"));
    expect(items).toHaveLength(1);
    expect(items[0]?.dataset.datasetId).toBe(MEDIAN_AGE_ID);
  });
});

describe("grid and stats flow", () => {
  it("clicking a hit opens the table with MOE columns adjacent", async () => {
    const { app, root } = mount(scriptedApi());
    await app.start();
    await app.runSearch("journey to work");
    root.querySelector<HTMLElement>(".hit-list li")?.click();
    await vi.waitFor(() => {
      expect(root.querySelector<HTMLElement>(".table-view")?.hidden).toBe(false);
      expect(root.querySelectorAll(".grid-host tbody tr")).toHaveLength(3);
    });

    expect(text(root, ".table-title")).toBe("B08001 Means of Transportation to Work");
    expect(text(root, ".table-universe")).toBe("Universe: Workers 16 years and over");
    expect(text(root, ".page-label")).toBe("page 1 · 3 rows");
    expect(text(root, ".cols-label")).toBe("columns 1–4 of 4");

    const headers = Array.from(
      root.querySelectorAll<HTMLElement>(".grid-host thead th"),
    ).slice(4);
    expect(headers.map(th => th.textContent)).toEqual([
      "b08001_001",
      "b08001_001_moe",
      "b08001_002",
      "b08001_002_moe",
      "b08001_003",
      "b08001_003_moe",
      "b08001_004",
      "b08001_004_moe",
    ]);

    const planted = root.querySelector<HTMLElement>(
      'tbody td[data-column="b08001_004"]',
    );
    expect(planted?.textContent).toBe("60");
    expect(planted?.nextElementSibling?.textContent).toBe("48");

    expect(
      root.querySelector<HTMLElement>(".export-link")?.getAttribute("href"),
    ).toBe(`/tables/${PLANTED_ID}/export`);
  });

  it("shows the banner naming a stale dataset id and hides the table view", async () => {
    const { app, root } = mount(scriptedApi());
    await app.start();
    await app.openDataset(STALE_ID);
    const banner = root.querySelector<HTMLElement>(".banner");
    expect(banner?.hidden).toBe(false);
    expect(banner?.textContent).toBe(
      `unknown_dataset: unknown dataset id '${STALE_ID}'`,
    );
    expect(root.querySelector<HTMLElement>(".table-view")?.hidden).toBe(true);
  });

  it("filtering to stusab=ZZ empties the grid with total 0", async () => {
    const { app, root } = mount(scriptedApi());
    await app.start();
    await app.openDataset(PLANTED_ID);
    await app.applyFilters({ stusab: "ZZ" });
    expect(text(root, ".grid-host .empty-state")).toBe("no rows (total 0)");
    expect(text(root, ".page-label")).toBe("page 1 · 0 rows");
    expect(
      root.querySelector<HTMLElement>(".export-link")?.getAttribute("href"),
    ).toBe(`/tables/${PLANTED_ID}/export?stusab=ZZ`);
  });

  it("clicking an estimate header fills the stats panel with the verbatim payload", async () => {
    const { app, root } = mount(scriptedApi());
    await app.start();
    await app.openDataset(PLANTED_ID);
    root.querySelector<HTMLElement>('thead th[data-column="b08001_004"]')?.click();
    await vi.waitFor(() => {
      expect(root.querySelector(".stats-panel")).not.toBeNull();
    });
    const panel = root.querySelector<HTMLElement>(".stats-panel");
    expect(panel?.dataset.payload).toBe(JSON.stringify(STATS));
    expect(panel?.textContent).toContain("12–108");
    expect(panel?.textContent).toContain("48.6%");
    expect(panel?.textContent).toContain("29.18");
  });

  it("shows the panel error state for an unknown column", async () => {
    const { app, root } = mount(scriptedApi());
    await app.start();
    await app.openDataset(PLANTED_ID);
    await app.selectColumn("b08001_099");
    const panel = root.querySelector<HTMLElement>(".stats-error");
    expect(panel?.textContent).toBe(
      "unknown_column: table B08001 has no column 'b08001_099'",
    );
    expect(root.querySelector(".stats-body")).toBeNull();
  });

  it("restores grid, filters, and stats from a deep link", async () => {
    const { app, root } = mount(scriptedApi());
    await app.start(`?id=${encodeURIComponent(PLANTED_ID)}&column=b08001_004&stusab=AA`);
    expect(root.querySelector<HTMLElement>(".table-view")?.hidden).toBe(false);
    expect(
      root.querySelector<HTMLInputElement>(".filters input[name=stusab]")?.value,
    ).toBe("AA");
    expect(root.querySelector<HTMLElement>(".stats-panel")?.dataset.payload).toBe(
      JSON.stringify(STATS),
    );
  });
});
