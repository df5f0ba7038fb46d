/**
 * Explorer app: browse by release/subject, keyword search, paged grid with
 * adjacent MOE columns, quick-stats panel, CSV export link.
 *
 * Single-threaded and event-driven; each panel holds one in-flight request
 * and the latest wins. Everything rendered comes from an API response body.
 */

import { ApiError, isAbort, RequestSlot } from "./api.js";
import type { CatalogApi, RowFilters, TableInfo } from "./api.js";
import { columnPairs, renderGrid, windowPairs } from "./grid.js";
import type { ColumnPair } from "./grid.js";
import { renderStatsError, renderStatsPanel } from "./statsPanel.js";
import { decodeViewState, encodeViewState } from "./viewState.js";
import type { ViewState } from "./viewState.js";

export const PAGE_SIZE = 10;
export const COLUMN_WINDOW = 20;

const LAYOUT = `
  <div class="banner" hidden></div>
  <header class="topbar">
    <form class="search-form">
      <input name="q" type="search" placeholder="Search table titles, universes, columns" />
      <button type="submit">Search</button>
    </form>
    <span class="search-message"></span>
  </header>
  <div class="layout">
    <aside class="browse">
      <h2>Releases</h2>
      <ul class="release-list"></ul>
      <h2>Subjects</h2>
      <ul class="subject-list"></ul>
    </aside>
    <main class="content">
      <ul class="hit-list"></ul>
      <section class="table-view" hidden>
        <h2 class="table-title"></h2>
        <p class="table-universe"></p>
        <form class="filters">
          <input name="sumlevel" placeholder="sumlevel" />
          <input name="stusab" placeholder="stusab" />
          <input name="geoid" placeholder="geoid" />
          <button type="submit">Apply</button>
        </form>
        <div class="grid-toolbar">
          <button type="button" class="cols-left">&#8592;</button>
          <span class="cols-label"></span>
          <button type="button" class="cols-right">&#8594;</button>
          <a class="export-link" download>Export CSV</a>
        </div>
        <div class="grid-host"></div>
        <div class="pager">
          <button type="button" class="prev">Prev</button>
          <span class="page-label"></span>
          <button type="button" class="next">Next</button>
        </div>
      </section>
    </main>
    <aside class="stats-host"></aside>
  </div>
`;

function must<T extends Element>(el: T | null, what: string): T {
  if (!el) throw new Error(`layout is missing ${what}`);
  return el;
}

export class ExplorerApp {
  state: ViewState = { page: 1 };

  private readonly doc: Document;
  private table: TableInfo | null = null;
  private pairs: ColumnPair[] = [];
  private colOffset = 0;
  private total = 0;

  private readonly searchSlot = new RequestSlot();
  private readonly gridSlot = new RequestSlot();
  private readonly statsSlot = new RequestSlot();

  constructor(
    private readonly root: HTMLElement,
    private readonly client: CatalogApi,
    private readonly syncUrl = false,
  ) {
    const doc = root.ownerDocument;
    if (!doc) throw new Error("root element must belong to a document");
    this.doc = doc;
    root.innerHTML = LAYOUT;

    this.el<HTMLFormElement>(".search-form").addEventListener("submit", event => {
      event.preventDefault();
      const query = this.el<HTMLInputElement>(".search-form input[name=q]").value;
      void this.runSearch(query);
    });
    this.el<HTMLFormElement>(".filters").addEventListener("submit", event => {
      event.preventDefault();
      void this.applyFilters(this.readFilterInputs());
    });
    this.el<HTMLButtonElement>(".pager .prev").addEventListener("click", () => {
      void this.goToPage(this.state.page - 1);
    });
    this.el<HTMLButtonElement>(".pager .next").addEventListener("click", () => {
      void this.goToPage(this.state.page + 1);
    });
    this.el<HTMLButtonElement>(".cols-left").addEventListener("click", () => {
      void this.shiftColumns(-COLUMN_WINDOW);
    });
    this.el<HTMLButtonElement>(".cols-right").addEventListener("click", () => {
      void this.shiftColumns(COLUMN_WINDOW);
    });
  }

  el<T extends Element>(selector: string): T {
    return must(this.root.querySelector<T>(selector), selector);
  }

  /** Boot from a location search string (usually window.location.search). */
  async start(search = ""): Promise<void> {
    await this.loadBrowse();
    const state = decodeViewState(search);
    this.el<HTMLInputElement>(".search-form input[name=q]").value = state.query ?? "";
    this.writeFilterInputs(state);
    if (state.query) await this.runSearch(state.query, state);
    if (state.datasetId) {
      await this.openDataset(state.datasetId, state);
      if (state.column) await this.selectColumn(state.column);
    }
  }

  private pushUrl(): void {
    if (!this.syncUrl) return;
    const view = this.doc.defaultView;
    if (!view) return;
    const query = encodeViewState(this.state);
    view.history.replaceState(null, "", query ? `?${query}` : view.location.pathname);
  }

  private showBanner(err: unknown): void {
    const banner = this.el<HTMLElement>(".banner");
    banner.textContent =
      err instanceof ApiError ? `${err.error}: ${err.detail}` : String(err);
    banner.hidden = false;
  }

  private clearBanner(): void {
    const banner = this.el<HTMLElement>(".banner");
    banner.textContent = "";
    banner.hidden = true;
  }

  async loadBrowse(): Promise<void> {
    try {
      const releases = await this.client.releases();
      const releaseList = this.el<HTMLUListElement>(".release-list");
      releaseList.textContent = "";
      const subjectList = this.el<HTMLUListElement>(".subject-list");
      subjectList.textContent = "";
      if (releases.length === 0) {
        const empty = this.doc.createElement("li");
        empty.className = "empty-state";
        empty.textContent = "The catalog is empty.";
        releaseList.appendChild(empty);
        return;
      }
      const active = this.state.year !== undefined && this.state.period
        ? { year: this.state.year, period: this.state.period }
        : (releases[0] as { year: number; period: string });
      this.state.year = active.year;
      this.state.period = active.period;

      for (const release of releases) {
        const li = this.doc.createElement("li");
        li.textContent = `${release.year} ${release.period}`;
        if (release.year === active.year && release.period === active.period) {
          li.className = "active";
        }
        releaseList.appendChild(li);
      }

      const subjects = await this.client.subjects(active.year, active.period);
      for (const subject of subjects) {
        const li = this.doc.createElement("li");
        li.dataset.subjectId = subject.subject_id;
        li.textContent = `${subject.name} (${subject.table_count} tables)`;
        // The API exposes per-subject counts, not per-subject table lists,
        // so browsing into a subject delegates to keyword search.
        li.addEventListener("click", () => {
          this.el<HTMLInputElement>(".search-form input[name=q]").value = subject.name;
          void this.runSearch(subject.name);
        });
        subjectList.appendChild(li);
      }
      this.clearBanner();
    } catch (err) {
      if (isAbort(err)) return;
      this.showBanner(err);
    }
  }

  async runSearch(query: string, carryOver?: ViewState): Promise<void> {
    const hitList = this.el<HTMLUListElement>(".hit-list");
    const message = this.el<HTMLElement>(".search-message");
    message.textContent = "";
    this.state.query = query || undefined;
    if (!carryOver) this.pushUrl();
    if (!query.trim()) {
      hitList.textContent = "";
      return;
    }
    const signal = this.searchSlot.begin();
    try {
      const hits = await this.client.search(query, signal);
      hitList.textContent = "";
      if (hits.length === 0) {
        const li = this.doc.createElement("li");
        li.className = "empty-state";
        li.textContent = "no results";
        hitList.appendChild(li);
        return;
      }
      for (const hit of hits) {
        const li = this.doc.createElement("li");
        li.dataset.datasetId = hit.dataset_id;
        li.textContent = `${hit.dataset_id} — ${hit.snippet} (${hit.matched_field})`;
        li.addEventListener("click", () => void this.openDataset(hit.dataset_id));
        hitList.appendChild(li);
      }
      this.clearBanner();
    } catch (err) {
      if (isAbort(err)) return;
      if (err instanceof ApiError && err.status === 400) {
        message.textContent = err.detail;
        return;
      }
      this.showBanner(err);
    }
  }

  async openDataset(datasetId: string, carryOver?: ViewState): Promise<void> {
    this.state.datasetId = datasetId;
    this.state.page = carryOver?.page ?? 1;
    this.state.column = carryOver?.column;
    if (carryOver) {
      this.state.sumlevel = carryOver.sumlevel;
      this.state.stusab = carryOver.stusab;
      this.state.geoid = carryOver.geoid;
    }
    this.colOffset = 0;
    this.el<HTMLElement>(".stats-host").textContent = "";
    const signal = this.gridSlot.begin();
    try {
      this.table = await this.client.table(datasetId, signal);
      this.pairs = columnPairs(this.table);
      const view = this.el<HTMLElement>(".table-view");
      view.hidden = false;
      this.el<HTMLElement>(".table-title").textContent =
        `${this.table.table_id} ${this.table.title}`;
      this.el<HTMLElement>(".table-universe").textContent =
        `Universe: ${this.table.universe}`;
      this.writeFilterInputs(this.state);
      await this.loadRows(signal);
      this.clearBanner();
    } catch (err) {
      if (isAbort(err)) return;
      this.el<HTMLElement>(".table-view").hidden = true;
      this.showBanner(err);
    }
    this.pushUrl();
  }

  private filters(): RowFilters {
    return {
      sumlevel: this.state.sumlevel,
      stusab: this.state.stusab,
      geoid: this.state.geoid,
    };
  }

  private readFilterInputs(): RowFilters {
    const read = (name: string) =>
      this.el<HTMLInputElement>(`.filters input[name=${name}]`).value.trim() || undefined;
    return { sumlevel: read("sumlevel"), stusab: read("stusab"), geoid: read("geoid") };
  }

  private writeFilterInputs(state: ViewState): void {
    const write = (name: string, value: string | undefined) => {
      this.el<HTMLInputElement>(`.filters input[name=${name}]`).value = value ?? "";
    };
    write("sumlevel", state.sumlevel);
    write("stusab", state.stusab);
    write("geoid", state.geoid);
  }

  async applyFilters(filters: RowFilters): Promise<void> {
    this.state.sumlevel = filters.sumlevel;
    this.state.stusab = filters.stusab;
    this.state.geoid = filters.geoid;
    this.state.page = 1;
    this.pushUrl();
    await this.loadRows(this.gridSlot.begin());
  }

  async goToPage(page: number): Promise<void> {
    const lastPage = Math.max(1, Math.ceil(this.total / PAGE_SIZE));
    this.state.page = Math.min(Math.max(1, page), lastPage);
    this.pushUrl();
    await this.loadRows(this.gridSlot.begin());
  }

  async shiftColumns(delta: number): Promise<void> {
    this.colOffset = Math.max(
      0,
      Math.min(this.colOffset + delta, Math.max(0, this.pairs.length - COLUMN_WINDOW)),
    );
    await this.loadRows(this.gridSlot.begin());
  }

  async loadRows(signal?: AbortSignal): Promise<void> {
    if (!this.state.datasetId || !this.table) return;
    const host = this.el<HTMLElement>(".grid-host");
    try {
      const page = await this.client.rows(
        this.state.datasetId,
        { ...this.filters(), page: this.state.page, page_size: PAGE_SIZE },
        signal,
      );
      this.total = page.total;

      const window = windowPairs(this.pairs, this.colOffset, COLUMN_WINDOW);
      host.textContent = "";
      if (page.rows.length === 0) {
        const empty = this.doc.createElement("p");
        empty.className = "empty-state";
        empty.textContent = `no rows (total ${page.total})`;
        host.appendChild(empty);
      } else {
        const grid = renderGrid(this.doc, window, page.rows);
        grid.addEventListener("click", event => {
          const target = event.target as HTMLElement | null;
          const column = target?.dataset?.column;
          if (column) void this.selectColumn(column);
        });
        host.appendChild(grid);
      }

      this.el<HTMLElement>(".page-label").textContent =
        `page ${page.page} · ${page.total} rows`;
      const first = window.totalPairs === 0 ? 0 : window.offset + 1;
      const last = window.offset + window.pairs.length;
      this.el<HTMLElement>(".cols-label").textContent =
        `columns ${first}–${last} of ${window.totalPairs}`;
      this.el<HTMLAnchorElement>(".export-link").href = this.client.exportUrl(
        this.state.datasetId,
        this.filters(),
      );
      this.clearBanner();
    } catch (err) {
      if (isAbort(err)) return;
      host.textContent = "";
      this.showBanner(err);
    }
  }

  async selectColumn(column: string): Promise<void> {
    if (!this.state.datasetId) return;
    this.state.column = column;
    this.pushUrl();
    const host = this.el<HTMLElement>(".stats-host");
    const signal = this.statsSlot.begin();
    try {
      const payload = await this.client.stats(
        this.state.datasetId,
        column,
        this.filters(),
        signal,
      );
      host.textContent = "";
      host.appendChild(renderStatsPanel(this.doc, payload));
    } catch (err) {
      if (isAbort(err)) return;
      host.textContent = "";
      const message =
        err instanceof ApiError ? `${err.error}: ${err.detail}` : String(err);
      host.appendChild(renderStatsError(this.doc, message));
    }
  }
}
