/** Application wiring: subject start screen, hash-driven scenes, toggles,
 * tooltips and the sortable table. All state lives in the URL fragment. */

import { formatCount, formatInterval, formatPercent } from "./format.js";
import { renderLegend, renderScene } from "./render.js";
import { buildScene } from "./scene.js";
import { DEFAULT_STATE, ViewState, decodeState, encodeState, SortColumn } from "./state.js";
import { TableRow, tableRows } from "./table.js";
import { tooltipPayload } from "./tooltip.js";
import { Bundle, SubjectIndex, institutionById } from "./types.js";

export type Loader = (path: string) => Promise<unknown>;

export class ViewerApp {
  private index: SubjectIndex | null = null;
  private bundle: Bundle | null = null;
  private bundleSubject: string | null = null;
  state: ViewState = { ...DEFAULT_STATE };

  constructor(
    private root: HTMLElement,
    private loader: Loader,
    private navigate: (fragment: string) => void,
  ) {}

  async start(initialFragment: string): Promise<void> {
    this.index = (await this.loader("index.json")) as SubjectIndex;
    await this.applyHash(initialFragment);
  }

  /** Re-derive the whole scene from a URL fragment (also the back handler). */
  async applyHash(fragment: string): Promise<void> {
    this.state = decodeState(fragment);
    if (!this.state.subject) {
      this.renderStartScreen();
      return;
    }
    if (this.bundleSubject !== this.state.subject) {
      const entry = this.index?.subjects.find((s) => s.subject === this.state.subject);
      if (!entry) {
        this.renderStartScreen(`Unknown subject area: ${this.state.subject}`);
        return;
      }
      this.bundle = (await this.loader(entry.bundle)) as Bundle;
      this.bundleSubject = this.state.subject;
    }
    this.renderSubject();
  }

  private go(next: Partial<ViewState>): void {
    const state = { ...this.state, ...next };
    this.navigate(encodeState(state));
  }

  private renderStartScreen(message = ""): void {
    const subjects = this.index?.subjects ?? [];
    this.root.replaceChildren();
    const screen = el("div", "start-screen");
    screen.appendChild(el("h1", "", "Excellence networks"));
    screen.appendChild(el("p", "intro",
      "How successfully do research institutions collaborate? Pick a subject " +
      "area to explore co-authorship networks, estimated best paper rates " +
      "and their credible intervals."));
    if (message) screen.appendChild(el("p", "error", message));
    screen.appendChild(el("h2", "", "Select a subject area to start:"));
    const list = el("div", "subject-grid");
    for (const s of subjects) {
      const btn = document.createElement("button");
      btn.className = "subject-button";
      btn.textContent = s.subject;
      btn.addEventListener("click", () => this.go({ ...DEFAULT_STATE, subject: s.subject }));
      list.appendChild(btn);
    }
    screen.appendChild(list);
    const more = document.createElement("a");
    more.href = "more-info.html";
    more.className = "more-info";
    more.textContent = "More information";
    screen.appendChild(more);
    this.root.appendChild(screen);
  }

  private renderSubject(): void {
    const bundle = this.bundle;
    if (!bundle) return;
    const scene = buildScene(bundle, this.state);
    this.root.replaceChildren();

    const header = el("div", "subject-header");
    const title = this.state.selection
      ? `Collaborations of ${institutionById(bundle).get(this.state.selection)?.name ?? this.state.selection}`
      : `Collaborations in ${bundle.subject}`;
    header.appendChild(el("h1", "", title));
    const summary = el("p", "subject-summary");
    summary.append("Average best paper rate: ");
    summary.appendChild(spanWithSource(
      formatPercent(bundle.overall_rate), "overall_rate"));
    summary.append(" for a total of ");
    summary.appendChild(spanWithSource(
      formatCount(bundle.counts.references), "counts.references"));
    summary.append(" reference institutions");
    header.appendChild(summary);
    if (this.state.selection) {
      const back = document.createElement("button");
      back.className = "back-button";
      back.textContent = "Back to all institutions";
      back.addEventListener("click", () => this.go({ selection: null }));
      header.appendChild(back);
    }
    this.root.appendChild(header);

    const graphBox = el("div", "graph-box");
    this.root.appendChild(graphBox);
    const tooltip = el("div", "tooltip hidden");
    this.root.appendChild(tooltip);

    renderScene(graphBox, scene, {
      onHover: (id, x, y) => this.showTooltip(tooltip, id, x, y),
      onClick: (id) => this.selectInstitution(id),
    });

    const controls = el("div", "controls");
    const legendBox = el("div", "legend-box");
    renderLegend(legendBox, scene);
    controls.appendChild(legendBox);
    controls.appendChild(this.toggle("Layout", [
      ["Network", "network"], ["Geographic", "geographic"],
    ], this.state.layout, (v) => this.go({ layout: v as ViewState["layout"] })));
    controls.appendChild(this.toggle("Colour", [
      ["Country", "country"], ["Best paper rate", "rate"],
    ], this.state.color, (v) => this.go({ color: v as ViewState["color"] })));
    this.root.appendChild(controls);

    this.root.appendChild(this.renderTable(bundle));
  }

  /** Clicking works only for reference institutions; others report status. */
  selectInstitution(id: string): void {
    const inst = this.bundle ? institutionById(this.bundle).get(id) : undefined;
    if (!inst || !inst.is_reference) {
      this.setStatus(`${inst ? inst.name : id} is not a reference institution`);
      return;
    }
    this.go({ selection: id });
  }

  private setStatus(message: string): void {
    let status = this.root.querySelector(".status-line") as HTMLElement | null;
    if (!status) {
      status = el("div", "status-line");
      this.root.appendChild(status);
    }
    status.textContent = message;
  }

  private showTooltip(box: HTMLElement, id: string | null, x: number, y: number): void {
    if (!id || !this.bundle) {
      box.classList.add("hidden");
      return;
    }
    const payload = tooltipPayload(this.bundle, this.state, id);
    if (!payload) {
      box.classList.add("hidden");
      return;
    }
    box.replaceChildren();
    box.classList.remove("hidden");
    box.style.left = `${x + 12}px`;
    box.style.top = `${y + 12}px`;
    box.appendChild(el("div", "tooltip-title", payload.title));
    box.appendChild(el("div", "tooltip-country", payload.country));
    for (const row of payload.rows) {
      const line = el("div", "tooltip-row");
      line.appendChild(el("span", "tooltip-label", `${row.label}: `));
      const value = spanWithSource(row.value, row.source);
      value.className = "tooltip-value";
      line.appendChild(value);
      box.appendChild(line);
    }
  }

  private toggle(
    label: string,
    options: [string, string][],
    active: string,
    onPick: (value: string) => void,
  ): HTMLElement {
    const box = el("div", "toggle");
    box.appendChild(el("span", "toggle-label", label));
    for (const [text, value] of options) {
      const btn = document.createElement("button");
      btn.textContent = text;
      btn.className = value === active ? "toggle-option active" : "toggle-option";
      btn.setAttribute("data-toggle", value);
      btn.addEventListener("click", () => onPick(value));
      box.appendChild(btn);
    }
    return box;
  }

  private renderTable(bundle: Bundle): HTMLElement {
    const rows = tableRows(bundle, this.state);
    const wrap = el("div", "table-wrap");
    const table = document.createElement("table");
    table.className = "inst-table";
    const thead = document.createElement("thead");
    const headRow = document.createElement("tr");
    const columns: [string, SortColumn][] = [
      ["Institution", "name"],
      ["Country", "country"],
      [this.state.selection ? "Joint papers" : "Collaborations", "papers"],
      ["Best paper rate", "rate"],
    ];
    for (const [text, column] of columns) {
      const th = document.createElement("th");
      th.textContent = text + (this.state.sortColumn === column
        ? (this.state.sortDir === "asc" ? " ▲" : " ▼") : "");
      th.setAttribute("data-column", column);
      th.addEventListener("click", () => {
        const dir = this.state.sortColumn === column && this.state.sortDir === "desc"
          ? "asc" : "desc";
        this.go({ sortColumn: column, sortDir: dir });
      });
      headRow.appendChild(th);
    }
    thead.appendChild(headRow);
    table.appendChild(thead);

    const tbody = document.createElement("tbody");
    for (const row of rows) {
      tbody.appendChild(this.tableRow(row));
    }
    table.appendChild(tbody);
    wrap.appendChild(table);
    return wrap;
  }

  private tableRow(row: TableRow): HTMLElement {
    const tr = document.createElement("tr");
    tr.setAttribute("data-inst", row.id);
    const name = document.createElement("td");
    if (row.clickable) {
      const link = document.createElement("a");
      link.href = "#";
      link.textContent = row.name;
      link.addEventListener("click", (ev) => {
        ev.preventDefault();
        this.selectInstitution(row.id);
      });
      name.appendChild(link);
    } else {
      name.textContent = row.name;
    }
    tr.appendChild(name);
    tr.appendChild(el("td", "", row.country));
    const papers = document.createElement("td");
    papers.appendChild(spanWithSource(formatCount(row.papers), row.papersSource));
    tr.appendChild(papers);
    const rate = document.createElement("td");
    if (row.rateMean !== null && row.rateSource) {
      rate.appendChild(spanWithSource(formatPercent(row.rateMean), `${row.rateSource}.mean`));
      rate.append(" ");
      const interval = spanWithSource(
        formatInterval(row.rateLower as number, row.rateUpper as number),
        `${row.rateSource}.goldstein`);
      interval.className = "interval";
      rate.appendChild(interval);
    }
    tr.appendChild(rate);
    return tr;
  }
}

function el(tag: string, className = "", text = ""): HTMLElement {
  const node = document.createElement(tag);
  if (className) node.className = className;
  if (text) node.textContent = text;
  return node;
}

function spanWithSource(text: string, source: string): HTMLElement {
  const span = document.createElement("span");
  span.textContent = text;
  span.setAttribute("data-source", source);
  return span;
}

/** Browser bootstrap: fetch-backed loader, hash-driven navigation. */
export function bootstrap(root: HTMLElement): ViewerApp {
  const loader: Loader = async (path) => {
    const res = await fetch(path);
    if (!res.ok) throw new Error(`failed to load ${path}: ${res.status}`);
    return res.json();
  };
  const app = new ViewerApp(root, loader, (fragment) => {
    window.location.hash = fragment;
  });
  window.addEventListener("hashchange", () => {
    void app.applyHash(window.location.hash);
  });
  void app.start(window.location.hash);
  return app;
}
