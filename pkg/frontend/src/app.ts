/** Browser shell: loads search-index.json over a relative fetch, wires the
 * search box, filters, and matrix controls to the engine, and mirrors the
 * whole view into the URL hash.  No server round-trips beyond the one
 * fetch, no analytics, no editing. */

import {
  Engine,
  FilterSpec,
  createEngine,
  filterIsEmpty,
  keywordSearch,
  typeSearch,
} from "./engine.js";
import { DEFAULT_STATE, UiState, decodeHash, encodeHash } from "./hash.js";
import {
  GROUPINGS,
  Grouping,
  UnknownSubjectError,
  buildMatrix,
  cellVisible,
  compactSignature,
  visibleCellCount,
} from "./matrix.js";
import {
  AmbiguousNameError,
  TypeParseError,
  parseTypeQuery,
} from "./typeexpr.js";
import { IndexDocument, SearchRow, lastSegment } from "./types.js";
import { QueryMode, detectMode } from "./mode.js";

const RECEIVER_CHOICES = ["readonly", "mutating", "consuming", "static", "none"];

interface Notice {
  message: string;
  query?: string;
  offset?: number;
}

interface SearchOutcome {
  mode: QueryMode | null;
  rows: SearchRow[];
  notice: Notice | null;
}

export function runSearch(engine: Engine, state: UiState): SearchOutcome {
  const query = state.query.trim();
  if (!query) return { mode: null, rows: [], notice: null };
  const spec: FilterSpec = {
    receivers: state.receivers.length ? new Set(state.receivers) : null,
    owner: state.owner || null,
    returns: state.returns || null,
    takes: state.takes || null,
  };
  const filters = filterIsEmpty(spec) ? null : spec;
  const mode = state.mode === "auto" ? detectMode(query) : state.mode;
  try {
    if (mode === "keyword") {
      return { mode, rows: keywordSearch(engine, query, filters), notice: null };
    }
    let parsed;
    try {
      parsed = parseTypeQuery(query);
    } catch (e) {
      if (e instanceof TypeParseError) {
        // fall back to keyword hits so the error never blanks the screen
        return {
          mode,
          rows: keywordSearch(engine, query, filters),
          notice: { message: e.message, query, offset: e.offset },
        };
      }
      throw e;
    }
    return { mode, rows: typeSearch(engine, parsed, {}, filters), notice: null };
  } catch (e) {
    if (e instanceof AmbiguousNameError || e instanceof Error) {
      return { mode, rows: [], notice: { message: (e as Error).message } };
    }
    throw e;
  }
}

// ---------------------------------------------------------------------------
// DOM

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  cls?: string,
  text?: string,
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  if (cls) node.className = cls;
  if (text !== undefined) node.textContent = text;
  return node;
}

function noticeBlock(notice: Notice): HTMLElement {
  const box = el("div", "notice");
  if (notice.query !== undefined && notice.offset !== undefined) {
    const pre = el("pre", "parse-error");
    pre.append(notice.query.slice(0, notice.offset));
    const bad = el("span", "error-offset");
    bad.textContent = notice.query.slice(notice.offset, notice.offset + 1) || " ";
    pre.append(bad);
    pre.append(notice.query.slice(notice.offset + 1));
    pre.append(`\n${" ".repeat(notice.offset)}^\n`);
    box.append(pre);
  }
  box.append(el("p", "notice-text", notice.message));
  return box;
}

function resultRow(engine: Engine, row: SearchRow, mode: QueryMode): HTMLElement {
  const entity = engine.byId.get(row.entity);
  const tr = el("tr");
  tr.append(el("td", "name", entity?.name ?? row.entity));
  const sig =
    entity?.kind === "function"
      ? compactSignature(entity)
      : entity
        ? `${entity.kind}${entity.params.length ? `<${entity.params.join(", ")}>` : ""}`
        : "";
  tr.append(el("td", "signature", sig));
  tr.append(el("td", "owner", entity?.owner ? lastSegment(entity.owner) : ""));
  tr.append(el("td", "doc", entity?.doc_summary ?? ""));
  const badge = mode === "keyword" ? `score ${row.score}` : `penalty ${row.penalty}`;
  tr.append(el("td", "badge", badge));
  tr.title = row.explanation.join("; ");
  return tr;
}

class App {
  state: UiState = { ...DEFAULT_STATE };
  private syncing = false;

  private queryInput!: HTMLInputElement;
  private modeSelect!: HTMLSelectElement;
  private modeLabel!: HTMLElement;
  private receiverBoxes = new Map<string, HTMLInputElement>();
  private ownerInput!: HTMLInputElement;
  private returnsInput!: HTMLInputElement;
  private takesInput!: HTMLInputElement;
  private resultsBox!: HTMLElement;
  private subjectInput!: HTMLInputElement;
  private groupingSelect!: HTMLSelectElement;
  private matrixBox!: HTMLElement;

  constructor(
    private engine: Engine,
    private root: HTMLElement,
  ) {
    this.buildControls();
    this.state = decodeHash(location.hash);
    this.pushStateToControls();
    this.render();
    window.addEventListener("hashchange", () => {
      if (this.syncing) return;
      this.state = decodeHash(location.hash);
      this.pushStateToControls();
      this.render();
    });
  }

  private buildControls(): void {
    this.root.textContent = "";

    const search = el("section", "search-pane");
    search.append(el("h2", undefined, "Search"));
    const bar = el("div", "query-bar");
    this.queryInput = el("input");
    this.queryInput.placeholder = "keyword terms or a type pattern, e.g. [a] -> int";
    this.queryInput.size = 48;
    this.modeSelect = el("select");
    for (const value of ["auto", "type", "keyword"]) {
      const opt = el("option", undefined, value);
      opt.value = value;
      this.modeSelect.append(opt);
    }
    this.modeLabel = el("span", "mode-label");
    bar.append(this.queryInput, this.modeSelect, this.modeLabel);
    search.append(bar);

    const filters = el("div", "filters");
    filters.append(el("span", undefined, "receiver:"));
    for (const r of RECEIVER_CHOICES) {
      const label = el("label");
      const box = el("input");
      box.type = "checkbox";
      this.receiverBoxes.set(r, box);
      label.append(box, ` ${r}`);
      filters.append(label);
    }
    this.ownerInput = el("input");
    this.ownerInput.placeholder = "owner";
    this.returnsInput = el("input");
    this.returnsInput.placeholder = "returns";
    this.takesInput = el("input");
    this.takesInput.placeholder = "takes";
    filters.append(this.ownerInput, this.returnsInput, this.takesInput);
    search.append(filters);

    this.resultsBox = el("div", "results");
    search.append(this.resultsBox);

    const matrix = el("section", "matrix-pane");
    matrix.append(el("h2", undefined, "Method matrix"));
    const controls = el("div", "matrix-controls");
    this.subjectInput = el("input");
    this.subjectInput.placeholder = "type name, e.g. List";
    this.groupingSelect = el("select");
    for (const g of GROUPINGS) {
      const opt = el("option", undefined, g);
      opt.value = g;
      this.groupingSelect.append(opt);
    }
    controls.append(this.subjectInput, this.groupingSelect);
    matrix.append(controls);
    this.matrixBox = el("div", "matrix");
    matrix.append(this.matrixBox);

    this.root.append(search, matrix);

    const onChange = () => this.pullStateFromControls();
    this.queryInput.addEventListener("input", onChange);
    this.modeSelect.addEventListener("change", onChange);
    for (const box of this.receiverBoxes.values()) {
      box.addEventListener("change", onChange);
    }
    this.ownerInput.addEventListener("input", onChange);
    this.returnsInput.addEventListener("input", onChange);
    this.takesInput.addEventListener("input", onChange);
    this.subjectInput.addEventListener("input", onChange);
    this.groupingSelect.addEventListener("change", onChange);
  }

  private pushStateToControls(): void {
    this.queryInput.value = this.state.query;
    this.modeSelect.value = this.state.mode;
    for (const [r, box] of this.receiverBoxes) {
      box.checked = this.state.receivers.includes(r);
    }
    this.ownerInput.value = this.state.owner;
    this.returnsInput.value = this.state.returns;
    this.takesInput.value = this.state.takes;
    this.subjectInput.value = this.state.subject;
    this.groupingSelect.value = this.state.grouping;
  }

  private pullStateFromControls(): void {
    this.state = {
      query: this.queryInput.value,
      mode: this.modeSelect.value as UiState["mode"],
      receivers: RECEIVER_CHOICES.filter(
        (r) => this.receiverBoxes.get(r)!.checked,
      ),
      owner: this.ownerInput.value.trim(),
      returns: this.returnsInput.value.trim(),
      takes: this.takesInput.value.trim(),
      subject: this.subjectInput.value.trim(),
      grouping: this.groupingSelect.value as Grouping,
    };
    this.syncing = true;
    const encoded = encodeHash(this.state);
    if (location.hash !== encoded) {
      history.replaceState(null, "", encoded || "#");
    }
    this.syncing = false;
    this.render();
  }

  private render(): void {
    this.renderSearch();
    this.renderMatrix();
  }

  private renderSearch(): void {
    this.resultsBox.textContent = "";
    const outcome = runSearch(this.engine, this.state);
    this.modeLabel.textContent = outcome.mode ? `mode: ${outcome.mode}` : "";
    if (outcome.notice) this.resultsBox.append(noticeBlock(outcome.notice));
    if (!outcome.rows.length) {
      if (this.state.query.trim() && !outcome.notice) {
        this.resultsBox.append(el("p", "empty", "no results"));
      }
      return;
    }
    const table = el("table", "result-table");
    const head = el("tr");
    for (const h of ["name", "signature", "owner", "summary", ""]) {
      head.append(el("th", undefined, h));
    }
    table.append(head);
    for (const row of outcome.rows) {
      table.append(resultRow(this.engine, row, outcome.mode ?? "keyword"));
    }
    this.resultsBox.append(table);
  }

  private renderMatrix(): void {
    this.matrixBox.textContent = "";
    const subject = this.state.subject.trim();
    if (!subject) return;
    let matrix;
    try {
      matrix = buildMatrix(this.engine, subject, this.state.grouping);
    } catch (e) {
      if (e instanceof UnknownSubjectError) {
        this.matrixBox.append(el("p", "notice-text", `no such type: ${subject}`));
        return;
      }
      throw e;
    }
    const receivers = this.state.receivers.length
      ? new Set(this.state.receivers)
      : null;
    this.matrixBox.append(
      el(
        "p",
        "cell-count",
        `${visibleCellCount(matrix, receivers)} cells visible`,
      ),
    );
    // group labels stay put even when a filter empties the row
    for (const row of matrix.rows) {
      const group = el("div", "matrix-row");
      group.append(el("h3", "row-label", row.label));
      const strip = el("div", "cells");
      for (const cell of row.cells) {
        const box = el("span", "cell");
        box.append(el("strong", undefined, cell.name), `  ${cell.signature}`);
        box.title = cell.target;
        if (!cellVisible(cell, receivers)) box.classList.add("hidden");
        strip.append(box);
      }
      group.append(strip);
      this.matrixBox.append(group);
    }
  }
}

export async function start(root: HTMLElement): Promise<void> {
  root.textContent = "loading search-index.json ...";
  let index: IndexDocument;
  try {
    const response = await fetch("search-index.json");
    if (!response.ok) throw new Error(`HTTP ${response.status}`);
    index = (await response.json()) as IndexDocument;
  } catch (e) {
    root.textContent = `failed to load search-index.json: ${(e as Error).message}`;
    return;
  }
  new App(createEngine(index), root);
}

if (typeof document !== "undefined" && typeof fetch !== "undefined") {
  const root = document.getElementById("app");
  if (root) void start(root);
}
