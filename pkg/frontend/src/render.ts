/**
 * render.ts — build the whole view from UiState on every change.
 *
 * The document is small (a few dozen units), so a full re-render keeps the
 * DOM a pure function of state; no incremental bookkeeping to get wrong.
 */

import type { Pair, Reading } from "./api.js";
import { clampPair, displayText, selectedPair, unitProgress } from "./state.js";
import type { UiState } from "./state.js";

export interface Handlers {
  onRetry(): void;
  onSelectUnit(unitId: string): void;
  onSelectPair(index: number): void;
  onCategory(categoryId: string): void;
  onClear(): void;
}

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  className?: string,
  text?: string,
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  if (className) {
    node.className = className;
  }
  if (text !== undefined) {
    node.textContent = text;
  }
  return node;
}

function readingLabel(readings: Reading[], readingId: string): string {
  const reading = readings.find((r) => r.id === readingId);
  return displayText(reading ? reading.text : "");
}

function pairStatus(pair: Pair): string {
  if (!pair.classification) {
    return "unclassified";
  }
  const by = pair.responsibility ? ` (${pair.responsibility})` : "";
  return `${pair.classification}${by}`;
}

function renderHeader(state: UiState): HTMLElement {
  const header = el("header");
  header.appendChild(el("h1", "", "rdgai"));
  if (state.summary) {
    header.appendChild(
      el(
        "span",
        "doc-progress",
        `${state.summary.classified_pair_count} / ${state.summary.total_pair_count} pairs classified`,
      ),
    );
  }
  const status = el("span", "save-status", state.saving ? "saving…" : "");
  status.id = "save-status";
  header.appendChild(status);
  return header;
}

function renderSidebar(state: UiState, handlers: Handlers): HTMLElement {
  const aside = el("aside");
  aside.id = "sidebar";
  const list = el("ul");
  for (const status of state.summary ? state.summary.units : []) {
    const item = el("li", `unit-link progress-${unitProgress(status)}`);
    item.dataset.unitId = status.id;
    if (state.unit && status.id === state.unit.id) {
      item.classList.add("is-current");
    }
    item.appendChild(el("span", "unit-id", status.id));
    item.appendChild(
      el("span", "unit-counts", `${status.classified_pair_count}/${status.total_pair_count}`),
    );
    item.addEventListener("click", () => handlers.onSelectUnit(status.id));
    list.appendChild(item);
  }
  aside.appendChild(list);
  return aside;
}

function renderReadings(readings: Reading[]): HTMLElement {
  const table = el("table");
  table.id = "readings";
  for (const reading of readings) {
    const row = el("tr", "reading");
    row.appendChild(el("th", "reading-id", reading.id));
    const text = el("td", "reading-text", displayText(reading.text));
    text.setAttribute("dir", "auto");
    row.appendChild(text);
    row.appendChild(el("td", "witnesses", reading.witnesses.join(" ")));
    table.appendChild(row);
  }
  return table;
}

function renderPairs(state: UiState, handlers: Handlers): HTMLElement {
  const unit = state.unit!;
  const list = el("ol");
  list.id = "pairs";
  const current = clampPair(unit, state.selectedPair);
  unit.pairs.forEach((pair, index) => {
    const item = el("li", "pair");
    item.dataset.index = String(index);
    if (index === current) {
      item.classList.add("is-selected");
    }
    const active = el("span", "pair-active", readingLabel(unit.readings, pair.active));
    active.setAttribute("dir", "auto");
    const passive = el("span", "pair-passive", readingLabel(unit.readings, pair.passive));
    passive.setAttribute("dir", "auto");
    item.appendChild(active);
    item.appendChild(el("span", "pair-arrow", " → "));
    item.appendChild(passive);
    item.appendChild(el("span", `pair-status${pair.classification ? "" : " open"}`, pairStatus(pair)));
    item.addEventListener("click", () => handlers.onSelectPair(index));
    list.appendChild(item);
  });
  return list;
}

function renderEditor(state: UiState, handlers: Handlers): HTMLElement {
  const editor = el("div");
  editor.id = "pair-editor";
  const pair = selectedPair(state);
  const buttons = el("div");
  buttons.id = "category-buttons";
  for (const category of state.summary ? state.summary.categories : []) {
    const button = el("button", "category", category.id);
    button.dataset.categoryId = category.id;
    button.title = category.description;
    if (pair && pair.classification === category.id) {
      button.classList.add("is-selected");
    }
    button.addEventListener("click", () => handlers.onCategory(category.id));
    buttons.appendChild(button);
  }
  editor.appendChild(buttons);

  const description = el("textarea");
  description.id = "description";
  description.placeholder = "optional justification, saved with the classification";
  description.value = pair && pair.description ? pair.description : "";
  editor.appendChild(description);

  const clear = el("button", "", "Clear classification");
  clear.id = "clear";
  clear.disabled = !pair || !pair.classification;
  clear.addEventListener("click", () => handlers.onClear());
  editor.appendChild(clear);
  return editor;
}

function renderUnit(state: UiState, handlers: Handlers): HTMLElement {
  const main = el("main");
  main.id = "unit-view";
  const unit = state.unit;
  if (!unit) {
    main.appendChild(el("p", "empty", "No unit loaded."));
    return main;
  }

  const title = el("div", "unit-header");
  const prev = el("button", "nav-button", "←");
  prev.id = "prev-unit";
  prev.disabled = !unit.prev_id;
  prev.addEventListener("click", () => unit.prev_id && handlers.onSelectUnit(unit.prev_id));
  const next = el("button", "nav-button", "→");
  next.id = "next-unit";
  next.disabled = !unit.next_id;
  next.addEventListener("click", () => unit.next_id && handlers.onSelectUnit(unit.next_id));
  title.appendChild(prev);
  title.appendChild(el("h2", "unit-title", unit.id));
  title.appendChild(next);
  main.appendChild(title);

  const context = el("p", "unit-context", unit.context);
  context.setAttribute("dir", "auto");
  main.appendChild(context);
  main.appendChild(renderReadings(unit.readings));
  main.appendChild(renderPairs(state, handlers));
  main.appendChild(renderEditor(state, handlers));
  main.appendChild(
    el(
      "p",
      "key-hints",
      "←/→ unit, ↑/↓ pair, 1-9 classify",
    ),
  );
  return main;
}

export function render(root: HTMLElement, state: UiState, handlers: Handlers): void {
  root.textContent = "";
  root.appendChild(renderHeader(state));

  if (state.toast) {
    const toast = el("div", "toast", state.toast);
    toast.id = "toast";
    root.appendChild(toast);
  }

  if (state.loadError) {
    const banner = el("div", "banner");
    banner.id = "load-error";
    banner.appendChild(el("span", "", state.loadError));
    const retry = el("button", "", "Retry");
    retry.id = "retry";
    retry.addEventListener("click", () => handlers.onRetry());
    banner.appendChild(retry);
    root.appendChild(banner);
    return;
  }

  const columns = el("div", "columns");
  columns.appendChild(renderSidebar(state, handlers));
  columns.appendChild(renderUnit(state, handlers));
  root.appendChild(columns);
}
