/**
 * app.ts — controller: fetch → state → render, one in-flight write at a time.
 *
 * Category clicks apply optimistically and revert with a toast if the
 * server refuses. A revision jump we did not cause triggers a silent
 * refetch, since someone else edited the document.
 */

import { ApiClient, ApiError } from "./api.js";
import type { Pair, WrittenRelation } from "./api.js";
import type { KeyboardDeps } from "./keyboard.js";
import { render } from "./render.js";
import type { Handlers } from "./render.js";
import { clampPair, initialState, selectedPair } from "./state.js";
import type { UiState } from "./state.js";

function errorMessage(err: unknown): string {
  return err instanceof ApiError ? err.message : String(err);
}

export class App implements Handlers, KeyboardDeps {
  state: UiState = initialState();

  constructor(
    private readonly root: HTMLElement,
    private readonly api: ApiClient,
  ) {}

  private paint(): void {
    render(this.root, this.state, this);
  }

  /** Fetch everything from scratch; safe to call again after failures. */
  async boot(): Promise<void> {
    this.state = initialState();
    try {
      const summary = await this.api.summary();
      this.state.summary = summary;
      const first = summary.units[0];
      if (first) {
        this.state.unit = await this.api.unit(first.id);
      }
    } catch (err) {
      this.state.loadError = errorMessage(err);
    }
    this.paint();
  }

  onRetry(): void {
    void this.boot();
  }

  private async openUnit(unitId: string): Promise<void> {
    try {
      this.state.unit = await this.api.unit(unitId);
      this.state.selectedPair = 0;
      this.state.toast = null;
    } catch (err) {
      this.state.loadError = errorMessage(err);
    }
    this.paint();
  }

  onSelectUnit(unitId: string): void {
    void this.openUnit(unitId);
  }

  onSelectPair(index: number): void {
    this.state.selectedPair = clampPair(this.state.unit, index);
    this.state.toast = null;
    this.paint();
  }

  nextUnit(): void {
    const next = this.state.unit?.next_id;
    if (next) {
      void this.openUnit(next);
    }
  }

  prevUnit(): void {
    const prev = this.state.unit?.prev_id;
    if (prev) {
      void this.openUnit(prev);
    }
  }

  nextPair(): void {
    this.onSelectPair(this.state.selectedPair + 1);
  }

  prevPair(): void {
    this.onSelectPair(this.state.selectedPair - 1);
  }

  pressCategory(index: number): void {
    const category = this.state.summary?.categories[index];
    if (category) {
      this.onCategory(category.id);
    }
  }

  onCategory(categoryId: string): void {
    void this.classifySelected(categoryId);
  }

  onClear(): void {
    void this.clearSelected();
  }

  private descriptionValue(): string {
    const field = this.root.querySelector<HTMLTextAreaElement>("#description");
    return field ? field.value.trim() : "";
  }

  private async classifySelected(categoryId: string): Promise<void> {
    const unit = this.state.unit;
    const pair = selectedPair(this.state);
    if (!unit || !pair || this.state.saving) {
      return;
    }
    const description = this.descriptionValue();
    const index = unit.pairs.indexOf(pair);
    const snapshot: Pair = { ...pair };
    pair.classification = categoryId;
    if (description) {
      pair.description = description;
    } else {
      delete pair.description;
    }
    this.state.saving = true;
    this.state.toast = null;
    this.paint();
    try {
      const result = await this.api.classify({
        unit_id: unit.id,
        active: pair.active,
        passive: pair.passive,
        category_id: categoryId,
        ...(description ? { description } : {}),
      });
      this.state.saving = false;
      if (result.revision !== unit.revision + 1) {
        await this.refresh();
        return;
      }
      this.applyWritten(result.written);
      unit.revision = result.revision;
      await this.refreshSummary();
      this.paint();
    } catch (err) {
      unit.pairs[index] = snapshot;
      this.state.saving = false;
      this.state.toast = errorMessage(err);
      this.paint();
    }
  }

  private async clearSelected(): Promise<void> {
    const unit = this.state.unit;
    const pair = selectedPair(this.state);
    if (!unit || !pair || !pair.classification || this.state.saving) {
      return;
    }
    const index = unit.pairs.indexOf(pair);
    const snapshot: Pair = { ...pair };
    unit.pairs[index] = { active: pair.active, passive: pair.passive };
    this.state.saving = true;
    this.state.toast = null;
    this.paint();
    try {
      await this.api.remove(unit.id, pair.active, pair.passive);
      this.state.saving = false;
      await this.refresh();
    } catch (err) {
      unit.pairs[index] = snapshot;
      this.state.saving = false;
      this.state.toast = errorMessage(err);
      this.paint();
    }
  }

  /** Patch the loaded unit with the relations the server reports written. */
  private applyWritten(written: WrittenRelation[]): void {
    const unit = this.state.unit;
    if (!unit) {
      return;
    }
    for (const relation of written) {
      if (relation.unit_id !== unit.id) {
        continue;
      }
      const pair = unit.pairs.find(
        (p) => p.active === relation.active && p.passive === relation.passive,
      );
      if (!pair) {
        continue;
      }
      pair.classification = relation.category_id;
      if (relation.description !== null) {
        pair.description = relation.description;
      } else {
        delete pair.description;
      }
      pair.responsibility = relation.responsibility;
    }
  }

  private async refreshSummary(): Promise<void> {
    try {
      this.state.summary = await this.api.summary();
    } catch {
      // a stale sidebar is tolerable; the next navigation refetches
    }
  }

  /** Silent full refetch of summary and the open unit. */
  private async refresh(): Promise<void> {
    try {
      this.state.summary = await this.api.summary();
      if (this.state.unit) {
        this.state.unit = await this.api.unit(this.state.unit.id);
        this.state.selectedPair = clampPair(this.state.unit, this.state.selectedPair);
      }
    } catch (err) {
      this.state.loadError = errorMessage(err);
    }
    this.paint();
  }
}
