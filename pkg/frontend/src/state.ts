/**
 * state.ts — UI state shape and the pure helpers that derive views from it.
 *
 * Everything here is reconstructable from API responses alone, so a page
 * reload loses nothing.
 */

import type { Pair, Summary, UnitDetail, UnitStatus } from "./api.js";

export interface UiState {
  summary: Summary | null;
  unit: UnitDetail | null;
  selectedPair: number;
  saving: boolean;
  /** fatal fetch problem; the retry banner shows this */
  loadError: string | null;
  /** transient write problem; the toast shows this */
  toast: string | null;
}

export function initialState(): UiState {
  return {
    summary: null,
    unit: null,
    selectedPair: 0,
    saving: false,
    loadError: null,
    toast: null,
  };
}

/** Clamp a pair index to the bounds of the loaded unit. */
export function clampPair(unit: UnitDetail | null, index: number): number {
  if (unit === null || unit.pairs.length === 0) {
    return 0;
  }
  return Math.min(Math.max(index, 0), unit.pairs.length - 1);
}

export function selectedPair(state: UiState): Pair | null {
  if (state.unit === null || state.unit.pairs.length === 0) {
    return null;
  }
  return state.unit.pairs[clampPair(state.unit, state.selectedPair)];
}

export type UnitProgress = "open" | "partial" | "complete";

export function unitProgress(status: UnitStatus): UnitProgress {
  if (status.classified_pair_count === 0 && status.total_pair_count > 0) {
    return "open";
  }
  if (status.classified_pair_count >= status.total_pair_count) {
    return "complete";
  }
  return "partial";
}

/** Empty readings stand for an omission. */
export function displayText(text: string): string {
  return text === "" ? "(omitted)" : text;
}
