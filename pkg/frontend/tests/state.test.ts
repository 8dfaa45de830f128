import { describe, expect, it } from "vitest";

import { clampPair, displayText, initialState, selectedPair, unitProgress } from "../src/state.js";
import { recordedUnit } from "./fixtures.js";

describe("clampPair", () => {
  it("stays inside the pair list", () => {
    const unit = recordedUnit();
    expect(unit.pairs.length).toBe(12);
    expect(clampPair(unit, -3)).toBe(0);
    expect(clampPair(unit, 0)).toBe(0);
    expect(clampPair(unit, 11)).toBe(11);
    expect(clampPair(unit, 99)).toBe(11);
  });

  it("is 0 without a unit", () => {
    expect(clampPair(null, 7)).toBe(0);
  });
});

describe("selectedPair", () => {
  it("returns the pair under the clamped index", () => {
    const state = initialState();
    state.unit = recordedUnit();
    state.selectedPair = 3;
    expect(selectedPair(state)).toEqual({ active: "2", passive: "1" });
    state.selectedPair = 500;
    expect(selectedPair(state)?.active).toBe("4");
  });

  it("is null before anything loads", () => {
    expect(selectedPair(initialState())).toBeNull();
  });
});

describe("unitProgress", () => {
  it("classifies the three states", () => {
    expect(unitProgress({ id: "u", classified_pair_count: 0, total_pair_count: 2 })).toBe("open");
    expect(unitProgress({ id: "u", classified_pair_count: 1, total_pair_count: 2 })).toBe("partial");
    expect(unitProgress({ id: "u", classified_pair_count: 2, total_pair_count: 2 })).toBe("complete");
  });
});

describe("displayText", () => {
  it("shows a placeholder for omitted readings", () => {
    expect(displayText("")).toBe("(omitted)");
    expect(displayText("light")).toBe("light");
  });
});
