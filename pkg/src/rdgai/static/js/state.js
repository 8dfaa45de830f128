/**
 * state.ts — UI state shape and the pure helpers that derive views from it.
 *
 * Everything here is reconstructable from API responses alone, so a page
 * reload loses nothing.
 */
export function initialState() {
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
export function clampPair(unit, index) {
    if (unit === null || unit.pairs.length === 0) {
        return 0;
    }
    return Math.min(Math.max(index, 0), unit.pairs.length - 1);
}
export function selectedPair(state) {
    if (state.unit === null || state.unit.pairs.length === 0) {
        return null;
    }
    return state.unit.pairs[clampPair(state.unit, state.selectedPair)];
}
export function unitProgress(status) {
    if (status.classified_pair_count === 0 && status.total_pair_count > 0) {
        return "open";
    }
    if (status.classified_pair_count >= status.total_pair_count) {
        return "complete";
    }
    return "partial";
}
/** Empty readings stand for an omission. */
export function displayText(text) {
    return text === "" ? "(omitted)" : text;
}
