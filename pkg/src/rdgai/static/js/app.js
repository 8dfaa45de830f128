/**
 * app.ts — controller: fetch → state → render, one in-flight write at a time.
 *
 * Category clicks apply optimistically and revert with a toast if the
 * server refuses. A revision jump we did not cause triggers a silent
 * refetch, since someone else edited the document.
 */
import { ApiError } from "./api.js";
import { render } from "./render.js";
import { clampPair, initialState, selectedPair } from "./state.js";
function errorMessage(err) {
    return err instanceof ApiError ? err.message : String(err);
}
export class App {
    root;
    api;
    state = initialState();
    constructor(root, api) {
        this.root = root;
        this.api = api;
    }
    paint() {
        render(this.root, this.state, this);
    }
    /** Fetch everything from scratch; safe to call again after failures. */
    async boot() {
        this.state = initialState();
        try {
            const summary = await this.api.summary();
            this.state.summary = summary;
            const first = summary.units[0];
            if (first) {
                this.state.unit = await this.api.unit(first.id);
            }
        }
        catch (err) {
            this.state.loadError = errorMessage(err);
        }
        this.paint();
    }
    onRetry() {
        void this.boot();
    }
    async openUnit(unitId) {
        try {
            this.state.unit = await this.api.unit(unitId);
            this.state.selectedPair = 0;
            this.state.toast = null;
        }
        catch (err) {
            this.state.loadError = errorMessage(err);
        }
        this.paint();
    }
    onSelectUnit(unitId) {
        void this.openUnit(unitId);
    }
    onSelectPair(index) {
        this.state.selectedPair = clampPair(this.state.unit, index);
        this.state.toast = null;
        this.paint();
    }
    nextUnit() {
        const next = this.state.unit?.next_id;
        if (next) {
            void this.openUnit(next);
        }
    }
    prevUnit() {
        const prev = this.state.unit?.prev_id;
        if (prev) {
            void this.openUnit(prev);
        }
    }
    nextPair() {
        this.onSelectPair(this.state.selectedPair + 1);
    }
    prevPair() {
        this.onSelectPair(this.state.selectedPair - 1);
    }
    pressCategory(index) {
        const category = this.state.summary?.categories[index];
        if (category) {
            this.onCategory(category.id);
        }
    }
    onCategory(categoryId) {
        void this.classifySelected(categoryId);
    }
    onClear() {
        void this.clearSelected();
    }
    descriptionValue() {
        const field = this.root.querySelector("#description");
        return field ? field.value.trim() : "";
    }
    async classifySelected(categoryId) {
        const unit = this.state.unit;
        const pair = selectedPair(this.state);
        if (!unit || !pair || this.state.saving) {
            return;
        }
        const description = this.descriptionValue();
        const index = unit.pairs.indexOf(pair);
        const snapshot = { ...pair };
        pair.classification = categoryId;
        if (description) {
            pair.description = description;
        }
        else {
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
        }
        catch (err) {
            unit.pairs[index] = snapshot;
            this.state.saving = false;
            this.state.toast = errorMessage(err);
            this.paint();
        }
    }
    async clearSelected() {
        const unit = this.state.unit;
        const pair = selectedPair(this.state);
        if (!unit || !pair || !pair.classification || this.state.saving) {
            return;
        }
        const index = unit.pairs.indexOf(pair);
        const snapshot = { ...pair };
        unit.pairs[index] = { active: pair.active, passive: pair.passive };
        this.state.saving = true;
        this.state.toast = null;
        this.paint();
        try {
            await this.api.remove(unit.id, pair.active, pair.passive);
            this.state.saving = false;
            await this.refresh();
        }
        catch (err) {
            unit.pairs[index] = snapshot;
            this.state.saving = false;
            this.state.toast = errorMessage(err);
            this.paint();
        }
    }
    /** Patch the loaded unit with the relations the server reports written. */
    applyWritten(written) {
        const unit = this.state.unit;
        if (!unit) {
            return;
        }
        for (const relation of written) {
            if (relation.unit_id !== unit.id) {
                continue;
            }
            const pair = unit.pairs.find((p) => p.active === relation.active && p.passive === relation.passive);
            if (!pair) {
                continue;
            }
            pair.classification = relation.category_id;
            if (relation.description !== null) {
                pair.description = relation.description;
            }
            else {
                delete pair.description;
            }
            pair.responsibility = relation.responsibility;
        }
    }
    async refreshSummary() {
        try {
            this.state.summary = await this.api.summary();
        }
        catch {
            // a stale sidebar is tolerable; the next navigation refetches
        }
    }
    /** Silent full refetch of summary and the open unit. */
    async refresh() {
        try {
            this.state.summary = await this.api.summary();
            if (this.state.unit) {
                this.state.unit = await this.api.unit(this.state.unit.id);
                this.state.selectedPair = clampPair(this.state.unit, this.state.selectedPair);
            }
        }
        catch (err) {
            this.state.loadError = errorMessage(err);
        }
        this.paint();
    }
}
