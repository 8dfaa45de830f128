/**
 * keyboard.ts — global shortcuts: arrows navigate, digits classify.
 */
function insideTextInput(event) {
    const target = event.target;
    if (!(target instanceof HTMLElement)) {
        return false;
    }
    return (target instanceof HTMLTextAreaElement ||
        target instanceof HTMLInputElement ||
        target.isContentEditable);
}
export function createKeyHandler(deps) {
    return (event) => {
        if (insideTextInput(event) || event.ctrlKey || event.metaKey || event.altKey) {
            return;
        }
        if (event.key === "ArrowRight") {
            deps.nextUnit();
        }
        else if (event.key === "ArrowLeft") {
            deps.prevUnit();
        }
        else if (event.key === "ArrowDown") {
            deps.nextPair();
        }
        else if (event.key === "ArrowUp") {
            deps.prevPair();
        }
        else if (/^[1-9]$/.test(event.key)) {
            deps.pressCategory(Number(event.key) - 1);
        }
        else {
            return;
        }
        event.preventDefault();
    };
}
