/**
 * keyboard.ts — global shortcuts: arrows navigate, digits classify.
 */

export interface KeyboardDeps {
  nextUnit(): void;
  prevUnit(): void;
  nextPair(): void;
  prevPair(): void;
  /** zero-based index into the category buttons */
  pressCategory(index: number): void;
}

function insideTextInput(event: KeyboardEvent): boolean {
  const target = event.target;
  if (!(target instanceof HTMLElement)) {
    return false;
  }
  return (
    target instanceof HTMLTextAreaElement ||
    target instanceof HTMLInputElement ||
    target.isContentEditable
  );
}

export function createKeyHandler(deps: KeyboardDeps): (event: KeyboardEvent) => void {
  return (event: KeyboardEvent) => {
    if (insideTextInput(event) || event.ctrlKey || event.metaKey || event.altKey) {
      return;
    }
    if (event.key === "ArrowRight") {
      deps.nextUnit();
    } else if (event.key === "ArrowLeft") {
      deps.prevUnit();
    } else if (event.key === "ArrowDown") {
      deps.nextPair();
    } else if (event.key === "ArrowUp") {
      deps.prevPair();
    } else if (/^[1-9]$/.test(event.key)) {
      deps.pressCategory(Number(event.key) - 1);
    } else {
      return;
    }
    event.preventDefault();
  };
}
