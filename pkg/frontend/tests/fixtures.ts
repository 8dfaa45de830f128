/**
 * fixtures.ts — recorded API responses shared by the component tests.
 *
 * The JSON files are captured from the running service and frozen in the
 * repository's golden directory.
 */

import { readFileSync } from "node:fs";
import { dirname, resolve } from "node:path";
import { fileURLToPath } from "node:url";

import type { Summary, UnitDetail } from "../src/api.js";

// resolved step by step so vite does not treat the path as an asset import
const HERE = dirname(fileURLToPath(import.meta.url));
const GOLDEN = resolve(HERE, "..", "..", "tests", "golden");

function loadGolden<T>(name: string): T {
  return JSON.parse(readFileSync(resolve(GOLDEN, name), "utf-8")) as T;
}

export function recordedSummary(): Summary {
  return loadGolden<Summary>("api_summary.json");
}

export function recordedUnit(): UnitDetail {
  return loadGolden<UnitDetail>("api_unit_Jn8_12-1.json");
}
