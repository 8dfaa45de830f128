/**
 * main.ts — entry point for the served page.
 */
import { ApiClient } from "./api.js";
import { App } from "./app.js";
import { createKeyHandler } from "./keyboard.js";
const root = document.getElementById("app");
if (root) {
    const app = new App(root, new ApiClient());
    document.addEventListener("keydown", createKeyHandler(app));
    void app.boot();
}
