import { defineConfig } from "vitest/config";

export default defineConfig({
  test: {
    environment: "happy-dom",
    include: ["tests/**/*.test.ts"],
    // the e2e test boots a real server process
    testTimeout: 30000,
    hookTimeout: 30000,
  },
});
