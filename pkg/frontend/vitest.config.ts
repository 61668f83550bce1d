import { defineConfig } from "vitest/config";

// The e2e suite spawns a real server process, so the timeouts are generous.
export default defineConfig({
  test: {
    include: ["tests/**/*.test.ts"],
    testTimeout: 120_000,
    hookTimeout: 120_000,
  },
});
