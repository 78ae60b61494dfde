import { defineConfig } from "vitest/config";

export default defineConfig({
  test: {
    include: ["tests/**/*.test.ts"],
    testTimeout: 30_000,
    hookTimeout: 120_000,
    // The e2e suite drives one shared service; keep files sequential.
    fileParallelism: false,
  },
});
