import { defineConfig } from 'vitest/config';

export default defineConfig({
  test: {
    include: ['test/**/*.test.ts'],
    // model training tests need minutes, not seconds
    testTimeout: 360_000,
    hookTimeout: 120_000,
    // tfjs keeps wasm state per process; run files one at a time
    fileParallelism: false,
  },
});
