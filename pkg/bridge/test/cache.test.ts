import { mkdtempSync } from "node:fs";
import { tmpdir } from "node:os";
import { join } from "node:path";

import { describe, expect, it } from "vitest";

import { ResponseCache } from "../src/cache.js";

describe("ResponseCache", () => {
  it("round-trips entries", () => {
    const cache = new ResponseCache(mkdtempSync(join(tmpdir(), "cache-")));
    const key = ["v1", "model", "metric", "statement", "chunk"];
    expect(cache.get(key)).toBeNull();
    cache.put(key, { score: 0.7, clamped: false });
    expect(cache.get(key)).toEqual({ score: 0.7, clamped: false });
  });

  it("distinguishes keys that concatenate identically", () => {
    const cache = new ResponseCache(mkdtempSync(join(tmpdir(), "cache-")));
    cache.put(["ab", "c"], { score: 1, clamped: false });
    expect(cache.get(["a", "bc"])).toBeNull();
  });

  it("is a no-op without a directory", () => {
    const cache = new ResponseCache(null);
    cache.put(["k"], { score: 1, clamped: false });
    expect(cache.get(["k"])).toBeNull();
  });
});
