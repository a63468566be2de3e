import { describe, expect, it } from "vitest";

import { detectMode } from "../src/mode.js";

describe("query mode detection", () => {
  it("treats arrows, brackets, and angles as type markers", () => {
    expect(detectMode("[a] -> int")).toBe("type");
    expect(detectMode("Set<a> -> List<a>")).toBe("type");
    expect(detectMode("List<a>")).toBe("type");
    expect(detectMode("[a]")).toBe("type");
  });

  it("treats a lone lowercase variable as a type query", () => {
    expect(detectMode("a")).toBe("type");
    expect(detectMode("(a, b) -> c")).toBe("type");
  });

  it("falls back to keyword when the text does not parse", () => {
    expect(detectMode("Set<a")).toBe("keyword");
    expect(detectMode("List<")).toBe("keyword");
    expect(detectMode("size length count")).toBe("keyword");
  });

  it("keeps plain identifier queries in keyword mode", () => {
    expect(detectMode("find")).toBe("keyword");
    expect(detectMode("indexOf")).toBe("keyword");
    expect(detectMode("ITERABLE")).toBe("keyword");
  });
});
