import { readFileSync } from "node:fs";

import { Engine, createEngine } from "../src/engine.js";
import { IndexDocument } from "../src/types.js";

export function loadFixture<T>(name: string): T {
  const url = new URL(`../fixtures/${name}`, import.meta.url);
  return JSON.parse(readFileSync(url, "utf8")) as T;
}

export function collectionsEngine(): Engine {
  return createEngine(loadFixture<IndexDocument>("search-index.json"));
}

export function veclikeEngine(): Engine {
  return createEngine(loadFixture<IndexDocument>("veclike-index.json"));
}

export interface ParityFile {
  queries: Array<{ query: string; mode: "type" | "keyword"; ids: string[] }>;
}

export interface MatrixParityFile {
  subject: string;
  groupings: Record<string, Array<{ label: string; targets: string[] }>>;
}
