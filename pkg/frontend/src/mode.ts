/** Query mode detection: a query is a type query iff it parses under the
 * type grammar AND carries a type marker ("->", "[", "<", or a lone
 * lowercase variable word); everything else is a keyword query. */

import { EngineError, parseTypeQuery } from "./typeexpr.js";

export type QueryMode = "type" | "keyword";

const WORD_RE = /[A-Za-z0-9_]+/g;

export function detectMode(text: string): QueryMode {
  try {
    parseTypeQuery(text);
  } catch (e) {
    if (e instanceof EngineError) return "keyword";
    throw e;
  }
  if (text.includes("->") || text.includes("[") || text.includes("<")) {
    return "type";
  }
  for (const word of text.match(WORD_RE) ?? []) {
    if (word.length === 1 && word >= "a" && word <= "z") return "type";
  }
  return "keyword";
}
