/** Shapes of the published search index (search-index.json, version 1). */

export interface IndexEntity {
  id: string;
  /** "module", "interface", "function", or a concrete type kind. */
  kind: string;
  name: string;
  /** Lowercased name tokens, precomputed by the generator. */
  tokens: string[];
  /** Qualified id of the owning type; functions only. */
  owner: string | null;
  receiver: string | null;
  /**
   * Functions: rendered parameter types of the desugared shape (the owner
   * is already folded in as the first entry for instance receivers).
   * Types and interfaces: type parameter names.
   */
  params: string[];
  /** Rendered return type; functions only. */
  ret: string | null;
  doc_summary: string;
  groups: string[];
  module: string;
}

export interface IndexRelations {
  /** simple type head -> qualified function ids taking it */
  inputs?: Record<string, string[]>;
  /** simple type head -> qualified function ids returning it */
  outputs?: Record<string, string[]>;
  /** simple interface name -> qualified implementor type ids */
  implements?: Record<string, string[]>;
  /** simple child type name -> qualified parent type ids */
  inherits?: Record<string, string[]>;
}

export interface IndexDocument {
  version: number;
  aliases: Record<string, string>;
  entities: IndexEntity[];
  relations: IndexRelations;
}

export interface SearchRow {
  entity: string;
  score: number;
  penalty: number;
  explanation: string[];
}

/** Compare the way the backend compares strings: by code unit, no locale. */
export function cmpStr(a: string, b: string): number {
  return a < b ? -1 : a > b ? 1 : 0;
}

export function lastSegment(id: string): string {
  const i = id.lastIndexOf("::");
  return i < 0 ? id : id.slice(i + 2);
}
