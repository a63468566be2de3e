/** Method matrices over the index document: grouped rows of compact cells
 * for one subject type, with client-side grouping and receiver filtering.
 * Receiver filters hide cells without reflowing group labels away. */

import { Engine, FOLDED_RECEIVERS } from "./engine.js";
import { EngineError } from "./typeexpr.js";
import { IndexEntity, cmpStr } from "./types.js";

export const GROUPINGS = ["first-arg", "receiver", "return", "annotation"] as const;
export type Grouping = (typeof GROUPINGS)[number];

export const UNGROUPED_LABEL = "ungrouped";
export const NO_ARG_LABEL = "(none)";

export const RECEIVER_MARKERS: Record<string, string> = {
  none: "fn",
  readonly: "ro",
  mutating: "mut",
  consuming: "own",
  static: "static",
};

export class UnknownSubjectError extends EngineError {
  override kind = "unknown-subject";
  constructor(public name: string) {
    super(`no type named '${name}'`);
  }
}

export interface MatrixCell {
  name: string;
  signature: string;
  target: string;
  receiver: string;
}

export interface MethodMatrix {
  subject: string;
  grouping: Grouping;
  rows: Array<{ label: string; cells: MatrixCell[] }>;
}

/** Parameters as declared, with the folded-in receiver stripped again. */
function declaredParams(e: IndexEntity): string[] {
  if (e.receiver && FOLDED_RECEIVERS.has(e.receiver) && e.owner) {
    return e.params.slice(1);
  }
  return e.params;
}

export function compactSignature(e: IndexEntity): string {
  const marker = RECEIVER_MARKERS[e.receiver ?? "none"] ?? e.receiver;
  return `(${marker}) (${declaredParams(e).join(", ")}) -> ${e.ret ?? "Unit"}`;
}

function groupLabels(e: IndexEntity, grouping: Grouping): string[] {
  if (grouping === "first-arg") {
    const params = declaredParams(e);
    return [params.length ? params[0] : NO_ARG_LABEL];
  }
  if (grouping === "receiver") return [e.receiver ?? "none"];
  if (grouping === "return") return [e.ret ?? "Unit"];
  if (grouping === "annotation") {
    return e.groups.length ? e.groups : [UNGROUPED_LABEL];
  }
  throw new Error(`unknown grouping: ${grouping}`);
}

function resolveSubject(engine: Engine, subject: string): IndexEntity {
  let name = subject;
  if (!engine.heads.has(name)) {
    const lowered = subject.toLowerCase();
    const hits = [...engine.heads]
      .filter((h) => h.toLowerCase() === lowered)
      .sort(cmpStr);
    if (hits.length === 1) name = hits[0];
  }
  const entity = engine.index.entities.find(
    (e) =>
      e.kind !== "function" &&
      e.kind !== "module" &&
      e.kind !== "interface" &&
      e.name === name,
  );
  if (!entity) throw new UnknownSubjectError(subject);
  return entity;
}

export function buildMatrix(
  engine: Engine,
  subject: string,
  grouping: Grouping,
): MethodMatrix {
  if (!GROUPINGS.includes(grouping)) {
    throw new Error(`unknown grouping: ${grouping}`);
  }
  const subjectEntity = resolveSubject(engine, subject);
  const methods = engine.index.entities
    .filter((e) => e.kind === "function" && e.owner === subjectEntity.id)
    .sort((a, b) => cmpStr(a.name, b.name) || cmpStr(a.id, b.id));

  const grouped = new Map<string, MatrixCell[]>();
  for (const f of methods) {
    const cell: MatrixCell = {
      name: f.name,
      signature: compactSignature(f),
      target: f.id,
      receiver: f.receiver ?? "none",
    };
    for (const label of groupLabels(f, grouping)) {
      let cells = grouped.get(label);
      if (!cells) {
        cells = [];
        grouped.set(label, cells);
      }
      cells.push(cell);
    }
  }

  const ordered = [...grouped.keys()].sort(
    (a, b) =>
      Number(a === UNGROUPED_LABEL) - Number(b === UNGROUPED_LABEL) ||
      cmpStr(a, b),
  );
  return {
    subject: subjectEntity.name,
    grouping,
    rows: ordered.map((label) => ({
      label,
      cells: [...grouped.get(label)!].sort(
        (a, b) => cmpStr(a.name, b.name) || cmpStr(a.target, b.target),
      ),
    })),
  };
}

export function cellVisible(cell: MatrixCell, receivers: Set<string> | null): boolean {
  return !receivers || receivers.has(cell.receiver);
}

/** Cells surviving the receiver filter; rows and labels always persist. */
export function visibleCellCount(
  matrix: MethodMatrix,
  receivers: Set<string> | null,
): number {
  let count = 0;
  for (const row of matrix.rows) {
    for (const cell of row.cells) {
      if (cellVisible(cell, receivers)) count += 1;
    }
  }
  return count;
}
