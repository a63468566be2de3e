/** The type grammar and matching engine, mirroring the backend exactly.
 *
 *     type    := var | named | list | fnshape
 *     var     := single lowercase letter
 *     named   := Ident ("<" type ("," type)* ">")?
 *     list    := "[" type "]"              // sugar for List<type>
 *     fnshape := "(" (name ":" type ("," name ":" type)*)? ")" "->" type
 *
 * Query strings additionally allow unnamed parameters, a bare single
 * parameter before "->", and grouping parentheses.  Parse errors carry the
 * 0-based character offset of the first invalid token.
 */

import { cmpStr } from "./types.js";

export const DEFAULT_LIST_CTOR = "List";
// Query parameter orderings are only enumerated up to this arity.
export const PERMUTATION_CAP = 6;

const IDENT_RE = /[A-Za-z_][A-Za-z0-9_]*/y;
const FN_CTOR_RE = /^[Ff][Nn]([0-9]+)$/;

export class EngineError extends Error {
  kind = "error";
}

export class TypeParseError extends EngineError {
  override kind = "parse-error";
  constructor(
    public reason: string,
    public offset: number,
  ) {
    super(`${reason} at offset ${offset}`);
  }
}

export class AmbiguousNameError extends EngineError {
  override kind = "ambiguous-name";
  candidates: string[];
  constructor(
    public head: string,
    candidates: string[],
  ) {
    const sorted = [...candidates].sort(cmpStr);
    super(`name '${head}' is ambiguous between ${sorted.join(", ")}`);
    this.candidates = sorted;
  }
}

export interface Var {
  k: "var";
  name: string;
}

export interface Named {
  k: "named";
  name: string;
  args: TypeExpr[];
}

export interface FnShape {
  k: "fn";
  params: TypeExpr[];
  ret: TypeExpr;
}

export type TypeExpr = Var | Named | FnShape;

export interface FunctionShape {
  params: TypeExpr[];
  ret: TypeExpr;
}

export const tvar = (name: string): Var => ({ k: "var", name });
export const named = (name: string, args: TypeExpr[] = []): Named => ({
  k: "named",
  name,
  args,
});
export const fnshape = (params: TypeExpr[], ret: TypeExpr): FnShape => ({
  k: "fn",
  params,
  ret,
});

export function typeEq(a: TypeExpr, b: TypeExpr): boolean {
  if (a.k !== b.k) return false;
  if (a.k === "var") return a.name === (b as Var).name;
  if (a.k === "named") {
    const bn = b as Named;
    return (
      a.name === bn.name &&
      a.args.length === bn.args.length &&
      a.args.every((x, i) => typeEq(x, bn.args[i]))
    );
  }
  const bf = b as FnShape;
  return (
    a.params.length === bf.params.length &&
    a.params.every((x, i) => typeEq(x, bf.params[i])) &&
    typeEq(a.ret, bf.ret)
  );
}

// ---------------------------------------------------------------------------
// scanning and parsing

interface Token {
  kind: string;
  value: string;
  offset: number;
}

function scan(text: string): Token[] {
  const tokens: Token[] = [];
  let i = 0;
  const n = text.length;
  while (i < n) {
    const c = text[i];
    if (/\s/.test(c)) {
      i += 1;
      continue;
    }
    if (text.startsWith("->", i)) {
      tokens.push({ kind: "->", value: "->", offset: i });
      i += 2;
      continue;
    }
    if ("<>[](),:".includes(c)) {
      tokens.push({ kind: c, value: c, offset: i });
      i += 1;
      continue;
    }
    IDENT_RE.lastIndex = i;
    const m = IDENT_RE.exec(text);
    if (m) {
      tokens.push({ kind: "ident", value: m[0], offset: i });
      i = IDENT_RE.lastIndex;
      continue;
    }
    tokens.push({ kind: "invalid", value: c, offset: i });
    i += 1;
  }
  tokens.push({ kind: "end", value: "", offset: n });
  return tokens;
}

class Parser {
  tokens: Token[];
  pos = 0;

  constructor(
    text: string,
    private requireParamNames: boolean,
  ) {
    this.tokens = scan(text);
  }

  peek(): Token {
    return this.tokens[this.pos];
  }

  advance(): Token {
    return this.tokens[this.pos++];
  }

  fail(reason: string): never {
    throw new TypeParseError(reason, this.peek().offset);
  }

  expect(kind: string, what: string): Token {
    if (this.peek().kind !== kind) this.fail(`expected ${what}`);
    return this.advance();
  }

  expectEnd(): void {
    if (this.peek().kind !== "end") this.fail("unexpected trailing input");
  }

  parseType(): TypeExpr {
    const { kind, value } = this.peek();
    if (kind === "[") {
      this.advance();
      const inner = this.parseType();
      this.expect("]", "']'");
      return named(DEFAULT_LIST_CTOR, [inner]);
    }
    if (kind === "(") {
      const [params] = this.parseParamList();
      this.expect("->", "'->'");
      return fnshape(params, this.parseType());
    }
    if (kind === "ident") {
      this.advance();
      if (value.length === 1 && value >= "a" && value <= "z") {
        return tvar(value);
      }
      const args: TypeExpr[] = [];
      if (this.peek().kind === "<") {
        this.advance();
        args.push(this.parseType());
        while (this.peek().kind === ",") {
          this.advance();
          args.push(this.parseType());
        }
        this.expect(">", "'>'");
      }
      return named(value, args);
    }
    this.fail("expected a type");
  }

  parseParamList(): [TypeExpr[], (string | null)[]] {
    this.expect("(", "'('");
    const types: TypeExpr[] = [];
    const names: (string | null)[] = [];
    if (this.peek().kind !== ")") {
      for (;;) {
        const [name, t] = this.parseParam();
        names.push(name);
        types.push(t);
        if (this.peek().kind !== ",") break;
        this.advance();
      }
    }
    this.expect(")", "')'");
    return [types, names];
  }

  parseParam(): [string | null, TypeExpr] {
    if (this.peek().kind === "ident" && this.tokens[this.pos + 1].kind === ":") {
      const name = this.advance().value;
      this.advance();
      return [name, this.parseType()];
    }
    if (this.requireParamNames) this.fail("expected 'name: type' parameter");
    return [null, this.parseType()];
  }
}

/** Parse a bare type in the declaration grammar (index param/ret strings). */
export function parseTypeText(
  text: string,
  aliases: Record<string, string> = {},
): TypeExpr {
  const p = new Parser(text, true);
  const t = p.parseType();
  p.expectEnd();
  return applyAliases(t, aliases);
}

/** Parse a search query: a function shape or a bare type pattern. */
export function parseTypeQuery(
  text: string,
  aliases: Record<string, string> = {},
): FunctionShape | TypeExpr {
  const p = new Parser(text, false);
  let expr: TypeExpr;
  if (p.peek().kind === "(") {
    const [items] = p.parseParamList();
    if (p.peek().kind === "->") {
      p.advance();
      const ret = p.parseType();
      p.expectEnd();
      return applyAliasesShape({ params: items, ret }, aliases);
    }
    if (items.length !== 1) p.fail("expected '->' after parameter list");
    // grouping parentheses around one type
    expr = items[0];
  } else {
    expr = p.parseType();
  }
  if (p.peek().kind === "->") {
    p.advance();
    const ret = p.parseType();
    p.expectEnd();
    return applyAliasesShape({ params: [expr], ret }, aliases);
  }
  p.expectEnd();
  return applyAliases(expr, aliases);
}

export function isShape(q: FunctionShape | TypeExpr): q is FunctionShape {
  return !("k" in q);
}

// ---------------------------------------------------------------------------
// rendering

export function renderType(t: TypeExpr): string {
  if (t.k === "var") return t.name;
  if (t.k === "named") {
    if (t.args.length === 0) return t.name;
    return `${t.name}<${t.args.map(renderType).join(", ")}>`;
  }
  const params = t.params.map((p, i) => `p${i}: ${renderType(p)}`).join(", ");
  return `(${params}) -> ${renderType(t.ret)}`;
}

// ---------------------------------------------------------------------------
// structural helpers

export function applyAliases(
  t: TypeExpr,
  aliases: Record<string, string>,
): TypeExpr {
  if (t.k === "var") return t;
  if (t.k === "named") {
    return named(
      aliases[t.name] ?? t.name,
      t.args.map((a) => applyAliases(a, aliases)),
    );
  }
  return fnshape(
    t.params.map((p) => applyAliases(p, aliases)),
    applyAliases(t.ret, aliases),
  );
}

export function applyAliasesShape(
  shape: FunctionShape,
  aliases: Record<string, string>,
): FunctionShape {
  return {
    params: shape.params.map((p) => applyAliases(p, aliases)),
    ret: applyAliases(shape.ret, aliases),
  };
}

/** Turn zero-argument named nodes whose head is in `names` into variables. */
export function markVars(t: TypeExpr, names: Set<string>): TypeExpr {
  if (t.k === "var") return t;
  if (t.k === "named") {
    if (t.args.length === 0 && names.has(t.name)) return tvar(t.name);
    return named(
      t.name,
      t.args.map((a) => markVars(a, names)),
    );
  }
  return fnshape(
    t.params.map((p) => markVars(p, names)),
    markVars(t.ret, names),
  );
}

export function nodeCount(t: TypeExpr): number {
  if (t.k === "var") return 1;
  if (t.k === "named") {
    return 1 + t.args.reduce((acc, a) => acc + nodeCount(a), 0);
  }
  return (
    1 + t.params.reduce((acc, p) => acc + nodeCount(p), 0) + nodeCount(t.ret)
  );
}

// ---------------------------------------------------------------------------
// normalization

export interface NormalizeContext {
  aliases: Record<string, string>;
  /** Declared type, interface, and primitive names. */
  heads: Set<string>;
}

function canonicalHead(name: string, ctx: NormalizeContext): string {
  if (ctx.heads.has(name)) return name;
  const lowered = name.toLowerCase();
  const hits = [...ctx.heads].filter((h) => h.toLowerCase() === lowered).sort(cmpStr);
  if (hits.length === 1) return hits[0];
  if (hits.length > 1) throw new AmbiguousNameError(name, hits);
  const m = FN_CTOR_RE.exec(name);
  if (m) return `Fn${m[1]}`;
  return name;
}

function canonicalize(t: TypeExpr, ctx: NormalizeContext): TypeExpr {
  if (t.k === "var") return t;
  if (t.k === "named") {
    return named(
      canonicalHead(t.name, ctx),
      t.args.map((a) => canonicalize(a, ctx)),
    );
  }
  return fnshape(
    t.params.map((p) => canonicalize(p, ctx)),
    canonicalize(t.ret, ctx),
  );
}

function renameVars(t: TypeExpr, mapping: Map<string, string>): TypeExpr {
  if (t.k === "var") {
    let renamed = mapping.get(t.name);
    if (renamed === undefined) {
      renamed = `v${mapping.size}`;
      mapping.set(t.name, renamed);
    }
    return tvar(renamed);
  }
  if (t.k === "named") {
    return named(
      t.name,
      t.args.map((a) => renameVars(a, mapping)),
    );
  }
  return fnshape(
    t.params.map((p) => renameVars(p, mapping)),
    renameVars(t.ret, mapping),
  );
}

/** Alias application, head canonicalization (case-insensitive against the
 * declared names, FnN fallback), and on the declaration side v0, v1, ...
 * renaming in first occurrence order. */
export function normalize(
  t: TypeExpr,
  ctx: NormalizeContext,
  declaration = false,
): TypeExpr {
  let out = applyAliases(t, ctx.aliases);
  out = canonicalize(out, ctx);
  if (declaration) out = renameVars(out, new Map());
  return out;
}

/** Shape-level normalize; renaming is shared across parameters and return. */
export function normalizeShape(
  shape: FunctionShape,
  ctx: NormalizeContext,
  declaration = false,
): FunctionShape {
  let params = shape.params.map((p) => canonicalize(applyAliases(p, ctx.aliases), ctx));
  let ret = canonicalize(applyAliases(shape.ret, ctx.aliases), ctx);
  if (declaration) {
    const mapping = new Map<string, string>();
    params = params.map((p) => renameVars(p, mapping));
    ret = renameVars(ret, mapping);
  }
  return { params, ret };
}

// ---------------------------------------------------------------------------
// unification

export type Substitution = Map<string, TypeExpr>;

export function applySubst(t: TypeExpr, subst: Substitution): TypeExpr {
  if (t.k === "var") return subst.get(t.name) ?? t;
  if (t.k === "named") {
    return named(
      t.name,
      t.args.map((a) => applySubst(a, subst)),
    );
  }
  return fnshape(
    t.params.map((p) => applySubst(p, subst)),
    applySubst(t.ret, subst),
  );
}

export function occursIn(name: string, t: TypeExpr): boolean {
  if (t.k === "var") return t.name === name;
  if (t.k === "named") return t.args.some((a) => occursIn(name, a));
  return t.params.some((p) => occursIn(name, p)) || occursIn(name, t.ret);
}

function bind(subst: Substitution, name: string, t: TypeExpr): boolean {
  if (occursIn(name, t)) return false;
  const one: Substitution = new Map([[name, t]]);
  for (const key of subst.keys()) {
    subst.set(key, applySubst(subst.get(key)!, one));
  }
  subst.set(name, t);
  return true;
}

/** Most general unifier for a list of equations, or null.  The result is
 * resolved: no binding mentions a bound variable. */
export function unifyPairs(
  pairs: Array<[TypeExpr, TypeExpr]>,
): Substitution | null {
  const subst: Substitution = new Map();
  const work = [...pairs];
  while (work.length) {
    const [ra, rb] = work.pop()!;
    const a = applySubst(ra, subst);
    const b = applySubst(rb, subst);
    if (typeEq(a, b)) continue;
    if (a.k === "var") {
      if (!bind(subst, a.name, b)) return null;
      continue;
    }
    if (b.k === "var") {
      if (!bind(subst, b.name, a)) return null;
      continue;
    }
    if (a.k === "named" && b.k === "named") {
      if (a.name !== b.name || a.args.length !== b.args.length) return null;
      for (let i = 0; i < a.args.length; i++) work.push([a.args[i], b.args[i]]);
      continue;
    }
    if (a.k === "fn" && b.k === "fn") {
      if (a.params.length !== b.params.length) return null;
      for (let i = 0; i < a.params.length; i++) {
        work.push([a.params[i], b.params[i]]);
      }
      work.push([a.ret, b.ret]);
      continue;
    }
    return null;
  }
  return subst;
}

export function unify(a: TypeExpr, b: TypeExpr): Substitution | null {
  return unifyPairs([[a, b]]);
}

/** Penalty contribution of a unifier: total node count over bound
 * expressions (a plain variable-to-variable binding costs 1). */
export function substCost(subst: Substitution): number {
  let total = 0;
  for (const t of subst.values()) total += nodeCount(t);
  return total;
}

// ---------------------------------------------------------------------------
// signature matching

export interface MatchOptions {
  allowPermutation?: boolean;
  maxSubtypeHops?: number;
}

export interface MatchResult {
  matched: boolean;
  penalty: number;
  permutationUsed: boolean;
  bindings: Substitution;
}

/** Shortest upward distance sub -> sup, 0 for equal, null if unreachable. */
export type DistanceFn = (sub: string, sup: string) => number | null;

function hopPairs(
  q: TypeExpr,
  t: TypeExpr,
  maxHops: number,
  distance: DistanceFn | null,
  paramSide: boolean,
): [Array<[TypeExpr, TypeExpr]>, number] | null {
  if (distance === null || maxHops <= 0) return null;
  if (q.k !== "named" || t.k !== "named") return null;
  if (q.name === t.name || q.args.length !== t.args.length) return null;
  const d = paramSide ? distance(q.name, t.name) : distance(t.name, q.name);
  if (d === null || d === 0 || d > maxHops) return null;
  return [q.args.map((a, i) => [a, t.args[i]]), d];
}

function attempt(
  query: FunctionShape,
  target: FunctionShape,
  perm: number[],
  maxHops: number,
  distance: DistanceFn | null,
): [Substitution, number] | null {
  const pairs: Array<[TypeExpr, TypeExpr]> = [];
  let hops = 0;
  for (let i = 0; i < target.params.length; i++) {
    const qparam = query.params[perm[i]];
    const tparam = target.params[i];
    const adjusted = hopPairs(qparam, tparam, maxHops, distance, true);
    if (adjusted === null) {
      pairs.push([qparam, tparam]);
    } else {
      pairs.push(...adjusted[0]);
      hops += adjusted[1];
    }
  }
  const adjusted = hopPairs(query.ret, target.ret, maxHops, distance, false);
  if (adjusted === null) {
    pairs.push([query.ret, target.ret]);
  } else {
    pairs.push(...adjusted[0]);
    hops += adjusted[1];
  }
  const subst = unifyPairs(pairs);
  if (subst === null) return null;
  return [subst, hops];
}

/** Lexicographic permutations of 0..n-1 (the order ties are broken in). */
function* permutations(n: number): Generator<number[]> {
  const items = Array.from({ length: n }, (_, i) => i);
  function* recur(prefix: number[], rest: number[]): Generator<number[]> {
    if (rest.length === 0) {
      yield prefix;
      return;
    }
    for (let i = 0; i < rest.length; i++) {
      yield* recur(
        [...prefix, rest[i]],
        [...rest.slice(0, i), ...rest.slice(i + 1)],
      );
    }
  }
  yield* recur([], items);
}

/** Match a query shape against a target shape.
 *
 * Arities must be equal.  With permutation enabled every ordering of the
 * query parameters is tried up to arity PERMUTATION_CAP.  A concrete query
 * parameter may sit maxSubtypeHops below the target parameter (the target
 * generalizes); a target return may sit the same distance below the query
 * return (the target specializes).
 *
 * penalty = substCost(bindings) + 2 * (non-identity permutation)
 *         + 3 * (total subtype hops); minimum penalty wins, ties broken by
 * the lexicographically smallest permutation.
 */
export function signatureMatch(
  query: FunctionShape,
  target: FunctionShape,
  opts: MatchOptions = {},
  distance: DistanceFn | null = null,
): MatchResult {
  const allowPermutation = opts.allowPermutation ?? true;
  const maxHops = opts.maxSubtypeHops ?? 1;
  const n = query.params.length;
  const none: MatchResult = {
    matched: false,
    penalty: 0,
    permutationUsed: false,
    bindings: new Map(),
  };
  if (n !== target.params.length) return none;
  const identity = Array.from({ length: n }, (_, i) => i);
  const perms =
    allowPermutation && n <= PERMUTATION_CAP
      ? permutations(n)
      : [identity][Symbol.iterator]();
  let best: { penalty: number; perm: number[]; subst: Substitution } | null =
    null;
  for (const perm of perms) {
    const outcome = attempt(query, target, perm, maxHops, distance);
    if (outcome === null) continue;
    const [subst, hops] = outcome;
    const isIdentity = perm.every((p, i) => p === i);
    const penalty = substCost(subst) + (isIdentity ? 0 : 2) + 3 * hops;
    // permutations arrive in lexicographic order, so strictly-smaller
    // penalty is the full (penalty, perm) tie-break
    if (best === null || penalty < best.penalty) {
      best = { penalty, perm, subst };
    }
  }
  if (best === null) return none;
  return {
    matched: true,
    penalty: best.penalty,
    permutationUsed: !best.perm.every((p, i) => p === i),
    bindings: best.subst,
  };
}
