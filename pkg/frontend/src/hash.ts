/** URL hash <-> UI state.  The hash is a query string after "#", carrying
 * the search query, mode override, filters, and the matrix subject and
 * grouping, so every view is linkable. */

import { Grouping } from "./matrix.js";

export type ModeSetting = "auto" | "type" | "keyword";

export interface UiState {
  query: string;
  mode: ModeSetting;
  receivers: string[];
  owner: string;
  returns: string;
  takes: string;
  subject: string;
  grouping: Grouping;
}

export const DEFAULT_STATE: UiState = {
  query: "",
  mode: "auto",
  receivers: [],
  owner: "",
  returns: "",
  takes: "",
  subject: "",
  grouping: "first-arg",
};

export function encodeHash(state: UiState): string {
  const params = new URLSearchParams();
  if (state.query) params.set("q", state.query);
  if (state.mode !== "auto") params.set("mode", state.mode);
  if (state.receivers.length) params.set("receiver", state.receivers.join(","));
  if (state.owner) params.set("owner", state.owner);
  if (state.returns) params.set("returns", state.returns);
  if (state.takes) params.set("takes", state.takes);
  if (state.subject) params.set("subject", state.subject);
  if (state.grouping !== DEFAULT_STATE.grouping) {
    params.set("grouping", state.grouping);
  }
  const text = params.toString();
  return text ? `#${text}` : "";
}

export function decodeHash(hash: string): UiState {
  const params = new URLSearchParams(hash.replace(/^#/, ""));
  const mode = params.get("mode");
  const grouping = params.get("grouping");
  const receivers = (params.get("receiver") ?? "")
    .split(",")
    .map((r) => r.trim())
    .filter(Boolean);
  return {
    query: params.get("q") ?? "",
    mode: mode === "type" || mode === "keyword" ? mode : "auto",
    receivers,
    owner: params.get("owner") ?? "",
    returns: params.get("returns") ?? "",
    takes: params.get("takes") ?? "",
    subject: params.get("subject") ?? "",
    grouping:
      grouping === "receiver" ||
      grouping === "return" ||
      grouping === "annotation" ||
      grouping === "first-arg"
        ? grouping
        : DEFAULT_STATE.grouping,
  };
}
