/** Payload shapes returned by the treenav HTTP API. */

/** Compact reference to a concept node, as it appears inside list fields. */
export interface TermRef {
  node_id: number;
  label: string;
  is_branch: boolean;
  inlink_count: number;
}

/** One disambiguation candidate; /api/search returns a bare array of these. */
export interface Candidate {
  node_id: number;
  label: string;
  description: string;
}

/** Full term view from /api/term/{id}. */
export interface TermPayload {
  node_id: number;
  canonical_label: string;
  description: string;
  aliases: string[];
  generalize: TermRef[];
  branches: TermRef[];
  leaves: TermRef[];
  leaves_total: number;
}

/** One saved bookmark; /api/term/{id}/links returns a bare array of these. */
export interface LinkPayload {
  url: string;
  title: string;
  summary_tags: string[];
  save_count: number;
  saved_at: string;
  feed: "popular" | "recent";
}

/** Sibling leaves that share one parent with the viewed term. */
export interface SidestepParent {
  parent: TermRef;
  leaves: TermRef[];
  leaves_total: number;
}

export interface SidestepPayload {
  node_id: number;
  parents: SidestepParent[];
}

export interface HealthPayload {
  status: string;
  nodes: number;
  bookmarks: number;
}

/** Error envelope used by every non-2xx response. */
export interface ErrorEnvelope {
  error: { code: string; message: string };
}
