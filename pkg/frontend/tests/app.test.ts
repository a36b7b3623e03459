import { beforeEach, describe, expect, it } from "vitest";

import { ApiError, type ApiClient } from "../src/api.js";
import { App, parseRoute } from "../src/app.js";
import type {
  Candidate,
  LinkPayload,
  SidestepPayload,
  TermPayload,
  TermRef,
} from "../src/types.js";

function ref(node_id: number, label: string, is_branch = false, inlink_count = 0): TermRef {
  return { node_id, label, is_branch, inlink_count };
}

function term(node_id: number, label: string, extra: Partial<TermPayload> = {}): TermPayload {
  return {
    node_id,
    canonical_label: label,
    description: "",
    aliases: [],
    generalize: [],
    branches: [],
    leaves: [],
    leaves_total: 0,
    ...extra,
  };
}

const WEB = term(1, "Web things", {
  description: "catch-all hub",
  aliases: ["the web"],
  branches: [ref(2, "Ajax programming", true, 2)],
  leaves: [ref(3, "YouTube", false, 5)],
  leaves_total: 5,
});
const AJAX = term(2, "Ajax programming", {
  generalize: [ref(1, "Web things", true, 9)],
});
const YOUTUBE = term(3, "YouTube", {
  generalize: [ref(1, "Web things", true, 9)],
});

const WEB_LINKS: LinkPayload[] = [
  {
    url: "http://a.example/one",
    title: "First link",
    summary_tags: ["web", "ajax"],
    save_count: 120,
    saved_at: "2009-06-01T12:00:00Z",
    feed: "popular",
  },
  {
    url: "http://a.example/two",
    title: "Second link",
    summary_tags: [],
    save_count: 2,
    saved_at: "2009-07-01T12:00:00Z",
    feed: "recent",
  },
];

const SIDESTEP_3: SidestepPayload = {
  node_id: 3,
  parents: [{ parent: ref(1, "Web things", true, 9), leaves: [ref(4, "Flickr")], leaves_total: 1 }],
};

/** Canned ApiClient substitute that counts calls per endpoint. */
class FakeApi {
  terms = new Map<number, TermPayload>([
    [1, WEB],
    [2, AJAX],
    [3, YOUTUBE],
  ]);
  searches = new Map<string, Candidate[]>([
    ["web", [
      { node_id: 1, label: "Web things", description: "catch-all hub" },
      { node_id: 2, label: "Ajax programming", description: "" },
    ]],
    ["youtube", [{ node_id: 3, label: "YouTube", description: "video site" }]],
    ["zzz", []],
  ]);
  termCalls: number[] = [];
  linkCalls: number[] = [];
  searchCalls: string[] = [];
  sidestepCalls: number[] = [];

  async health() {
    return { status: "ok", nodes: 3, bookmarks: 2 };
  }

  async search(query: string): Promise<Candidate[]> {
    this.searchCalls.push(query);
    return this.searches.get(query) ?? [];
  }

  async term(id: number): Promise<TermPayload> {
    this.termCalls.push(id);
    const t = this.terms.get(id);
    if (!t) throw new ApiError(404, "unknown_node", `unknown node id: ${id}`);
    return t;
  }

  async links(id: number): Promise<LinkPayload[]> {
    this.linkCalls.push(id);
    if (!this.terms.has(id)) throw new ApiError(404, "unknown_node", `unknown node id: ${id}`);
    return id === 1 ? WEB_LINKS : [];
  }

  async sidestep(id: number): Promise<SidestepPayload> {
    this.sidestepCalls.push(id);
    return id === 3 ? SIDESTEP_3 : { node_id: id, parents: [] };
  }

  asClient(): ApiClient {
    return this as unknown as ApiClient;
  }
}

async function flush(rounds = 4): Promise<void> {
  for (let i = 0; i < rounds; i++) {
    await new Promise((resolve) => setTimeout(resolve, 0));
  }
}

let root: HTMLElement;
let fake: FakeApi;
let app: App;

function boot(startHash = ""): void {
  if (startHash) window.location.hash = startHash;
  app = new App(root, fake.asClient());
  app.start();
}

function text(selector: string): string {
  return root.querySelector(selector)?.textContent ?? "";
}

function chips(scope: string): string[] {
  return [...root.querySelectorAll(`${scope} .chip`)].map((c) => c.textContent ?? "");
}

beforeEach(async () => {
  window.location.hash = "";
  await flush();
  document.body.innerHTML = "";
  root = document.createElement("div");
  document.body.appendChild(root);
  fake = new FakeApi();
});

describe("parseRoute", () => {
  it("maps hashes onto views", () => {
    expect(parseRoute("")).toEqual({ view: "home" });
    expect(parseRoute("#/")).toEqual({ view: "home" });
    expect(parseRoute("#/search/web%202.0")).toEqual({ view: "search", query: "web 2.0" });
    expect(parseRoute("#/term/26")).toEqual({ view: "term", id: 26 });
    expect(parseRoute("#/term/abc")).toEqual({ view: "unknown" });
    expect(parseRoute("#/nope")).toEqual({ view: "unknown" });
  });
});

describe("home and search", () => {
  it("home shows a hint and the health line", async () => {
    boot();
    await flush();
    expect(text(".notice")).toContain("type a keyword");
    expect(text(".health")).toBe("serving 3 terms over 2 bookmarks");
  });

  it("submitting the form routes to the chooser and keeps the input text", async () => {
    boot();
    await flush();
    const input = root.querySelector("input") as HTMLInputElement;
    input.value = "  web ";
    root.querySelector("form")!.dispatchEvent(new Event("submit", { cancelable: true }));
    await flush();
    expect(window.location.hash).toBe("#/search/web");
    expect(text("h2")).toBe("2 candidates for 'web':");
    expect(input.value).toBe("web");
    const labels = [...root.querySelectorAll(".candidate-label")].map((a) => a.textContent);
    expect(labels).toEqual(["Web things", "Ajax programming"]);
    expect(text(".candidate-desc")).toBe("catch-all hub");
  });

  it("an empty result set says so and retains the query", async () => {
    boot("#/search/zzz");
    await flush();
    expect(text(".notice")).toBe("no results for 'zzz'");
    expect((root.querySelector("input") as HTMLInputElement).value).toBe("zzz");
  });

  it("a single candidate opens its term directly", async () => {
    boot("#/search/youtube");
    await flush();
    expect(window.location.hash).toBe("#/term/3");
    expect(text("h2")).toBe("YouTube");
  });

  it("clicking a candidate opens the term view", async () => {
    boot("#/search/web");
    await flush();
    (root.querySelector(".candidate-label") as HTMLAnchorElement).click();
    await flush();
    expect(window.location.hash).toBe("#/term/1");
    expect(text("h2")).toBe("Web things");
  });
});

describe("term view", () => {
  it("renders header, boxes, chips and the more-note", async () => {
    boot("#/term/1");
    await flush();
    expect(text("h2")).toBe("Web things");
    expect(text(".desc")).toBe("catch-all hub");
    expect(text(".aka")).toBe("aka: the web");
    expect(text(".box.generalize .empty")).toBe("(none)");
    expect(chips(".box.branches")).toEqual(["Ajax programming"]);
    expect(chips(".box.leaves")).toEqual(["YouTube"]);
    expect(text(".box.leaves .more")).toBe("... and 4 more");
    const branchChip = root.querySelector(".box.branches .chip") as HTMLAnchorElement;
    expect(branchChip.classList.contains("branch")).toBe(true);
    expect(branchChip.dataset.nodeId).toBe("2");
  });

  it("renders link results with title anchor, feed badge and tags", async () => {
    boot("#/term/1");
    await flush();
    const first = root.querySelector(".link.popular") as HTMLElement;
    const title = first.querySelector(".link-title") as HTMLAnchorElement;
    expect(title.textContent).toBe("First link");
    expect(title.href).toBe("http://a.example/one");
    expect(first.querySelector(".feed-badge")!.textContent).toBe("popular");
    expect(first.querySelector(".saves")!.textContent).toBe("120 saves");
    expect(first.querySelector(".date")!.textContent).toBe("2009-06-01");
    expect(first.querySelector(".link-url")!.textContent).toBe("http://a.example/one");
    expect([...first.querySelectorAll(".tag")].map((t) => t.textContent)).toEqual(["web", "ajax"]);
    expect(root.querySelectorAll(".link.recent").length).toBe(1);
  });

  it("shows explicit empty states on a leaf term", async () => {
    boot("#/term/3");
    await flush();
    expect(text(".box.branches .empty")).toBe("(none)");
    expect(text(".box.leaves .empty")).toBe("(none)");
    expect(chips(".box.generalize")).toEqual(["Web things"]);
    expect(text(".links-slot .empty")).toBe("(none)");
  });

  it("a tag chip routes to a search for that tag", async () => {
    boot("#/term/1");
    await flush();
    (root.querySelector(".tag") as HTMLAnchorElement).click();
    await flush();
    expect(window.location.hash).toBe("#/search/web");
    expect(fake.searchCalls).toEqual(["web"]);
  });

  it("an unknown id renders a not-found notice", async () => {
    boot("#/term/99");
    await flush();
    expect(text(".notice.error")).toBe("no term with id 99");
  });

  it("an unroutable hash renders the fallback notice", async () => {
    boot("#/nope");
    await flush();
    expect(text(".notice.error")).toContain("page not found");
  });
});

describe("navigation", () => {
  it("chip clicks descend and the breadcrumb grows", async () => {
    boot("#/term/1");
    await flush();
    (root.querySelector(".box.branches .chip") as HTMLAnchorElement).click();
    await flush();
    expect(window.location.hash).toBe("#/term/2");
    expect(text("h2")).toBe("Ajax programming");
    const crumbs = [...root.querySelectorAll(".crumbs .crumb")].map((c) => c.textContent);
    expect(crumbs).toEqual(["Web things", "Ajax programming"]);
  });

  it("a breadcrumb click goes back without refetching", async () => {
    boot("#/term/1");
    await flush();
    (root.querySelector(".box.branches .chip") as HTMLAnchorElement).click();
    await flush();
    expect(fake.termCalls).toEqual([1, 2]);
    (root.querySelector(".crumbs a.crumb") as HTMLAnchorElement).click();
    await flush();
    expect(text("h2")).toBe("Web things");
    expect(fake.termCalls).toEqual([1, 2]);
    expect(fake.linkCalls).toEqual([1, 2]);
    const crumbs = [...root.querySelectorAll(".crumbs .crumb")].map((c) => c.textContent);
    expect(crumbs).toEqual(["Web things"]);
  });

  it("history-style backs also render from the cache", async () => {
    boot("#/term/1");
    await flush();
    app.go("#/term/3");
    await flush();
    window.location.hash = "#/term/1";
    await flush();
    expect(text("h2")).toBe("Web things");
    expect(fake.termCalls).toEqual([1, 3]);
  });

  it("a late response for an abandoned navigation is discarded", async () => {
    const resolvers = new Map<number, (t: TermPayload) => void>();
    fake.term = (id: number) => {
      fake.termCalls.push(id);
      return new Promise<TermPayload>((resolve) => resolvers.set(id, resolve));
    };
    boot("#/term/1");
    await flush();
    app.go("#/term/2");
    await flush();
    resolvers.get(2)!(AJAX);
    await flush();
    expect(text("h2")).toBe("Ajax programming");
    resolvers.get(1)!(WEB);
    await flush();
    expect(text("h2")).toBe("Ajax programming");
    expect(window.location.hash).toBe("#/term/2");
  });

  it("deep links land on the term view directly", async () => {
    boot("#/term/2");
    await flush();
    expect(text("h2")).toBe("Ajax programming");
    const crumbs = [...root.querySelectorAll(".crumbs .crumb")].map((c) => c.textContent);
    expect(crumbs).toEqual(["Ajax programming"]);
  });
});

describe("siblings", () => {
  it("the toggle fetches sidestep groups on demand", async () => {
    boot("#/term/3");
    await flush();
    expect(fake.sidestepCalls).toEqual([]);
    (root.querySelector(".siblings-toggle") as HTMLButtonElement).click();
    await flush();
    expect(fake.sidestepCalls).toEqual([3]);
    expect(text(".sidestep h3")).toBe("Siblings");
    expect(text(".group-head")).toBe("under Web things");
    expect(chips(".sibling-group")).toEqual(["Web things", "Flickr"]);
    expect((root.querySelector(".siblings-toggle") as HTMLButtonElement).disabled).toBe(true);
  });

  it("a term with no shared parents shows the empty state", async () => {
    boot("#/term/2");
    await flush();
    (root.querySelector(".siblings-toggle") as HTMLButtonElement).click();
    await flush();
    expect(text(".sidestep .empty")).toBe("(none)");
  });
});
