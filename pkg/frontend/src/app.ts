/** Hash-routed single page app over the treenav API.

Routes: "#/" home, "#/search/<query>" disambiguation chooser,
"#/term/<id>" term view. The browser history doubles as the navigation
stack; every view is rebuilt from API payloads, so the page holds no
state the server does not.

Responses are discarded when they arrive after a newer navigation: each
route() call takes a fresh token and async continuations check it before
touching the DOM. Visited terms are cached, which makes breadcrumb and
history backs render without another fetch.
*/

import { ApiClient, ApiError } from "./api.js";
import type { LinkPayload, TermPayload } from "./types.js";
import {
  el,
  renderCandidates,
  renderCrumbs,
  renderLinks,
  renderNotice,
  renderSidestep,
  renderTerm,
  searchHash,
  termHash,
} from "./render.js";

type Route =
  | { view: "home" }
  | { view: "search"; query: string }
  | { view: "term"; id: number }
  | { view: "unknown" };

export function parseRoute(hash: string): Route {
  const path = hash.startsWith("#") ? hash.slice(1) : hash;
  if (path === "" || path === "/") return { view: "home" };
  const search = path.match(/^\/search\/(.+)$/);
  if (search) return { view: "search", query: decodeURIComponent(search[1]) };
  const term = path.match(/^\/term\/(-?[0-9]+)$/);
  if (term) return { view: "term", id: Number(term[1]) };
  return { view: "unknown" };
}

interface CacheEntry {
  term: TermPayload;
  links: LinkPayload[];
}

export class App {
  private readonly api: ApiClient;
  private readonly viewRoot: HTMLElement;
  private readonly input: HTMLInputElement;

  private nav = 0;
  private lastHash = "";
  private readonly cache = new Map<number, CacheEntry>();
  private trail: { id: number; label: string }[] = [];

  constructor(root: HTMLElement, api: ApiClient) {
    this.api = api;

    root.textContent = "";
    const header = el("header", "site-head");
    header.appendChild(el("h1", "", "treenav"));
    header.appendChild(el("p", "tagline", "navigate tagged bookmarks through a concept tree"));

    const form = el("form", "search-form");
    this.input = el("input", "search-input");
    this.input.type = "search";
    this.input.name = "q";
    this.input.placeholder = "keyword, e.g. web 2.0";
    const button = el("button", "search-go", "search");
    button.type = "submit";
    form.appendChild(this.input);
    form.appendChild(button);
    form.addEventListener("submit", (e) => {
      e.preventDefault();
      const q = this.input.value.trim();
      if (q) this.go(searchHash(q));
    });
    header.appendChild(form);
    root.appendChild(header);

    this.viewRoot = el("main", "view-root");
    root.appendChild(this.viewRoot);

    window.addEventListener("hashchange", () => {
      if (window.location.hash !== this.lastHash) this.route();
    });
  }

  /** Dispatch the current hash; call once after construction. */
  start(): void {
    this.route();
  }

  go(hash: string): void {
    if (window.location.hash === hash) {
      this.route();
      return;
    }
    window.location.hash = hash;
    // The hashchange handler may have routed already (it fires synchronously
    // in some DOM implementations, asynchronously in browsers); route here
    // only if it has not.
    if (window.location.hash !== this.lastHash) this.route();
  }

  /** Navigate without adding a history entry (single-candidate auto-open). */
  private replaceHash(hash: string): void {
    try {
      window.location.replace(hash);
    } catch {
      window.location.hash = hash;
    }
    if (window.location.hash !== this.lastHash) this.route();
  }

  private show(...nodes: HTMLElement[]): void {
    this.viewRoot.textContent = "";
    for (const node of nodes) this.viewRoot.appendChild(node);
  }

  private route(): void {
    this.lastHash = window.location.hash;
    const token = ++this.nav;
    const route = parseRoute(this.lastHash);
    switch (route.view) {
      case "home":
        void this.routeHome(token);
        break;
      case "search":
        void this.routeSearch(route.query, token);
        break;
      case "term":
        void this.routeTerm(route.id, token);
        break;
      case "unknown":
        this.show(renderNotice("error", "page not found; use the search box above"));
        break;
    }
  }

  private async routeHome(token: number): Promise<void> {
    this.trail = [];
    this.show(renderNotice("hint", "type a keyword to look up a term"));
    try {
      const health = await this.api.health();
      if (token !== this.nav) return;
      this.viewRoot.appendChild(
        el("p", "health", `serving ${health.nodes} terms over ${health.bookmarks} bookmarks`),
      );
    } catch {
      if (token !== this.nav) return;
      this.viewRoot.appendChild(el("p", "health error", "API unreachable"));
    }
  }

  private async routeSearch(query: string, token: number): Promise<void> {
    this.trail = [];
    this.input.value = query;
    this.show(renderNotice("loading", `searching '${query}'...`));
    let candidates;
    try {
      candidates = await this.api.search(query);
    } catch (err) {
      if (token !== this.nav) return;
      this.show(this.errorNotice(err));
      return;
    }
    if (token !== this.nav) return;
    if (candidates.length === 1) {
      this.replaceHash(termHash(candidates[0].node_id));
      return;
    }
    this.show(renderCandidates(query, candidates, (h) => this.go(h)));
  }

  private pushCrumb(id: number): void {
    const at = this.trail.findIndex((stop) => stop.id === id);
    if (at >= 0) {
      this.trail = this.trail.slice(0, at + 1);
    } else {
      this.trail.push({ id, label: `#${id}` });
    }
  }

  private labelCrumb(id: number, label: string): void {
    for (const stop of this.trail) {
      if (stop.id === id) stop.label = label;
    }
  }

  private async routeTerm(id: number, token: number): Promise<void> {
    this.pushCrumb(id);

    const cached = this.cache.get(id);
    if (cached) {
      this.labelCrumb(id, cached.term.canonical_label);
      this.showTerm(cached.term, cached.links, token);
      return;
    }

    this.show(renderNotice("loading", "loading term..."));
    let term: TermPayload;
    let links: LinkPayload[];
    try {
      [term, links] = await Promise.all([this.api.term(id), this.api.links(id)]);
    } catch (err) {
      if (token !== this.nav) return;
      this.show(this.errorNotice(err, id));
      return;
    }
    this.cache.set(id, { term, links });
    if (token !== this.nav) return;
    this.labelCrumb(id, term.canonical_label);
    this.showTerm(term, links, token);
  }

  private showTerm(term: TermPayload, links: LinkPayload[], token: number): void {
    const go = (h: string) => this.go(h);
    const slots = renderTerm(term, go);
    slots.linksSlot.textContent = "";
    slots.linksSlot.appendChild(renderLinks(links, go));
    slots.siblingsButton.addEventListener("click", () => {
      void this.loadSiblings(term.node_id, slots.siblingsSlot, slots.siblingsButton, token);
    });
    this.show(renderCrumbs([...this.trail], go), slots.root);
  }

  private async loadSiblings(
    id: number,
    slot: HTMLElement,
    button: HTMLButtonElement,
    token: number,
  ): Promise<void> {
    button.disabled = true;
    slot.textContent = "";
    slot.appendChild(renderNotice("loading", "loading siblings..."));
    let payload;
    try {
      payload = await this.api.sidestep(id);
    } catch (err) {
      if (token !== this.nav) return;
      slot.textContent = "";
      slot.appendChild(this.errorNotice(err));
      button.disabled = false;
      return;
    }
    if (token !== this.nav) return;
    slot.textContent = "";
    slot.appendChild(renderSidestep(payload, (h) => this.go(h)));
  }

  private errorNotice(err: unknown, id?: number): HTMLElement {
    if (err instanceof ApiError) {
      if (err.code === "unknown_node" && id !== undefined) {
        return renderNotice("error", `no term with id ${id}`);
      }
      return renderNotice("error", `request failed: ${err.code}`);
    }
    return renderNotice("error", "API unreachable");
  }
}
