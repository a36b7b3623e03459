/** DOM builders for every view.

All functions are pure with respect to application state: they take
payloads plus a `go(hash)` callback and return detached elements. Labels
and descriptions always go through textContent, never markup.
*/

import type {
  Candidate,
  LinkPayload,
  SidestepPayload,
  TermPayload,
  TermRef,
} from "./types.js";

export type Go = (hash: string) => void;

export function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  className = "",
  text = "",
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  if (className) node.className = className;
  if (text) node.textContent = text;
  return node;
}

export function termHash(nodeId: number): string {
  return `#/term/${nodeId}`;
}

export function searchHash(query: string): string {
  return `#/search/${encodeURIComponent(query)}`;
}

/** Clickable term chip. Branch refs get a marker class so CSS can set them apart. */
export function chip(ref: TermRef, go: Go): HTMLAnchorElement {
  const a = el("a", ref.is_branch ? "chip branch" : "chip");
  a.textContent = ref.label;
  a.href = termHash(ref.node_id);
  a.dataset.nodeId = String(ref.node_id);
  a.title = ref.is_branch ? "category with narrower terms" : `${ref.inlink_count} inlinks`;
  a.addEventListener("click", (e) => {
    e.preventDefault();
    go(termHash(ref.node_id));
  });
  return a;
}

function chipRow(refs: TermRef[], go: Go): HTMLElement {
  const row = el("div", "chips");
  for (const ref of refs) row.appendChild(chip(ref, go));
  return row;
}

/** One result box: heading, chips or an explicit "(none)", optional more-note. */
function box(title: string, kind: string, refs: TermRef[], go: Go, moreNote = ""): HTMLElement {
  const section = el("section", `box ${kind}`);
  section.appendChild(el("h3", "", title));
  if (refs.length === 0) {
    section.appendChild(el("p", "empty", "(none)"));
  } else {
    section.appendChild(chipRow(refs, go));
  }
  if (moreNote) section.appendChild(el("p", "more", moreNote));
  return section;
}

export function renderNotice(kind: string, message: string): HTMLElement {
  return el("p", `notice ${kind}`, message);
}

export function renderCandidates(query: string, candidates: Candidate[], go: Go): HTMLElement {
  const view = el("section", "view candidates");
  if (candidates.length === 0) {
    view.appendChild(renderNotice("empty", `no results for '${query}'`));
    return view;
  }
  view.appendChild(el("h2", "", `${candidates.length} candidates for '${query}':`));
  const list = el("ul", "candidate-list");
  for (const c of candidates) {
    const item = el("li", "candidate");
    const a = el("a", "candidate-label", c.label);
    a.href = termHash(c.node_id);
    a.dataset.nodeId = String(c.node_id);
    a.addEventListener("click", (e) => {
      e.preventDefault();
      go(termHash(c.node_id));
    });
    item.appendChild(a);
    if (c.description) item.appendChild(el("span", "candidate-desc", c.description));
    list.appendChild(item);
  }
  view.appendChild(list);
  return view;
}

export interface TermViewSlots {
  root: HTMLElement;
  linksSlot: HTMLElement;
  siblingsSlot: HTMLElement;
  siblingsButton: HTMLButtonElement;
}

export function renderTerm(term: TermPayload, go: Go): TermViewSlots {
  const view = el("section", "view term");

  const header = el("header", "term-head");
  header.appendChild(el("h2", "", term.canonical_label));
  if (term.description) header.appendChild(el("p", "desc", term.description));
  if (term.aliases.length > 0) {
    header.appendChild(el("p", "aka", `aka: ${term.aliases.join(", ")}`));
  }
  view.appendChild(header);

  const hidden = term.leaves_total - term.leaves.length;
  const boxes = el("div", "boxes");
  boxes.appendChild(box("Generalize", "generalize", term.generalize, go));
  boxes.appendChild(box("Specify (branches)", "branches", term.branches, go));
  boxes.appendChild(
    box(
      "Specify (leaves)",
      "leaves",
      term.leaves,
      go,
      hidden > 0 ? `... and ${hidden} more` : "",
    ),
  );
  view.appendChild(boxes);

  const actions = el("div", "actions");
  const siblingsButton = el("button", "siblings-toggle", "show siblings");
  siblingsButton.type = "button";
  actions.appendChild(siblingsButton);
  view.appendChild(actions);

  const siblingsSlot = el("section", "siblings-slot");
  view.appendChild(siblingsSlot);

  const links = el("section", "links");
  links.appendChild(el("h3", "", "Link results"));
  const linksSlot = el("div", "links-slot");
  linksSlot.appendChild(el("p", "loading", "loading links..."));
  links.appendChild(linksSlot);
  view.appendChild(links);

  return { root: view, linksSlot, siblingsSlot, siblingsButton };
}

export function renderLinks(links: LinkPayload[], go: Go): HTMLElement {
  const wrap = el("div", "link-results");
  if (links.length === 0) {
    wrap.appendChild(el("p", "empty", "(none)"));
    return wrap;
  }
  const list = el("ul", "link-list");
  for (const link of links) {
    const item = el("li", `link ${link.feed}`);

    const title = el("a", "link-title", link.title);
    title.href = link.url;
    title.target = "_blank";
    title.rel = "noopener";
    item.appendChild(title);

    const meta = el("p", "link-meta");
    meta.appendChild(el("span", `feed-badge ${link.feed}`, link.feed));
    meta.appendChild(el("span", "saves", `${link.save_count} saves`));
    meta.appendChild(el("span", "date", link.saved_at.slice(0, 10)));
    item.appendChild(meta);

    item.appendChild(el("p", "link-url", link.url));

    if (link.summary_tags.length > 0) {
      const tags = el("p", "link-tags");
      for (const tag of link.summary_tags) {
        const t = el("a", "tag", tag);
        t.href = searchHash(tag);
        t.addEventListener("click", (e) => {
          e.preventDefault();
          go(searchHash(tag));
        });
        tags.appendChild(t);
      }
      item.appendChild(tags);
    }
    list.appendChild(item);
  }
  wrap.appendChild(list);
  return wrap;
}

export function renderSidestep(payload: SidestepPayload, go: Go): HTMLElement {
  const wrap = el("section", "sidestep");
  wrap.appendChild(el("h3", "", "Siblings"));
  if (payload.parents.length === 0) {
    wrap.appendChild(el("p", "empty", "(none)"));
    return wrap;
  }
  for (const group of payload.parents) {
    const block = el("div", "sibling-group");
    const head = el("p", "group-head", "under ");
    head.appendChild(chip(group.parent, go));
    block.appendChild(head);
    if (group.leaves.length === 0) {
      block.appendChild(el("p", "empty", "(none)"));
    } else {
      block.appendChild(chipRow(group.leaves, go));
      const hidden = group.leaves_total - group.leaves.length;
      if (hidden > 0) block.appendChild(el("p", "more", `... and ${hidden} more`));
    }
    wrap.appendChild(block);
  }
  return wrap;
}

/** Breadcrumb trail; every crumb but the last navigates, the last is the current page. */
export function renderCrumbs(
  trail: { id: number; label: string }[],
  go: Go,
): HTMLElement {
  const nav = el("nav", "crumbs");
  trail.forEach((stop, i) => {
    if (i > 0) nav.appendChild(el("span", "sep", " > "));
    if (i === trail.length - 1) {
      nav.appendChild(el("span", "crumb here", stop.label));
    } else {
      const a = el("a", "crumb", stop.label);
      a.href = termHash(stop.id);
      a.dataset.nodeId = String(stop.id);
      a.addEventListener("click", (e) => {
        e.preventDefault();
        go(termHash(stop.id));
      });
      nav.appendChild(a);
    }
  });
  return nav;
}
