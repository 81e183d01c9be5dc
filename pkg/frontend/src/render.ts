// DOM builders for the three views. Pure functions of API payloads: ordering
// arrives from the server and is never re-sorted here.

import type {
  AgentDetail,
  AgentSearchResult,
  EvidenceItem,
  InteractionPage,
  PaperMeta,
} from "./api.js";
import { paperUrl } from "./config.js";
import { buildHighlightedSentence } from "./highlight.js";
import { searchHash } from "./router.js";

type Child = Node | string | null | undefined;

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  attrs: Record<string, string> = {},
  ...children: Child[]
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  for (const [key, value] of Object.entries(attrs)) {
    if (key === "class") node.className = value;
    else node.setAttribute(key, value);
  }
  for (const child of children) {
    if (child == null) continue;
    node.appendChild(typeof child === "string" ? document.createTextNode(child) : child);
  }
  return node;
}

function kindBadge(kind: string | null): HTMLElement {
  const label = kind ?? "unknown";
  return el("span", { class: `badge badge-${label}` }, label);
}

// --- search ----------------------------------------------------------------

export function searchView(
  q: string,
  results: AgentSearchResult[] | null,
  onSearch: (q: string) => void,
): HTMLElement {
  const input = el("input", {
    type: "search",
    name: "q",
    placeholder: "Search supplements or drugs (names, synonyms, trade names)",
    value: q,
  });
  const form = el("form", { class: "search-form" }, input, el("button", { type: "submit" }, "Search"));
  form.addEventListener("submit", (event) => {
    event.preventDefault();
    onSearch(input.value.trim());
  });

  const container = el("section", { class: "view view-search" }, form);
  if (results === null) {
    container.appendChild(
      el("p", { class: "prompt" }, "Type a supplement or drug name to browse interaction evidence."),
    );
    return container;
  }
  if (results.length === 0) {
    container.appendChild(el("p", { class: "empty" }, `No agents match “${q}”.`));
    return container;
  }
  const list = el("ul", { class: "search-results" });
  for (const item of results) {
    list.appendChild(
      el(
        "li",
        { class: "result-card" },
        el(
          "a",
          { href: `#/agent/${item.cui}`, class: "result-link" },
          el("span", { class: "result-name" }, item.name),
          kindBadge(item.kind),
        ),
        el(
          "span",
          { class: "result-meta" },
          `${item.interactions_count} interaction${item.interactions_count === 1 ? "" : "s"}`,
          item.matched_via === "name" ? "" : ` · matched via ${item.matched_via.replace("_", " ")}`,
        ),
      ),
    );
  }
  container.appendChild(list);
  return container;
}

// --- agent ------------------------------------------------------------------

function expander(summary: string, body: Child): HTMLElement {
  return el("details", { class: "expander" }, el("summary", {}, summary), el("div", { class: "expander-body" }, body));
}

export function agentView(detail: AgentDetail): HTMLElement {
  const header = el(
    "header",
    { class: "agent-header" },
    el("h1", {}, detail.name),
    kindBadge(detail.kind),
  );
  const container = el("section", { class: "view view-agent" }, header);

  if (detail.requested_cui !== detail.cui) {
    container.appendChild(
      el(
        "p",
        { class: "redirect-note" },
        `Showing the canonical entity for ${detail.requested_cui}.`,
      ),
    );
  }

  if (detail.synonyms.length > 0) {
    container.appendChild(
      expander(`Synonyms (${detail.synonyms.length})`, detail.synonyms.join(", ")),
    );
  }
  if (detail.trade_names.length > 0) {
    container.appendChild(
      expander(`Trade names (${detail.trade_names.length})`, detail.trade_names.join(", ")),
    );
  }
  if (detail.definition) {
    container.appendChild(expander("Definition", detail.definition));
  }

  const heading = el(
    "h2",
    {},
    `Potential interactions (${detail.interactions_count})`,
  );
  container.appendChild(heading);
  if (detail.interactions.length === 0) {
    container.appendChild(el("p", { class: "empty" }, "No evidence recorded for this agent."));
    return container;
  }
  const list = el("ul", { class: "interaction-list" });
  for (const entry of detail.interactions) {
    list.appendChild(
      el(
        "li",
        { class: "interaction-row" },
        el(
          "a",
          { href: `#/interaction/${entry.interaction_id}` },
          entry.partner_name,
        ),
        el(
          "span",
          { class: "evidence-count" },
          `${entry.evidence_count} evidence sentence${entry.evidence_count === 1 ? "" : "s"}`,
        ),
      ),
    );
  }
  container.appendChild(list);
  return container;
}

// --- interaction -------------------------------------------------------------

function flagBadges(paper: PaperMeta): HTMLElement {
  const badges = el("span", { class: "flags" });
  if (paper.retracted) badges.appendChild(el("span", { class: "badge badge-retracted" }, "retracted"));
  if (paper.clinical_trial) badges.appendChild(el("span", { class: "badge badge-trial" }, "clinical trial"));
  if (paper.case_report) badges.appendChild(el("span", { class: "badge badge-case" }, "case report"));
  if (paper.human) badges.appendChild(el("span", { class: "badge badge-human" }, "human"));
  if (paper.animal) badges.appendChild(el("span", { class: "badge badge-animal" }, "animal"));
  return badges;
}

export function evidenceCard(
  item: EvidenceItem,
  kindByCui: Record<string, string | null | undefined>,
  paperUrlTemplate: string,
): HTMLElement {
  const sentence = el("p", { class: "evidence-text" });
  sentence.appendChild(buildHighlightedSentence(item.text, [item.arg1, item.arg2], kindByCui));

  const metaParts: Child[] = [
    el(
      "a",
      { href: paperUrl(paperUrlTemplate, item.paper_id), class: "paper-link", target: "_blank", rel: "noopener" },
      item.paper.title || item.paper_id,
    ),
  ];
  const lineBits: string[] = [];
  if (item.paper.authors.length > 0) lineBits.push(item.paper.authors.join(", "));
  if (item.paper.venue) lineBits.push(item.paper.venue);
  if (item.paper.year != null) lineBits.push(String(item.paper.year));
  if (lineBits.length > 0) {
    metaParts.push(el("span", { class: "paper-meta" }, lineBits.join(" · ")));
  }
  metaParts.push(flagBadges(item.paper));

  return el("article", { class: "evidence-card" }, sentence, el("footer", {}, ...metaParts));
}

export function interactionView(
  page: InteractionPage,
  paperUrlTemplate: string,
  onLoadMore: (() => void) | null,
): HTMLElement {
  const a = page.agents[page.cui_a];
  const b = page.agents[page.cui_b];
  const kindByCui: Record<string, string | null | undefined> = {};
  for (const ref of Object.values(page.agents)) kindByCui[ref.cui] = ref.kind;

  const header = el(
    "header",
    { class: "interaction-header" },
    el(
      "h1",
      {},
      el("a", { href: `#/agent/${page.cui_a}` }, a ? a.name : page.cui_a),
      " ↔ ",
      el("a", { href: `#/agent/${page.cui_b}` }, b ? b.name : page.cui_b),
    ),
    el("p", { class: "evidence-total" }, `${page.total} evidence sentence${page.total === 1 ? "" : "s"}`),
  );
  const cards = el("div", { class: "evidence-cards" });
  for (const item of page.items) {
    cards.appendChild(evidenceCard(item, kindByCui, paperUrlTemplate));
  }
  const container = el("section", { class: "view view-interaction" }, header, cards);
  if (onLoadMore) {
    const button = el("button", { class: "load-more" }, "Load more evidence");
    button.addEventListener("click", onLoadMore);
    container.appendChild(button);
  }
  return container;
}

// --- shared states ------------------------------------------------------------

export function loadingView(): HTMLElement {
  return el("p", { class: "loading" }, "Loading…");
}

export function errorBanner(message: string, onRetry: () => void): HTMLElement {
  const retry = el("button", { class: "retry" }, "Retry");
  retry.addEventListener("click", onRetry);
  return el("div", { class: "error-banner", role: "alert" }, el("span", {}, message), retry);
}

export function notFoundView(what: string): HTMLElement {
  return el(
    "section",
    { class: "view view-not-found" },
    el("h1", {}, "Not found"),
    el("p", {}, what),
    el("a", { href: searchHash("") }, "Back to search"),
  );
}
