import { describe, expect, it } from "vitest";

import type { AgentDetail, InteractionPage, SearchResponse } from "../src/api.js";
import { agentView, interactionView, searchView } from "../src/render.js";
import { fixture } from "./fixtures.js";

const PAPER_URL = "https://papers.example/{paper_id}";

describe("search view", () => {
  it("renders one card per result with name, kind, count, and link", () => {
    const body = fixture<SearchResponse>("search_ginkgo.json");
    const view = searchView("ginkgo", body.results, () => {});
    const cards = Array.from(view.querySelectorAll(".result-card"));
    expect(cards.length).toBe(body.results.length);
    const first = cards[0]!;
    expect(first.textContent).toContain(body.results[0]!.name);
    expect(first.textContent).toContain(`${body.results[0]!.interactions_count} interactions`);
    expect(first.querySelector("a")!.getAttribute("href")).toBe(
      `#/agent/${body.results[0]!.cui}`,
    );
  });

  it("shows matched-via for trade-name hits", () => {
    const body = fixture<SearchResponse>("search_prozac.json");
    const view = searchView("Prozac", body.results, () => {});
    expect(view.textContent).toContain("matched via trade name");
  });

  it("empty result set shows the empty state", () => {
    const body = fixture<SearchResponse>("search_none.json");
    const view = searchView("zzzz-no-such", body.results, () => {});
    expect(view.querySelector(".empty")).not.toBeNull();
    expect(view.querySelectorAll(".result-card").length).toBe(0);
  });

  it("null results means prompt state (no request made yet)", () => {
    const view = searchView("", null, () => {});
    expect(view.querySelector(".prompt")).not.toBeNull();
  });

  it("submitting the form reports the query", () => {
    let seen = "";
    const view = searchView("", null, (q) => {
      seen = q;
    });
    const input = view.querySelector("input")!;
    input.value = "  garlic  ";
    view.querySelector("form")!.dispatchEvent(new Event("submit"));
    expect(seen).toBe("garlic");
  });
});

describe("agent view", () => {
  const detail = fixture<AgentDetail>("agent_ginkgo.json");

  it("renders header, synonym and definition expanders", () => {
    const view = agentView(detail);
    expect(view.querySelector("h1")!.textContent).toBe("Ginkgo");
    expect(view.querySelector(".badge-supplement")!.textContent).toBe("supplement");
    const expanders = Array.from(view.querySelectorAll(".expander"));
    const summaries = expanders.map((e) => e.querySelector("summary")!.textContent);
    expect(summaries.some((s) => s!.startsWith("Synonyms"))).toBe(true);
    expect(summaries).toContain("Definition");
    const synonymBody = expanders.find((e) =>
      e.querySelector("summary")!.textContent!.startsWith("Synonyms"),
    )!;
    expect(synonymBody.textContent).toContain("ginkgo biloba");
  });

  it("lists interactions in server order with evidence counts", () => {
    const view = agentView(detail);
    const rows = Array.from(view.querySelectorAll(".interaction-row"));
    expect(rows.map((r) => r.querySelector("a")!.textContent)).toEqual(
      detail.interactions.map((i) => i.partner_name),
    );
    expect(rows[0]!.textContent).toContain(
      `${detail.interactions[0]!.evidence_count} evidence sentences`,
    );
    expect(rows.map((r) => r.querySelector("a")!.getAttribute("href"))).toEqual(
      detail.interactions.map((i) => `#/interaction/${i.interaction_id}`),
    );
  });

  it("notes canonical redirects for member cuis", () => {
    const member = fixture<AgentDetail>("agent_calcium_member.json");
    const view = agentView(member);
    expect(view.querySelector(".redirect-note")!.textContent).toContain("C0596235");
  });
});

describe("interaction view", () => {
  it("renders evidence cards with paper metadata and outbound links", () => {
    const page = fixture<InteractionPage>("interaction_ginkgo_warfarin_page1.json");
    const view = interactionView(page, PAPER_URL, null);
    const cards = Array.from(view.querySelectorAll(".evidence-card"));
    expect(cards.length).toBe(page.items.length);
    const first = cards[0]!;
    const item = page.items[0]!;
    expect(first.querySelector(".paper-link")!.textContent).toBe(item.paper.title);
    expect(first.querySelector(".paper-link")!.getAttribute("href")).toBe(
      `https://papers.example/${item.paper_id}`,
    );
    expect(first.querySelector(".paper-meta")!.textContent).toContain(String(item.paper.year));
    expect(first.querySelector(".paper-meta")!.textContent).toContain(item.paper.venue);
  });

  it("omits the year gracefully when absent", () => {
    const page = fixture<InteractionPage>("interaction_garlic_warfarin.json");
    const undatedIndex = page.items.findIndex((i) => i.paper.year === null);
    expect(undatedIndex).toBeGreaterThanOrEqual(0);
    const view = interactionView(page, PAPER_URL, null);
    const card = view.querySelectorAll(".evidence-card")[undatedIndex]!;
    expect(card.textContent).not.toContain("null");
    expect(card.querySelector(".paper-meta")!.textContent).not.toMatch(/\b(19|20)\d\d\b/);
  });

  it("shows study flags as badges", () => {
    const page2 = fixture<InteractionPage>("interaction_ginkgo_warfarin_page2.json");
    const retractedIndex = page2.items.findIndex((i) => i.paper.retracted);
    expect(retractedIndex).toBeGreaterThanOrEqual(0);
    const view = interactionView(page2, PAPER_URL, null);
    const card = view.querySelectorAll(".evidence-card")[retractedIndex]!;
    expect(card.querySelector(".badge-retracted")).not.toBeNull();
  });

  it("header names both agents and links to their pages", () => {
    const page = fixture<InteractionPage>("interaction_ginkgo_warfarin_page1.json");
    const view = interactionView(page, PAPER_URL, null);
    const header = view.querySelector(".interaction-header")!;
    expect(header.textContent).toContain("Warfarin");
    expect(header.textContent).toContain("Ginkgo");
    const hrefs = Array.from(header.querySelectorAll("a")).map((a) => a.getAttribute("href"));
    expect(hrefs).toEqual([`#/agent/${page.cui_a}`, `#/agent/${page.cui_b}`]);
  });

  it("shows the load-more control only when provided", () => {
    const page = fixture<InteractionPage>("interaction_ginkgo_warfarin_page1.json");
    expect(interactionView(page, PAPER_URL, () => {}).querySelector(".load-more")).not.toBeNull();
    expect(interactionView(page, PAPER_URL, null).querySelector(".load-more")).toBeNull();
  });
});
