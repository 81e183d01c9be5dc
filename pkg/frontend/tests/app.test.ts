import { beforeEach, describe, expect, it } from "vitest";

import { ApiClient } from "../src/api.js";
import { AppController } from "../src/main.js";
import { parseHash } from "../src/router.js";
import { fixture } from "./fixtures.js";

const CONFIG = { apiBase: "", paperUrlTemplate: "https://papers.example/{paper_id}" };

type Responder = (url: string) => { status: number; body: unknown } | Promise<{ status: number; body: unknown }>;

function fakeFetch(responder: Responder) {
  return async (url: string): Promise<Response> => {
    const { status, body } = await responder(url);
    return new Response(JSON.stringify(body), {
      status,
      headers: { "Content-Type": "application/json" },
    });
  };
}

function fixtureResponder(url: string): { status: number; body: unknown } {
  const path = url.split("?")[0]!;
  const q = new URLSearchParams(url.split("?")[1] ?? "").get("q");
  const page = new URLSearchParams(url.split("?")[1] ?? "").get("page") ?? "1";
  if (path === "/api/agent/search") {
    if (q === "ginkgo") return { status: 200, body: fixture("search_ginkgo.json") };
    return { status: 200, body: fixture("search_none.json") };
  }
  if (path === "/api/agent/C0330205") return { status: 200, body: fixture("agent_ginkgo.json") };
  if (path === "/api/agent/C0596235") return { status: 200, body: fixture("agent_calcium_member.json") };
  if (path === "/api/interaction/C0043031-C0330205") {
    return {
      status: 200,
      body: fixture(
        page === "2"
          ? "interaction_ginkgo_warfarin_page2.json"
          : "interaction_ginkgo_warfarin_page1.json",
      ),
    };
  }
  return { status: 404, body: { error: `unknown path ${path}` } };
}

function makeApp(responder: Responder = fixtureResponder) {
  const root = document.createElement("main");
  document.body.replaceChildren(root);
  const api = new ApiClient("", fakeFetch(responder));
  const controller = new AppController(root, api, CONFIG, () => {});
  return { root, controller };
}

beforeEach(() => {
  document.body.replaceChildren();
});

describe("AppController", () => {
  it("renders search results for a query route", async () => {
    const { root, controller } = makeApp();
    await controller.handleRoute(parseHash("#/search?q=ginkgo"));
    expect(root.querySelectorAll(".result-card").length).toBeGreaterThan(0);
    expect(root.textContent).toContain("Ginkgo");
  });

  it("renders the agent page with interactions", async () => {
    const { root, controller } = makeApp();
    await controller.handleRoute(parseHash("#/agent/C0330205"));
    expect(root.querySelector("h1")!.textContent).toBe("Ginkgo");
    expect(root.querySelectorAll(".interaction-row").length).toBe(3);
  });

  it("renders the interaction page with highlighted spans from fixtures", async () => {
    const { root, controller } = makeApp();
    await controller.handleRoute(parseHash("#/interaction/C0043031-C0330205"));
    const card = root.querySelector(".evidence-card")!;
    const marks = Array.from(card.querySelectorAll("mark"));
    expect(marks.length).toBe(2);
    expect(marks.map((m) => m.textContent)).toEqual(["ginkgo", "warfarin"]);
  });

  it("load more appends the next page without reordering page one", async () => {
    const { root, controller } = makeApp();
    await controller.handleRoute(parseHash("#/interaction/C0043031-C0330205"));
    const before = Array.from(root.querySelectorAll(".evidence-card .paper-link")).map(
      (a) => a.textContent,
    );
    expect(before.length).toBe(2);
    await controller.loadMore();
    const after = Array.from(root.querySelectorAll(".evidence-card .paper-link")).map(
      (a) => a.textContent,
    );
    expect(after.length).toBe(3);
    expect(after.slice(0, 2)).toEqual(before);
    expect(root.querySelector(".load-more")).toBeNull(); // all 3 of 3 loaded
  });

  it("discards stale responses when a newer navigation begins", async () => {
    let releaseSlow: (() => void) | null = null;
    const slowFirst: Responder = (url) => {
      if (url.includes("C0596235")) {
        return new Promise((resolve) => {
          releaseSlow = () =>
            resolve({ status: 200, body: fixture("agent_calcium_member.json") });
        });
      }
      return fixtureResponder(url);
    };
    const { root, controller } = makeApp(slowFirst);
    const slowNav = controller.handleRoute(parseHash("#/agent/C0596235"));
    await controller.handleRoute(parseHash("#/agent/C0330205"));
    expect(root.querySelector("h1")!.textContent).toBe("Ginkgo");
    releaseSlow!();
    await slowNav;
    // the late response must not replace the newer page
    expect(root.querySelector("h1")!.textContent).toBe("Ginkgo");
  });

  it("unknown agent renders the not-found page", async () => {
    const { root, controller } = makeApp();
    await controller.handleRoute(parseHash("#/agent/C9999999"));
    expect(root.querySelector(".view-not-found")).not.toBeNull();
  });

  it("API failures render a retryable error banner", async () => {
    let fail = true;
    const flaky: Responder = (url) => {
      if (fail) return { status: 500, body: { error: "backend exploded" } };
      return fixtureResponder(url);
    };
    const { root, controller } = makeApp(flaky);
    await controller.handleRoute(parseHash("#/search?q=ginkgo"));
    const banner = root.querySelector(".error-banner");
    expect(banner).not.toBeNull();
    expect(banner!.textContent).toContain("backend exploded");

    fail = false;
    (banner!.querySelector("button.retry") as HTMLButtonElement).click();
    await new Promise((resolve) => setTimeout(resolve, 0));
    expect(root.querySelectorAll(".result-card").length).toBeGreaterThan(0);
  });

  it("every internal link uses ids from API responses only", async () => {
    const { root, controller } = makeApp();
    await controller.handleRoute(parseHash("#/agent/C0330205"));
    const detail = fixture<{ interactions: { interaction_id: string }[] }>("agent_ginkgo.json");
    const known = new Set(detail.interactions.map((i) => `#/interaction/${i.interaction_id}`));
    for (const link of Array.from(root.querySelectorAll(".interaction-row a"))) {
      expect(known.has(link.getAttribute("href")!)).toBe(true);
    }
  });
});
