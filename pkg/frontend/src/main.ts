// Application controller: routes -> API calls -> rendered views. In-flight
// responses are discarded when a newer navigation has started, so slow
// requests can never clobber the current page.

import { ApiClient, ApiError, InteractionPage } from "./api.js";
import { AppConfig, resolveConfig } from "./config.js";
import { errorBanner, agentView, interactionView, loadingView, notFoundView, searchView } from "./render.js";
import { parseHash, Route, searchHash } from "./router.js";

export class AppController {
  private navToken = 0;
  private interactionState: { id: string; page: InteractionPage } | null = null;

  constructor(
    private root: HTMLElement,
    private api: ApiClient,
    private config: AppConfig,
    private navigate: (hash: string) => void = (hash) => {
      window.location.hash = hash;
    },
  ) {}

  private show(node: HTMLElement | DocumentFragment): void {
    this.root.replaceChildren(node);
  }

  async handleRoute(route: Route): Promise<void> {
    const token = ++this.navToken;
    const stale = () => token !== this.navToken;
    try {
      if (route.view === "search") {
        if (!route.q) {
          this.show(searchView("", null, (q) => this.navigate(searchHash(q))));
          return;
        }
        this.show(loadingView());
        const body = await this.api.searchAgents(route.q);
        if (stale()) return;
        this.show(searchView(route.q, body.results, (q) => this.navigate(searchHash(q))));
      } else if (route.view === "agent") {
        this.show(loadingView());
        const detail = await this.api.getAgent(route.cui);
        if (stale()) return;
        this.show(agentView(detail));
      } else if (route.view === "interaction") {
        this.show(loadingView());
        const page = await this.api.getInteraction(route.id, 1);
        if (stale()) return;
        this.interactionState = { id: route.id, page };
        this.renderInteraction();
      } else {
        this.show(notFoundView(`No page at “${route.path}”.`));
      }
    } catch (err) {
      if (stale()) return;
      if (err instanceof ApiError && err.status === 404) {
        this.show(notFoundView(err.message));
        return;
      }
      const message = err instanceof Error ? err.message : String(err);
      this.show(errorBanner(message, () => void this.handleRoute(route)));
    }
  }

  private renderInteraction(): void {
    const state = this.interactionState;
    if (!state) return;
    const { page } = state;
    const hasMore = page.items.length < page.total;
    this.show(
      interactionView(page, this.config.paperUrlTemplate, hasMore ? () => void this.loadMore() : null),
    );
  }

  async loadMore(): Promise<void> {
    const state = this.interactionState;
    if (!state) return;
    const token = this.navToken;
    const loaded = state.page.items.length;
    const nextPage = Math.floor(loaded / state.page.per_page) + 1;
    try {
      const more = await this.api.getInteraction(state.id, nextPage, state.page.per_page);
      if (token !== this.navToken || this.interactionState !== state) return;
      // append without reordering what is already on screen
      state.page = {
        ...more,
        items: [...state.page.items, ...more.items.slice(loaded - (nextPage - 1) * more.per_page)],
      };
      this.renderInteraction();
    } catch (err) {
      if (token !== this.navToken) return;
      const message = err instanceof Error ? err.message : String(err);
      this.root.appendChild(errorBanner(message, () => void this.loadMore()));
    }
  }
}

export function startApp(win: Window = window): AppController {
  const config = resolveConfig(win as never);
  const root = win.document.getElementById("app");
  if (!root) throw new Error("missing #app element");
  const controller = new AppController(root as HTMLElement, new ApiClient(config.apiBase), config);
  const onHashChange = () => void controller.handleRoute(parseHash(win.location.hash));
  win.addEventListener("hashchange", onHashChange);
  onHashChange();
  return controller;
}

declare global {
  interface Window {
    SUPPMINE_API_BASE?: string;
    SUPPMINE_PAPER_URL?: string;
  }
}

if (typeof window !== "undefined" && typeof (globalThis as { __vitest_worker__?: unknown }).__vitest_worker__ === "undefined") {
  startApp();
}
