// Typed client for the evidence-search API. Every rendered datum in the UI
// originates from one of these response shapes; the UI keeps no model of its
// own.

export interface AgentSearchResult {
  cui: string;
  name: string;
  kind: string;
  matched_via: "name" | "synonym" | "trade_name";
  interactions_count: number;
}

export interface SearchResponse {
  query: string;
  results: AgentSearchResult[];
}

export interface InteractionListEntry {
  partner_cui: string;
  partner_name: string;
  interaction_id: string;
  evidence_count: number;
}

export interface AgentDetail {
  cui: string;
  requested_cui: string;
  name: string;
  kind: string;
  synonyms: string[];
  trade_names: string[];
  definition: string | null;
  interactions_count: number;
  interactions: InteractionListEntry[];
}

export interface EvidenceSpan {
  start: number;
  end: number;
  surface: string;
  cui: string;
}

export interface PaperMeta {
  title: string;
  authors: string[];
  venue: string;
  year: number | null;
  retracted: boolean;
  clinical_trial: boolean;
  case_report: boolean;
  human: boolean;
  animal: boolean;
}

export interface EvidenceItem {
  paper_id: string;
  sentence_index: number;
  text: string;
  score: number;
  arg1: EvidenceSpan;
  arg2: EvidenceSpan;
  paper: PaperMeta;
}

export interface AgentRef {
  cui: string;
  name: string;
  kind: string | null;
}

export interface InteractionPage {
  interaction_id: string;
  cui_a: string;
  cui_b: string;
  agents: Record<string, AgentRef>;
  page: number;
  per_page: number;
  total: number;
  items: EvidenceItem[];
}

export class ApiError extends Error {
  constructor(public status: number, message: string) {
    super(message);
  }
}

type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

export class ApiClient {
  constructor(
    private baseUrl: string = "",
    private fetchImpl: FetchLike = (input, init) => fetch(input, init),
  ) {}

  private async get<T>(path: string, params?: Record<string, string | number>): Promise<T> {
    let url = this.baseUrl + path;
    if (params && Object.keys(params).length > 0) {
      const qs = new URLSearchParams();
      for (const [key, value] of Object.entries(params)) qs.set(key, String(value));
      url += "?" + qs.toString();
    }
    let resp: Response;
    try {
      resp = await this.fetchImpl(url);
    } catch (err) {
      throw new ApiError(0, `network failure: ${String(err)}`);
    }
    if (!resp.ok) {
      let message = `HTTP ${resp.status}`;
      try {
        const body = await resp.json();
        if (body && typeof body.error === "string") message = body.error;
      } catch {
        // non-JSON error body; keep the status message
      }
      throw new ApiError(resp.status, message);
    }
    return (await resp.json()) as T;
  }

  searchAgents(q: string, limit = 20): Promise<SearchResponse> {
    return this.get<SearchResponse>("/api/agent/search", { q, limit });
  }

  getAgent(cui: string): Promise<AgentDetail> {
    return this.get<AgentDetail>(`/api/agent/${encodeURIComponent(cui)}`);
  }

  getInteraction(id: string, page = 1, perPage = 10): Promise<InteractionPage> {
    return this.get<InteractionPage>(`/api/interaction/${encodeURIComponent(id)}`, {
      page,
      per_page: perPage,
    });
  }

  getMeta(): Promise<Record<string, unknown>> {
    return this.get("/api/meta");
  }
}
