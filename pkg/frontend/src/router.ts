// Hash-based routes so the build works from any static file host.

export type Route =
  | { view: "search"; q: string }
  | { view: "agent"; cui: string }
  | { view: "interaction"; id: string }
  | { view: "not-found"; path: string };

const CUI_RE = /^C[0-9]+$/;
const INTERACTION_RE = /^C[0-9]+-C[0-9]+$/;

export function parseHash(hash: string): Route {
  const raw = hash.startsWith("#") ? hash.slice(1) : hash;
  if (raw === "" || raw === "/") return { view: "search", q: "" };
  const [path, query = ""] = raw.split("?", 2) as [string, string?];
  const segments = path.split("/").filter(Boolean);
  if (segments[0] === "search" || segments.length === 0) {
    const q = new URLSearchParams(query).get("q") ?? "";
    return { view: "search", q };
  }
  if (segments[0] === "agent" && segments[1] && CUI_RE.test(segments[1])) {
    return { view: "agent", cui: segments[1] };
  }
  if (segments[0] === "interaction" && segments[1] && INTERACTION_RE.test(segments[1])) {
    return { view: "interaction", id: segments[1] };
  }
  return { view: "not-found", path: raw };
}

export function searchHash(q: string): string {
  return q ? `#/search?q=${encodeURIComponent(q)}` : "#/";
}
