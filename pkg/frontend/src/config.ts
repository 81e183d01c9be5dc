export interface AppConfig {
  apiBase: string;
  paperUrlTemplate: string;
}

// Overridable at runtime by defining globals before main.js loads, so the
// same static build can point at any API deployment.
export function resolveConfig(globals: Record<string, unknown> = window as never): AppConfig {
  const apiBase = typeof globals.SUPPMINE_API_BASE === "string" ? globals.SUPPMINE_API_BASE : "";
  const paperUrlTemplate =
    typeof globals.SUPPMINE_PAPER_URL === "string"
      ? globals.SUPPMINE_PAPER_URL
      : "https://www.semanticscholar.org/paper/{paper_id}";
  return { apiBase, paperUrlTemplate };
}

export function paperUrl(template: string, paperId: string): string {
  return template.replace("{paper_id}", encodeURIComponent(paperId));
}
