// Span highlighting for evidence sentences. Offsets are applied to the text
// exactly as delivered by the API; a span that does not slice to its surface
// is dropped rather than rendered wrong.

import type { EvidenceSpan } from "./api.js";

export function buildHighlightedSentence(
  text: string,
  spans: EvidenceSpan[],
  kindByCui: Record<string, string | null | undefined> = {},
): DocumentFragment {
  const fragment = document.createDocumentFragment();
  const usable = spans
    .filter(
      (s) =>
        s.start >= 0 &&
        s.end <= text.length &&
        s.start < s.end &&
        text.slice(s.start, s.end) === s.surface,
    )
    .sort((a, b) => a.start - b.start);

  let cursor = 0;
  for (const span of usable) {
    if (span.start < cursor) continue; // overlap: keep the earlier span
    if (span.start > cursor) {
      fragment.appendChild(document.createTextNode(text.slice(cursor, span.start)));
    }
    const mark = document.createElement("mark");
    mark.dataset.cui = span.cui;
    mark.className = kindByCui[span.cui] === "supplement" ? "hl hl-supplement" : "hl hl-drug";
    const link = document.createElement("a");
    link.href = `#/agent/${span.cui}`;
    link.textContent = span.surface;
    mark.appendChild(link);
    fragment.appendChild(mark);
    cursor = span.end;
  }
  if (cursor < text.length) {
    fragment.appendChild(document.createTextNode(text.slice(cursor)));
  }
  return fragment;
}
